//! Closed visibility on a terrain: the pairwise predicate and full regions.
//!
//! A point `p` sees `q` when the segment `pq` is nowhere strictly below the
//! chain. Grazing contact counts as visible, so regions are finite unions of
//! closed x-intervals, possibly with zero-length components.

use std::fmt;

use crate::geometry::{
    cross, format_rat, orientation, Orientation, Point2, Rat, Terrain, TerrainPoint,
};

/// Closed interval `[lo, hi]` of x-coordinates; `lo == hi` is a single point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl XInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval bounds out of order");
        XInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        XInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    /// Intersection with `other`, if non-empty.
    pub fn intersect(&self, other: &XInterval) -> Option<XInterval> {
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        (lo <= hi).then(|| XInterval::new(lo.clone(), hi.clone()))
    }
}

impl fmt::Display for XInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rat(&self.lo), format_rat(&self.hi))
    }
}

/// Sorts and merges overlapping or touching intervals.
pub fn merge_intervals(mut parts: Vec<XInterval>) -> Vec<XInterval> {
    parts.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
    let mut out: Vec<XInterval> = Vec::with_capacity(parts.len());
    for iv in parts {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// Whether a normalized interval list contains `x`.
pub fn intervals_contain(parts: &[XInterval], x: &Rat) -> bool {
    let i = parts.partition_point(|iv| &iv.hi < x);
    i < parts.len() && parts[i].lo <= *x
}

/// `V(p)` as sorted, disjoint, non-touching closed components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityRegion {
    owner: TerrainPoint,
    components: Vec<XInterval>,
}

impl VisibilityRegion {
    pub fn owner(&self) -> &TerrainPoint {
        &self.owner
    }

    pub fn components(&self) -> &[XInterval] {
        &self.components
    }

    pub fn contains(&self, x: &Rat) -> bool {
        intervals_contain(&self.components, x)
    }

    /// Whether the closed interval `[lo, hi]` lies in one component.
    pub fn covers_interval(&self, lo: &Rat, hi: &Rat) -> bool {
        let i = self.components.partition_point(|iv| &iv.hi < hi);
        i < self.components.len() && self.components[i].lo <= *lo
    }
}

/// Exact closed visibility between two terrain points.
pub fn sees(t: &Terrain, p: &TerrainPoint, q: &TerrainPoint) -> bool {
    let (l, r) = if p.x() <= q.x() { (p, q) } else { (q, p) };
    if l.x() == r.x() {
        return true;
    }
    t.vertices_strictly_between(l.x(), r.x())
        .iter()
        .all(|v| orientation(l.pos(), r.pos(), v) != Orientation::CounterClockwise)
}

/// Visible sub-intervals of the chain `ahead` (points strictly right of `p`,
/// in x order) as seen from `p`. `p` must lie on the first edge toward `ahead`.
///
/// The blocking ray is kept as the vertex it passes through; a point `q`
/// further right is visible iff it is on or above the line through `p` and
/// that vertex.
fn sweep_right(p: &Point2, ahead: &[Point2], out: &mut Vec<XInterval>) {
    let Some(first) = ahead.first() else {
        return;
    };
    out.push(XInterval::new(p.x.clone(), first.x.clone()));
    let mut anchor: Option<&Point2> = None;
    for pair in ahead.windows(2) {
        let (cur, next) = (&pair[0], &pair[1]);
        let cur_visible = anchor.is_none_or(|a| orientation(p, a, cur).is_left_or_on());
        if cur_visible {
            anchor = Some(cur);
        }
        let a = anchor.expect("set on the first step");
        if orientation(p, a, next) == Orientation::Clockwise {
            continue;
        }
        let lo = if std::ptr::eq(a, cur) {
            cur.x.clone()
        } else {
            // cur is strictly below the ray, next on or above it.
            let d_cur = cross(p, a, cur);
            let d_next = cross(p, a, next);
            let t = &d_cur / (&d_cur - &d_next);
            &cur.x + t * (&next.x - &cur.x)
        };
        out.push(XInterval::new(lo, next.x.clone()));
    }
}

fn mirror(p: &Point2) -> Point2 {
    Point2::new(-&p.x, p.y.clone())
}

/// Exact visibility region of `p`: two linear sweeps outward from `p`.
pub fn visibility_region(t: &Terrain, p: &TerrainPoint) -> VisibilityRegion {
    let vs = t.vertices();
    let mut parts = vec![XInterval::point(p.x().clone())];

    let right_start = vs.partition_point(|v| &v.x <= p.x());
    sweep_right(p.pos(), &vs[right_start..], &mut parts);

    let left_end = vs.partition_point(|v| &v.x < p.x());
    let left: Vec<Point2> = vs[..left_end].iter().rev().map(mirror).collect();
    let mut mirrored = Vec::new();
    sweep_right(&mirror(p.pos()), &left, &mut mirrored);
    parts.extend(
        mirrored
            .into_iter()
            .map(|iv| XInterval::new(-iv.hi, -iv.lo)),
    );

    VisibilityRegion {
        owner: p.clone(),
        components: merge_intervals(parts),
    }
}

/// Component endpoints as terrain points, sorted by x and deduplicated.
pub fn extremal_points(t: &Terrain, r: &VisibilityRegion) -> Vec<TerrainPoint> {
    let mut xs: Vec<&Rat> = Vec::with_capacity(2 * r.components.len());
    for c in &r.components {
        xs.push(&c.lo);
        if !c.is_singleton() {
            xs.push(&c.hi);
        }
    }
    xs.dedup();
    xs.into_iter()
        .map(|x| t.point_at(x).expect("region lies on the terrain"))
        .collect()
}

/// Normalized union of all components of `regions`.
pub fn region_union<'a>(regions: impl IntoIterator<Item = &'a VisibilityRegion>) -> Vec<XInterval> {
    merge_intervals(
        regions
            .into_iter()
            .flat_map(|r| r.components.iter().cloned())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, ratio};
    use proptest::prelude::*;

    fn terrain(pts: &[(i64, i64)]) -> Terrain {
        Terrain::new(pts.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect()).unwrap()
    }

    fn iv(lo: i64, hi: i64) -> XInterval {
        XInterval::new(rat(lo), rat(hi))
    }

    fn region_from(components: Vec<XInterval>) -> VisibilityRegion {
        let t = terrain(&[(0, 0), (10, 0)]);
        VisibilityRegion {
            owner: t.vertex_point(0),
            components,
        }
    }

    /// Reconstruction of `V(p)` from `sees` alone, at 1000 uniform samples per
    /// closed edge. Exact whenever every boundary falls on a sample point.
    fn oracle_region(t: &Terrain, p: &TerrainPoint) -> Vec<XInterval> {
        let mut parts = Vec::new();
        for i in 0..t.edge_count() {
            let (a, b) = t.edge(i);
            let samples = 1000;
            let mut run_start: Option<Rat> = None;
            let mut last_vis: Option<Rat> = None;
            for k in 0..=samples {
                let x = &a.x + (&b.x - &a.x) * ratio(k, samples);
                let q = t.point_at(&x).unwrap();
                if sees(t, p, &q) {
                    if run_start.is_none() {
                        run_start = Some(x.clone());
                    }
                    last_vis = Some(x);
                } else if let Some(s) = run_start.take() {
                    parts.push(XInterval::new(s, last_vis.take().unwrap()));
                }
            }
            if let Some(s) = run_start {
                parts.push(XInterval::new(s, last_vis.unwrap()));
            }
        }
        merge_intervals(parts)
    }

    #[test]
    fn sees_examples() {
        let peak = terrain(&[(0, 0), (1, 1), (2, 0)]);
        let v = |i| peak.vertex_point(i);
        assert!(sees(&peak, &v(0), &v(1)));
        assert!(!sees(&peak, &v(0), &v(2)));
        let valley = terrain(&[(0, 1), (1, 0), (2, 1)]);
        assert!(sees(
            &valley,
            &valley.vertex_point(0),
            &valley.vertex_point(2)
        ));
    }

    #[test]
    fn region_examples() {
        let line = terrain(&[(0, 0), (4, 2)]);
        let r = visibility_region(&line, &line.point_at(&rat(2)).unwrap());
        assert_eq!(r.components(), &[iv(0, 4)]);

        let w = terrain(&[(0, 1), (1, 0), (2, 1), (3, 0), (4, 1)]);
        let r = visibility_region(&w, &w.vertex_point(0));
        assert_eq!(r.components(), &[iv(0, 2), iv(4, 4)]);
        let xs: Vec<Rat> = extremal_points(&w, &r)
            .iter()
            .map(|p| p.x().clone())
            .collect();
        assert_eq!(xs, vec![rat(0), rat(2), rat(4)]);
        for p in extremal_points(&w, &r) {
            assert_eq!(p.y(), &rat(1));
        }

        let peak = terrain(&[(0, 0), (1, 1), (2, 0)]);
        let r = visibility_region(&peak, &peak.vertex_point(0));
        assert_eq!(r.components(), &[iv(0, 1)]);
    }

    #[test]
    fn region_examples_match_sampling_oracle() {
        let w = terrain(&[(0, 1), (1, 0), (2, 1), (3, 0), (4, 1)]);
        let p = w.vertex_point(0);
        assert_eq!(
            oracle_region(&w, &p),
            visibility_region(&w, &p).components()
        );
        let peak = terrain(&[(0, 0), (1, 1), (2, 0)]);
        let p = peak.vertex_point(0);
        assert_eq!(
            oracle_region(&peak, &p),
            visibility_region(&peak, &p).components()
        );
    }

    #[test]
    fn boundary_is_a_ray_edge_intersection() {
        // From (0,0) over the vertex (2,2) the ray y = x meets the edge
        // (3,1)-(5,7) at x = 4.
        let t = terrain(&[(0, 0), (2, 2), (3, 1), (5, 7)]);
        let r = visibility_region(&t, &t.vertex_point(0));
        assert_eq!(r.components(), &[iv(0, 2), iv(4, 5)]);
        // Mirrored terrain, same boundary seen from the other side.
        let m = terrain(&[(-5, 7), (-3, 1), (-2, 2), (0, 0)]);
        let r = visibility_region(&m, &m.vertex_point(3));
        assert_eq!(r.components(), &[iv(-5, -4), iv(-2, 0)]);
    }

    #[test]
    fn extremal_point_cases() {
        let t = terrain(&[(0, 0), (4, 2)]);
        let whole = region_from(vec![iv(0, 4)]);
        let xs: Vec<_> = extremal_points(&t, &whole)
            .iter()
            .map(|p| p.x().clone())
            .collect();
        assert_eq!(xs, vec![rat(0), rat(4)]);
        let single = region_from(vec![XInterval::point(ratio(5, 2))]);
        let xs: Vec<_> = extremal_points(&t, &single)
            .iter()
            .map(|p| p.x().clone())
            .collect();
        assert_eq!(xs, vec![ratio(5, 2)]);
    }

    #[test]
    fn union_examples() {
        let a = region_from(vec![iv(0, 1)]);
        let b = region_from(vec![iv(1, 2)]);
        assert_eq!(region_union([&a, &b]), vec![iv(0, 2)]);
        assert!(region_union(std::iter::empty::<&VisibilityRegion>()).is_empty());
        let c = region_from(vec![iv(0, 2), iv(4, 4)]);
        let d = region_from(vec![iv(2, 4)]);
        assert_eq!(region_union([&c, &d]), vec![iv(0, 4)]);
    }

    fn random_terrain() -> impl Strategy<Value = Terrain> {
        prop::collection::vec((1i64..4, -5i64..6), 2..10).prop_map(|steps| {
            let mut x = 0;
            let mut vs = Vec::new();
            for (dx, y) in steps {
                vs.push(Point2::from_ints(x, y));
                x += dx;
            }
            Terrain::new(vs).unwrap()
        })
    }

    fn at(t: &Terrain, k: i64) -> TerrainPoint {
        let x = t.x_min() + (t.x_max() - t.x_min()) * ratio(k, 997);
        t.point_at(&x).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn predicate_is_symmetric(t in random_terrain(), a in 0i64..=997, b in 0i64..=997) {
            let (p, q) = (at(&t, a), at(&t, b));
            prop_assert_eq!(sees(&t, &p, &q), sees(&t, &q, &p));
        }

        #[test]
        fn sweep_agrees_with_predicate(
            t in random_terrain(),
            a in 0i64..=997,
            probes in prop::collection::vec(0i64..=997, 40),
        ) {
            let p = at(&t, a);
            let r = visibility_region(&t, &p);
            prop_assert!(r.contains(p.x()));
            prop_assert!(r.components().len() < t.len());
            for w in r.components().windows(2) {
                prop_assert!(w[0].hi < w[1].lo);
            }
            for k in probes {
                let q = at(&t, k);
                prop_assert_eq!(r.contains(q.x()), sees(&t, &p, &q), "probe {}", q);
            }
            for (i, v) in t.vertices().iter().enumerate() {
                prop_assert_eq!(r.contains(&v.x), sees(&t, &p, &t.vertex_point(i)));
            }
            // Endpoints are visible and maximal: any step outward leaves V(p).
            let eps = ratio(1, 1_000_003);
            for c in r.components() {
                for (x, out) in [(&c.lo, &c.lo - &eps), (&c.hi, &c.hi + &eps)] {
                    prop_assert!(sees(&t, &p, &t.point_at(x).unwrap()));
                    if t.in_range(&out) {
                        prop_assert!(!sees(&t, &p, &t.point_at(&out).unwrap()));
                    }
                }
            }
        }

        #[test]
        fn edge_endpoints_visible_from_the_edge(t in random_terrain(), k in 0i64..=1000) {
            for i in 0..t.edge_count() {
                let (a, b) = t.edge(i);
                let x = &a.x + (&b.x - &a.x) * ratio(k, 1000);
                let p = t.point_at(&x).unwrap();
                let r = visibility_region(&t, &p);
                prop_assert!(r.contains(&a.x) && r.contains(&b.x));
            }
        }
    }
}
