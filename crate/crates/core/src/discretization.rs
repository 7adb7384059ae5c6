//! Finite guard candidates and witnesses.
//!
//! The candidate set `U` holds every terrain vertex together with every
//! extremal point of every vertex's visibility region; some optimal cover of
//! the whole terrain uses only points of `U`. Given any finite candidate set
//! `G` that sees the whole terrain, the overlay of the candidates' visibility
//! intervals splits the x-range into features on which the set of seeing
//! candidates is constant. One witness per feature with an inclusion-minimal
//! seeing set is enough: covering those witnesses covers the terrain.

use std::collections::{BTreeMap, HashSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{format_rat, midpoint, Rat, Terrain, TerrainPoint};
use crate::visibility::{
    extremal_points, region_union, visibility_region, VisibilityRegion, XInterval,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Terrain vertex with this index.
    Vertex(usize),
    /// Extremal point of the region of this vertex.
    Extremal(usize),
    /// Caller-supplied point that is not a vertex.
    Supplied,
}

/// Guard candidates in strictly increasing x order.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    terrain: Terrain,
    guards: Vec<TerrainPoint>,
    provenance: Vec<Provenance>,
}

impl CandidateSet {
    /// Wraps an arbitrary point set (sorted and deduplicated by x).
    pub fn from_points(terrain: &Terrain, mut points: Vec<TerrainPoint>) -> Self {
        points.sort();
        points.dedup();
        let provenance = points
            .iter()
            .map(|p| {
                let i = terrain.vertices().partition_point(|v| &v.x < p.x());
                if i < terrain.len() && terrain.vertex(i).x == *p.x() {
                    Provenance::Vertex(i)
                } else {
                    Provenance::Supplied
                }
            })
            .collect();
        CandidateSet {
            terrain: terrain.clone(),
            guards: points,
            provenance,
        }
    }

    pub fn terrain(&self) -> &Terrain {
        &self.terrain
    }

    pub fn guards(&self) -> &[TerrainPoint] {
        &self.guards
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    /// Index of the candidate at `x`, if any.
    pub fn position(&self, x: &Rat) -> Option<usize> {
        self.guards.binary_search_by(|g| g.x().cmp(x)).ok()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.position(x).is_some()
    }

    /// Visibility regions of all candidates, in candidate order.
    pub fn regions(&self) -> Vec<VisibilityRegion> {
        regions_of(&self.terrain, &self.guards)
    }
}

pub(crate) fn regions_of(t: &Terrain, points: &[TerrainPoint]) -> Vec<VisibilityRegion> {
    points.par_iter().map(|p| visibility_region(t, p)).collect()
}

/// `U`: vertices plus extremal points of all vertex regions, deduplicated by
/// exact x. Vertex provenance wins, then the lowest generating vertex.
pub fn build_candidates(t: &Terrain) -> CandidateSet {
    let vertex_points: Vec<TerrainPoint> = (0..t.len()).map(|i| t.vertex_point(i)).collect();
    let regions = regions_of(t, &vertex_points);

    let mut by_x: BTreeMap<Rat, (TerrainPoint, Provenance)> = BTreeMap::new();
    for (i, p) in vertex_points.into_iter().enumerate() {
        by_x.insert(p.x().clone(), (p, Provenance::Vertex(i)));
    }
    for (i, r) in regions.iter().enumerate() {
        for p in extremal_points(t, r) {
            by_x.entry(p.x().clone())
                .or_insert((p, Provenance::Extremal(i)));
        }
    }
    let (guards, provenance) = by_x.into_values().unzip();
    CandidateSet {
        terrain: t.clone(),
        guards,
        provenance,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    /// Open interval between two consecutive breakpoints.
    Gap,
    /// A single breakpoint.
    Point,
}

/// A cell of the overlay with the set of candidates seeing all of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feature {
    pub kind: FeatureKind,
    pub interval: XInterval,
    pub seen_by: FixedBitSet,
}

impl Feature {
    /// Witness location: the midpoint of a gap, or the breakpoint itself.
    pub fn witness_x(&self) -> Rat {
        match self.kind {
            FeatureKind::Gap => midpoint(&self.interval.lo, &self.interval.hi),
            FeatureKind::Point => self.interval.lo.clone(),
        }
    }
}

/// Overlay of the candidates' visibility intervals on `t`.
pub fn overlay(t: &Terrain, guards: &[TerrainPoint]) -> Vec<Feature> {
    let regions = regions_of(t, guards);
    let sets: Vec<&[XInterval]> = regions.iter().map(|r| r.components()).collect();
    overlay_intervals(&sets)
}

/// Overlay of arbitrary closed-interval families, one family per guard.
///
/// Emits, in x order, every gap between consecutive breakpoints that some
/// guard sees, and every breakpoint whose seeing set is not the union of its
/// two neighbouring gaps' sets (e.g. a zero-length visibility component).
pub fn overlay_intervals(sets: &[&[XInterval]]) -> Vec<Feature> {
    let mut bps: Vec<&Rat> = sets
        .iter()
        .flat_map(|s| s.iter().flat_map(|iv| [&iv.lo, &iv.hi]))
        .collect();
    bps.sort();
    bps.dedup();
    let nb = bps.len();
    if nb == 0 {
        return Vec::new();
    }
    let width = sets.len();
    let index = |x: &Rat| bps.binary_search(&x).expect("breakpoint present");
    let mut starts = vec![Vec::new(); nb];
    let mut ends = vec![Vec::new(); nb];
    for (g, s) in sets.iter().enumerate() {
        for iv in s.iter() {
            starts[index(&iv.lo)].push(g);
            ends[index(&iv.hi)].push(g);
        }
    }

    // Sweep breakpoints left to right with per-guard open-interval counts.
    let mut open = vec![0usize; width];
    let mut active = FixedBitSet::with_capacity(width);
    let mut gap_sets = Vec::with_capacity(nb - 1);
    let mut point_sets = Vec::with_capacity(nb);
    for k in 0..nb {
        for &g in &starts[k] {
            open[g] += 1;
            active.insert(g);
        }
        point_sets.push(active.clone());
        for &g in &ends[k] {
            open[g] -= 1;
            if open[g] == 0 {
                active.set(g, false);
            }
        }
        if k + 1 < nb {
            gap_sets.push(active.clone());
        }
    }

    let mut out = Vec::new();
    for k in 0..nb {
        let mut neighbours = FixedBitSet::with_capacity(width);
        if k > 0 {
            neighbours.union_with(&gap_sets[k - 1]);
        }
        if k + 1 < nb {
            neighbours.union_with(&gap_sets[k]);
        }
        if point_sets[k] != neighbours && !point_sets[k].is_clear() {
            out.push(Feature {
                kind: FeatureKind::Point,
                interval: XInterval::point(bps[k].clone()),
                seen_by: point_sets[k].clone(),
            });
        }
        if k + 1 < nb && !gap_sets[k].is_clear() {
            out.push(Feature {
                kind: FeatureKind::Gap,
                interval: XInterval::new(bps[k].clone(), bps[k + 1].clone()),
                seen_by: gap_sets[k].clone(),
            });
        }
    }
    out
}

/// Keeps the features whose seeing set has no other feature's seeing set as
/// a proper subset. Order is preserved.
pub fn inclusion_minimal(features: &[Feature]) -> Vec<Feature> {
    let mut order: Vec<usize> = (0..features.len()).collect();
    order.sort_by_key(|&i| (features[i].seen_by.count_ones(..), i));

    // A set is dominated iff some minimal set is a proper subset of it, and
    // proper subsets always have fewer elements.
    let mut minimal: Vec<&FixedBitSet> = Vec::new();
    let mut seen: HashSet<&FixedBitSet> = HashSet::new();
    let mut keep = vec![false; features.len()];
    for i in order {
        let s = &features[i].seen_by;
        if seen.contains(s) {
            keep[i] = true;
            continue;
        }
        if minimal.iter().any(|m| m.is_subset(s)) {
            continue;
        }
        keep[i] = true;
        seen.insert(s);
        minimal.push(s);
    }
    features
        .iter()
        .zip(keep)
        .filter(|&(_, k)| k)
        .map(|(f, _)| f.clone())
        .collect()
}

/// True iff every breakpoint between two gap features is seen by exactly the
/// union of the two gaps' seeing sets, i.e. the breakpoint needs no witness.
pub fn endpoint_omission_check(features: &[Feature]) -> bool {
    features.windows(3).all(|w| {
        let [left, mid, right] = w else {
            unreachable!()
        };
        let sandwiched = mid.kind == FeatureKind::Point
            && left.kind == FeatureKind::Gap
            && right.kind == FeatureKind::Gap
            && left.interval.hi == mid.interval.lo
            && right.interval.lo == mid.interval.lo;
        if !sandwiched {
            return true;
        }
        let mut union = left.seen_by.clone();
        union.union_with(&right.seen_by);
        union == mid.seen_by
    })
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub point: TerrainPoint,
    /// Candidate indices that see this witness.
    pub seen_by: FixedBitSet,
    /// The overlay feature the witness was placed in.
    pub feature: XInterval,
}

#[derive(Clone, Debug)]
pub struct WitnessSet {
    terrain: Terrain,
    witnesses: Vec<Witness>,
    /// Overlay size before filtering.
    feature_count: usize,
}

impl WitnessSet {
    pub fn terrain(&self) -> &Terrain {
        &self.terrain
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }
}

/// `W(G)`: one witness per (inclusion-minimal, if `minimal_filter`) overlay
/// feature. Fails if `G` does not see the whole terrain.
pub fn build_witnesses(t: &Terrain, g: &CandidateSet, minimal_filter: bool) -> Result<WitnessSet> {
    let regions = g.regions();
    witnesses_from_regions(t, &regions, minimal_filter)
}

pub(crate) fn witnesses_from_regions(
    t: &Terrain,
    regions: &[VisibilityRegion],
    minimal_filter: bool,
) -> Result<WitnessSet> {
    if let Some(x) = first_uncovered(t, &region_union(regions)) {
        return Err(Error::Uncovered { x: format_rat(&x) });
    }
    let sets: Vec<&[XInterval]> = regions.iter().map(|r| r.components()).collect();
    let features = overlay_intervals(&sets);
    let feature_count = features.len();
    let kept = if minimal_filter {
        inclusion_minimal(&features)
    } else {
        features
    };
    let witnesses = kept
        .into_iter()
        .map(|f| Witness {
            point: t
                .point_at(&f.witness_x())
                .expect("features lie on the terrain"),
            seen_by: f.seen_by,
            feature: f.interval,
        })
        .collect();
    Ok(WitnessSet {
        terrain: t.clone(),
        witnesses,
        feature_count,
    })
}

/// A point of `[x_min, x_max]` outside the normalized union, if any: the
/// midpoint of the first uncovered gap.
pub(crate) fn first_uncovered(t: &Terrain, union: &[XInterval]) -> Option<Rat> {
    let (lo, hi) = (t.x_min(), t.x_max());
    let Some(first) = union.first() else {
        return Some(lo.clone());
    };
    if &first.lo > lo {
        return Some(midpoint(lo, &first.lo));
    }
    if let Some(next) = union.get(1) {
        return Some(midpoint(&first.hi, &next.lo));
    }
    (&first.hi < hi).then(|| midpoint(&first.hi, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rat, Point2};
    use crate::visibility::sees;

    fn terrain(pts: &[(i64, i64)]) -> Terrain {
        Terrain::new(pts.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect()).unwrap()
    }

    fn bits(width: usize, ones: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(width);
        ones.iter().for_each(|&i| b.insert(i));
        b
    }

    fn iv(lo: i64, hi: i64) -> XInterval {
        XInterval::new(rat(lo), rat(hi))
    }

    fn gap(lo: i64, hi: i64, width: usize, ones: &[usize]) -> Feature {
        Feature {
            kind: FeatureKind::Gap,
            interval: iv(lo, hi),
            seen_by: bits(width, ones),
        }
    }

    fn xs(c: &CandidateSet) -> Vec<Rat> {
        c.guards().iter().map(|g| g.x().clone()).collect()
    }

    /// Vertices plus extremal points of per-vertex regions, assembled
    /// directly from the visibility module.
    fn candidates_oracle(t: &Terrain) -> Vec<Rat> {
        let mut out: Vec<Rat> = t.vertices().iter().map(|v| v.x.clone()).collect();
        for i in 0..t.len() {
            let r = visibility_region(t, &t.vertex_point(i));
            for c in r.components() {
                out.push(c.lo.clone());
                out.push(c.hi.clone());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn candidate_examples() {
        let line = terrain(&[(0, 0), (4, 2)]);
        assert_eq!(xs(&build_candidates(&line)), vec![rat(0), rat(4)]);

        let peak = terrain(&[(0, 0), (1, 1), (2, 0)]);
        let u = build_candidates(&peak);
        assert_eq!(xs(&u), candidates_oracle(&peak));
        assert_eq!(xs(&u), vec![rat(0), rat(1), rat(2)]);

        let w = terrain(&[(0, 1), (1, 0), (2, 1), (3, 0), (4, 1)]);
        let u = build_candidates(&w);
        assert_eq!(xs(&u), candidates_oracle(&w));
        assert_eq!(u.len(), 5);
        assert!(u
            .provenance()
            .iter()
            .all(|p| matches!(p, Provenance::Vertex(_))));
    }

    #[test]
    fn candidates_include_ray_intersections() {
        let t = terrain(&[(0, 0), (2, 2), (3, 1), (5, 7)]);
        let u = build_candidates(&t);
        assert!(u.contains(&rat(4)));
        assert_eq!(
            u.provenance()[u.position(&rat(4)).unwrap()],
            Provenance::Extremal(0)
        );
        assert_eq!(xs(&u), candidates_oracle(&t));
    }

    #[test]
    fn overlay_examples() {
        let single = [iv(0, 4)];
        let f = overlay_intervals(&[&single]);
        assert_eq!(f, vec![gap(0, 4, 1, &[0])]);

        let (a, b) = ([iv(0, 2)], [iv(1, 4)]);
        let f = overlay_intervals(&[&a, &b]);
        assert_eq!(
            f,
            vec![
                gap(0, 1, 2, &[0]),
                gap(1, 2, 2, &[0, 1]),
                gap(2, 4, 2, &[1])
            ]
        );
        assert!(endpoint_omission_check(&f));
    }

    #[test]
    fn overlay_keeps_singleton_components() {
        let (a, b, c) = ([iv(0, 2)], [iv(2, 4)], [XInterval::point(rat(2))]);
        let f = overlay_intervals(&[&a, &b, &c]);
        assert_eq!(f.len(), 3);
        assert_eq!(f[1].kind, FeatureKind::Point);
        assert_eq!(f[1].seen_by, bits(3, &[0, 1, 2]));
        assert!(!endpoint_omission_check(&f));
        // Dominated by either neighbour, so the filter drops it.
        let kept = inclusion_minimal(&f);
        assert_eq!(kept, vec![f[0].clone(), f[2].clone()]);
    }

    #[test]
    fn endpoint_check_cases() {
        let ok = vec![
            gap(0, 1, 2, &[0]),
            Feature {
                kind: FeatureKind::Point,
                interval: XInterval::point(rat(1)),
                seen_by: bits(2, &[0, 1]),
            },
            gap(1, 2, 2, &[1]),
        ];
        assert!(endpoint_omission_check(&ok));
        assert!(endpoint_omission_check(&[gap(0, 4, 1, &[0])]));
    }

    #[test]
    fn overlay_matches_pointwise_predicate_on_w_terrain() {
        let w = terrain(&[(0, 1), (1, 0), (2, 1), (3, 0), (4, 1)]);
        let u = build_candidates(&w);
        for f in overlay(&w, u.guards()) {
            let samples: Vec<Rat> = match f.kind {
                FeatureKind::Point => vec![f.interval.lo.clone()],
                FeatureKind::Gap => (1..1000)
                    .map(|k| {
                        &f.interval.lo + (&f.interval.hi - &f.interval.lo) * crate::ratio(k, 1000)
                    })
                    .collect(),
            };
            for x in samples {
                let q = w.point_at(&x).unwrap();
                let direct = bits(
                    u.len(),
                    &(0..u.len())
                        .filter(|&g| sees(&w, &u.guards()[g], &q))
                        .collect::<Vec<_>>(),
                );
                assert_eq!(direct, f.seen_by, "x = {x}");
            }
        }
    }

    #[test]
    fn inclusion_minimal_examples() {
        let f = vec![
            gap(0, 1, 3, &[1]),
            gap(1, 2, 3, &[1, 2]),
            gap(2, 3, 3, &[2]),
        ];
        assert_eq!(inclusion_minimal(&f), vec![f[0].clone(), f[2].clone()]);
        let same = vec![gap(0, 1, 2, &[0, 1]), gap(1, 2, 2, &[0, 1])];
        assert_eq!(inclusion_minimal(&same), same);
        assert!(inclusion_minimal(&[]).is_empty());
    }

    #[test]
    fn inclusion_minimal_is_an_antichain_and_matches_pairwise_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let width = rng.gen_range(1..8);
            let n = rng.gen_range(0..12);
            let f: Vec<Feature> = (0..n)
                .map(|i| {
                    let ones: Vec<usize> = (0..width).filter(|_| rng.gen_bool(0.4)).collect();
                    let ones = if ones.is_empty() { vec![0] } else { ones };
                    gap(i, i + 1, width, &ones)
                })
                .collect();
            let brute: Vec<Feature> = f
                .iter()
                .filter(|a| {
                    !f.iter()
                        .any(|b| b.seen_by.is_subset(&a.seen_by) && b.seen_by != a.seen_by)
                })
                .cloned()
                .collect();
            let kept = inclusion_minimal(&f);
            assert_eq!(kept, brute);
            for a in &kept {
                for b in &kept {
                    assert!(!(a.seen_by.is_subset(&b.seen_by) && a.seen_by != b.seen_by));
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let line = terrain(&[(0, 0), (4, 2)]);
        let u = build_candidates(&line);
        let w = build_witnesses(&line, &u, true).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.witnesses()[0].point.x(), &rat(2));
        assert_eq!(w.witnesses()[0].seen_by, bits(2, &[0, 1]));

        let peak = terrain(&[(0, 0), (1, 1), (2, 0)]);
        let u = build_candidates(&peak);
        let w = build_witnesses(&peak, &u, true).unwrap();
        let got: Vec<(Rat, FixedBitSet)> = w
            .witnesses()
            .iter()
            .map(|w| (w.point.x().clone(), w.seen_by.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                (crate::ratio(1, 2), bits(3, &[0, 1])),
                (crate::ratio(3, 2), bits(3, &[1, 2])),
            ]
        );
    }

    #[test]
    fn witnesses_require_coverage() {
        let peak = terrain(&[(0, 0), (1, 1), (2, 0)]);
        let only_left = CandidateSet::from_points(&peak, vec![peak.vertex_point(0)]);
        match build_witnesses(&peak, &only_left, true) {
            Err(Error::Uncovered { x }) => assert_eq!(x, "3/2"),
            other => panic!("expected uncovered error, got {other:?}"),
        }
    }
}
