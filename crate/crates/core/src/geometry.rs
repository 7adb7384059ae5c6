//! Exact rational geometry: scalars, points, orientation, and the terrain chain.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar. Always normalized, denominator > 0.
pub type Rat = BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num / den` as a normalized rational. Panics on `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` (optional sign on `p`, `q > 0`).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if !den.is_positive() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / rat(2)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point2 {
    pub x: Rat,
    pub y: Rat,
}

impl Point2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(rat(x), rat(y))
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rat(&self.x), format_rat(&self.y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    /// `-1`, `0` or `+1`.
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    /// Counter-clockwise or collinear.
    pub fn is_left_or_on(self) -> bool {
        self != Orientation::Clockwise
    }
}

/// Twice the signed area of the triangle `abc`, i.e. `(b - a) x (c - a)`.
pub fn cross(a: &Point2, b: &Point2, c: &Point2) -> Rat {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// `u - v` as an unreduced fraction with positive denominator.
fn raw_diff(u: &Rat, v: &Rat) -> (BigInt, BigInt) {
    if u.denom() == v.denom() {
        (u.numer() - v.numer(), u.denom().clone())
    } else {
        (
            u.numer() * v.denom() - v.numer() * u.denom(),
            u.denom() * v.denom(),
        )
    }
}

/// Exact orientation of `c` relative to the directed line `a -> b`.
///
/// Same sign as [`cross`], computed on unreduced fractions to skip the gcd
/// work of normalized rational arithmetic.
pub fn orientation(a: &Point2, b: &Point2, c: &Point2) -> Orientation {
    let (n1, d1) = raw_diff(&b.x, &a.x);
    let (n2, d2) = raw_diff(&c.y, &a.y);
    let (n3, d3) = raw_diff(&b.y, &a.y);
    let (n4, d4) = raw_diff(&c.x, &a.x);
    let lhs = n1 * n2 * &d3 * &d4;
    let rhs = n3 * n4 * d1 * d2;
    match lhs.cmp(&rhs) {
        Ordering::Less => Orientation::Clockwise,
        Ordering::Equal => Orientation::Collinear,
        Ordering::Greater => Orientation::CounterClockwise,
    }
}

/// A strictly x-monotone polygonal chain `v_0 .. v_{n-1}`, `n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Terrain {
    vertices: Vec<Point2>,
}

impl Terrain {
    /// Validates without merging collinear vertices.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        validate_terrain(vertices, false)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point2 {
        &self.vertices[i]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn edge(&self, i: usize) -> (&Point2, &Point2) {
        (&self.vertices[i], &self.vertices[i + 1])
    }

    pub fn x_min(&self) -> &Rat {
        &self.vertices[0].x
    }

    pub fn x_max(&self) -> &Rat {
        &self.vertices[self.vertices.len() - 1].x
    }

    pub fn in_range(&self, x: &Rat) -> bool {
        x >= self.x_min() && x <= self.x_max()
    }

    /// Index of an edge whose closed x-range contains `x` (the right one at
    /// interior vertices, the last edge at `x_max`).
    pub fn edge_index_at(&self, x: &Rat) -> Option<usize> {
        if !self.in_range(x) {
            return None;
        }
        let after = self.vertices.partition_point(|v| &v.x <= x);
        Some(after.saturating_sub(1).min(self.edge_count() - 1))
    }

    /// Exact terrain height at `x`.
    pub fn height_at(&self, x: &Rat) -> Option<Rat> {
        let i = self.edge_index_at(x)?;
        let (a, b) = self.edge(i);
        if x == &a.x {
            return Some(a.y.clone());
        }
        if x == &b.x {
            return Some(b.y.clone());
        }
        Some(&a.y + (x - &a.x) * (&b.y - &a.y) / (&b.x - &a.x))
    }

    pub fn point_at(&self, x: &Rat) -> Result<TerrainPoint> {
        let edge = self
            .edge_index_at(x)
            .ok_or_else(|| Error::OutOfRange(format_rat(x)))?;
        let y = self.height_at(x).expect("x checked in range");
        Ok(TerrainPoint {
            pos: Point2::new(x.clone(), y),
            edge,
        })
    }

    /// The terrain point at vertex `i`.
    pub fn vertex_point(&self, i: usize) -> TerrainPoint {
        TerrainPoint {
            pos: self.vertices[i].clone(),
            edge: i.min(self.edge_count() - 1),
        }
    }

    /// Whether `p` lies exactly on the chain.
    pub fn contains(&self, p: &Point2) -> bool {
        self.height_at(&p.x).is_some_and(|y| y == p.y)
    }

    /// Vertices with `lo < v.x < hi`.
    pub fn vertices_strictly_between(&self, lo: &Rat, hi: &Rat) -> &[Point2] {
        let start = self.vertices.partition_point(|v| &v.x <= lo);
        let end = self.vertices.partition_point(|v| &v.x < hi);
        if start >= end {
            &[]
        } else {
            &self.vertices[start..end]
        }
    }

    /// Whether `x` is the x-coordinate of some vertex.
    pub fn is_vertex_x(&self, x: &Rat) -> bool {
        self.vertices.binary_search_by(|v| v.x.cmp(x)).is_ok()
    }
}

impl fmt::Display for Terrain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Checks strict x-monotonicity and `n >= 2`. With `normalize`, interior
/// vertices collinear with both neighbours are dropped.
pub fn validate_terrain(vertices: Vec<Point2>, normalize: bool) -> Result<Terrain> {
    if vertices.len() < 2 {
        return Err(Error::TooFewVertices(vertices.len()));
    }
    for i in 1..vertices.len() {
        if vertices[i].x <= vertices[i - 1].x {
            return Err(Error::NonMonotone { index: i });
        }
    }
    if !normalize {
        return Ok(Terrain { vertices });
    }
    let mut kept: Vec<Point2> = Vec::with_capacity(vertices.len());
    for v in vertices {
        while kept.len() >= 2
            && orientation(&kept[kept.len() - 2], &kept[kept.len() - 1], &v)
                == Orientation::Collinear
        {
            kept.pop();
        }
        kept.push(v);
    }
    Ok(Terrain { vertices: kept })
}

/// A point on the chain, identified by its x-coordinate. `y` is derived and
/// `edge` names an edge containing the point.
#[derive(Clone, Debug)]
pub struct TerrainPoint {
    pos: Point2,
    edge: usize,
}

impl TerrainPoint {
    pub fn x(&self) -> &Rat {
        &self.pos.x
    }

    pub fn y(&self) -> &Rat {
        &self.pos.y
    }

    pub fn pos(&self) -> &Point2 {
        &self.pos
    }

    pub fn edge_hint(&self) -> usize {
        self.edge
    }
}

impl PartialEq for TerrainPoint {
    fn eq(&self, other: &Self) -> bool {
        self.pos.x == other.pos.x
    }
}

impl Eq for TerrainPoint {}

impl PartialOrd for TerrainPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TerrainPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pos.x.cmp(&other.pos.x)
    }
}

impl fmt::Display for TerrainPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pos.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: i64, y: i64) -> Point2 {
        Point2::from_ints(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&pt(0, 0), &pt(1, 0), &pt(2, 0)).sign(), 0);
        assert_eq!(orientation(&pt(0, 0), &pt(1, 0), &pt(1, 1)).sign(), 1);
        assert_eq!(orientation(&pt(0, 0), &pt(1, 1), &pt(2, 0)).sign(), -1);
    }

    #[test]
    fn validate_examples() {
        let t = Terrain::new(vec![pt(0, 0), pt(4, 2)]).unwrap();
        assert_eq!(t.edge_count(), 1);
        assert!(matches!(
            Terrain::new(vec![pt(0, 0), pt(0, 1)]),
            Err(Error::NonMonotone { index: 1 })
        ));
        let peak = Terrain::new(vec![pt(0, 0), pt(1, 1), pt(2, 0)]).unwrap();
        assert_eq!(peak.edge_count(), 2);
        assert!(matches!(
            Terrain::new(vec![pt(0, 0)]),
            Err(Error::TooFewVertices(1))
        ));
        assert!(matches!(
            Terrain::new(vec![pt(0, 0), pt(2, 1), pt(1, 0)]),
            Err(Error::NonMonotone { index: 2 })
        ));
    }

    #[test]
    fn normalization_merges_collinear_runs() {
        let raw = vec![pt(0, 0), pt(1, 1), pt(2, 2), pt(3, 0), pt(4, -2)];
        let plain = validate_terrain(raw.clone(), false).unwrap();
        assert_eq!(plain.len(), 5);
        let norm = validate_terrain(raw, true).unwrap();
        assert_eq!(norm.vertices(), &[pt(0, 0), pt(2, 2), pt(4, -2)]);
    }

    #[test]
    fn point_at_examples() {
        let t = Terrain::new(vec![pt(0, 0), pt(4, 2)]).unwrap();
        assert_eq!(t.point_at(&rat(2)).unwrap().pos(), &pt(2, 1));
        let peak = Terrain::new(vec![pt(0, 0), pt(1, 1), pt(2, 0)]).unwrap();
        assert_eq!(peak.point_at(&rat(1)).unwrap().pos(), &pt(1, 1));
        let p = peak.point_at(&ratio(3, 2)).unwrap();
        assert_eq!(p.pos(), &Point2::new(ratio(3, 2), ratio(1, 2)));
        assert!(matches!(peak.point_at(&rat(3)), Err(Error::OutOfRange(_))));
        assert!(matches!(peak.point_at(&rat(-1)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(parse_rat("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat(-7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rat(&rat(5)), "5");
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-1000i64..1000, 1i64..50).prop_map(|(n, d)| ratio(n, d))
    }

    fn point() -> impl Strategy<Value = Point2> {
        (small_rat(), small_rat()).prop_map(|(x, y)| Point2::new(x, y))
    }

    fn terrain_vertices() -> impl Strategy<Value = Vec<Point2>> {
        prop::collection::vec((1i64..5, -6i64..6), 1..10).prop_map(|steps| {
            let mut x = 0;
            let mut out = vec![pt(0, 0)];
            for (dx, y) in steps {
                x += dx;
                out.push(pt(x, y));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn orientation_antisymmetric_and_translation_invariant(
            a in point(), b in point(), c in point(), d in point()
        ) {
            let o = orientation(&a, &b, &c).sign();
            prop_assert_eq!(o, -orientation(&a, &c, &b).sign());
            let sh = |p: &Point2| Point2::new(&p.x + &d.x, &p.y + &d.y);
            prop_assert_eq!(o, orientation(&sh(&a), &sh(&b), &sh(&c)).sign());
            let d = cross(&a, &b, &c);
            let expected = if d.is_positive() { 1 } else if d.is_negative() { -1 } else { 0 };
            prop_assert_eq!(o, expected);
        }

        #[test]
        fn point_at_is_consistent(vs in terrain_vertices(), num in 0i64..=1000) {
            let t = Terrain::new(vs.clone()).unwrap();
            let x = t.x_min() + (t.x_max() - t.x_min()) * ratio(num, 1000);
            let p = t.point_at(&x).unwrap();
            prop_assert_eq!(p.x(), &x);
            let (a, b) = t.edge(p.edge_hint());
            prop_assert!(a.x <= x && x <= b.x);
            prop_assert!(orientation(a, b, p.pos()) == Orientation::Collinear);
            for (i, v) in vs.iter().enumerate() {
                prop_assert_eq!(t.point_at(&v.x).unwrap().pos().clone(), v.clone());
                prop_assert_eq!(t.vertex_point(i).pos().clone(), v.clone());
            }
            let again = Terrain::new(t.vertices().to_vec()).unwrap();
            prop_assert_eq!(again, t);
        }
    }
}
