//! Independent checks: brute-force minimum cover, guard classification on a
//! given cover, the constructive move of an arbitrary cover onto the
//! candidate set, and randomized executable versions of the structural
//! lemmas behind it.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretization::{regions_of, witnesses_from_regions, CandidateSet};
use crate::error::{Error, Result};
use crate::geometry::{format_rat, ratio, Terrain, TerrainPoint};
use crate::setcover::{solve_exact, solve_greedy, verify_coverage, ExactOptions, Incidence};
use crate::visibility::{region_union, visibility_region, VisibilityRegion, XInterval};

pub const BRUTE_FORCE_LIMIT: usize = 25;

/// Exhaustive minimum cover: sizes in increasing order, subsets in
/// lexicographic order, first hit wins.
pub fn brute_force_min_cover(inst: &Incidence) -> Result<(usize, Vec<usize>)> {
    let n = inst.guard_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            guards: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    for k in 0..=n {
        if let Some(c) = (0..n).combinations(k).find(|c| inst.is_cover(c)) {
            return Ok((k, c));
        }
    }
    unreachable!("rows are non-empty, so all guards together cover")
}

/// How one guard of a cover relates to each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardClassification {
    pub guard: TerrainPoint,
    /// Edges the rest of the cover sees on a sub-interval of positive
    /// length, but not entirely.
    pub critical: Vec<usize>,
    /// Critical edges lying entirely right of the guard.
    pub left_guard_of: Vec<usize>,
    /// Critical edges lying entirely left of the guard.
    pub right_guard_of: Vec<usize>,
    /// Edges the rest of the cover sees at most at isolated points.
    pub sole: Vec<usize>,
}

impl GuardClassification {
    pub fn is_left_guard(&self) -> bool {
        !self.left_guard_of.is_empty()
    }

    pub fn is_right_guard(&self) -> bool {
        !self.right_guard_of.is_empty()
    }
}

/// The part of the normalized interval list `parts` inside `edge`.
fn clip(parts: &[XInterval], edge: &XInterval) -> Vec<XInterval> {
    parts.iter().filter_map(|p| p.intersect(edge)).collect()
}

fn edge_interval(t: &Terrain, i: usize) -> XInterval {
    let (a, b) = t.edge(i);
    XInterval::new(a.x.clone(), b.x.clone())
}

/// Classifies `cover[idx]`. Fails if `cover` does not see the whole terrain.
pub fn classify_guard(
    t: &Terrain,
    cover: &[TerrainPoint],
    idx: usize,
) -> Result<GuardClassification> {
    let regions = regions_of(t, cover);
    if let Some(x) = crate::discretization::first_uncovered(t, &region_union(&regions)) {
        return Err(Error::Uncovered { x: format_rat(&x) });
    }
    Ok(classify_with_regions(t, &regions, idx))
}

fn classify_with_regions(
    t: &Terrain,
    regions: &[VisibilityRegion],
    idx: usize,
) -> GuardClassification {
    let guard = regions[idx].owner().clone();
    let others = region_union(
        regions
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, r)| r),
    );
    let mut out = GuardClassification {
        guard: guard.clone(),
        critical: Vec::new(),
        left_guard_of: Vec::new(),
        right_guard_of: Vec::new(),
        sole: Vec::new(),
    };
    for i in 0..t.edge_count() {
        let edge = edge_interval(t, i);
        let seen = clip(&others, &edge);
        // Isolated points seen by the rest do not count as covering a part.
        if seen.iter().all(XInterval::is_singleton) {
            out.sole.push(i);
            continue;
        }
        if seen.len() == 1 && seen[0] == edge {
            continue;
        }
        out.critical.push(i);
        if guard.x() < &edge.lo {
            out.left_guard_of.push(i);
        } else if guard.x() > &edge.hi {
            out.right_guard_of.push(i);
        }
    }
    out
}

/// Nearest candidates strictly left and right of `g`.
pub fn u_neighbors(u: &CandidateSet, g: &TerrainPoint) -> Result<(TerrainPoint, TerrainPoint)> {
    let gs = u.guards();
    let i = gs.partition_point(|p| p.x() < g.x());
    if i < gs.len() && gs[i].x() == g.x() {
        return Err(Error::AlreadyCandidate(format_rat(g.x())));
    }
    if i == 0 || i == gs.len() {
        return Err(Error::OutOfRange(format_rat(g.x())));
    }
    Ok((gs[i - 1].clone(), gs[i].clone()))
}

/// Moves every guard of `cover` outside `u` onto a neighbouring candidate,
/// one at a time: to the left neighbour unless it is a right-guard, else to
/// the right neighbour. The result keeps one entry per input guard (a
/// multiset; duplicates are possible) and still covers the terrain.
pub fn reposition_to_u(
    t: &Terrain,
    u: &CandidateSet,
    cover: &[TerrainPoint],
) -> Result<Vec<TerrainPoint>> {
    let mut current = cover.to_vec();
    let mut regions = regions_of(t, &current);
    if let Some(x) = crate::discretization::first_uncovered(t, &region_union(&regions)) {
        return Err(Error::Uncovered { x: format_rat(&x) });
    }
    for i in 0..current.len() {
        if u.contains(current[i].x()) {
            continue;
        }
        let class = classify_with_regions(t, &regions, i);
        let (left, right) = u_neighbors(u, &current[i])?;
        let target = match (class.is_left_guard(), class.is_right_guard()) {
            (_, false) => left,
            (false, true) => right,
            (true, true) => {
                return Err(Error::Invariant(format!(
                    "guard at x = {} is both a left- and a right-guard",
                    format_rat(current[i].x())
                )))
            }
        };
        regions[i] = visibility_region(t, &target);
        current[i] = target;
    }
    if let Some(x) = crate::discretization::first_uncovered(t, &region_union(&regions)) {
        return Err(Error::Invariant(format!(
            "repositioned cover misses x = {}",
            format_rat(&x)
        )));
    }
    Ok(current)
}

/// `per_vertex * n` uniformly sampled rational positions, extended by the
/// vertices if they do not see the whole terrain, then thinned to a cover by
/// greedy set cover over their own witness set.
pub fn dense_random_cover<R: Rng>(
    t: &Terrain,
    rng: &mut R,
    per_vertex: usize,
) -> Vec<TerrainPoint> {
    const DENOM: i64 = 10_007;
    let span = t.x_max() - t.x_min();
    let mut pts: Vec<TerrainPoint> = (0..per_vertex * t.len())
        .map(|_| {
            let x = t.x_min() + &span * ratio(rng.gen_range(0..=DENOM), DENOM);
            t.point_at(&x).expect("sample in range")
        })
        .collect();
    let mut cands = CandidateSet::from_points(t, pts.clone());
    let mut regions = cands.regions();
    if crate::discretization::first_uncovered(t, &region_union(&regions)).is_some() {
        pts.extend((0..t.len()).map(|i| t.vertex_point(i)));
        cands = CandidateSet::from_points(t, pts);
        regions = cands.regions();
    }
    let w = witnesses_from_regions(t, &regions, true).expect("candidates cover the terrain");
    let rows = w.witnesses().iter().map(|w| w.seen_by.clone()).collect();
    let inst = Incidence::new(cands.len(), rows).expect("rows are non-empty");
    solve_greedy(&inst)
        .chosen
        .into_iter()
        .map(|g| cands.guards()[g].clone())
        .collect()
}

/// Outcome of one named check over many evaluations.
#[derive(Clone, Debug)]
pub struct CheckStat {
    pub name: &'static str,
    pub trials: u64,
    pub failures: u64,
    pub counterexample: Option<Terrain>,
}

impl CheckStat {
    fn new(name: &'static str) -> Self {
        CheckStat {
            name,
            trials: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, t: &Terrain) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(t.clone());
            }
        }
    }
}

pub const LEMMA_CHECKS: [&str; 6] = [
    "guard-edge-u",
    "single-interval-vis",
    "vis-intersect",
    "unique-side-guard",
    "leftright-guard-to-u",
    "side-guard-move",
];

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub checks: Vec<CheckStat>,
    /// Critical edges that have a guard on one side but none on the other.
    /// Not a failure: with redundant guards this happens routinely.
    pub one_sided_edges: u64,
}

impl Default for LemmaReport {
    fn default() -> Self {
        LemmaReport {
            checks: LEMMA_CHECKS.iter().map(|n| CheckStat::new(n)).collect(),
            one_sided_edges: 0,
        }
    }
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn check(&self, name: &str) -> Option<&CheckStat> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: LemmaReport) {
        for (a, b) in self.checks.iter_mut().zip(other.checks) {
            a.trials += b.trials;
            a.failures += b.failures;
            if a.counterexample.is_none() {
                a.counterexample = b.counterexample;
            }
        }
        self.one_sided_edges += other.one_sided_edges;
    }

    fn stat(&mut self, i: usize) -> &mut CheckStat {
        &mut self.checks[i]
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let ce = match &c.counterexample {
                Some(t) => crate::io::terrain_to_json(t),
                None => "-".to_string(),
            };
            writeln!(
                f,
                "{} trials={} failures={} counterexample={}",
                c.name, c.trials, c.failures, ce
            )?;
        }
        writeln!(f, "one-sided-critical-edges {}", self.one_sided_edges)
    }
}

/// Randomized checks of the structural lemmas on `t`: one minimum cover
/// over the candidate set, plus `trials` random covers built by
/// [`dense_random_cover`] (half of them padded with a few redundant guards).
pub fn lemma_checks(t: &Terrain, trials: usize, seed: u64) -> LemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = crate::discretization::build_candidates(t);
    let mut report = LemmaReport::default();

    let w = witnesses_from_regions(t, &u.regions(), true).expect("vertices cover the terrain");
    let rows = w.witnesses().iter().map(|w| w.seen_by.clone()).collect();
    let inst = Incidence::new(u.len(), rows).expect("rows are non-empty");
    let best = solve_exact(&inst, &ExactOptions::default());
    let cover: Vec<TerrainPoint> = best.chosen.iter().map(|&g| u.guards()[g].clone()).collect();
    check_cover(t, &u, &cover, &mut report);

    for _ in 0..trials {
        let mut cover = dense_random_cover(t, &mut rng, 10);
        if rng.gen_bool(0.5) {
            for _ in 0..rng.gen_range(1..=2) {
                let x = t.x_min() + (t.x_max() - t.x_min()) * ratio(rng.gen_range(0..=997), 997);
                cover.push(t.point_at(&x).unwrap());
            }
        }
        check_cover(t, &u, &cover, &mut report);
    }
    report
}

/// The lemma checks for one given cover of `t`.
pub fn lemma_checks_for_cover(t: &Terrain, cover: &[TerrainPoint]) -> Result<LemmaReport> {
    if let Some(p) = verify_coverage(t, cover).uncovered_at {
        return Err(Error::Uncovered {
            x: format_rat(p.x()),
        });
    }
    let mut report = LemmaReport::default();
    check_cover(
        t,
        &crate::discretization::build_candidates(t),
        cover,
        &mut report,
    );
    Ok(report)
}

fn check_cover(t: &Terrain, u: &CandidateSet, cover: &[TerrainPoint], report: &mut LemmaReport) {
    let regions = regions_of(t, cover);
    let classes: Vec<GuardClassification> = (0..cover.len())
        .map(|i| classify_with_regions(t, &regions, i))
        .collect();
    let edges: Vec<XInterval> = (0..t.edge_count()).map(|i| edge_interval(t, i)).collect();

    for (i, g) in cover.iter().enumerate() {
        let off_u = !u.contains(g.x());
        let neighbours = if off_u { u_neighbors(u, g).ok() } else { None };

        // A guard seeing a whole edge passes that edge on to both neighbours.
        if let Some((l, r)) = &neighbours {
            let (rl, rr) = (visibility_region(t, l), visibility_region(t, r));
            for e in &edges {
                if regions[i].covers_interval(&e.lo, &e.hi) {
                    let ok = rl.covers_interval(&e.lo, &e.hi) && rr.covers_interval(&e.lo, &e.hi);
                    report.stat(0).record(ok, t);
                }
            }
        }

        // A side guard sees one interval of its critical edge, touching the
        // far endpoint.
        for &e in &classes[i].left_guard_of {
            let seen = clip(regions[i].components(), &edges[e]);
            let ok = seen.len() == 1 && seen[0].hi == edges[e].hi;
            report.stat(1).record(ok, t);
        }
        for &e in &classes[i].right_guard_of {
            let seen = clip(regions[i].components(), &edges[e]);
            let ok = seen.len() == 1 && seen[0].lo == edges[e].lo;
            report.stat(1).record(ok, t);
        }

        if let Some((l, r)) = neighbours {
            let both = classes[i].is_left_guard() && classes[i].is_right_guard();
            report.stat(4).record(!both, t);
            if !both {
                let target = if classes[i].is_right_guard() { r } else { l };
                let mut moved = cover.to_vec();
                moved[i] = target;
                report.stat(5).record(verify_coverage(t, &moved).covered, t);
            }
        }
    }

    for (e, edge) in edges.iter().enumerate() {
        let lefts: Vec<usize> = (0..cover.len())
            .filter(|&i| classes[i].left_guard_of.contains(&e))
            .collect();
        let rights: Vec<usize> = (0..cover.len())
            .filter(|&i| classes[i].right_guard_of.contains(&e))
            .collect();
        if lefts.is_empty() && rights.is_empty() {
            continue;
        }
        report
            .stat(3)
            .record(lefts.len() <= 1 && rights.len() <= 1, t);
        if lefts.is_empty() || rights.is_empty() {
            report.one_sided_edges += 1;
            continue;
        }
        for &l in &lefts {
            for &r in &rights {
                let a = clip(regions[l].components(), edge);
                let b = clip(regions[r].components(), edge);
                let shared = a.iter().any(|x| b.iter().any(|y| x.intersect(y).is_some()));
                report.stat(2).record(shared, t);
            }
        }
    }
}
