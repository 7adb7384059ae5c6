//! Branch-and-bound for minimum set cover.
//!
//! Preprocessing removes dominated columns and rows and fixes guards forced
//! by single-guard rows. The search branches on the guards of the uncovered
//! row with the fewest remaining options; the bound is a packing of pairwise
//! guard-disjoint rows, each of which needs its own guard.

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use super::{solve_greedy, CoverSolution, Incidence, Method};

#[derive(Clone, Debug)]
pub struct ExactOptions {
    pub time_limit: Option<Duration>,
    /// Dominance reductions and forced guards before branching.
    pub reductions: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            time_limit: None,
            reductions: true,
        }
    }
}

/// Minimum-cardinality cover. On timeout the incumbent is returned with
/// `optimal == false` and the root lower bound.
pub fn solve_exact(inst: &Incidence, opts: &ExactOptions) -> CoverSolution {
    let start = Instant::now();
    let greedy = solve_greedy(inst);

    let reduced = if opts.reductions {
        reduce(inst)
    } else {
        Reduced::identity(inst)
    };

    // Rows of the residual problem, restricted to surviving guards, and
    // columns indexed by residual row.
    let rows: Vec<FixedBitSet> = reduced
        .rows
        .iter()
        .map(|&r| {
            let mut row = inst.rows()[r].clone();
            row.intersect_with(&reduced.cols);
            row
        })
        .collect();
    let mut cols = vec![FixedBitSet::with_capacity(rows.len()); inst.guard_count()];
    for (i, row) in rows.iter().enumerate() {
        for g in row.ones() {
            cols[g].insert(i);
        }
    }

    let forced = reduced.forced.len();
    let mut search = Search {
        rows: &rows,
        cols: &cols,
        best: None,
        bound: greedy.chosen.len().saturating_sub(forced),
        deadline: opts.time_limit.map(|d| start + d),
        nodes: 0,
        timed_out: false,
    };
    let mut all_rows = FixedBitSet::with_capacity(rows.len());
    all_rows.insert_range(..);
    let root_lb = forced + packing_bound(&rows, &all_rows, &reduced.cols);
    // Only strict improvements on the greedy incumbent are recorded.
    search.branch(&all_rows, &reduced.cols, &mut Vec::new());

    let chosen = match search.best.take() {
        Some(mut rest) => {
            rest.extend(&reduced.forced);
            rest.sort_unstable();
            rest
        }
        None => greedy.chosen,
    };
    debug_assert!(inst.is_cover(&chosen));
    let optimal = !search.timed_out || root_lb >= chosen.len();
    CoverSolution {
        lower_bound: Some(if optimal { chosen.len() } else { root_lb }),
        chosen,
        method: Method::Exact,
        optimal,
        swap_size: None,
    }
}

struct Reduced {
    forced: Vec<usize>,
    /// Surviving original row indices.
    rows: Vec<usize>,
    /// Surviving guards.
    cols: FixedBitSet,
}

impl Reduced {
    fn identity(inst: &Incidence) -> Self {
        let mut cols = FixedBitSet::with_capacity(inst.guard_count());
        cols.insert_range(..);
        Reduced {
            forced: Vec::new(),
            rows: (0..inst.witness_count()).collect(),
            cols,
        }
    }
}

/// `a ⊆ b`, where equal sets count only when `a` has the higher index.
fn subsumed(a: &FixedBitSet, ia: usize, b: &FixedBitSet, ib: usize) -> bool {
    a.is_subset(b) && (a != b || ia > ib)
}

fn reduce(inst: &Incidence) -> Reduced {
    let mut red = Reduced::identity(inst);
    let mut row_alive = vec![true; inst.witness_count()];
    loop {
        let mut changed = false;

        // Forced guards.
        for r in 0..inst.witness_count() {
            if !row_alive[r] {
                continue;
            }
            let mut eff = inst.rows()[r].clone();
            eff.intersect_with(&red.cols);
            if eff.count_ones(..) == 1 {
                let g = eff.ones().next().unwrap();
                red.forced.push(g);
                red.cols.set(g, false);
                for w in inst.col(g).ones() {
                    row_alive[w] = false;
                }
                changed = true;
            }
        }

        // Dominated rows: a row containing another row's guards is implied.
        let alive: Vec<usize> = (0..inst.witness_count())
            .filter(|&r| row_alive[r])
            .collect();
        let eff_rows: Vec<FixedBitSet> = alive
            .iter()
            .map(|&r| {
                let mut e = inst.rows()[r].clone();
                e.intersect_with(&red.cols);
                e
            })
            .collect();
        for a in 0..alive.len() {
            for b in 0..alive.len() {
                if a != b
                    && row_alive[alive[a]]
                    && row_alive[alive[b]]
                    && subsumed(&eff_rows[b], alive[a], &eff_rows[a], alive[b])
                {
                    // Covering row b covers row a.
                    row_alive[alive[a]] = false;
                    changed = true;
                }
            }
        }

        // Dominated columns over the surviving rows.
        let mut live_rows = FixedBitSet::with_capacity(inst.witness_count());
        (0..inst.witness_count())
            .filter(|&r| row_alive[r])
            .for_each(|r| live_rows.insert(r));
        let guards: Vec<usize> = red.cols.ones().collect();
        let eff_cols: Vec<FixedBitSet> = guards
            .iter()
            .map(|&g| {
                let mut c = inst.col(g).clone();
                c.intersect_with(&live_rows);
                c
            })
            .collect();
        for a in 0..guards.len() {
            for b in 0..guards.len() {
                if a != b
                    && red.cols.contains(guards[a])
                    && red.cols.contains(guards[b])
                    && subsumed(&eff_cols[a], guards[a], &eff_cols[b], guards[b])
                {
                    red.cols.set(guards[a], false);
                    changed = true;
                }
            }
        }

        if !changed {
            break;
        }
    }
    red.rows = (0..inst.witness_count())
        .filter(|&r| row_alive[r])
        .collect();
    red.forced.sort_unstable();
    red
}

/// Greedy packing of uncovered rows with pairwise disjoint guard sets,
/// smallest rows first.
fn packing_bound(rows: &[FixedBitSet], uncovered: &FixedBitSet, allowed: &FixedBitSet) -> usize {
    let mut order: Vec<(usize, usize)> = uncovered
        .ones()
        .map(|r| (rows[r].intersection_count(allowed), r))
        .collect();
    order.sort_unstable();
    let mut used = FixedBitSet::with_capacity(allowed.len());
    let mut count = 0;
    for (_, r) in order {
        let mut eff = rows[r].clone();
        eff.intersect_with(allowed);
        if eff.is_disjoint(&used) {
            used.union_with(&eff);
            count += 1;
        }
    }
    count
}

struct Search<'a> {
    rows: &'a [FixedBitSet],
    cols: &'a [FixedBitSet],
    best: Option<Vec<usize>>,
    /// Size any new solution must beat.
    bound: usize,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl Search<'_> {
    fn branch(&mut self, uncovered: &FixedBitSet, allowed: &FixedBitSet, chosen: &mut Vec<usize>) {
        if self.timed_out {
            return;
        }
        self.nodes += 1;
        if self.nodes % 1024 == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return;
                }
            }
        }
        if uncovered.is_clear() {
            if chosen.len() < self.bound {
                self.bound = chosen.len();
                self.best = Some(chosen.clone());
            }
            return;
        }
        if chosen.len() + 1 >= self.bound {
            return;
        }

        // Most constrained row.
        let mut pick = None;
        let mut fewest = usize::MAX;
        for r in uncovered.ones() {
            let c = self.rows[r].intersection_count(allowed);
            if c < fewest {
                fewest = c;
                pick = Some(r);
            }
        }
        if fewest == 0 {
            return;
        }
        if chosen.len() + packing_bound(self.rows, uncovered, allowed) >= self.bound {
            return;
        }
        let row = pick.expect("uncovered is non-empty");

        let mut options: Vec<usize> = self.rows[row].intersection(allowed).collect();
        options.sort_by_key(|&g| {
            (
                std::cmp::Reverse(self.cols[g].intersection_count(uncovered)),
                g,
            )
        });

        let mut allowed = allowed.clone();
        for g in options {
            let mut rest = uncovered.clone();
            rest.difference_with(&self.cols[g]);
            allowed.set(g, false);
            chosen.push(g);
            self.branch(&rest, &allowed, chosen);
            chosen.pop();
            if self.timed_out {
                return;
            }
        }
    }
}
