use itertools::Itertools;

use super::{solve_greedy, CoverSolution, Incidence, Method};

/// Swap-based local search: remove `k <= b` chosen guards and add fewer than
/// `k` unchosen ones while staying feasible. The first improving swap in
/// lexicographic enumeration order is applied until none exists.
///
/// Starts from `seed` (greedy if absent). Panics if `b == 0`.
pub fn solve_local_search(
    inst: &Incidence,
    b: usize,
    seed: Option<&CoverSolution>,
) -> CoverSolution {
    assert!(b >= 1, "swap size must be positive");
    let mut current = match seed {
        Some(s) => s.chosen.clone(),
        None => solve_greedy(inst).chosen,
    };
    current.sort_unstable();
    current.dedup();
    debug_assert!(inst.is_cover(&current));
    while let Some(next) = improving_swap(inst, &current, b) {
        current = next;
    }
    CoverSolution {
        chosen: current,
        method: Method::LocalSearch,
        optimal: false,
        lower_bound: None,
        swap_size: Some(b),
    }
}

fn improving_swap(inst: &Incidence, current: &[usize], b: usize) -> Option<Vec<usize>> {
    let mut in_current = vec![false; inst.guard_count()];
    current.iter().for_each(|&g| in_current[g] = true);

    for k in 1..=b.min(current.len()) {
        for removed in current.iter().copied().combinations(k) {
            let remaining: Vec<usize> = current
                .iter()
                .copied()
                .filter(|g| !removed.contains(g))
                .collect();
            let uncovered = inst.uncovered(&remaining);
            if uncovered.is_clear() {
                return Some(remaining);
            }
            // Only guards that see something still missing can help.
            let useful: Vec<usize> = (0..inst.guard_count())
                .filter(|&g| !in_current[g] && !inst.col(g).is_disjoint(&uncovered))
                .collect();
            for add in 1..k {
                for extra in useful.iter().copied().combinations(add) {
                    let mut missing = uncovered.clone();
                    for &g in &extra {
                        missing.difference_with(inst.col(g));
                    }
                    if missing.is_clear() {
                        let mut next = remaining;
                        next.extend(extra);
                        next.sort_unstable();
                        return Some(next);
                    }
                }
            }
        }
    }
    None
}
