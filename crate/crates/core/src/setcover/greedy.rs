use fixedbitset::FixedBitSet;

use super::{CoverSolution, Incidence, Method};

/// Classic greedy: take the guard seeing the most uncovered witnesses,
/// lowest index on ties.
pub fn solve_greedy(inst: &Incidence) -> CoverSolution {
    let mut uncovered = FixedBitSet::with_capacity(inst.witness_count());
    uncovered.insert_range(..);
    let mut chosen = Vec::new();
    while !uncovered.is_clear() {
        let (best, gain) = (0..inst.guard_count())
            .map(|g| (g, inst.col(g).intersection_count(&uncovered)))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        assert!(gain > 0, "instance rows are non-empty");
        uncovered.difference_with(inst.col(best));
        chosen.push(best);
    }
    chosen.sort_unstable();
    CoverSolution {
        chosen,
        method: Method::Greedy,
        optimal: false,
        lower_bound: None,
        swap_size: None,
    }
}
