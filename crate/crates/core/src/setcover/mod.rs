//! Set cover over (guard candidates, witnesses): the 0/1 program
//! `min sum x_g` subject to every witness being seen by a chosen guard.

mod exact;
mod greedy;
mod local_search;

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

pub use exact::{solve_exact, ExactOptions};
pub use greedy::solve_greedy;
pub use local_search::solve_local_search;

use crate::discretization::{first_uncovered, regions_of, CandidateSet, WitnessSet};
use crate::error::{Error, Result};
use crate::geometry::{Terrain, TerrainPoint};
use crate::visibility::{region_union, sees};

/// Witness-by-guard incidence. Row `w` is the set of guards seeing witness `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    guards: usize,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

impl Incidence {
    /// Fails if some row is empty.
    pub fn new(guards: usize, rows: Vec<FixedBitSet>) -> Result<Self> {
        if let Some(i) = rows.iter().position(|r| r.is_clear()) {
            return Err(Error::InfeasibleWitness {
                index: i,
                point: format!("row {i}"),
            });
        }
        let mut cols = vec![FixedBitSet::with_capacity(rows.len()); guards];
        for (w, row) in rows.iter().enumerate() {
            if row.ones().any(|g| g >= guards) {
                return Err(Error::Invariant(format!(
                    "row {w} names a guard >= {guards}"
                )));
            }
            for g in row.ones() {
                cols[g].insert(w);
            }
        }
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.grow(guards);
                r
            })
            .collect();
        Ok(Incidence { guards, rows, cols })
    }

    /// Builds from explicit guard lists, one per witness.
    pub fn from_lists(guards: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                let mut b = FixedBitSet::with_capacity(guards);
                r.iter().for_each(|&g| b.insert(g));
                b
            })
            .collect();
        Incidence::new(guards, rows)
    }

    pub fn guard_count(&self) -> usize {
        self.guards
    }

    pub fn witness_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    /// Column `g`: the witnesses guard `g` sees.
    pub fn col(&self, g: usize) -> &FixedBitSet {
        &self.cols[g]
    }

    /// Witnesses not seen by any guard in `chosen`.
    pub fn uncovered(&self, chosen: &[usize]) -> FixedBitSet {
        let mut covered = FixedBitSet::with_capacity(self.rows.len());
        for &g in chosen {
            covered.union_with(&self.cols[g]);
        }
        covered.toggle_range(..);
        covered
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        self.uncovered(chosen).is_clear()
    }
}

/// The discretized instance: candidates, witnesses and their incidence.
#[derive(Clone, Debug)]
pub struct SetCoverInstance {
    guards: CandidateSet,
    witnesses: WitnessSet,
    incidence: Incidence,
}

impl SetCoverInstance {
    pub fn guards(&self) -> &CandidateSet {
        &self.guards
    }

    pub fn witnesses(&self) -> &WitnessSet {
        &self.witnesses
    }

    pub fn incidence(&self) -> &Incidence {
        &self.incidence
    }

    /// Guard points of a solution, in candidate order.
    pub fn points(&self, s: &CoverSolution) -> Vec<TerrainPoint> {
        s.chosen
            .iter()
            .map(|&g| self.guards.guards()[g].clone())
            .collect()
    }
}

/// Builds the instance from the witnesses' recorded seeing sets.
pub fn build_instance(t: &Terrain, g: &CandidateSet, w: &WitnessSet) -> Result<SetCoverInstance> {
    debug_assert!(t == g.terrain() && t == w.terrain());
    for (i, wit) in w.witnesses().iter().enumerate() {
        if wit.seen_by.is_clear() {
            return Err(Error::InfeasibleWitness {
                index: i,
                point: wit.point.to_string(),
            });
        }
    }
    let rows = w.witnesses().iter().map(|w| w.seen_by.clone()).collect();
    Ok(SetCoverInstance {
        guards: g.clone(),
        witnesses: w.clone(),
        incidence: Incidence::new(g.len(), rows)?,
    })
}

/// Incidence recomputed pointwise with [`sees`]; `O(|W| |G| n)`.
pub fn incidence_by_predicate(t: &Terrain, g: &CandidateSet, w: &WitnessSet) -> Vec<FixedBitSet> {
    w.witnesses()
        .iter()
        .map(|wit| {
            let mut row = FixedBitSet::with_capacity(g.len());
            for (i, guard) in g.guards().iter().enumerate() {
                if sees(t, guard, &wit.point) {
                    row.insert(i);
                }
            }
            row
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Greedy,
    LocalSearch,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::LocalSearch => "local-search",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            "local-search" => Ok(Method::LocalSearch),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

/// Chosen guard indices (sorted) plus how they were found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    pub chosen: Vec<usize>,
    pub method: Method,
    /// Proven minimum.
    pub optimal: bool,
    /// Certified lower bound on the optimum, when known.
    pub lower_bound: Option<usize>,
    /// Swap size used by local search.
    pub swap_size: Option<usize>,
}

impl CoverSolution {
    pub fn cardinality(&self) -> usize {
        self.chosen.len()
    }

    /// Distance to the certified lower bound, if any.
    pub fn gap(&self) -> Option<usize> {
        self.lower_bound
            .map(|lb| self.cardinality().saturating_sub(lb))
    }
}

/// Outcome of a continuous coverage check.
#[derive(Clone, Debug)]
pub struct Coverage {
    pub covered: bool,
    /// Some point no guard sees, when not covered.
    pub uncovered_at: Option<TerrainPoint>,
}

/// Exact check that the guards' regions jointly cover `[x_min, x_max]`.
pub fn verify_coverage(t: &Terrain, guards: &[TerrainPoint]) -> Coverage {
    let regions = regions_of(t, guards);
    match first_uncovered(t, &region_union(&regions)) {
        None => Coverage {
            covered: true,
            uncovered_at: None,
        },
        Some(x) => Coverage {
            covered: false,
            uncovered_at: Some(t.point_at(&x).expect("gap lies in range")),
        },
    }
}
