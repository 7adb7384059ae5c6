//! Exact solver for the continuous 1.5D terrain guarding problem.
//!
//! The pipeline discretizes a terrain into a finite guard-candidate set and a
//! finite witness set, solves the resulting set-cover instance, and checks
//! the answer against the continuous problem with exact rational arithmetic.

pub mod discretization;
pub mod error;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod setcover;
pub mod visibility;

pub use discretization::{build_candidates, build_witnesses, CandidateSet, Feature, WitnessSet};
pub use error::{Error, Result};
pub use geometry::{
    orientation, rat, ratio, validate_terrain, Orientation, Point2, Rat, Terrain, TerrainPoint,
};
pub use setcover::{
    build_instance, solve_exact, solve_greedy, solve_local_search, verify_coverage, CoverSolution,
    ExactOptions, Incidence, Method, SetCoverInstance,
};
pub use visibility::{sees, visibility_region, VisibilityRegion, XInterval};
