//! File formats, instance generation, IP export and SVG rendering.

mod format;
mod generate;
mod lp;
mod svg;

pub use format::{
    parse_solution, parse_terrain, terrain_to_json, write_candidates, write_terrain,
    write_witnesses, Coord, SolutionFile, TerrainFile, SOLUTION_VERSION, TERRAIN_VERSION,
};
pub use generate::{generate, Profile};
pub use lp::export_ip;
pub use svg::{plot_svg, Discretization};
