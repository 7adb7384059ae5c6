//! JSON file formats. Coordinates are integers where they fit in `i64` and
//! `"p/q"` strings otherwise, so every value round-trips exactly.

use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::discretization::{CandidateSet, Provenance, WitnessSet};
use crate::error::{Error, Result};
use crate::geometry::{format_rat, parse_rat, Point2, Rat, Terrain, TerrainPoint};
use crate::setcover::CoverSolution;

pub const TERRAIN_VERSION: &str = "tgp-terrain/1";
pub const SOLUTION_VERSION: &str = "tgp-solution/1";
const CANDIDATES_VERSION: &str = "tgp-candidates/1";
const WITNESSES_VERSION: &str = "tgp-witnesses/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coord(pub Rat);

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self
            .0
            .is_integer()
            .then(|| self.0.numer().to_i64())
            .flatten()
        {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&format_rat(&self.0)),
        }
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Coord(Rat::from_integer(i.into()))),
            Raw::Text(s) => parse_rat(&s).map(Coord).map_err(de::Error::custom),
        }
    }
}

/// Indented JSON with arrays of scalars kept on one line, plus a trailing
/// newline.
fn to_text<T: Serialize>(value: &T) -> String {
    fn scalar(v: &Value) -> bool {
        !matches!(v, Value::Array(_) | Value::Object(_))
    }
    fn emit(v: &Value, depth: usize, out: &mut String) {
        let pad = |d: usize| "  ".repeat(d);
        match v {
            Value::Array(items) if items.iter().all(scalar) => {
                let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                out.push('[');
                out.push_str(&parts.join(", "));
                out.push(']');
            }
            Value::Array(items) => {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    out.push_str(&pad(depth + 1));
                    emit(item, depth + 1, out);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(depth));
                out.push(']');
            }
            Value::Object(map) if !map.is_empty() => {
                out.push_str("{\n");
                for (k, (key, item)) in map.iter().enumerate() {
                    out.push_str(&pad(depth + 1));
                    out.push_str(&Value::String(key.clone()).to_string());
                    out.push_str(": ");
                    emit(item, depth + 1, out);
                    out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(depth));
                out.push('}');
            }
            other => out.push_str(&other.to_string()),
        }
    }
    let value = serde_json::to_value(value).expect("serializable");
    let mut out = String::new();
    emit(&value, 0, &mut out);
    out.push('\n');
    out
}

type Pair = [Coord; 2];

fn pair(p: &Point2) -> Pair {
    [Coord(p.x.clone()), Coord(p.y.clone())]
}

fn check_version(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "expected version {expected:?}, found {found:?}"
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerrainFile {
    pub version: String,
    pub vertices: Vec<Pair>,
}

impl TerrainFile {
    pub fn from_terrain(t: &Terrain) -> Self {
        TerrainFile {
            version: TERRAIN_VERSION.to_string(),
            vertices: t.vertices().iter().map(pair).collect(),
        }
    }

    pub fn to_terrain(&self) -> Result<Terrain> {
        check_version(&self.version, TERRAIN_VERSION)?;
        Terrain::new(
            self.vertices
                .iter()
                .map(|[x, y]| Point2::new(x.0.clone(), y.0.clone()))
                .collect(),
        )
    }
}

pub fn parse_terrain(text: &str) -> Result<Terrain> {
    serde_json::from_str::<TerrainFile>(text)?.to_terrain()
}

/// Pretty-printed terrain file with a trailing newline.
pub fn write_terrain(t: &Terrain) -> String {
    to_text(&TerrainFile::from_terrain(t))
}

/// Single-line terrain file.
pub fn terrain_to_json(t: &Terrain) -> String {
    serde_json::to_string(&TerrainFile::from_terrain(t)).expect("serializable")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub version: String,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap_size: Option<usize>,
    pub guards: Vec<Pair>,
    pub cardinality: usize,
    pub optimal: bool,
    pub lower_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl SolutionFile {
    /// `guards` are the solution's points; duplicates collapse.
    pub fn new(sol: &CoverSolution, guards: &[TerrainPoint], timing_ms: Option<u64>) -> Self {
        let mut pts: Vec<&TerrainPoint> = guards.iter().collect();
        pts.sort();
        pts.dedup();
        SolutionFile {
            version: SOLUTION_VERSION.to_string(),
            method: sol.method.as_str().to_string(),
            swap_size: sol.swap_size,
            cardinality: pts.len(),
            guards: pts.iter().map(|p| pair(p.pos())).collect(),
            optimal: sol.optimal,
            lower_bound: sol.lower_bound,
            timing_ms,
        }
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }

    /// Guard points, each checked to lie on `t`.
    pub fn guard_points(&self, t: &Terrain) -> Result<Vec<TerrainPoint>> {
        self.guards
            .iter()
            .map(|[x, y]| {
                let p = Point2::new(x.0.clone(), y.0.clone());
                if !t.contains(&p) {
                    return Err(Error::NotOnTerrain(p.to_string()));
                }
                t.point_at(&p.x)
            })
            .collect()
    }
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let s: SolutionFile = serde_json::from_str(text)?;
    check_version(&s.version, SOLUTION_VERSION)?;
    s.method.parse::<crate::setcover::Method>()?;
    if s.cardinality != s.guards.len() {
        return Err(Error::Parse(format!(
            "cardinality {} but {} guards",
            s.cardinality,
            s.guards.len()
        )));
    }
    Ok(s)
}

#[derive(Serialize)]
struct CandidateEntry {
    point: Pair,
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex: Option<usize>,
}

#[derive(Serialize)]
struct CandidatesFile {
    version: &'static str,
    candidates: Vec<CandidateEntry>,
}

pub fn write_candidates(u: &CandidateSet) -> String {
    let candidates = u
        .guards()
        .iter()
        .zip(u.provenance())
        .map(|(g, p)| {
            let (source, vertex) = match *p {
                Provenance::Vertex(i) => ("vertex", Some(i)),
                Provenance::Extremal(i) => ("extremal", Some(i)),
                Provenance::Supplied => ("supplied", None),
            };
            CandidateEntry {
                point: pair(g.pos()),
                source,
                vertex,
            }
        })
        .collect();
    to_text(&CandidatesFile {
        version: CANDIDATES_VERSION,
        candidates,
    })
}

#[derive(Serialize)]
struct WitnessEntry {
    point: Pair,
    feature: Pair,
    seen_by: Vec<usize>,
}

#[derive(Serialize)]
struct WitnessesFile {
    version: &'static str,
    min_filter: bool,
    feature_count: usize,
    witnesses: Vec<WitnessEntry>,
}

pub fn write_witnesses(w: &WitnessSet, min_filter: bool) -> String {
    let witnesses = w
        .witnesses()
        .iter()
        .map(|wit| WitnessEntry {
            point: pair(wit.point.pos()),
            feature: [Coord(wit.feature.lo.clone()), Coord(wit.feature.hi.clone())],
            seen_by: wit.seen_by.ones().collect(),
        })
        .collect();
    to_text(&WitnessesFile {
        version: WITNESSES_VERSION,
        min_filter,
        feature_count: w.feature_count(),
        witnesses,
    })
}
