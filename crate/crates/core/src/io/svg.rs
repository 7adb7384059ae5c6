use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::discretization::{CandidateSet, WitnessSet};
use crate::geometry::{Rat, Terrain, TerrainPoint};
use crate::visibility::visibility_region;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// Candidates and witnesses to mark on a plot.
pub struct Discretization<'a> {
    pub candidates: &'a CandidateSet,
    pub witnesses: &'a WitnessSet,
}

struct Frame {
    x0: f64,
    y1: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn new(t: &Terrain) -> Self {
        let f = |r: &Rat| r.to_f64().unwrap_or(0.0);
        let x0 = f(t.x_min());
        let x1 = f(t.x_max());
        let ys: Vec<f64> = t.vertices().iter().map(|v| f(&v.y)).collect();
        let y0 = ys.iter().cloned().fold(f64::INFINITY, f64::min);
        let y1 = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
        Frame {
            x0,
            y1,
            sx: (WIDTH - 2.0 * MARGIN) / span(x0, x1),
            sy: (HEIGHT - 2.0 * MARGIN) / span(y0, y1),
        }
    }

    fn x(&self, x: &Rat) -> f64 {
        MARGIN + (x.to_f64().unwrap_or(0.0) - self.x0) * self.sx
    }

    fn y(&self, y: &Rat) -> f64 {
        MARGIN + (self.y1 - y.to_f64().unwrap_or(0.0)) * self.sy
    }
}

/// Deterministic SVG of the terrain, optionally with guards (and their
/// visibility as vertical bands) and with candidate and witness markers.
pub fn plot_svg(
    t: &Terrain,
    guards: Option<&[TerrainPoint]>,
    disc: Option<&Discretization>,
) -> String {
    let fr = Frame::new(t);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for g in guards.unwrap_or_default() {
        for c in visibility_region(t, g).components() {
            let (a, b) = (fr.x(&c.lo), fr.x(&c.hi));
            writeln!(
                out,
                r##"<rect class="vis" x="{a:.3}" y="0.000" width="{:.3}" height="{HEIGHT:.3}" fill="#f0a030" fill-opacity="0.15"/>"##,
                (b - a).max(1.0)
            )
            .unwrap();
        }
    }

    let pts: Vec<String> = t
        .vertices()
        .iter()
        .map(|v| format!("{:.3},{:.3}", fr.x(&v.x), fr.y(&v.y)))
        .collect();
    writeln!(
        out,
        r#"<polyline class="terrain" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        pts.join(" ")
    )
    .unwrap();

    if let Some(d) = disc {
        for u in d.candidates.guards() {
            writeln!(
                out,
                r##"<circle class="candidate" cx="{:.3}" cy="{:.3}" r="2" fill="#888888"/>"##,
                fr.x(u.x()),
                fr.y(u.y())
            )
            .unwrap();
        }
        for w in d.witnesses.witnesses() {
            writeln!(
                out,
                r##"<rect class="witness" x="{:.3}" y="{:.3}" width="4" height="4" fill="#2060c0"/>"##,
                fr.x(w.point.x()) - 2.0,
                fr.y(w.point.y()) - 2.0
            )
            .unwrap();
        }
    }

    for g in guards.unwrap_or_default() {
        writeln!(
            out,
            r##"<circle class="guard" cx="{:.3}" cy="{:.3}" r="5" fill="#d02020"/>"##,
            fr.x(g.x()),
            fr.y(g.y())
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
