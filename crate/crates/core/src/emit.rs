//! Text renderings: the saddle connection CSV and SVG developments.

use std::fmt::Write;

use rayon::prelude::*;

use crate::geodesic::{count_self_intersections, is_simple, SaddleConnection, TraceError, Trajectory};
use crate::geom::Vec2;
use crate::normal::{encode_normal, NormalCoordinate};
use crate::surface::ConeSurface;

pub const SADDLES_HEADER: &str = "length,crossings,self_intersections,start_vertex,end_vertex,normal_coordinate";

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleRow {
    pub length: f64,
    pub crossings: usize,
    pub self_intersections: usize,
    pub start_vertex: usize,
    pub end_vertex: usize,
    /// Present exactly for simple connections.
    pub normal: Option<NormalCoordinate>,
}

impl SaddleRow {
    pub fn to_csv(&self) -> String {
        let nc = self.normal.as_ref().map(NormalCoordinate::to_csv_field).unwrap_or_default();
        format!(
            "{:.12},{},{},{},{},{nc}",
            self.length, self.crossings, self.self_intersections, self.start_vertex, self.end_vertex
        )
    }
}

fn row(c: &SaddleConnection, s: &ConeSurface, simple_only: bool) -> Option<SaddleRow> {
    let t = c.trajectory(s);
    let k = if simple_only {
        if !is_simple(&t) {
            return None;
        }
        0
    } else {
        count_self_intersections(&t)
    };
    let normal = if k == 0 { encode_normal(&t, s).ok() } else { None };
    Some(SaddleRow {
        length: c.length,
        crossings: c.crossing_count(),
        self_intersections: k,
        start_vertex: c.start_vertex,
        end_vertex: c.end_vertex,
        normal,
    })
}

/// Rows for `connections`, in the given order. With `simple_only`, the
/// self-intersecting ones are dropped.
pub fn saddle_rows(s: &ConeSurface, connections: &[SaddleConnection], simple_only: bool) -> Vec<SaddleRow> {
    connections.par_iter().filter_map(|c| row(c, s, simple_only)).collect()
}

/// Header plus one line per row, newline terminated.
pub fn saddles_csv(rows: &[SaddleRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SADDLES_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

/// The developed trajectory over the outlines of the triangles it passes.
pub fn trajectory_svg(t: &Trajectory, s: &ConeSurface) -> Result<String, TraceError> {
    let tris = t.developed_triangles(s)?;
    let segs = t.develop(s)?;
    let pts = || tris.iter().flat_map(|(_, p)| p.iter().copied());
    let lo = pts().fold(Vec2::new(f64::INFINITY, f64::INFINITY), |a, p| Vec2::new(a.x.min(p.x), a.y.min(p.y)));
    let hi = pts().fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| Vec2::new(a.x.max(p.x), a.y.max(p.y)));
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let size = 800.0;
    let margin = 10.0;
    let scale = (size - 2.0 * margin) / span;
    // y grows downwards in SVG
    let map = |p: Vec2| ((p.x - lo.x) * scale + margin, (hi.y - p.y) * scale + margin);
    let w = (hi.x - lo.x) * scale + 2.0 * margin;
    let h = (hi.y - lo.y) * scale + 2.0 * margin;

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#);
    let _ = writeln!(out, r##"<g fill="none" stroke="#999" stroke-width="1">"##);
    for (i, p) in &tris {
        let pts: Vec<String> = p.iter().map(|&q| {
            let (x, y) = map(q);
            format!("{x:.3},{y:.3}")
        }).collect();
        let _ = writeln!(out, r#"<polygon data-triangle="{i}" points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g stroke="#c00" stroke-width="2">"##);
    for [a, b] in &segs {
        let ((x1, y1), (x2, y2)) = (map(*a), map(*b));
        let _ = writeln!(out, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    if let (Some(first), Some(last)) = (segs.first(), segs.last()) {
        for p in [first[0], last[1]] {
            let (x, y) = map(p);
            let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#c00"/>"##);
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
