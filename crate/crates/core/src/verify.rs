//! End-to-end check of every bound on one surface.
//!
//! The surface is scaled to unit area and made Delaunay, then saddle
//! connections are enumerated up to the length every simple one must stay
//! under. Measured quantities are compared against their bounds and every
//! check reports its worst value or first witness.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{compute_bounds, BoundsError, BoundsReport};
use crate::curvature::{CurvatureError, CurvatureProfile};
use crate::delaunay::{check_edge_length_bound, cone_graph_diameter, delaunayize, DelaunayError};
use crate::geodesic::{
    count_self_intersections, enumerate_with, extract_monogons, per_triangle_crossings,
    EnumerateError, EnumerateOptions, SaddleConnection,
};
use crate::normal::{decode_normal, encode_normal, NormalCoordinate};
use crate::surface::{normalize_area, ConeSurface, SurfaceError};

/// Gaps at or below this are treated as zero.
pub const ZERO_GAP_TOL: f64 = 1e-9;

/// Slack allowed on every floating-point bound comparison.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub nodes: u64,
    pub seconds: Option<f64>,
    pub parallel: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { nodes: 10_000_000, seconds: None, parallel: true }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("curvature gap is {0}: bounds are vacuous and the surface may contain a flat cylinder")]
    ZeroGap(f64),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    /// Number of items the check looked at.
    pub checked: usize,
    /// Worst measured value against its bound, or the first witness.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub n: usize,
    pub delta: f64,
    pub flips: usize,
    pub bounds: BoundsReport,
    pub cutoff: f64,
    pub truncated: bool,
    pub complete_up_to: f64,
    pub nodes: u64,
    pub connections: usize,
    pub simple_connections: usize,
    pub diameter: f64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "delta={}", self.delta)?;
        writeln!(f, "flips={}", self.flips)?;
        writeln!(f, "cutoff={}", self.cutoff)?;
        writeln!(f, "truncated={}", self.truncated)?;
        writeln!(f, "complete_up_to={}", self.complete_up_to)?;
        writeln!(f, "nodes={}", self.nodes)?;
        writeln!(f, "connections={}", self.connections)?;
        writeln!(f, "simple_connections={}", self.simple_connections)?;
        writeln!(f, "diameter={}", self.diameter)?;
        for c in &self.checks {
            let v = if c.pass { "pass" } else { "fail" };
            writeln!(f, "check.{}={v} checked={} {}", c.name, c.checked, c.detail)?;
        }
        write!(f, "pass={}", self.pass)
    }
}

/// Per-connection measurements.
struct Measured {
    length: f64,
    self_intersections: usize,
    comb_length: usize,
    max_passes: usize,
    normal: Option<NormalCoordinate>,
    round_trip: bool,
    max_monogon: Option<f64>,
}

fn measure(c: &SaddleConnection, d: &ConeSurface) -> Measured {
    let t = c.trajectory(d);
    let k = count_self_intersections(&t);
    // `d` was checked Delaunay once up front
    let comb_length = if t.along_edge.is_some() { 0 } else { t.crossings.len() + 1 };
    let max_passes = per_triangle_crossings(&t).values().copied().max().unwrap_or(0);
    let (normal, round_trip) = if k == 0 && !c.is_edge() {
        let nc = encode_normal(&t, d).ok();
        let ok = nc.as_ref().is_some_and(|nc| decode_normal(nc, d).as_deref() == Ok(&c.crossings[..]));
        (nc, ok)
    } else {
        (None, true)
    };
    let max_monogon = if k > 0 {
        extract_monogons(&t).iter().map(|m| m.interior_angle).reduce(f64::max)
    } else {
        None
    };
    Measured { length: c.length, self_intersections: k, comb_length, max_passes, normal, round_trip, max_monogon }
}

fn result(name: &'static str, checked: usize, pass: bool, detail: String) -> CheckResult {
    CheckResult { name, pass, checked, detail }
}

/// Curvature gap of a surface by exhaustive subset search.
pub fn surface_gap(s: &ConeSurface) -> Result<f64, CurvatureError> {
    CurvatureProfile::new(s.curvatures())?.gap()
}

pub fn verify_surface(s: &ConeSurface, budget: &Budget) -> Result<VerificationReport, VerifyError> {
    let unit = normalize_area(s)?;
    let delta = surface_gap(&unit)?;
    if delta <= ZERO_GAP_TOL {
        return Err(VerifyError::ZeroGap(delta));
    }
    let n = unit.vertex_count();
    let (d, flips) = delaunayize(&unit)?;
    let bounds = compute_bounds(n as u64, delta, 0)?;
    let mut checks = Vec::new();

    checks.push(result(
        "delaunay",
        d.edge_count(),
        flips.all_delaunay,
        format!("flips={} cap={}", flips.flips, flips.cap),
    ));
    let eb = check_edge_length_bound(&d, delta)?;
    checks.push(result(
        "delaunay_edge_bound",
        d.edge_count(),
        eb.pass,
        format!(
            "max_l2={} bound={} sector_bound={} sector_pass={}",
            eb.max_l2, eb.threshold, eb.sector_threshold, eb.sector_pass
        ),
    ));

    let cutoff = bounds.simple_length_bound;
    let opts = EnumerateOptions {
        node_budget: budget.nodes,
        deadline: budget.seconds.map(|s| Instant::now() + Duration::from_secs_f64(s)),
        parallel: budget.parallel,
    };
    let found = enumerate_with(&d, cutoff, &opts)?;
    let measured: Vec<Measured> = if budget.parallel {
        found.connections.par_iter().map(|c| measure(c, &d)).collect()
    } else {
        found.connections.iter().map(|c| measure(c, &d)).collect()
    };
    let (simple, crossing): (Vec<&Measured>, Vec<&Measured>) =
        measured.iter().partition(|m| m.self_intersections == 0);

    let worst = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);

    let max_comb = worst(&mut simple.iter().map(|m| m.comb_length as f64));
    checks.push(result(
        "simple_comb_length",
        simple.len(),
        max_comb <= bounds.comb_length_bound + BOUND_TOL,
        format!("max={max_comb} bound={}", bounds.comb_length_bound),
    ));
    let max_passes = worst(&mut simple.iter().map(|m| m.max_passes as f64));
    checks.push(result(
        "simple_per_triangle",
        simple.len(),
        max_passes <= bounds.chords_bound + BOUND_TOL,
        format!("max={max_passes} bound={}", bounds.chords_bound),
    ));
    let normals: Vec<&NormalCoordinate> = simple.iter().filter_map(|m| m.normal.as_ref()).collect();
    let distinct = normals.iter().collect::<HashSet<_>>().len();
    let non_edge_simple = simple.iter().filter(|m| m.comb_length > 0).count();
    checks.push(result(
        "simple_normal_distinct",
        normals.len(),
        distinct == normals.len() && normals.len() == non_edge_simple,
        format!("distinct={distinct} encoded={} non_edge={non_edge_simple}", normals.len()),
    ));
    let bad_trips = simple.iter().filter(|m| !m.round_trip).count();
    checks.push(result(
        "simple_normal_round_trip",
        non_edge_simple,
        bad_trips == 0,
        format!("failures={bad_trips}"),
    ));
    let count_note = if found.truncated { " partial=true" } else { "" };
    checks.push(result(
        "simple_count",
        simple.len(),
        simple.len() as f64 <= bounds.simple_count_bound,
        format!("count={} bound={}{count_note}", simple.len(), bounds.simple_count_bound),
    ));

    let l = bounds.comb_length_bound;
    let len_bad = crossing
        .iter()
        .find(|m| m.length > bounds.length_bound_at(m.self_intersections as u64) * (1.0 + BOUND_TOL));
    checks.push(result(
        "self_intersecting_length",
        crossing.len(),
        len_bad.is_none(),
        len_bad.map_or(String::new(), |m| format!("length={} k={}", m.length, m.self_intersections)),
    ));
    let comb_bad = crossing
        .iter()
        .find(|m| m.comb_length as f64 > bounds.si_comb_bound(l, m.self_intersections as u64) + BOUND_TOL);
    checks.push(result(
        "self_intersecting_comb",
        crossing.len(),
        comb_bad.is_none(),
        comb_bad.map_or(String::new(), |m| format!("comb={} k={}", m.comb_length, m.self_intersections)),
    ));
    let angles: Vec<f64> = crossing.iter().filter_map(|m| m.max_monogon).collect();
    let max_angle = worst(&mut angles.iter().copied());
    checks.push(result(
        "monogon_angle",
        angles.len(),
        max_angle <= bounds.monogon_angle_bound + BOUND_TOL,
        format!("max={max_angle} bound={} pi={PI}", bounds.monogon_angle_bound),
    ));
    let diameter = cone_graph_diameter(&d)?;
    checks.push(result(
        "diameter",
        n,
        diameter <= bounds.diameter_bound + BOUND_TOL,
        format!("value={diameter} bound={}", bounds.diameter_bound),
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        n,
        delta,
        flips: flips.flips,
        bounds,
        cutoff,
        truncated: found.truncated,
        complete_up_to: found.complete_up_to,
        nodes: found.nodes,
        connections: measured.len(),
        simple_connections: simple.len(),
        diameter,
        checks,
        pass,
    })
}
