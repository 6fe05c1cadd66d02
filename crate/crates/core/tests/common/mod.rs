//! Oracles shared by the integration suites. They use only the public
//! surface data (charts, gluing, vertex ids) and their own plane geometry,
//! never the crate's tracer or search.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;

use flatsphere::surface::{ConeSurface, Corner, Slot};

pub type P = (f64, f64);

fn sub(a: P, b: P) -> P {
    (a.0 - b.0, a.1 - b.1)
}
fn add(a: P, b: P) -> P {
    (a.0 + b.0, a.1 + b.1)
}
fn cross(a: P, b: P) -> f64 {
    a.0 * b.1 - a.1 * b.0
}
fn dot(a: P, b: P) -> f64 {
    a.0 * b.0 + a.1 * b.1
}
fn norm(a: P) -> f64 {
    dot(a, a).sqrt()
}

fn chart(s: &ConeSurface, t: usize) -> [P; 3] {
    s.chart(t).map(|v| (v.x, v.y))
}

/// Place triangle `t` so that its corners `i` and `j` land on `pi`, `pj`.
fn place(s: &ConeSurface, t: usize, i: usize, j: usize, pi: P, pj: P) -> [P; 3] {
    let c = chart(s, t);
    let u = sub(c[j], c[i]);
    let v = sub(pj, pi);
    let l2 = dot(u, u);
    // rotation taking u to v, as a complex number
    let (cr, ci) = (dot(u, v) / l2, cross(u, v) / l2);
    let rot = |p: P| (cr * p.0 - ci * p.1, ci * p.0 + cr * p.1);
    let mut out = [(0.0, 0.0); 3];
    for k in 0..3 {
        out[k] = add(pi, rot(sub(c[k], c[i])));
    }
    out
}

/// One ray from a corner, walked until `max_len`. Returns the exit slots and
/// the developed position of each triangle's third corner as it was
/// entered, so a branching between two rays can be located.
struct Walk {
    exits: Vec<Slot>,
    /// Developed apex (the corner opposite the entry edge) of each entered
    /// triangle, with the vertex id there.
    apexes: Vec<(P, usize)>,
}

fn walk(s: &ConeSurface, corner: Corner, dir: P, max_len: f64) -> Walk {
    let t0 = corner.triangle;
    let c = corner.corner;
    let mut pts = chart(s, t0);
    let o = pts[c];
    let mut t = t0;
    // leave the start triangle through the side opposite the corner
    let mut exit = (c + 1) % 3;
    let mut exits = Vec::new();
    let mut apexes = Vec::new();
    loop {
        let (a, b) = (pts[exit], pts[(exit + 1) % 3]);
        // distance along the ray to this edge
        let den = cross(dir, sub(b, a));
        let hit = cross(sub(a, o), sub(b, a)) / den;
        // NaN when the ray runs along the edge
        if !(hit < max_len) {
            break;
        }
        let slot = Slot::new(t, exit);
        exits.push(slot);
        let p = s.partner(slot);
        let np = place(s, p.triangle, p.edge, (p.edge + 1) % 3, b, a);
        t = p.triangle;
        pts = np;
        let apex_corner = (p.edge + 2) % 3;
        let apex = pts[apex_corner];
        apexes.push((apex, s.vertex_of(Corner::new(t, apex_corner))));
        // apex left of the ray: leave through the edge after the entry edge's
        // end corner, else through the other
        exit = if cross(dir, sub(apex, o)) > 0.0 { (p.edge + 1) % 3 } else { (p.edge + 2) % 3 };
    }
    Walk { exits, apexes }
}

fn unit(theta: f64) -> P {
    (theta.cos(), theta.sin())
}

/// A saddle connection found by the fan: sorted endpoint ids, length and the
/// orientation-free sequence of crossed slots (as `3·triangle + edge`).
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct FanConnection {
    pub ends: (usize, usize),
    pub length: f64,
    pub edges: Vec<usize>,
    /// Set for edges of the triangulation.
    pub edge: Option<usize>,
}

/// The crossed slots read either way round; the smaller reading is kept.
pub fn route_key(s: &ConeSurface, exits: &[Slot]) -> Vec<usize> {
    let f: Vec<usize> = exits.iter().map(|&x| 3 * x.triangle + x.edge).collect();
    let r: Vec<usize> = exits.iter().rev().map(|&x| s.partner(x)).map(|p| 3 * p.triangle + p.edge).collect();
    f.min(r)
}

/// Saddle connections up to `max_len` found by sweeping every corner with
/// rays `step` radians apart and bisecting wherever neighbouring rays take
/// different routes. Edges shorter than `max_len` are added directly.
pub fn fan_saddle_connections(s: &ConeSurface, max_len: f64, step: f64) -> Vec<FanConnection> {
    let mut found: Vec<FanConnection> = Vec::new();
    let push = |fc: FanConnection, found: &mut Vec<FanConnection>| {
        let dup = found.iter().any(|g| {
            g.ends == fc.ends && g.edges == fc.edges && g.edge == fc.edge && (g.length - fc.length).abs() < 1e-7
        });
        if !dup {
            found.push(fc);
        }
    };
    for e in 0..s.edge_count() {
        let slot = s.edge_slot(e);
        let l = s.side_length(slot);
        if l <= max_len {
            let (a, b) = s.edge_endpoints(e);
            push(FanConnection { ends: (a.min(b), a.max(b)), length: l, edges: vec![], edge: Some(e) }, &mut found);
        }
    }
    for t in 0..s.triangle_count() {
        let pts = chart(s, t);
        for c in 0..3 {
            let corner = Corner::new(t, c);
            let o = pts[c];
            let d1 = sub(pts[(c + 1) % 3], o);
            let d2 = sub(pts[(c + 2) % 3], o);
            let (lo, hi) = (d1.1.atan2(d1.0), {
                let mut h = d2.1.atan2(d2.0);
                if h < d1.1.atan2(d1.0) {
                    h += 2.0 * PI;
                }
                h
            });
            let n = ((hi - lo) / step).ceil() as usize;
            let at = |k: usize| lo + (hi - lo) * k as f64 / n as f64;
            let mut prev = walk(s, corner, unit(at(1)), max_len);
            for k in 2..n {
                let cur = walk(s, corner, unit(at(k)), max_len);
                if let Some(fc) = branch(s, corner, at(k - 1), at(k), &prev, &cur, max_len) {
                    push(fc, &mut found);
                }
                prev = cur;
            }
        }
    }
    found.sort_by(|a, b| a.length.total_cmp(&b.length).then(a.partial_cmp(b).unwrap()));
    found
}

/// First index where both walks have an entry and differ.
fn divergence(a: &Walk, b: &Walk) -> Option<usize> {
    a.exits.iter().zip(&b.exits).position(|(x, y)| x != y)
}

fn branch(s: &ConeSurface, corner: Corner, mut lo: f64, mut hi: f64, a: &Walk, b: &Walk, max_len: f64) -> Option<FanConnection> {
    divergence(a, b)?;
    let mut wa = walk(s, corner, unit(lo), max_len);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let wm = walk(s, corner, unit(mid), max_len);
        if divergence(&wa, &wm).is_some() {
            hi = mid;
        } else {
            lo = mid;
            wa = wm;
        }
    }
    let wb = walk(s, corner, unit(hi), max_len);
    let i = divergence(&wa, &wb)?;
    let o = chart(s, corner.triangle)[corner.corner];
    let dir = unit(0.5 * (lo + hi));
    // the apex of the triangle where the routes split is the far end
    let (apex, v) = wa.apexes[i - 1];
    let length = norm(sub(apex, o));
    if length > max_len {
        return None;
    }
    // rays squeezed onto a line through an earlier vertex: that vertex is
    // found on its own by the neighbouring branch
    let on_line = |p: P| cross(dir, sub(p, o)).abs() < 1e-9 * norm(sub(p, o)).max(1.0);
    if wa.apexes[..i - 1].iter().any(|&(p, _)| norm(sub(p, o)) < length - 1e-9 && on_line(p)) {
        return None;
    }
    let miss = cross(dir, sub(apex, o)).abs();
    assert!(miss < 1e-9 * length.max(1.0), "fan branch does not pass a vertex: miss {miss}");
    let start = s.vertex_of(corner);
    Some(FanConnection { ends: (start.min(v), start.max(v)), length, edges: route_key(s, &wa.exits[..i]), edge: None })
}

/// Curvature gap by plain enumeration of subset masks.
pub fn subset_gap(ks: &[f64]) -> f64 {
    let n = ks.len();
    let mut best = f64::INFINITY;
    for mask in 0u64..(1 << n) {
        let sum: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ks[i]).sum();
        best = best.min((1.0 - sum).abs());
    }
    best
}

/// Self-intersections of the chord entering a cone of angle `2π/m` (a flat
/// annulus with inner radius 0) at angle `alpha` to the radius, counted on
/// the plane as the cone's `m`-fold cover: pairs `(x, R^j x)` on the chord
/// for rotations `R^j`, `1 ≤ j < m`, each unordered pair once. Touching at
/// the boundary circle counts.
pub fn annulus_chord_crossings(m: u32, alpha: f64) -> u64 {
    let theta = 2.0 * PI / m as f64;
    let phi = PI - 2.0 * alpha;
    let a = (1.0, 0.0);
    let b = (phi.cos(), phi.sin());
    let mut count = 0;
    for j in 1..m {
        let r = j as f64 * theta;
        let rot = |p: P| (p.0 * r.cos() - p.1 * r.sin(), p.0 * r.sin() + p.1 * r.cos());
        if closed_segments_meet(a, b, rot(a), rot(b), 1e-9) {
            count += 1;
        }
    }
    count / 2
}

fn closed_segments_meet(a: P, b: P, c: P, d: P, eps: f64) -> bool {
    let o1 = cross(sub(b, a), sub(c, a));
    let o2 = cross(sub(b, a), sub(d, a));
    let o3 = cross(sub(d, c), sub(a, c));
    let o4 = cross(sub(d, c), sub(b, c));
    o1 * o2 <= eps && o3 * o4 <= eps
}

/// Distinct values of an iterator, with a tolerance.
pub fn distinct_within(xs: impl IntoIterator<Item = f64>, tol: f64) -> Vec<f64> {
    let mut v: Vec<f64> = xs.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < tol);
    v
}

pub fn ids(xs: &[FanConnection]) -> BTreeSet<(usize, usize)> {
    xs.iter().map(|f| f.ends).collect()
}
