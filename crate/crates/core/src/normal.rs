//! Normal coordinates of simple saddle connections.
//!
//! A simple path in normal position meets each triangle in arcs that cut
//! off a corner, plus a spoke from a corner to the opposite side where the
//! path starts or ends. Counting intersections per edge loses nothing: the
//! arcs in a triangle are forced by the three counts, so together with the
//! endpoint corners the path can be rebuilt.
//!
//! Positions of intersection points along side `f` of a triangle are counted
//! from corner `f`. Going from corner `f` to corner `f + 1` one meets first
//! the arcs around corner `f`, then any spokes from the opposite corner, then
//! the arcs around corner `f + 1`.

use std::fmt;

use thiserror::Error;

use crate::geodesic::{is_simple, Trajectory};
use crate::surface::{ConeSurface, Corner, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalCoordinate {
    /// Intersection count per edge id.
    pub counts: Vec<u32>,
    pub start: Corner,
    pub end: Corner,
    /// Only meaningful when both ends leave the same corner: whether the
    /// start spoke is the one nearer to corner `start.corner + 1`.
    pub start_nearer: bool,
    /// Set for a connection running along this edge; counts are then zero.
    pub edge: Option<usize>,
}

impl NormalCoordinate {
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn is_edge(&self) -> bool {
        self.edge.is_some()
    }

    /// Counts joined by `;`.
    pub fn to_csv_field(&self) -> String {
        self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Display for NormalCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv_field())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalError {
    #[error("trajectory is not simple")]
    NotSimple,
    #[error("trajectory does not join two cone points")]
    NotSaddleConnection,
    #[error("trajectory was traced on a different triangulation")]
    SurfaceMismatch,
    #[error("coordinate has {got} entries, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("zero coordinate describes no path")]
    ZeroVector,
    #[error("triangle {triangle}: counts {counts:?} have odd sum")]
    Parity { triangle: usize, counts: [i64; 3] },
    #[error("triangle {triangle}: counts {counts:?} violate the triangle inequality")]
    Inequality { triangle: usize, counts: [i64; 3] },
    #[error("triangle {triangle}: spokes from different corners would cross")]
    CrossingSpokes { triangle: usize },
    #[error("triangle {triangle}: arcs around corner {corner} would cross a spoke")]
    ArcAcrossSpoke { triangle: usize, corner: usize },
    #[error("path does not reach its end corner")]
    Unterminated,
    #[error("{0} intersection points lie on closed components")]
    ClosedComponents(u64),
}

/// Encode a simple saddle connection traced on `d`.
pub fn encode_normal(t: &Trajectory, d: &ConeSurface) -> Result<NormalCoordinate, NormalError> {
    if t.surface_fingerprint() != d.fingerprint() {
        return Err(NormalError::SurfaceMismatch);
    }
    if !t.is_saddle_connection() {
        return Err(NormalError::NotSaddleConnection);
    }
    if !is_simple(t) {
        return Err(NormalError::NotSimple);
    }
    let first = t.segments.first().expect("nonempty");
    let last = t.segments.last().expect("nonempty");
    let nearest = |tri: usize, p| {
        let ch = d.chart(tri);
        let c = (0..3).min_by(|&a, &b| ch[a].dist(p).total_cmp(&ch[b].dist(p))).expect("three corners");
        Corner::new(tri, c)
    };
    let start = nearest(first.triangle, first.start);
    let end = nearest(last.triangle, last.end);
    let mut counts = vec![0u32; d.edge_count()];
    if let Some(edge) = t.along_edge {
        return Ok(NormalCoordinate { counts, start, end, start_nearer: false, edge: Some(edge) });
    }
    for &slot in &t.crossings {
        counts[d.edge_id(slot)] += 1;
    }
    let mut start_nearer = false;
    if start == end {
        let ch = d.chart(start.triangle);
        let r = ch[(start.corner + 1) % 3] - ch[start.corner];
        let a0 = first.direction();
        let a1 = -last.direction();
        start_nearer = r.cross(a0).atan2(r.dot(a0)) < r.cross(a1).atan2(r.dot(a1));
    }
    Ok(NormalCoordinate { counts, start, end, start_nearer, edge: None })
}

/// Arc and spoke layout of one triangle.
#[derive(Debug, Clone, Copy, Default)]
struct Layout {
    /// Arcs around each corner.
    arcs: [i64; 3],
    /// Spokes leaving each corner.
    spokes: [i64; 3],
}

/// Check the counts of one triangle against its spokes and work out the
/// arcs. `spokes[v]` is the number of path ends at corner `v`.
fn layout(triangle: usize, p: [i64; 3], spokes: [i64; 3]) -> Result<Layout, NormalError> {
    if spokes.iter().filter(|&&k| k > 0).count() > 1 {
        return Err(NormalError::CrossingSpokes { triangle });
    }
    // spokes from corner v land on side v+1
    let mut q = p;
    for v in 0..3 {
        q[(v + 1) % 3] -= spokes[v];
    }
    if q.iter().any(|&x| x < 0) || q[0] > q[1] + q[2] || q[1] > q[0] + q[2] || q[2] > q[0] + q[1] {
        return Err(NormalError::Inequality { triangle, counts: p });
    }
    if (q[0] + q[1] + q[2]) % 2 != 0 {
        return Err(NormalError::Parity { triangle, counts: p });
    }
    // corner c is between sides c and c+2; side c+1 is opposite
    let arcs = [0, 1, 2].map(|c| (q[c] + q[(c + 2) % 3] - q[(c + 1) % 3]) / 2);
    for v in 0..3 {
        if spokes[v] > 0 && arcs[v] > 0 {
            return Err(NormalError::ArcAcrossSpoke { triangle, corner: v });
        }
    }
    Ok(Layout { arcs, spokes })
}

/// Check admissibility without decoding.
pub fn check_admissible(c: &NormalCoordinate, d: &ConeSurface) -> Result<(), NormalError> {
    layouts(c, d).map(|_| ())
}

fn layouts(c: &NormalCoordinate, d: &ConeSurface) -> Result<Vec<Layout>, NormalError> {
    if c.counts.len() != d.edge_count() {
        return Err(NormalError::WrongLength { got: c.counts.len(), expected: d.edge_count() });
    }
    if c.counts.iter().all(|&x| x == 0) {
        return Err(NormalError::ZeroVector);
    }
    (0..d.triangle_count())
        .map(|t| {
            let p = [0, 1, 2].map(|e| i64::from(c.counts[d.edge_id(Slot::new(t, e))]));
            let mut spokes = [0i64; 3];
            for end in [c.start, c.end] {
                if end.triangle == t {
                    spokes[end.corner] += 1;
                }
            }
            layout(t, p, spokes)
        })
        .collect()
}

/// Rebuild the crossing sequence of the path described by `c`.
pub fn decode_normal(c: &NormalCoordinate, d: &ConeSurface) -> Result<Vec<Slot>, NormalError> {
    let lay = layouts(c, d)?;
    let count = |slot: Slot| i64::from(c.counts[d.edge_id(slot)]);

    let (t0, v0) = (c.start.triangle, c.start.corner);
    let side = (v0 + 1) % 3;
    let mut pos = lay[t0].arcs[side];
    let same = c.start == c.end;
    if same && !c.start_nearer {
        pos += 1;
    }
    let mut slot = Slot::new(t0, side);
    let mut out = Vec::new();
    let total = c.total();
    loop {
        out.push(slot);
        if out.len() as u64 > total {
            return Err(NormalError::Unterminated);
        }
        let p = d.partner(slot);
        let j = count(slot) - 1 - pos;
        let (t, f) = (p.triangle, p.edge);
        let l = lay[t];
        let here = l.arcs[f];
        let spokes = l.spokes[(f + 2) % 3];
        if j < here {
            // arc around corner f, over to side f+2
            slot = Slot::new(t, (f + 2) % 3);
            pos = count(slot) - 1 - j;
        } else if j < here + spokes {
            let end = Corner::new(t, (f + 2) % 3);
            if end != c.end {
                return Err(NormalError::Unterminated);
            }
            if same {
                // the end spoke is the one the start spoke is not
                let k = j - here;
                if (k == 0) == c.start_nearer {
                    return Err(NormalError::Unterminated);
                }
            }
            break;
        } else {
            // arc around corner f+1, over to side f+1
            slot = Slot::new(t, (f + 1) % 3);
            pos = count(p) - 1 - j;
        }
    }
    let used = out.len() as u64;
    if used != total {
        return Err(NormalError::ClosedComponents(total - used));
    }
    Ok(out)
}

/// `C(k + m − 1, m − 1)` with `m = 3(n − 2)`, the number of ways to spread
/// `k` crossings over the edges, and the cruder bound
/// `(k + 3n − 7)^(3n−7) / (3n − 7)!` it is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCompositions {
    /// Exact count when it fits in 128 bits.
    pub count: Option<u128>,
    pub log2_count: f64,
    pub log2_bound: f64,
    /// `count < bound`, decided exactly when possible.
    pub below_bound: bool,
}

pub fn weak_composition_count(k: u64, n: u64) -> WeakCompositions {
    assert!(n >= 3, "a flat sphere has at least three cone points");
    let r = 3 * n - 7; // m - 1
    let log2_count: f64 = (1..=r).map(|i| ((k + i) as f64).log2() - (i as f64).log2()).sum();
    let log2_fact: f64 = (1..=r).map(|i| (i as f64).log2()).sum();
    let log2_bound = r as f64 * ((k + r) as f64).log2() - log2_fact;

    let mut count: Option<u128> = Some(1);
    for i in 1..=r {
        // C(k+i, i) = C(k+i-1, i-1) * (k+i) / i, exact at every step
        count = count.and_then(|c| c.checked_mul(u128::from(k + i))).map(|c| c / u128::from(i));
    }
    let fact = (1..=r).try_fold(1u128, |acc, i| acc.checked_mul(u128::from(i)));
    let pow = (0..r).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(k + r)));
    let below_bound = match (count, fact, pow) {
        (Some(c), Some(f), Some(p)) => c.checked_mul(f).is_some_and(|cf| cf < p),
        _ => log2_count < log2_bound,
    };
    WeakCompositions { count, log2_count, log2_bound, below_bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::enumerate_saddle_connections;
    use crate::surface::{generate_doubled_polygon, regular_polygon, DEFAULT_TOL};

    #[test]
    fn altitude_round_trip() {
        let s = generate_doubled_polygon(&regular_polygon(3), DEFAULT_TOL).unwrap();
        let cs = enumerate_saddle_connections(&s, 1.8).unwrap();
        let edge = encode_normal(&cs[0].trajectory(&s), &s).unwrap();
        assert!(edge.is_edge());
        assert_eq!(decode_normal(&edge, &s), Err(NormalError::ZeroVector));
        let alt = cs[4].trajectory(&s);
        let nc = encode_normal(&alt, &s).unwrap();
        assert_eq!(nc.total(), 1);
        assert_eq!(nc.counts.iter().filter(|&&c| c == 1).count(), 1);
        assert_eq!(decode_normal(&nc, &s).unwrap(), alt.crossings);
    }

    #[test]
    fn triangle_layouts() {
        let l = layout(0, [3, 4, 5], [0; 3]).unwrap();
        assert_eq!(l.arcs, [2, 1, 3]);
        assert!(matches!(layout(0, [1, 1, 1], [0; 3]), Err(NormalError::Parity { .. })));
        assert!(matches!(layout(0, [1, 5, 1], [0; 3]), Err(NormalError::Inequality { .. })));
        // one spoke from corner 0 lands on side 1: p1 = p0 + p2 + 1
        assert!(layout(0, [1, 3, 1], [1, 0, 0]).is_ok());
        assert!(layout(0, [1, 4, 1], [2, 0, 0]).is_ok());
        assert!(matches!(layout(0, [1, 1, 0], [1, 1, 0]), Err(NormalError::CrossingSpokes { .. })));
    }

    #[test]
    fn weak_compositions() {
        let w = weak_composition_count(2, 3);
        assert_eq!(w.count, Some(6));
        assert!(w.below_bound);
        // (2 + 2)^2 / 2! = 8
        assert!((w.log2_bound - 3.0).abs() < 1e-12);
        assert_eq!(weak_composition_count(0, 7).count, Some(1));
        let w = weak_composition_count(10, 5);
        assert_eq!(w.count, Some(43758)); // C(18, 8)
        assert!((w.log2_count - 43758f64.log2()).abs() < 1e-9);
        let big = weak_composition_count(1_000_000, 40);
        assert!(big.count.is_none() && big.below_bound);
    }
}
