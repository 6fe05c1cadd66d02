//! Closed-form bounds for flat spheres with `n` cone points and curvature
//! gap `δ`, all at unit area.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("curvature gap must be positive, got {0}")]
    NonPositiveGap(f64),
    #[error("a flat sphere has at least 3 cone points, got {0}")]
    TooFewPoints(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub n: u64,
    pub delta: f64,
    /// Self-intersection budget.
    pub k: u64,
    /// Combinatorial length bound for trajectories with `k` self-intersections.
    pub s_bound: f64,
    /// `log2` of the count bound `(3n − 6)·2^s`.
    pub count_bound_log2: f64,
    pub simple_count_bound: f64,
    pub simple_count_bound_log2: f64,
    pub length_bound: f64,
    pub simple_length_bound: f64,
    pub diameter_bound: f64,
    pub delaunay_l2_bound: f64,
    pub comb_length_bound: f64,
    pub chords_bound: f64,
    pub monogon_angle_bound: f64,
}

fn check(n: u64, delta: f64) -> Result<(), BoundsError> {
    if n < 3 {
        return Err(BoundsError::TooFewPoints(n));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(BoundsError::NonPositiveGap(delta));
    }
    Ok(())
}

/// `log2 m!`.
fn log2_factorial(m: u64) -> f64 {
    (2..=m).map(|i| (i as f64).log2()).sum()
}

/// `log2((5n/δ + 3n − 7)^(3n−6) / (3n − 7)!)`, the main term of the simple
/// count bound.
fn simple_count_main_log2(n: u64, delta: f64) -> f64 {
    let nf = n as f64;
    (3 * n - 6) as f64 * (5.0 * nf / delta + 3.0 * nf - 7.0).log2() - log2_factorial(3 * n - 7)
}

/// `(20n(n−1)√k + 20n)/δ`.
pub fn s_bound(n: u64, delta: f64, k: u64) -> f64 {
    let nf = n as f64;
    (20.0 * nf * (nf - 1.0) * (k as f64).sqrt() + 20.0 * nf) / delta
}

/// `(40n(n−1)√k + 40n)/(δ√π) + (20n(n−1)√k + 20n)/(δ^{3/2}√(2π))`.
pub fn length_bound(n: u64, delta: f64, k: u64) -> f64 {
    let nf = n as f64;
    let a = nf * (nf - 1.0) * (k as f64).sqrt() + nf;
    40.0 * a / (delta * PI.sqrt()) + 20.0 * a / (delta.powf(1.5) * (2.0 * PI).sqrt())
}

/// `4l(n−1)√k + 4l`.
pub fn si_comb_bound(n: u64, l: f64, k: u64) -> f64 {
    4.0 * l * (n as f64 - 1.0) * (k as f64).sqrt() + 4.0 * l
}

pub fn compute_bounds(n: u64, delta: f64, k: u64) -> Result<BoundsReport, BoundsError> {
    check(n, delta)?;
    let nf = n as f64;
    let s = s_bound(n, delta, k);
    let main_log2 = simple_count_main_log2(n, delta);
    Ok(BoundsReport {
        n,
        delta,
        k,
        s_bound: s,
        count_bound_log2: (3.0 * nf - 6.0).log2() + s,
        simple_count_bound: main_log2.exp2() + (3.0 * nf - 6.0),
        simple_count_bound_log2: if main_log2 < 1000.0 {
            (main_log2.exp2() + 3.0 * nf - 6.0).log2()
        } else {
            main_log2
        },
        length_bound: length_bound(n, delta, k),
        simple_length_bound: 10.0 * nf / (delta * PI.sqrt()) + 5.0 * nf / (delta.powf(1.5) * (2.0 * PI).sqrt()),
        diameter_bound: (nf + 1.0) * (2.0 / PI.sqrt() + 1.0 / (2.0 * PI * delta).sqrt()),
        delaunay_l2_bound: crate::delaunay::delaunay_l2_bound(delta),
        comb_length_bound: 5.0 * nf / delta,
        chords_bound: 5.0 / (2.0 * delta),
        monogon_angle_bound: PI - 2.0 * PI * delta,
    })
}

impl BoundsReport {
    pub fn si_comb_bound(&self, l: f64, k: u64) -> f64 {
        si_comb_bound(self.n, l, k)
    }

    pub fn length_bound_at(&self, k: u64) -> f64 {
        length_bound(self.n, self.delta, k)
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.comb_length_bound;
        let rows: [(&str, String); 15] = [
            ("n", self.n.to_string()),
            ("delta", self.delta.to_string()),
            ("k", self.k.to_string()),
            ("s_bound", self.s_bound.to_string()),
            ("count_bound_log2", self.count_bound_log2.to_string()),
            ("simple_count_bound", self.simple_count_bound.to_string()),
            ("simple_count_bound_log2", self.simple_count_bound_log2.to_string()),
            ("length_bound", self.length_bound.to_string()),
            ("simple_length_bound", self.simple_length_bound.to_string()),
            ("diameter_bound", self.diameter_bound.to_string()),
            ("delaunay_l2_bound", self.delaunay_l2_bound.to_string()),
            ("comb_length_bound", self.comb_length_bound.to_string()),
            ("chords_bound", self.chords_bound.to_string()),
            ("monogon_angle_bound", self.monogon_angle_bound.to_string()),
            ("si_comb_bound", self.si_comb_bound(l, self.k).to_string()),
        ];
        for (i, (key, v)) in rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{key}={v}")?;
        }
        Ok(())
    }
}
