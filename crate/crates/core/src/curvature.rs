//! Curvature gap of a curvature multiset.
//!
//! The gap is `min over I ⊆ Λ of |1 − Σ_{i∈I} k_i|`, taken over all `2^n`
//! subsets including the empty and full ones. Any flat sphere has gap at
//! most 1/3, with equality exactly when every cone angle lies in
//! `2π + (4π/3)ℤ`.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

/// Largest multiset size the exhaustive search accepts.
pub const MAX_SUBSET_SIZE: usize = 30;

/// Tolerance on `Σk = 2` for a profile to be accepted.
pub const PROFILE_SUM_TOL: f64 = 1e-9;

const CUBIC_TOL: f64 = 1e-9;
const LOW_BITS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("{0} curvatures exceed the exhaustive budget of {MAX_SUBSET_SIZE}")]
    TooMany(usize),
    #[error("curvatures sum to {0}, expected 2")]
    BadSum(f64),
    #[error("a flat sphere has at least 3 cone points, got {0}")]
    TooFew(usize),
    #[error("curvature {0} is not below 1")]
    OutOfRange(f64),
}

/// Discrete curvatures of the cone points of a flat sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    curvatures: Vec<f64>,
}

impl CurvatureProfile {
    pub fn new(curvatures: Vec<f64>) -> Result<Self, CurvatureError> {
        if curvatures.len() < 3 {
            return Err(CurvatureError::TooFew(curvatures.len()));
        }
        if let Some(&k) = curvatures.iter().find(|k| !(**k < 1.0)) {
            return Err(CurvatureError::OutOfRange(k));
        }
        let sum: f64 = curvatures.iter().sum();
        if (sum - 2.0).abs() > PROFILE_SUM_TOL {
            return Err(CurvatureError::BadSum(sum));
        }
        Ok(CurvatureProfile { curvatures })
    }

    /// Profile from cone angles in radians.
    pub fn from_angles(angles: &[f64]) -> Result<Self, CurvatureError> {
        Self::new(angles.iter().map(|&a| crate::surface::curvature_of_angle(a)).collect())
    }

    pub fn curvatures(&self) -> &[f64] {
        &self.curvatures
    }

    pub fn len(&self) -> usize {
        self.curvatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curvatures.is_empty()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.curvatures.iter().map(|k| 2.0 * PI * (1.0 - k)).collect()
    }

    pub fn gap(&self) -> Result<f64, CurvatureError> {
        curvature_gap(self)
    }
}

/// Subset sums of `ks`, indexed by bitmask. Each entry is one addition away
/// from an entry with one fewer bit, so rounding depth is at most `ks.len()`.
fn subset_sums(ks: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0; 1 << ks.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + ks[low];
    }
    sums
}

/// Exact minimum of `|1 − Σ_I k|` over all subsets, by exhaustive
/// enumeration. The low bits are tabulated once; high-bit prefixes are
/// scanned in parallel and reduced with `min`, which is order-independent.
pub fn curvature_gap(p: &CurvatureProfile) -> Result<f64, CurvatureError> {
    let ks = p.curvatures();
    if ks.len() > MAX_SUBSET_SIZE {
        return Err(CurvatureError::TooMany(ks.len()));
    }
    let split = ks.len().min(LOW_BITS);
    let low = subset_sums(&ks[..split]);
    let high = subset_sums(&ks[split..]);
    let best = high
        .par_iter()
        .map(|&h| low.iter().map(|&l| (1.0 - (h + l)).abs()).fold(f64::INFINITY, f64::min))
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

/// Whether every angle is within `1e-9` of `2π + (4π/3)m` for an integer
/// `m ≥ −1`: the equality case of the gap ≤ 1/3 bound.
pub fn cubic_case_check(angles: &[f64]) -> bool {
    let step = 4.0 * PI / 3.0;
    angles.iter().all(|&a| {
        let m = ((a - 2.0 * PI) / step).round();
        m >= -1.0 && (a - (2.0 * PI + step * m)).abs() < CUBIC_TOL
    })
}

/// Curvature multiset of the sharp diameter family: `m` points of curvature
/// `ε`, `m − 1` of curvature `−ε` and two of curvature `1 − ε/2`. Its gap is
/// `ε/2` whenever `ε < 2/(2m + 1)`.
pub fn sharp_family_curvatures(m: usize, eps: f64) -> Vec<f64> {
    let mut ks = vec![eps; m];
    ks.extend(std::iter::repeat_n(-eps, m.saturating_sub(1)));
    ks.extend([1.0 - eps / 2.0; 2]);
    ks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap(ks: &[f64]) -> f64 {
        curvature_gap(&CurvatureProfile::new(ks.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn equilateral_profile() {
        // partial sums {0, 2/3, 4/3, 2}
        assert!((gap(&[2.0 / 3.0; 3]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn square_profile() {
        assert_eq!(gap(&[0.5; 4]), 0.0);
    }

    #[test]
    fn sharp_family_example() {
        let ks = sharp_family_curvatures(3, 0.2);
        assert_eq!(ks.len(), 7);
        assert!((gap(&ks) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn profile_validation() {
        assert_eq!(CurvatureProfile::new(vec![1.0, 1.0]), Err(CurvatureError::TooFew(2)));
        assert!(matches!(CurvatureProfile::new(vec![0.5, 0.5, 0.5]), Err(CurvatureError::BadSum(_))));
        assert!(matches!(
            CurvatureProfile::new(vec![1.0, 0.5, 0.5]),
            Err(CurvatureError::OutOfRange(_))
        ));
        let mut ks = vec![0.0; 31];
        ks[0] = 0.9;
        ks[1] = 0.9;
        ks[2] = 0.2;
        let p = CurvatureProfile::new(ks).unwrap();
        assert_eq!(curvature_gap(&p), Err(CurvatureError::TooMany(31)));
    }

    #[test]
    fn cubic_check() {
        let t = 2.0 * PI / 3.0;
        assert!(cubic_case_check(&[t, t, t]));
        assert!(!cubic_case_check(&[PI; 4]));
        assert!(cubic_case_check(&[2.0 * PI, t, 10.0 * PI / 3.0, t, t, t]));
    }

    #[test]
    fn split_boundary_matches_small_enumeration() {
        // 18 points crosses the tabulated low-bit boundary
        let mut ks = vec![0.1; 18];
        ks[0] = 0.25;
        ks[1] = -0.05;
        let s: f64 = ks.iter().sum();
        ks[2] += 2.0 - s;
        let mut brute = f64::INFINITY;
        for mask in 0u32..(1 << 18) {
            let sum: f64 = (0..18).filter(|i| mask >> i & 1 == 1).map(|i| ks[i]).sum();
            brute = brute.min((1.0 - sum).abs());
        }
        assert!((gap(&ks) - brute).abs() < 1e-12);
    }
}
