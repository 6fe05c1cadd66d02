//! Closed-form model of the flat annulus `A(R, R′, θ)`: the ring
//! `R ≤ |z| ≤ R′, 0 ≤ arg z ≤ θ` with its radial sides identified by a
//! rotation of angle `θ`. For `R = 0` the inner arc collapses to a cone
//! point of angle `θ`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use thiserror::Error;

/// Slack for snapping `(π − 2α)/θ` to an integer before flooring.
const FLOOR_SNAP: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnulusError {
    #[error("invalid annulus: need 0 <= R < R' and theta > 0 (R={r}, R'={rp}, theta={theta})")]
    InvalidSpec { r: f64, rp: f64, theta: f64 },
    #[error("modulus is infinite for R = 0")]
    InfiniteModulus,
    #[error("angle {0} outside [0, pi/2]")]
    AngleOutOfRange(f64),
    #[error("trajectory at alpha={alpha} leaves through the inner boundary; it does not return")]
    RegimeMismatch { alpha: f64 },
    #[error("interior angle {0} outside (0, pi)")]
    InteriorAngleOutOfRange(f64),
    #[error("L'/L = {ratio} does not exceed 1/sin(alpha/2) = {needed}")]
    FamilyTooShort { ratio: f64, needed: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSpec {
    /// Inner radius.
    pub r: f64,
    /// Outer radius.
    pub rp: f64,
    /// Apex angle in radians; values above 2π describe branched covers.
    pub theta: f64,
}

impl AnnulusSpec {
    pub fn new(r: f64, rp: f64, theta: f64) -> Result<Self, AnnulusError> {
        if !(r >= 0.0 && r < rp && rp.is_finite() && theta > 0.0 && theta.is_finite()) {
            return Err(AnnulusError::InvalidSpec { r, rp, theta });
        }
        Ok(AnnulusSpec { r, rp, theta })
    }

    /// `ln(R′/R)/θ`.
    pub fn modulus(&self) -> Result<f64, AnnulusError> {
        if self.r == 0.0 {
            return Err(AnnulusError::InfiniteModulus);
        }
        Ok((self.rp / self.r).ln() / self.theta)
    }
}

/// Which boundary arc a trajectory starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Inner,
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Started on the inner arc; radius increases to `R′`.
    InnerStart,
    /// Started on the outer arc steeply enough to reach the inner arc.
    OuterExitsInner,
    /// Started on the outer arc, turned at radius `R′ sin α` and came back.
    OuterReturnsOuter,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::InnerStart => "inner-start",
            Regime::OuterExitsInner => "outer-exits-inner",
            Regime::OuterReturnsOuter => "outer-returns-outer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusTrajectoryReport {
    pub regime: Regime,
    pub min_radius: f64,
    pub exit: Boundary,
    /// Transverse self-intersections; zero for the simple regimes.
    pub self_intersections: u64,
    /// Central angle `π − 2α` of the returning chord, if any.
    pub chord_central_angle: Option<f64>,
}

impl fmt::Display for AnnulusTrajectoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "regime={}", self.regime.name())?;
        writeln!(f, "min_radius={}", self.min_radius)?;
        let exit = match self.exit {
            Boundary::Inner => "inner",
            Boundary::Outer => "outer",
        };
        writeln!(f, "exit={exit}")?;
        write!(f, "self_intersections={}", self.self_intersections)?;
        if let Some(c) = self.chord_central_angle {
            write!(f, "\nchord_central_angle={c}")?;
        }
        Ok(())
    }
}

pub fn modulus(a: &AnnulusSpec) -> Result<f64, AnnulusError> {
    a.modulus()
}

fn check_alpha(alpha: f64) -> Result<(), AnnulusError> {
    if !(0.0..=FRAC_PI_2).contains(&alpha) {
        return Err(AnnulusError::AngleOutOfRange(alpha));
    }
    Ok(())
}

/// Regime of a trajectory making angle `alpha` with the radial leaf at its
/// start. The outer regimes switch at `sin α = R/R′`; the tangent case
/// `sin α = R/R′` counts as leaving through the inner arc.
pub fn classify_trajectory(
    a: &AnnulusSpec,
    start: Boundary,
    alpha: f64,
) -> Result<AnnulusTrajectoryReport, AnnulusError> {
    check_alpha(alpha)?;
    let report = match start {
        Boundary::Inner => AnnulusTrajectoryReport {
            regime: Regime::InnerStart,
            min_radius: a.r,
            exit: Boundary::Outer,
            self_intersections: 0,
            chord_central_angle: None,
        },
        Boundary::Outer if alpha.sin() <= a.r / a.rp => AnnulusTrajectoryReport {
            regime: Regime::OuterExitsInner,
            min_radius: a.r,
            exit: Boundary::Inner,
            self_intersections: 0,
            chord_central_angle: None,
        },
        Boundary::Outer => AnnulusTrajectoryReport {
            regime: Regime::OuterReturnsOuter,
            min_radius: a.rp * alpha.sin(),
            exit: Boundary::Outer,
            self_intersections: returning_count(a.theta, alpha),
            chord_central_angle: Some(PI - 2.0 * alpha),
        },
    };
    Ok(report)
}

fn returning_count(theta: f64, alpha: f64) -> u64 {
    ((PI - 2.0 * alpha) / theta + FLOOR_SNAP).floor().max(0.0) as u64
}

/// `⌊(π − 2α)/θ⌋` for a chord returning to the outer arc.
pub fn annulus_self_intersections(a: &AnnulusSpec, alpha: f64) -> Result<u64, AnnulusError> {
    check_alpha(alpha)?;
    if alpha == 0.0 || alpha.sin() <= a.r / a.rp {
        return Err(AnnulusError::RegimeMismatch { alpha });
    }
    Ok(returning_count(a.theta, alpha))
}

/// `arccos(R/R′)/θ`: lower bound on simple saddle connections when the
/// annulus sits in a sphere with one cone point on each boundary arc, both
/// on a common radial leaf.
pub fn annulus_sc_lower_bound(a: &AnnulusSpec) -> f64 {
    (a.r / a.rp).acos() / a.theta
}

/// The annulus swept by the family of monogons with interior angle `alpha`
/// and lengths between `l` and `lp`.
pub fn monogon_family_annulus(alpha: f64, l: f64, lp: f64) -> Result<AnnulusSpec, AnnulusError> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(AnnulusError::InteriorAngleOutOfRange(alpha));
    }
    let half = alpha / 2.0;
    let needed = 1.0 / half.sin();
    let ratio = lp / l;
    if !(ratio > needed) {
        return Err(AnnulusError::FamilyTooShort { ratio, needed });
    }
    AnnulusSpec::new(l / (2.0 * half.cos()), lp * half.tan() / 2.0, PI - alpha)
}
