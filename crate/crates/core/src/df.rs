//! Common surface of distribution functions with jump discontinuities.
//!
//! Both the pure-step and the mixed (continuous-between-jumps) integrators
//! implement [`DistributionFn`]: pointwise evaluation, one-sided limits, and
//! certified enumeration of the jumps meeting a compact interval.

use std::fmt;

use crate::error::{Error, Result};

/// Where a distribution function is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    WholeLine,
    /// Closed interval `[a, b]` with `a < b`. Single-point intervals are
    /// rejected at construction.
    Interval(f64, f64),
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Domain::Interval(a, b))
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::WholeLine => x.is_finite(),
            Domain::Interval(a, b) => x.is_finite() && *a <= x && x <= *b,
        }
    }

    pub fn check_contains(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                domain: self.to_string(),
            })
        }
    }

    /// True strictly inside the domain (one-sided limits exist on both sides).
    pub fn contains_interior(&self, x: f64) -> bool {
        match self {
            Domain::WholeLine => x.is_finite(),
            Domain::Interval(a, b) => x.is_finite() && *a < x && x < *b,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::WholeLine => write!(f, "the real line"),
            Domain::Interval(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// A single jump of the integrator: its location, the jump mass
/// `F(x+0) - F(x-0)`, and the value `F(x)` taken at the point itself.
///
/// The value at the point is free to sit anywhere in the closed interval
/// between the two one-sided limits; that constraint involves the
/// surrounding plateau or segment levels, so it is checked by the
/// distribution-function constructors rather than here.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct JumpPoint {
    location: f64,
    mass: f64,
    value_at: f64,
}

impl JumpPoint {
    pub fn new(location: f64, mass: f64, value_at: f64) -> Result<Self> {
        for (value, context) in [
            (location, "jump location"),
            (mass, "jump mass"),
            (value_at, "jump value"),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFiniteJump {
                    value,
                    context: context.to_string(),
                });
            }
        }
        if mass == 0.0 {
            return Err(Error::ZeroMass { location });
        }
        Ok(JumpPoint {
            location,
            mass,
            value_at,
        })
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn value_at(&self) -> f64 {
        self.value_at
    }
}

/// Evaluation surface shared by step and mixed distribution functions.
pub trait DistributionFn {
    fn domain(&self) -> Domain;

    /// True when negative jump masses are admitted. Lebesgue-Stieltjes
    /// operations reject signed integrators.
    fn signed(&self) -> bool;

    /// `F(x)`: the plateau or segment value on open gaps, the stored
    /// `value_at` exactly at jump locations.
    fn evaluate(&self, x: f64) -> Result<f64>;

    /// `F(x-0)`, defined for x in the domain with points to its left.
    fn left_limit(&self, x: f64) -> Result<f64>;

    /// `F(x+0)`, defined for x in the domain with points to its right.
    fn right_limit(&self, x: f64) -> Result<f64>;

    /// Both one-sided limits at an interior point.
    fn one_sided_limits(&self, x: f64) -> Result<(f64, f64)> {
        if !self.domain().contains_interior(x) {
            return Err(Error::OutOfDomain {
                x,
                domain: format!("interior of {}", self.domain()),
            });
        }
        Ok((self.left_limit(x)?, self.right_limit(x)?))
    }

    /// Every jump with location in the closed interval `[a, b]`, in
    /// increasing order. For generated jump families this certifies local
    /// finiteness by enumeration and fails with `CannotCertify` when the
    /// enumeration budget is exhausted before clearing `b`.
    fn jumps_within(&self, a: f64, b: f64) -> Result<Vec<JumpPoint>>;

    /// True when the function is constant between consecutive jumps, so
    /// between-jump integral contributions vanish identically.
    fn constant_between_jumps(&self) -> bool;
}
