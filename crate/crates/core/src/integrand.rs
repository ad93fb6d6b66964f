//! Bounded integrands with declared discontinuity metadata.
//!
//! The function being integrated is a plain `f64 -> f64` closure. What the
//! integrators additionally need to know about it — an optional global bound,
//! and the points where it jumps together with its one-sided limits — is
//! carried alongside the closure instead of being rediscovered numerically.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default geometric probing step for numeric one-sided limits.
pub const DEFAULT_LIMIT_PROBE_STEP: f64 = 1e-3;
/// Default number of halvings when probing one-sided limits numerically.
pub const DEFAULT_LIMIT_PROBE_STEPS: usize = 20;

/// A declared discontinuity of the integrand.
///
/// `value` must equal what the closure actually returns at `location`; the
/// one-sided limits are optional but, when present, must be finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discontinuity {
    pub location: f64,
    pub left_limit: Option<f64>,
    pub right_limit: Option<f64>,
    pub value: f64,
}

/// One-sided limits of the integrand at a point.
///
/// `estimated` is true when the values came from numeric probing rather than
/// a declaration; probed values are estimates, not ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedLimits {
    pub left: f64,
    pub right: f64,
    pub estimated: bool,
}

#[derive(Clone)]
pub struct Integrand {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    bound: f64,
    discontinuities: Vec<Discontinuity>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("bound", &self.bound)
            .field("discontinuities", &self.discontinuities)
            .finish_non_exhaustive()
    }
}

impl Integrand {
    /// Wraps a closure with no declared bound and no declared discontinuities.
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Integrand {
            eval: Arc::new(eval),
            bound: f64::INFINITY,
            discontinuities: Vec::new(),
        }
    }

    /// Declares the global bound `M` with `|f| <= M`. The bound is enforced
    /// lazily: every probed point is checked against it.
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    /// Declares a discontinuity. Declarations must come in increasing
    /// location order and match the closure at the breakpoint.
    pub fn with_discontinuity(mut self, d: Discontinuity) -> Result<Self> {
        let evaluated = (self.eval)(d.location);
        if evaluated != d.value {
            return Err(Error::DiscontinuityValueMismatch {
                location: d.location,
                declared: d.value,
                evaluated,
            });
        }
        for limit in [d.left_limit, d.right_limit].into_iter().flatten() {
            if !limit.is_finite() {
                return Err(Error::NonFiniteDeclaredLimit {
                    location: d.location,
                });
            }
        }
        if let Some(last) = self.discontinuities.last() {
            if d.location <= last.location {
                return Err(Error::JumpOrder {
                    previous: last.location,
                    location: d.location,
                });
            }
        }
        self.discontinuities.push(d);
        Ok(self)
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn discontinuities(&self) -> &[Discontinuity] {
        &self.discontinuities
    }

    pub fn discontinuity_at(&self, x: f64) -> Option<&Discontinuity> {
        self.discontinuities.iter().find(|d| d.location == x)
    }

    /// Evaluates the integrand, rejecting non-finite values and values that
    /// exceed the declared bound.
    pub fn probe(&self, x: f64) -> Result<f64> {
        let value = (self.eval)(x);
        if !value.is_finite() {
            return Err(Error::NonFiniteEvaluation { x });
        }
        if value.abs() > self.bound {
            return Err(Error::BoundExceeded {
                x,
                value,
                bound: self.bound,
            });
        }
        Ok(value)
    }

    /// One-sided limits at `x`.
    ///
    /// Declared limits win. Without a declaration the limits are estimated by
    /// evaluating at `x -/+ step0 * 2^-k` for `k = 0..steps-1` and reporting
    /// the last iterate, flagged as estimated. No extrapolation is applied.
    pub fn one_sided_limits(&self, x: f64, steps: usize, step0: f64) -> Result<OneSidedLimits> {
        if let Some(d) = self.discontinuity_at(x) {
            if let (Some(left), Some(right)) = (d.left_limit, d.right_limit) {
                return Ok(OneSidedLimits {
                    left,
                    right,
                    estimated: false,
                });
            }
        }
        let steps = steps.max(1);
        let step0 = if step0 > 0.0 {
            step0
        } else {
            DEFAULT_LIMIT_PROBE_STEP
        };
        let mut left = 0.0;
        let mut right = 0.0;
        for k in 0..steps {
            let h = step0 * 0.5f64.powi(k as i32);
            left = self.probe(x - h)?;
            right = self.probe(x + h)?;
        }
        // Fill any half that was declared explicitly.
        if let Some(d) = self.discontinuity_at(x) {
            if let Some(l) = d.left_limit {
                left = l;
            }
            if let Some(r) = d.right_limit {
                right = r;
            }
        }
        Ok(OneSidedLimits {
            left,
            right,
            estimated: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_fn() -> Integrand {
        Integrand::new(|x: f64| {
            if x < 0.0 {
                -1.0
            } else if x == 0.0 {
                0.0
            } else {
                1.0
            }
        })
        .with_discontinuity(Discontinuity {
            location: 0.0,
            left_limit: Some(-1.0),
            right_limit: Some(1.0),
            value: 0.0,
        })
        .unwrap()
    }

    #[test]
    fn declared_limits_win() {
        let f = sign_fn();
        let lims = f.one_sided_limits(0.0, 20, 1e-3).unwrap();
        assert_eq!(lims.left, -1.0);
        assert_eq!(lims.right, 1.0);
        assert!(!lims.estimated);
    }

    #[test]
    fn numeric_fallback_converges_for_smooth_functions() {
        let f = Integrand::new(|x: f64| x * x);
        let lims = f.one_sided_limits(2.0, 20, 1e-3).unwrap();
        assert!((lims.left - 4.0).abs() < 1e-6);
        assert!((lims.right - 4.0).abs() < 1e-6);
        assert!(lims.estimated);
    }

    #[test]
    fn continuous_point_gives_equal_limits() {
        let f = Integrand::new(f64::cos);
        let lims = f.one_sided_limits(0.7, 20, 1e-3).unwrap();
        let v = f.probe(0.7).unwrap();
        assert!((lims.left - v).abs() < 1e-6);
        assert!((lims.right - v).abs() < 1e-6);
    }

    #[test]
    fn declared_value_must_match_eval() {
        let bad = Integrand::new(|_| 1.0).with_discontinuity(Discontinuity {
            location: 0.0,
            left_limit: None,
            right_limit: None,
            value: 0.0,
        });
        assert!(matches!(
            bad,
            Err(Error::DiscontinuityValueMismatch { .. })
        ));
    }

    #[test]
    fn probe_rejects_non_finite_and_bound_violations() {
        let f = Integrand::new(|x: f64| 1.0 / x);
        assert!(matches!(
            f.probe(0.0),
            Err(Error::NonFiniteEvaluation { .. })
        ));
        let g = Integrand::new(|x: f64| x).with_bound(1.0);
        assert!(matches!(g.probe(2.0), Err(Error::BoundExceeded { .. })));
        assert_eq!(g.probe(0.5).unwrap(), 0.5);
    }
}
