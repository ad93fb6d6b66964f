//! Step distribution functions: constant plateaus separated by jumps.
//!
//! The plateau to the right of the h-th jump is `base_level + sum of the
//! first h+1 masses`; those running levels are materialized once at
//! construction so evaluation, one-sided limits and interval masses all read
//! from the same bookkeeping.
//!
//! Infinite jump families are a finite materialized window plus an optional
//! [`JumpTail`]: an ordered generator of further jumps to the right, paired
//! with a caller-supplied bound on the mass it still holds. Enumeration of a
//! tail is budgeted; an operation that would need more than
//! [`TAIL_ENUM_BUDGET`] generated jumps fails with `CannotCertify` instead of
//! silently truncating.

use std::fmt;
use std::sync::Arc;

use crate::df::{DistributionFn, Domain, JumpPoint};
use crate::error::{Error, Result};

/// Hard cap on generated-jump enumeration per operation.
pub const TAIL_ENUM_BUDGET: usize = 1_000_000;

/// Ordered stream of jumps extending a step df to the right of its
/// materialized window.
///
/// `generator(k)` returns the k-th tail jump (k = 0, 1, ...) or `None` when
/// the family ends. Locations must be strictly increasing and lie strictly
/// right of the materialized window; generators must terminate before masses
/// underflow to zero. `remaining_mass_bound(k)` bounds the total absolute
/// mass of tail jumps with index >= k; `+inf` means "no bound supplied".
#[derive(Clone)]
pub struct JumpTail {
    generator: Arc<dyn Fn(usize) -> Option<JumpPoint> + Send + Sync>,
    remaining_mass_bound: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
}

impl fmt::Debug for JumpTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JumpTail {{ .. }}")
    }
}

impl JumpTail {
    pub fn new(
        generator: impl Fn(usize) -> Option<JumpPoint> + Send + Sync + 'static,
        remaining_mass_bound: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        JumpTail {
            generator: Arc::new(generator),
            remaining_mass_bound: Arc::new(remaining_mass_bound),
        }
    }

    /// Tail with no mass bound supplied.
    pub fn unbounded(generator: impl Fn(usize) -> Option<JumpPoint> + Send + Sync + 'static) -> Self {
        JumpTail::new(generator, |_| f64::INFINITY)
    }

    /// Bound on the total absolute mass of tail jumps with index >= `consumed`.
    pub fn remaining_mass_bound(&self, consumed: usize) -> f64 {
        (self.remaining_mass_bound)(consumed)
    }

    pub(crate) fn iter(&self, after: Option<f64>, require_positive: bool) -> TailIter<'_> {
        TailIter {
            tail: self,
            index: 0,
            previous: after,
            require_positive,
            stopped: false,
        }
    }
}

/// Validating iterator over tail jumps. Yields `Err` once (then stops) on a
/// contract violation or on budget exhaustion.
pub(crate) struct TailIter<'a> {
    tail: &'a JumpTail,
    index: usize,
    previous: Option<f64>,
    require_positive: bool,
    stopped: bool,
}

impl Iterator for TailIter<'_> {
    type Item = Result<JumpPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.stopped {
            return None;
        }
        if self.index >= TAIL_ENUM_BUDGET {
            self.stopped = true;
            return Some(Err(Error::CannotCertify {
                detail: format!(
                    "tail enumeration exceeded the budget of {TAIL_ENUM_BUDGET} jumps"
                ),
            }));
        }
        let jump = match (self.tail.generator)(self.index) {
            Some(j) => j,
            None => {
                self.stopped = true;
                return None;
            }
        };
        if let Some(prev) = self.previous {
            if jump.location() <= prev {
                self.stopped = true;
                return Some(Err(Error::GeneratorViolation {
                    index: self.index,
                    detail: format!(
                        "location {} does not increase past {prev}",
                        jump.location()
                    ),
                }));
            }
        }
        if self.require_positive && jump.mass() <= 0.0 {
            self.stopped = true;
            return Some(Err(Error::GeneratorViolation {
                index: self.index,
                detail: format!("non-positive mass {} in non-signed mode", jump.mass()),
            }));
        }
        self.previous = Some(jump.location());
        self.index += 1;
        Some(Ok(jump))
    }
}

/// A distribution function that is constant between its jumps.
#[derive(Debug, Clone)]
pub struct StepDf {
    jumps: Vec<JumpPoint>,
    /// levels[i] = base_level + masses[0..=i], summed left to right.
    levels: Vec<f64>,
    base_level: f64,
    domain: Domain,
    signed: bool,
    tail: Option<JumpTail>,
}

impl StepDf {
    /// Builds a step df from fully specified jumps.
    ///
    /// Locations must be strictly increasing and inside the domain; in
    /// non-signed mode every mass must be positive. Each `value_at` must lie
    /// in the closed interval between the adjacent plateau levels.
    pub fn new(base_level: f64, jumps: Vec<JumpPoint>, domain: Domain, signed: bool) -> Result<Self> {
        if !base_level.is_finite() {
            return Err(Error::NonFiniteJump {
                value: base_level,
                context: "base level".to_string(),
            });
        }
        let mut levels = Vec::with_capacity(jumps.len());
        let mut level = base_level;
        let mut previous: Option<f64> = None;
        for jump in &jumps {
            domain.check_contains(jump.location())?;
            if let Some(prev) = previous {
                if jump.location() <= prev {
                    return Err(Error::JumpOrder {
                        previous: prev,
                        location: jump.location(),
                    });
                }
            }
            if !signed && jump.mass() <= 0.0 {
                return Err(Error::NegativeMass {
                    location: jump.location(),
                    mass: jump.mass(),
                });
            }
            let left = level;
            level += jump.mass();
            if !level.is_finite() {
                return Err(Error::NonFiniteJump {
                    value: level,
                    context: format!("plateau level after the jump at {}", jump.location()),
                });
            }
            let (lo, hi) = if left <= level { (left, level) } else { (level, left) };
            if jump.value_at() < lo || jump.value_at() > hi {
                return Err(Error::ValueAtOutOfRange {
                    location: jump.location(),
                    value_at: jump.value_at(),
                    left_limit: left,
                    right_limit: level,
                });
            }
            levels.push(level);
            previous = Some(jump.location());
        }
        Ok(StepDf {
            jumps,
            levels,
            base_level,
            domain,
            signed,
            tail: None,
        })
    }

    /// Builds a step df from `(location, mass)` pairs under the
    /// right-continuous convention (`value_at` = right plateau level).
    /// Signed mode is inferred from the presence of a negative mass.
    pub fn from_masses(base_level: f64, masses: &[(f64, f64)], domain: Domain) -> Result<Self> {
        let signed = masses.iter().any(|(_, m)| *m < 0.0);
        let mut level = base_level;
        let mut jumps = Vec::with_capacity(masses.len());
        for &(location, mass) in masses {
            level += mass;
            jumps.push(JumpPoint::new(location, mass, level)?);
        }
        StepDf::new(base_level, jumps, domain, signed)
    }

    /// Attaches a generated tail of further jumps to the right of the
    /// materialized window. Only whole-line dfs can carry a tail.
    pub fn with_tail(mut self, tail: JumpTail) -> Result<Self> {
        if self.domain != Domain::WholeLine {
            return Err(Error::Unsupported(
                "jump tails are only supported on whole-line distribution functions".to_string(),
            ));
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn jumps(&self) -> &[JumpPoint] {
        &self.jumps
    }

    pub fn base_level(&self) -> f64 {
        self.base_level
    }

    pub fn tail(&self) -> Option<&JumpTail> {
        self.tail.as_ref()
    }

    /// Plateau level immediately right of the i-th materialized jump.
    pub fn level_after(&self, index: usize) -> f64 {
        self.levels[index]
    }

    /// Plateau level immediately left of the i-th materialized jump.
    pub fn level_before(&self, index: usize) -> f64 {
        if index == 0 {
            self.base_level
        } else {
            self.levels[index - 1]
        }
    }

    fn last_materialized_location(&self) -> Option<f64> {
        self.jumps.last().map(|j| j.location())
    }

    /// Level immediately left of `x` plus the jump exactly at `x`, if any.
    fn scan_to(&self, x: f64) -> Result<(f64, Option<JumpPoint>)> {
        let idx = self.jumps.partition_point(|j| j.location() < x);
        let mut level = if idx == 0 {
            self.base_level
        } else {
            self.levels[idx - 1]
        };
        let mut at = None;
        if idx < self.jumps.len() && self.jumps[idx].location() == x {
            at = Some(self.jumps[idx]);
        }
        if let Some(tail) = &self.tail {
            let last = self.last_materialized_location();
            if last.map_or(true, |l| x > l) {
                for item in tail.iter(last, !self.signed) {
                    let jump = item?;
                    if jump.location() < x {
                        level += jump.mass();
                    } else {
                        if jump.location() == x {
                            at = Some(jump);
                        }
                        break;
                    }
                }
            }
        }
        Ok((level, at))
    }
}

impl DistributionFn for StepDf {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn signed(&self) -> bool {
        self.signed
    }

    fn evaluate(&self, x: f64) -> Result<f64> {
        self.domain.check_contains(x)?;
        let (level, at) = self.scan_to(x)?;
        Ok(at.map_or(level, |j| j.value_at()))
    }

    fn left_limit(&self, x: f64) -> Result<f64> {
        self.domain.check_contains(x)?;
        if let Domain::Interval(a, _) = self.domain {
            if x <= a {
                return Err(Error::OutOfDomain {
                    x,
                    domain: format!("left limits exist only right of {a}"),
                });
            }
        }
        Ok(self.scan_to(x)?.0)
    }

    fn right_limit(&self, x: f64) -> Result<f64> {
        self.domain.check_contains(x)?;
        if let Domain::Interval(_, b) = self.domain {
            if x >= b {
                return Err(Error::OutOfDomain {
                    x,
                    domain: format!("right limits exist only left of {b}"),
                });
            }
        }
        let (level, at) = self.scan_to(x)?;
        Ok(level + at.map_or(0.0, |j| j.mass()))
    }

    fn jumps_within(&self, a: f64, b: f64) -> Result<Vec<JumpPoint>> {
        let lo = self.jumps.partition_point(|j| j.location() < a);
        let hi = self.jumps.partition_point(|j| j.location() <= b);
        let mut out: Vec<JumpPoint> = self.jumps[lo..hi].to_vec();
        if let Some(tail) = &self.tail {
            let last = self.last_materialized_location();
            if last.map_or(true, |l| b > l) {
                for item in tail.iter(last, !self.signed) {
                    let jump = item?;
                    if jump.location() > b {
                        break;
                    }
                    if jump.location() >= a {
                        out.push(jump);
                    }
                }
            }
        }
        Ok(out)
    }

    fn constant_between_jumps(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heaviside() -> StepDf {
        StepDf::from_masses(0.0, &[(0.0, 1.0)], Domain::WholeLine).unwrap()
    }

    #[test]
    fn heaviside_evaluation() {
        let f = heaviside();
        assert_eq!(f.evaluate(-0.5).unwrap(), 0.0);
        assert_eq!(f.evaluate(0.0).unwrap(), 1.0);
        assert_eq!(f.evaluate(0.5).unwrap(), 1.0);
    }

    #[test]
    fn value_at_is_returned_verbatim() {
        let jump = JumpPoint::new(0.0, 1.0, 0.25).unwrap();
        let f = StepDf::new(0.0, vec![jump], Domain::WholeLine, false).unwrap();
        assert_eq!(f.evaluate(0.0).unwrap(), 0.25);
    }

    #[test]
    fn one_sided_limits_at_and_off_jumps() {
        let f = heaviside();
        assert_eq!(f.one_sided_limits(0.0).unwrap(), (0.0, 1.0));
        assert_eq!(f.one_sided_limits(3.0).unwrap(), (1.0, 1.0));
        let g = StepDf::from_masses(2.0, &[], Domain::WholeLine).unwrap();
        assert_eq!(g.one_sided_limits(3.0).unwrap(), (2.0, 2.0));
    }

    #[test]
    fn empty_jump_list_is_legal() {
        let f = StepDf::from_masses(1.5, &[], Domain::WholeLine).unwrap();
        assert_eq!(f.evaluate(-7.0).unwrap(), 1.5);
        assert_eq!(f.evaluate(7.0).unwrap(), 1.5);
    }

    #[test]
    fn value_at_outside_plateau_interval_rejected() {
        let jump = JumpPoint::new(0.0, 1.0, 1.5).unwrap();
        let err = StepDf::new(0.0, vec![jump], Domain::WholeLine, false);
        assert!(matches!(err, Err(Error::ValueAtOutOfRange { .. })));
    }

    #[test]
    fn ordering_and_sign_rules() {
        let a = JumpPoint::new(1.0, 1.0, 1.0).unwrap();
        let b = JumpPoint::new(0.5, 1.0, 2.0).unwrap();
        assert!(matches!(
            StepDf::new(0.0, vec![a, b], Domain::WholeLine, false),
            Err(Error::JumpOrder { .. })
        ));
        let neg = JumpPoint::new(0.0, -1.0, -0.5).unwrap();
        assert!(matches!(
            StepDf::new(0.0, vec![neg], Domain::WholeLine, false),
            Err(Error::NegativeMass { .. })
        ));
        assert!(StepDf::new(0.0, vec![neg], Domain::WholeLine, true).is_ok());
    }

    #[test]
    fn plateau_bookkeeping_is_exact_over_many_jumps() {
        let masses: Vec<(f64, f64)> = (0..1000)
            .map(|h| (h as f64, 0.1 + (h % 7) as f64 * 0.05))
            .collect();
        let f = StepDf::from_masses(0.25, &masses, Domain::WholeLine).unwrap();
        let mut expected = 0.25;
        for (h, &(x, m)) in masses.iter().enumerate() {
            expected += m;
            assert_eq!(f.level_after(h), expected);
            assert_eq!(f.evaluate(x + 0.5).unwrap(), expected);
        }
    }

    #[test]
    fn tail_extends_evaluation_to_the_right() {
        // Geometric family: masses 2^-h at h = 1, 2, ..., 400.
        let materialized: Vec<(f64, f64)> = (1..=10).map(|h| (h as f64, 0.5f64.powi(h))).collect();
        let tail = JumpTail::new(
            |k| {
                let h = (k + 11) as i32;
                if h <= 400 {
                    let level: f64 = 1.0 - 0.5f64.powi(h);
                    Some(JumpPoint::new(h as f64, 0.5f64.powi(h), level).unwrap())
                } else {
                    None
                }
            },
            |k| 0.5f64.powi((k + 10) as i32),
        );
        let f = StepDf::from_masses(0.0, &materialized, Domain::WholeLine)
            .unwrap()
            .with_tail(tail)
            .unwrap();
        assert_eq!(f.evaluate(2.5).unwrap(), 0.75);
        let far = f.evaluate(120.5).unwrap();
        assert!((far - 1.0).abs() < 1e-30);
        let within = f.jumps_within(0.5, 12.5).unwrap();
        assert_eq!(within.len(), 12);
    }

    #[test]
    fn misordered_tail_is_a_generator_violation() {
        let tail = JumpTail::unbounded(|_| Some(JumpPoint::new(5.0, 1.0, 1.0).unwrap()));
        let f = StepDf::from_masses(0.0, &[(0.0, 1.0)], Domain::WholeLine)
            .unwrap()
            .with_tail(tail)
            .unwrap();
        assert!(matches!(
            f.jumps_within(0.0, 10.0),
            Err(Error::GeneratorViolation { .. })
        ));
    }

    #[test]
    fn domain_errors() {
        let f = StepDf::from_masses(0.0, &[(0.5, 1.0)], Domain::interval(0.0, 1.0).unwrap()).unwrap();
        assert!(matches!(f.evaluate(2.0), Err(Error::OutOfDomain { .. })));
        assert!(f.left_limit(0.0).is_err());
        assert!(f.right_limit(1.0).is_err());
        assert_eq!(f.right_limit(0.0).unwrap(), 0.0);
        assert_eq!(f.left_limit(1.0).unwrap(), 1.0);
    }
}
