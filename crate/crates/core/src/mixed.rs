//! Distribution functions that are continuous between their jumps.
//!
//! A `MixedDf` on `[a, b]` with jumps `x_1 < ... < x_p` strictly inside
//! carries one [`Segment`] per gap: the continuous restriction of F to
//! `]x_{h-1}, x_h[`, evaluable on the closed gap so that its endpoint values
//! are the one-sided limits `F(x_h -/+ 0)`.

use std::fmt;
use std::sync::Arc;

use crate::df::{DistributionFn, Domain, JumpPoint};
use crate::error::{Error, Result};
use crate::step::StepDf;

/// Tolerance for cross-checking segment endpoint values against jump masses.
/// Segments are opaque closures, so these consistency checks compare floats
/// computed on different paths and cannot demand bitwise equality.
pub const SEGMENT_CONSISTENCY_TOL: f64 = 1e-9;

/// Sample count per gap for the non-decreasing check in non-signed mode.
const MONOTONE_SAMPLES: usize = 64;

/// Continuous restriction of F to one gap, defined on the gap's closure.
#[derive(Clone)]
pub struct Segment {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Segment {{ .. }}")
    }
}

impl Segment {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Segment { f: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        Segment::new(move |_| c)
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteEvaluation { x })
        }
    }
}

/// A distribution function with jumps and continuous segments between them.
#[derive(Debug, Clone)]
pub struct MixedDf {
    jumps: Vec<JumpPoint>,
    /// segments[i] covers the i-th gap; there are jumps.len() + 1 gaps.
    segments: Vec<Segment>,
    a: f64,
    b: f64,
    signed: bool,
}

impl MixedDf {
    /// Builds a mixed df on `[a, b]`.
    ///
    /// Jumps must be strictly increasing and strictly inside `]a, b[`;
    /// `segments` must hold exactly `jumps.len() + 1` entries tiling the
    /// gaps in order. At every jump the segment endpoint values must
    /// reproduce the jump mass (`F(x+0) - F(x-0) = mass`) and bracket
    /// `value_at`. In non-signed mode masses must be positive and each
    /// segment is sample-checked for monotonicity.
    pub fn new(
        a: f64,
        b: f64,
        jumps: Vec<JumpPoint>,
        segments: Vec<Segment>,
        signed: bool,
    ) -> Result<Self> {
        Domain::interval(a, b)?;
        if segments.len() != jumps.len() + 1 {
            return Err(Error::SegmentCount {
                segments: segments.len(),
                jumps: jumps.len(),
            });
        }
        let mut previous: Option<f64> = None;
        for jump in &jumps {
            if !(a < jump.location() && jump.location() < b) {
                return Err(Error::OutOfDomain {
                    x: jump.location(),
                    domain: format!("the open interval ]{a}, {b}["),
                });
            }
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
            previous = Some(jump.location());
        }
        let df = MixedDf {
            jumps,
            segments,
            a,
            b,
            signed,
        };
        df.check_consistency()?;
        Ok(df)
    }

    /// Views a step df as a mixed df with constant segments on `[a, b]`.
    pub fn from_step(step: &StepDf, a: f64, b: f64) -> Result<Self> {
        Domain::interval(a, b)?;
        step.domain().check_contains(a)?;
        step.domain().check_contains(b)?;
        let jumps = step.jumps_within(a, b)?;
        if jumps.iter().any(|j| j.location() == a || j.location() == b) {
            return Err(Error::Unsupported(
                "step-to-mixed view needs the jumps strictly inside the interval".to_string(),
            ));
        }
        let mut segments = Vec::with_capacity(jumps.len() + 1);
        let mut level = step.right_limit(a)?;
        segments.push(Segment::constant(level));
        for jump in &jumps {
            level += jump.mass();
            segments.push(Segment::constant(level));
        }
        MixedDf::new(a, b, jumps, segments, step.signed())
    }

    pub fn jumps(&self) -> &[JumpPoint] {
        &self.jumps
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Bounds of the i-th gap (closure endpoints).
    pub fn gap_bounds(&self, index: usize) -> (f64, f64) {
        let lo = if index == 0 {
            self.a
        } else {
            self.jumps[index - 1].location()
        };
        let hi = if index == self.jumps.len() {
            self.b
        } else {
            self.jumps[index].location()
        };
        (lo, hi)
    }

    fn check_consistency(&self) -> Result<()> {
        for (i, jump) in self.jumps.iter().enumerate() {
            let x = jump.location();
            let left = self.segments[i].value(x)?;
            let right = self.segments[i + 1].value(x)?;
            let scale = 1.0_f64
                .max(left.abs())
                .max(right.abs())
                .max(jump.mass().abs());
            if ((right - left) - jump.mass()).abs() > SEGMENT_CONSISTENCY_TOL * scale {
                return Err(Error::SegmentMassMismatch {
                    location: x,
                    left_limit: left,
                    right_limit: right,
                    mass: jump.mass(),
                });
            }
            let (lo, hi) = if left <= right { (left, right) } else { (right, left) };
            let slack = SEGMENT_CONSISTENCY_TOL * scale;
            if jump.value_at() < lo - slack || jump.value_at() > hi + slack {
                return Err(Error::ValueAtOutOfRange {
                    location: x,
                    value_at: jump.value_at(),
                    left_limit: left,
                    right_limit: right,
                });
            }
        }
        if !self.signed {
            for i in 0..self.segments.len() {
                let (lo, hi) = self.gap_bounds(i);
                let mut prev = self.segments[i].value(lo)?;
                for k in 1..=MONOTONE_SAMPLES {
                    let t = lo + (hi - lo) * (k as f64 / MONOTONE_SAMPLES as f64);
                    let v = self.segments[i].value(t)?;
                    let scale = 1.0_f64.max(prev.abs()).max(v.abs());
                    if v < prev - SEGMENT_CONSISTENCY_TOL * scale {
                        return Err(Error::SegmentNotMonotone {
                            from: lo,
                            to: hi,
                            at: t,
                        });
                    }
                    prev = v;
                }
            }
        }
        Ok(())
    }

    /// Index of the gap whose closure contains `x` (jump locations excluded).
    fn gap_index(&self, x: f64) -> usize {
        self.jumps.partition_point(|j| j.location() < x)
    }
}

impl DistributionFn for MixedDf {
    fn domain(&self) -> Domain {
        Domain::Interval(self.a, self.b)
    }

    fn signed(&self) -> bool {
        self.signed
    }

    fn evaluate(&self, x: f64) -> Result<f64> {
        self.domain().check_contains(x)?;
        let idx = self.gap_index(x);
        if idx < self.jumps.len() && self.jumps[idx].location() == x {
            return Ok(self.jumps[idx].value_at());
        }
        self.segments[idx].value(x)
    }

    fn left_limit(&self, x: f64) -> Result<f64> {
        self.domain().check_contains(x)?;
        if x <= self.a {
            return Err(Error::OutOfDomain {
                x,
                domain: format!("left limits exist only right of {}", self.a),
            });
        }
        // The gap left of x: at a jump this picks the segment ending there.
        let idx = self.jumps.partition_point(|j| j.location() < x);
        self.segments[idx].value(x)
    }

    fn right_limit(&self, x: f64) -> Result<f64> {
        self.domain().check_contains(x)?;
        if x >= self.b {
            return Err(Error::OutOfDomain {
                x,
                domain: format!("right limits exist only left of {}", self.b),
            });
        }
        let idx = self.jumps.partition_point(|j| j.location() <= x);
        self.segments[idx].value(x)
    }

    fn jumps_within(&self, a: f64, b: f64) -> Result<Vec<JumpPoint>> {
        let lo = self.jumps.partition_point(|j| j.location() < a);
        let hi = self.jumps.partition_point(|j| j.location() <= b);
        Ok(self.jumps[lo..hi].to_vec())
    }

    fn constant_between_jumps(&self) -> bool {
        false
    }
}
