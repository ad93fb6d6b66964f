//! Extended-real values: finite reals plus the two infinities.
//!
//! Integral existence statements live in the extended reals. NaN is never an
//! admissible value; constructors reject it.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
    NegInfinity,
}

impl ExtendedReal {
    /// Wraps a finite real. Rejects NaN and the infinities, which must be
    /// expressed through the dedicated variants.
    pub fn finite(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(ExtendedReal::Finite(value))
        } else {
            Err(Error::NonFiniteJump {
                value,
                context: "extended-real finite constructor".to_string(),
            })
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInfinity => write!(f, "+inf"),
            ExtendedReal::NegInfinity => write!(f, "-inf"),
        }
    }
}
