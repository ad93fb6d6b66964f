//! Integral outcomes in the extended reals, with existence semantics.

use crate::extended::ExtendedReal;
use crate::trace::WitnessReport;

/// Existence status of an integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Finite,
    PosInfinite,
    NegInfinite,
    /// Both the positive and the negative part diverge; no value exists.
    UndefinedIndeterminate,
    /// Riemann-Stieltjes sums admit several limits; carries the witness.
    RsDivergent,
}

/// Numeric evidence attached to a result.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct Diagnostics {
    pub notes: Vec<String>,
    /// Atom terms consumed, for sums over jump families.
    pub terms_used: Option<usize>,
    /// Window values evaluated, for improper integrals.
    pub window_values: Option<Vec<f64>>,
}

impl Diagnostics {
    pub fn note(text: impl Into<String>) -> Self {
        Diagnostics {
            notes: vec![text.into()],
            ..Diagnostics::default()
        }
    }
}

/// The value of an integral together with its existence status. A value is
/// present exactly when the status is determinate; the indeterminate and
/// divergent outcomes carry none.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralResult {
    Finite { value: f64, diagnostics: Diagnostics },
    PosInfinite { diagnostics: Diagnostics },
    NegInfinite { diagnostics: Diagnostics },
    UndefinedIndeterminate { diagnostics: Diagnostics },
    RsDivergent { witness: WitnessReport, diagnostics: Diagnostics },
}

impl IntegralResult {
    pub fn finite(value: f64) -> Self {
        IntegralResult::Finite {
            value,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn status(&self) -> Status {
        match self {
            IntegralResult::Finite { .. } => Status::Finite,
            IntegralResult::PosInfinite { .. } => Status::PosInfinite,
            IntegralResult::NegInfinite { .. } => Status::NegInfinite,
            IntegralResult::UndefinedIndeterminate { .. } => Status::UndefinedIndeterminate,
            IntegralResult::RsDivergent { .. } => Status::RsDivergent,
        }
    }

    /// The extended-real value, absent for indeterminate/divergent outcomes.
    pub fn value(&self) -> Option<ExtendedReal> {
        match self {
            IntegralResult::Finite { value, .. } => Some(ExtendedReal::Finite(*value)),
            IntegralResult::PosInfinite { .. } => Some(ExtendedReal::PosInfinity),
            IntegralResult::NegInfinite { .. } => Some(ExtendedReal::NegInfinity),
            _ => None,
        }
    }

    pub fn finite_value(&self) -> Option<f64> {
        match self {
            IntegralResult::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        match self {
            IntegralResult::Finite { diagnostics, .. }
            | IntegralResult::PosInfinite { diagnostics }
            | IntegralResult::NegInfinite { diagnostics }
            | IntegralResult::UndefinedIndeterminate { diagnostics }
            | IntegralResult::RsDivergent { diagnostics, .. } => diagnostics,
        }
    }

    pub fn witness(&self) -> Option<&WitnessReport> {
        match self {
            IntegralResult::RsDivergent { witness, .. } => Some(witness),
            _ => None,
        }
    }
}
