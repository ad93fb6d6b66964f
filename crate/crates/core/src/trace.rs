//! Convergence traces and divergence witnesses.

use crate::error::{Error, Result};

/// One evaluated refinement level.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TraceRow {
    /// Refinement index.
    pub n: u32,
    /// Cell count of the partition.
    pub cells: usize,
    /// Partition modulus.
    pub mesh: f64,
    /// The Riemann-Stieltjes sum at this level.
    pub sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TraceVerdict {
    Converged { limit: f64, achieved_tol: f64 },
    NotConverged,
    DivergedWitnessed,
}

/// A sequence of Riemann-Stieltjes sums along a refinement, with cell counts
/// strictly increasing and meshes strictly decreasing.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConvergenceTrace {
    pub rows: Vec<TraceRow>,
    pub verdict: TraceVerdict,
}

impl ConvergenceTrace {
    pub fn new(rows: Vec<TraceRow>, verdict: TraceVerdict) -> Result<Self> {
        for pair in rows.windows(2) {
            if pair[1].cells <= pair[0].cells || pair[1].mesh >= pair[0].mesh {
                return Err(Error::InvalidGrid);
            }
        }
        Ok(ConvergenceTrace { rows, verdict })
    }

    pub fn last_sum(&self) -> Option<f64> {
        self.rows.last().map(|r| r.sum)
    }

    pub fn limit(&self) -> Option<f64> {
        match self.verdict {
            TraceVerdict::Converged { limit, .. } => Some(limit),
            _ => None,
        }
    }
}

/// Accumulates rows while keeping the trace invariants: a row that fails to
/// strictly grow cells or strictly shrink the mesh is dropped.
#[derive(Debug, Default)]
pub(crate) struct TraceBuilder {
    rows: Vec<TraceRow>,
}

impl TraceBuilder {
    pub fn new() -> Self {
        TraceBuilder { rows: Vec::new() }
    }

    pub fn push(&mut self, row: TraceRow) -> bool {
        if let Some(last) = self.rows.last() {
            if row.cells <= last.cells || row.mesh >= last.mesh {
                return false;
            }
        }
        self.rows.push(row);
        true
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    /// True when the last three recorded sums agree pairwise within `tol`.
    pub fn stabilized(&self, tol: f64) -> Option<f64> {
        if self.rows.len() < 3 {
            return None;
        }
        let tail = &self.rows[self.rows.len() - 3..];
        let spread = tail
            .iter()
            .map(|r| r.sum)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s), hi.max(s))
            });
        let spread = spread.1 - spread.0;
        (spread <= tol).then_some(spread)
    }

    pub fn finish(self, verdict: TraceVerdict) -> ConvergenceTrace {
        ConvergenceTrace {
            rows: self.rows,
            verdict,
        }
    }
}

/// Which side of the jump the tag is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagChoice {
    AtJump,
    BeforeJump,
    AfterJump,
}

/// The grid-and-tag construction that realizes one limit of the sums around
/// a shared discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "grids", rename_all = "kebab-case")]
pub enum TagRecipe {
    /// The jump is a grid point at every level; the two adjacent cells get
    /// their own tag choices (left cell: at or before; right cell: at or
    /// after).
    OnGrid { left: TagChoice, right: TagChoice },
    /// The jump stays strictly inside one cell at every level; that cell's
    /// tag is taken at, before, or after the jump.
    Interior { tag: TagChoice },
}

/// One limit value realized around the shared discontinuity, with the recipe
/// that produces it and the empirical trace that reproduces it.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RealizedLimit {
    pub value: f64,
    pub recipe: TagRecipe,
    pub trace: ConvergenceTrace,
}

/// Report proving that Riemann-Stieltjes sums admit several limits when the
/// integrand and the integrator jump at the same point.
///
/// `on_grid` enumerates the limits with the jump on the grid (sums of an
/// independent left-cell and right-cell choice); `interior` the three limits
/// with the jump interior to a cell. `degenerate` marks the case where every
/// enumerated limit coincides, so the report witnesses nothing.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WitnessReport {
    pub jump_location: f64,
    pub on_grid: Vec<RealizedLimit>,
    pub interior: Vec<RealizedLimit>,
    pub degenerate: bool,
}

impl WitnessReport {
    /// Distinct limit values over both cases, in ascending order.
    pub fn limit_set(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .on_grid
            .iter()
            .chain(self.interior.iter())
            .map(|l| l.value)
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        values
    }
}
