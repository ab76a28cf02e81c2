//! Error vocabulary shared by the solver modules.

use thiserror::Error;

/// A single violated admissibility condition found during model validation.
///
/// Validation never stops at the first problem: every violated condition is
/// reported, so a config with three bad fields produces three entries.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A physical constant is not strictly positive and finite.
    A1 { field: &'static str, value: f64 },
    /// The ambient moisture signal is malformed or negative.
    A2 { detail: String },
    /// The uptake curve (beta) is malformed.
    A3 { detail: String },
    /// The swelling curve (phi) is malformed or its cap exceeds the admissible level.
    A4 { detail: String },
    /// The initial state is inconsistent with the model bounds.
    A5 { detail: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::A1 { field, value } => {
                write!(f, "A1: `{field}` must be strictly positive and finite, got {value}")
            }
            Violation::A2 { detail } => write!(f, "A2: {detail}"),
            Violation::A3 { detail } => write!(f, "A3: {detail}"),
            Violation::A4 { detail } => write!(f, "A4: {detail}"),
            Violation::A5 { detail } => write!(f, "A5: {detail}"),
        }
    }
}

/// All admissibility violations found in a model spec.
#[derive(Debug, Clone, Error)]
pub struct ValidationError(pub Vec<Violation>);

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "model rejected, {} violation(s):", self.0.len())?;
        for v in &self.0 {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

impl ValidationError {
    /// True if some violation is of the given class ("A1".."A5").
    pub fn mentions(&self, class: &str) -> bool {
        self.0.iter().any(|v| match v {
            Violation::A1 { .. } => class == "A1",
            Violation::A2 { .. } => class == "A2",
            Violation::A3 { .. } => class == "A3",
            Violation::A4 { .. } => class == "A4",
            Violation::A5 { .. } => class == "A5",
        })
    }
}

/// Runtime failures of the transform, stepper, and fixed-point driver.
#[derive(Debug, Clone, Error)]
pub enum SolverError {
    /// A physical coordinate fell outside the wetted region [a, s].
    #[error("coordinate {z} outside the wetted region [{a}, {s}]")]
    OutsideDomain { z: f64, a: f64, s: f64 },

    /// The wetted region collapsed below the configured floor.
    #[error("front at s = {s} leaves a wetted width {width:.3e} below the floor {floor:.3e}")]
    DegenerateFront { s: f64, width: f64, floor: f64 },

    /// The boundary-flux iteration failed to settle within the iteration cap.
    #[error("picard iteration at t = {t:.6} stalled after {iterations} sweeps (last delta {delta:.3e})")]
    PicardDivergence { t: f64, iterations: usize, delta: f64 },

    /// The fixed-point driver exhausted its iteration budget.
    /// Carries the recorded contraction distances for diagnosis.
    #[error("fixed-point driver did not reach tolerance in {iterations} iterations (last distance {last_distance:.3e})")]
    NoConvergence {
        iterations: usize,
        last_distance: f64,
        distances: Vec<f64>,
    },

    /// An iterate escaped the admissible front set.
    #[error("admissibility guard tripped: {what}")]
    GuardTripped { what: String },

    /// Two discrete objects that must share a grid do not.
    #[error("mismatched grids: {detail}")]
    MismatchedGrids { detail: String },

    /// Guard constants passed to an estimate are unusable.
    #[error("bad guard constants: {reason}")]
    BadGuards { reason: String },

    /// A reference grid with too few cells to carry the boundary stencils.
    #[error("grid needs at least 4 cells, got {n}")]
    InvalidGrid { n: usize },

    /// A run artifact (CSV or report) could not be parsed back.
    #[error("malformed artifact: {detail}")]
    MalformedArtifact { detail: String },
}
