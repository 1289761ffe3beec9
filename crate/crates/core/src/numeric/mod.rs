//! Double-precision verification layer: eigenvalues, polynomial roots,
//! Taylor-series integration, monodromy, growth and oscillation probes.

mod cmatrix;
mod eigen;
mod growth;
mod integrate;
mod monodromy;
mod oscillation;

use thiserror::Error;

pub use cmatrix::CMatrix;
pub use eigen::{approx_eigenvalues, match_multisets, poly_roots};
pub use growth::{growth_probe, GrowthClass, GrowthReport, MAX_GROWTH_LEVELS, STABILITY_BAND, STABILITY_WINDOW};
pub use integrate::{
    continue_frame, integrate_fundamental, integrate_path, Integration, NumericSystem, PathKind, PathSpec,
    MIN_POLE_DISTANCE, OVERFLOW_NORM, TAYLOR_ORDER,
};
pub use monodromy::{
    numeric_monodromy, numeric_monodromy_with, MonodromyResult, DEFAULT_RADIUS, DEFAULT_SEGMENTS, DEFAULT_TOLERANCE,
};
pub use oscillation::{
    numeric_terms, oscillation_count, OscillationClass, OscillationReport, MAX_OSCILLATION_LEVELS, SAMPLES_PER_LEVEL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("non-finite value in numeric input")]
    NonFinite,
    #[error("QR iteration did not converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("step size underflow near z = {at}")]
    StepUnderflow { at: String },
    #[error("solution overflow near z = {at}")]
    Overflow { at: String },
    #[error("step budget of {0} exhausted")]
    StepBudget(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}
