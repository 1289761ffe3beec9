use num_complex::Complex64;

use super::integrate::{integrate_path, NumericSystem, PathSpec};
use super::{approx_eigenvalues, CMatrix, NumericError};
use crate::connection::ConnectionSystem;

pub const DEFAULT_RADIUS: f64 = 0.5;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_SEGMENTS: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyResult {
    /// Continuation of `Y = I` once counterclockwise around 0 from `z = radius`.
    pub matrix: CMatrix,
    /// Sorted by `(re, im)`.
    pub eigenvalues: Vec<Complex64>,
    /// `‖M_N − M_2N‖_F` between `segments` and `2·segments` chords.
    pub residual: f64,
    /// Relative defect of `det M = exp(∮ tr(A)/z dz)`, with `det M` taken
    /// as the product of the chord determinants.
    pub wronskian_residual: f64,
    pub radius_used: f64,
    pub segments: usize,
}

pub fn numeric_monodromy(sys: &ConnectionSystem, radius: f64, tol: f64) -> Result<MonodromyResult, NumericError> {
    numeric_monodromy_with(sys, radius, tol, DEFAULT_SEGMENTS)
}

pub fn numeric_monodromy_with(
    sys: &ConnectionSystem,
    radius: f64,
    tol: f64,
    segments: usize,
) -> Result<MonodromyResult, NumericError> {
    if segments < DEFAULT_SEGMENTS {
        return Err(NumericError::InvalidPath(format!("monodromy loops need at least {DEFAULT_SEGMENTS} segments")));
    }
    let ns = NumericSystem::new(sys);
    let coarse = integrate_path(&ns, &PathSpec::closed_loop(radius, segments, tol)?)?;
    let fine = integrate_path(&ns, &PathSpec::closed_loop(radius, 2 * segments, tol)?)?;
    let eigenvalues = approx_eigenvalues(&fine.end)?;
    Ok(MonodromyResult {
        residual: coarse.end.sub(&fine.end).frobenius_norm(),
        wronskian_residual: fine.wronskian_residual(),
        matrix: fine.end,
        eigenvalues,
        radius_used: radius,
        segments,
    })
}
