//! The local model `z·Y′ = A(z)·Y` with Laurent-polynomial coefficients,
//! together with gauge transformations and ramified pullbacks.

mod gauge;
mod laurent;
mod ray;
mod system;

use thiserror::Error;

pub use gauge::{gauge_transform, GaugeTransform};
pub use laurent::LaurentPoly;
pub use ray::Ray;
pub use system::{evaluate_at, poincare_rank, ramified_pullback, ConnectionSystem, PoincareRank};

use crate::exact::Matrix;

/// Square matrix of Laurent polynomials.
pub type LaurentMatrix = Matrix<LaurentPoly>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("coefficient matrix must be square with positive size")]
    NotSquare,
    #[error("gauge matrix determinant {0} is not a unit c·z^k of the Laurent ring")]
    NonUnitGauge(String),
    #[error("ramification index must be at least 1")]
    ZeroRamification,
    #[error("evaluation at z = 0 hits the pole of the system")]
    Pole,
    #[error("invalid ray: {0}")]
    InvalidRay(String),
}
