//! Exact arithmetic: Gaussian rationals, dense univariate polynomials,
//! small dense matrices over commutative rings, characteristic polynomials
//! and Sturm-sequence real-root counting.
//!
//! Nothing in here touches floating point except the explicit `to_complex`
//! style conversions used for reporting.

mod gaussian;
mod matrix;
mod poly;
mod sturm;

use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use gaussian::GaussianRational;
pub use matrix::{charpoly, Matrix};
pub use poly::{DensePoly, Poly, RealPoly};
pub use sturm::{all_roots_real, squarefree_part, sturm_chain, sturm_real_root_count};

/// Commutative ring with unit, as used by [`Matrix`] and [`DensePoly`].
pub trait Ring: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> {
    fn from_int(n: i64) -> Self;
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {}

impl Ring for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl Field for BigRational {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty matrix")]
    Empty,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree; apply squarefree_part first")]
    NotSquarefree,
}
