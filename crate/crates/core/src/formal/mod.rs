//! Exact local analysis at `z = 0`: cyclic-vector reduction, Newton polygon,
//! leading exponential terms, indicial exponents and the definability verdict.

mod cyclic;
mod exponential;
mod indicial;
mod newton;
mod operator;
mod verdict;

use thiserror::Error;

pub use cyclic::{cyclic_vector_operator, try_covector, CYCLIC_SEARCH_CAP};
pub use exponential::{
    edge_polynomial, leading_exponential_terms, q_modulus, LeadingCoefficient, LeadingExponentials, LeadingTerm,
};
pub use indicial::{
    indicial_polynomial, isolate_non_real_root, roots_with_multiplicity, simple_roots, unitary_exponent_test,
    IndicialData, IsolatingDisk,
};
pub use newton::{fuchs_criterion, newton_polygon_slopes, NewtonEdge, NewtonPolygon};
pub use operator::{OperatorPoly, ScalarOperator};
pub use verdict::{
    analyze_formal, decide_definable, is_regular_singular, witness_direction, Certificate, DefinabilityVerdict,
    FormalAnalysis, WitnessDirection,
};

use crate::connection::ModelError;
use crate::exact::ExactError;
use crate::numeric::NumericError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormalError {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("companion form needs a monomial leading coefficient")]
    NonMonomialLeading,
    #[error("no cyclic covector among the first {candidates} candidates")]
    CyclicSearchExhausted { candidates: usize },
    #[error("operator is not regular singular; use the leading exponential terms instead")]
    NotRegularSingular,
    #[error("operator is regular singular; it has no leading exponential terms")]
    RegularSingularInput,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
