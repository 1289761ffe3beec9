use num_complex::Complex64;
use num_traits::Zero;

use super::{LaurentMatrix, LaurentPoly, ModelError};
use crate::exact::{GaussianRational, Matrix, Ring};
use crate::numeric::CMatrix;

/// The system `z·Y′ = A(z)·Y` at `z = 0`, with `A` a square matrix of
/// Laurent polynomials over ℚ(i).
///
/// Equality compares rank and matrix only; the label is free-form metadata.
#[derive(Clone, Debug)]
pub struct ConnectionSystem {
    matrix: LaurentMatrix,
    pub label: String,
}

impl PartialEq for ConnectionSystem {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl ConnectionSystem {
    pub fn new(matrix: LaurentMatrix, label: impl Into<String>) -> Result<Self, ModelError> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(ModelError::NotSquare);
        }
        Ok(ConnectionSystem { matrix, label: label.into() })
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, ModelError> {
        let m = Matrix::from_rows(rows).ok_or(ModelError::NotSquare)?;
        ConnectionSystem::new(m, "")
    }

    /// Constant system `A(z) = B`.
    pub fn constant(b: &Matrix<GaussianRational>) -> Result<Self, ModelError> {
        ConnectionSystem::new(b.map(|c| LaurentPoly::constant(c.clone())), "")
    }

    pub fn zero(rank: usize) -> Result<Self, ModelError> {
        ConnectionSystem::new(Matrix::zeros(rank, rank), "")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.matrix[(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Smallest exponent over all entries; `None` for the zero system.
    pub fn valuation(&self) -> Option<i64> {
        self.matrix.entries().filter_map(LaurentPoly::valuation).min()
    }

    /// Coefficient matrix of `z^e` in `A`.
    pub fn coefficient(&self, e: i64) -> Matrix<GaussianRational> {
        self.matrix.map(|p| p.coeff(e))
    }

    /// True when `A` has no negative powers, i.e. the system has at most a
    /// simple pole in the `Y′ = (A/z)·Y` normalisation.
    pub fn is_logarithmic(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    pub fn trace(&self) -> LaurentPoly {
        self.matrix.trace()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoincareRank {
    pub order: u64,
    /// Set for the zero system, where the order is reported as 0.
    pub trivial: bool,
}

/// Pole order of `A`: `max(0, −min valuation)`.
pub fn poincare_rank(sys: &ConnectionSystem) -> PoincareRank {
    match sys.valuation() {
        None => PoincareRank { order: 0, trivial: true },
        Some(v) => PoincareRank { order: (-v).max(0) as u64, trivial: false },
    }
}

/// Pullback along `z ↦ z^m`: `A(z)` becomes `m·A(z^m)`.
pub fn ramified_pullback(sys: &ConnectionSystem, m: u32) -> Result<ConnectionSystem, ModelError> {
    if m == 0 {
        return Err(ModelError::ZeroRamification);
    }
    let factor = GaussianRational::from_int(m as i64);
    let matrix = sys.matrix.map(|p| p.substitute_power(m as i64).scale(&factor));
    Ok(ConnectionSystem { matrix, label: sys.label.clone() })
}

/// Entrywise double-precision evaluation of `A(z0)`.
pub fn evaluate_at(sys: &ConnectionSystem, z0: Complex64) -> Result<CMatrix, ModelError> {
    if z0.is_zero() {
        return Err(ModelError::Pole);
    }
    let n = sys.rank();
    Ok(CMatrix::from_fn(n, |i, j| sys.matrix[(i, j)].eval(z0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64) -> GaussianRational {
        GaussianRational::ratio(p, q)
    }

    fn mono(c: GaussianRational, e: i64) -> LaurentPoly {
        LaurentPoly::monomial(c, e)
    }

    #[test]
    fn poincare_rank_examples() {
        let a = ConnectionSystem::from_rows(vec![vec![LaurentPoly::z_pow(-1)]]).unwrap();
        assert_eq!(poincare_rank(&a).order, 1);
        let b = ConnectionSystem::from_rows(vec![
            vec![mono(g(1, 2), 0), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), mono(g(1, 3), 0)],
        ])
        .unwrap();
        assert_eq!(poincare_rank(&b).order, 0);
        let c = ConnectionSystem::from_rows(vec![
            vec![LaurentPoly::z_pow(-3), LaurentPoly::zero()],
            vec![LaurentPoly::z_pow(0), LaurentPoly::z_pow(1)],
        ])
        .unwrap();
        assert_eq!(poincare_rank(&c).order, 3);
        let z = ConnectionSystem::zero(2).unwrap();
        assert_eq!(poincare_rank(&z), PoincareRank { order: 0, trivial: true });
    }

    #[test]
    fn pullback_examples() {
        let a = ConnectionSystem::from_rows(vec![vec![LaurentPoly::z_pow(-1)]]).unwrap();
        let p = ramified_pullback(&a, 2).unwrap();
        assert_eq!(p.entry(0, 0), &mono(g(2, 1), -2));
        assert_eq!(ramified_pullback(&a, 1).unwrap(), a);
        let h = ConnectionSystem::from_rows(vec![vec![mono(g(1, 2), 0)]]).unwrap();
        assert_eq!(ramified_pullback(&h, 3).unwrap().entry(0, 0), &mono(g(3, 2), 0));
        assert_eq!(ramified_pullback(&a, 0), Err(ModelError::ZeroRamification));
    }

    #[test]
    fn evaluate_examples() {
        let a = ConnectionSystem::from_rows(vec![vec![LaurentPoly::z_pow(-1)]]).unwrap();
        let v = evaluate_at(&a, Complex64::new(2.0, 0.0)).unwrap();
        assert!((v[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let b = ConnectionSystem::from_rows(vec![vec![&LaurentPoly::z_pow(1) + &LaurentPoly::z_pow(0)]]).unwrap();
        let v = evaluate_at(&b, Complex64::i()).unwrap();
        assert!((v[(0, 0)] - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        let z = ConnectionSystem::zero(3).unwrap();
        assert_eq!(evaluate_at(&z, Complex64::new(0.3, -2.0)).unwrap(), CMatrix::zeros(3));
        assert_eq!(evaluate_at(&a, Complex64::new(0.0, 0.0)), Err(ModelError::Pole));
    }
}
