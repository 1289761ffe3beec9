use num_traits::One;

use super::{ConnectionSystem, LaurentMatrix, LaurentPoly, ModelError};
use crate::exact::GaussianRational;

/// A meromorphic gauge `P` whose determinant is a unit `c·z^k` of the
/// Laurent ring, so `P⁻¹` again has Laurent-polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform {
    matrix: LaurentMatrix,
    det_coeff: GaussianRational,
    det_exponent: i64,
}

impl GaugeTransform {
    pub fn new(matrix: LaurentMatrix) -> Result<Self, ModelError> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(ModelError::NotSquare);
        }
        let det = matrix.det().map_err(|_| ModelError::NotSquare)?;
        let (c, k) = det
            .as_monomial()
            .map(|(c, k)| (c.clone(), k))
            .ok_or_else(|| ModelError::NonUnitGauge(format!("{det:?}")))?;
        Ok(GaugeTransform { matrix, det_coeff: c, det_exponent: k })
    }

    pub fn identity(n: usize) -> Self {
        GaugeTransform { matrix: LaurentMatrix::identity(n), det_coeff: GaussianRational::one(), det_exponent: 0 }
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// `det P = c·z^k`, as `(c, k)`.
    pub fn determinant(&self) -> (&GaussianRational, i64) {
        (&self.det_coeff, self.det_exponent)
    }

    /// `P⁻¹ = adj(P) · c⁻¹ · z^(−k)`.
    pub fn inverse(&self) -> GaugeTransform {
        let cinv = self.det_coeff.inv().expect("unit determinant");
        let unit_inv = LaurentPoly::monomial(cinv.clone(), -self.det_exponent);
        let adj = self.matrix.adjugate().expect("square gauge");
        GaugeTransform { matrix: adj.map(|p| p * &unit_inv), det_coeff: cinv, det_exponent: -self.det_exponent }
    }

    pub fn compose(&self, other: &GaugeTransform) -> GaugeTransform {
        GaugeTransform {
            matrix: self.matrix.mul(&other.matrix),
            det_coeff: &self.det_coeff * &other.det_coeff,
            det_exponent: self.det_exponent + other.det_exponent,
        }
    }
}

/// `A ↦ P⁻¹·A·P − z·P⁻¹·P′`, computed exactly.
pub fn gauge_transform(sys: &ConnectionSystem, p: &GaugeTransform) -> Result<ConnectionSystem, ModelError> {
    if p.rank() != sys.rank() {
        return Err(ModelError::Dimension { expected: sys.rank(), found: p.rank() });
    }
    let pinv = p.inverse();
    let conj = pinv.matrix.mul(sys.matrix()).mul(&p.matrix);
    let z_dp = p.matrix.map(|e| e.delta());
    let correction = pinv.matrix.mul(&z_dp);
    ConnectionSystem::new(conj.sub(&correction), sys.label.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;
    use num_traits::Zero;

    fn g(p: i64, q: i64) -> GaussianRational {
        GaussianRational::ratio(p, q)
    }

    fn mono(c: GaussianRational, e: i64) -> LaurentPoly {
        LaurentPoly::monomial(c, e)
    }

    fn lm(rows: Vec<Vec<LaurentPoly>>) -> LaurentMatrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_gauge_is_neutral() {
        let a = ConnectionSystem::from_rows(vec![
            vec![LaurentPoly::z_pow(-2), mono(g(1, 2), 1)],
            vec![mono(g(3, 1), 0), LaurentPoly::zero()],
        ])
        .unwrap();
        assert_eq!(gauge_transform(&a, &GaugeTransform::identity(2)).unwrap(), a);
    }

    #[test]
    fn scalar_monomial_gauge_shifts_by_k() {
        let a = ConnectionSystem::from_rows(vec![vec![&LaurentPoly::z_pow(-1) + &mono(g(2, 3), 2)]]).unwrap();
        let p = GaugeTransform::new(lm(vec![vec![LaurentPoly::z_pow(3)]])).unwrap();
        let b = gauge_transform(&a, &p).unwrap();
        assert_eq!(b.entry(0, 0), &(a.entry(0, 0) - &mono(g(3, 1), 0)));
    }

    #[test]
    fn diagonal_gauge_on_zero_system() {
        let a = ConnectionSystem::zero(2).unwrap();
        let p = GaugeTransform::new(lm(vec![
            vec![LaurentPoly::z_pow(1), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), LaurentPoly::one()],
        ]))
        .unwrap();
        let b = gauge_transform(&a, &p).unwrap();
        assert_eq!(b.entry(0, 0), &mono(g(-1, 1), 0));
        assert!(b.entry(0, 1).is_zero() && b.entry(1, 0).is_zero() && b.entry(1, 1).is_zero());
    }

    #[test]
    fn hand_computed_triangular_gauge() {
        // diag(1/2, 1/3) under P = [[1, 1/z], [0, z]] gives [[1/2, (13/6)/z], [0, -2/3]]
        let a = ConnectionSystem::from_rows(vec![
            vec![mono(g(1, 2), 0), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), mono(g(1, 3), 0)],
        ])
        .unwrap();
        let p = GaugeTransform::new(lm(vec![
            vec![LaurentPoly::one(), LaurentPoly::z_pow(-1)],
            vec![LaurentPoly::zero(), LaurentPoly::z_pow(1)],
        ]))
        .unwrap();
        let b = gauge_transform(&a, &p).unwrap();
        assert_eq!(b.entry(0, 0), &mono(g(1, 2), 0));
        assert_eq!(b.entry(0, 1), &mono(g(13, 6), -1));
        assert!(b.entry(1, 0).is_zero());
        assert_eq!(b.entry(1, 1), &mono(g(-2, 3), 0));
    }

    #[test]
    fn rejects_non_unit_and_mismatched() {
        let bad = lm(vec![vec![&LaurentPoly::one() + &LaurentPoly::z_pow(1)]]);
        assert!(matches!(GaugeTransform::new(bad), Err(ModelError::NonUnitGauge(_))));
        let a = ConnectionSystem::zero(2).unwrap();
        assert_eq!(
            gauge_transform(&a, &GaugeTransform::identity(3)),
            Err(ModelError::Dimension { expected: 2, found: 3 })
        );
    }
}
