use num_traits::{One, Zero};

use super::FormalError;
use crate::connection::{ConnectionSystem, LaurentMatrix, LaurentPoly};
use crate::exact::{GaussianRational, Ring};

/// Element `Σ_j a_j·δ^j` of the Ore algebra over Laurent polynomials with
/// `δ·b = b·δ + δ(b)`. Unlike [`ScalarOperator`] it may be zero or of order 0.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPoly {
    coeffs: Vec<LaurentPoly>,
}

impl OperatorPoly {
    pub fn new(mut coeffs: Vec<LaurentPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OperatorPoly { coeffs }
    }

    pub fn zero() -> Self {
        OperatorPoly { coeffs: Vec::new() }
    }

    pub fn scalar(c: LaurentPoly) -> Self {
        OperatorPoly::new(vec![c])
    }

    /// `δ^j`.
    pub fn delta_pow(j: usize) -> Self {
        let mut coeffs = vec![LaurentPoly::zero(); j + 1];
        coeffs[j] = LaurentPoly::one();
        OperatorPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True when the operator is a multiplication by a Laurent polynomial.
    pub fn is_scalar(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &OperatorPoly) -> OperatorPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = LaurentPoly::zero();
        OperatorPoly::new(
            (0..n).map(|j| self.coeffs.get(j).unwrap_or(&zero) + o.coeffs.get(j).unwrap_or(&zero)).collect(),
        )
    }

    pub fn neg(&self) -> OperatorPoly {
        OperatorPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &OperatorPoly) -> OperatorPoly {
        self.add(&o.neg())
    }

    /// Ore product, using `δ^i·b = Σ_k C(i,k)·δ^k(b)·δ^(i−k)`.
    pub fn mul(&self, o: &OperatorPoly) -> OperatorPoly {
        if self.is_zero() || o.is_zero() {
            return OperatorPoly::zero();
        }
        let mut out = vec![LaurentPoly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut binom = 1i64;
                for k in 0..=i {
                    let term = b.delta_pow(k as u32).scale(&GaussianRational::from_int(binom));
                    out[i - k + j] = &out[i - k + j] + &(a * &term);
                    binom = binom * (i - k) as i64 / (k as i64 + 1);
                }
            }
        }
        OperatorPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> OperatorPoly {
        let mut acc = OperatorPoly::scalar(LaurentPoly::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `L = Σ_{j=0}^{r} a_j(z)·δ^j` with `r ≥ 1` and `a_r ≠ 0`.
///
/// When produced by the cyclic-vector reduction it carries the covector `c`
/// (so that `u = c·Y` satisfies `L(u) = 0`) and the nonzero determinant of
/// the rows `c, δc + cA, …`.
#[derive(Clone, Debug)]
pub struct ScalarOperator {
    coeffs: Vec<LaurentPoly>,
    covector: Option<Vec<LaurentPoly>>,
    wronskian: Option<LaurentPoly>,
}

impl PartialEq for ScalarOperator {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl ScalarOperator {
    pub fn new(coeffs: Vec<LaurentPoly>) -> Result<Self, FormalError> {
        let p = OperatorPoly::new(coeffs);
        match p.order() {
            None => Err(FormalError::InvalidOperator("the zero operator has no order".into())),
            Some(0) => Err(FormalError::InvalidOperator("operator has order 0".into())),
            Some(_) => Ok(ScalarOperator { coeffs: p.coeffs, covector: None, wronskian: None }),
        }
    }

    pub fn from_poly(p: OperatorPoly) -> Result<Self, FormalError> {
        ScalarOperator::new(p.coeffs)
    }

    pub fn with_covector(mut self, covector: Vec<LaurentPoly>, wronskian: LaurentPoly) -> Self {
        self.covector = Some(covector);
        self.wronskian = Some(wronskian);
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &LaurentPoly {
        &self.coeffs[j]
    }

    pub fn leading(&self) -> &LaurentPoly {
        &self.coeffs[self.order()]
    }

    pub fn covector(&self) -> Option<&[LaurentPoly]> {
        self.covector.as_deref()
    }

    pub fn wronskian(&self) -> Option<&LaurentPoly> {
        self.wronskian.as_ref()
    }

    pub fn as_poly(&self) -> OperatorPoly {
        OperatorPoly { coeffs: self.coeffs.clone() }
    }

    /// Divides every coefficient by the unit `c·z^v` where `c·z^v` is the
    /// lowest term of `a_r`. The result has `a_r` with trailing term `1·z^0`.
    pub fn normalized(&self) -> ScalarOperator {
        let lead = self.leading();
        let v = lead.valuation().expect("nonzero leading coefficient");
        let c = lead.trailing_coeff().expect("nonzero leading coefficient").inv().expect("nonzero");
        ScalarOperator {
            coeffs: self.coeffs.iter().map(|a| a.shift(-v).scale(&c)).collect(),
            covector: self.covector.clone(),
            wronskian: self.wronskian.clone(),
        }
    }

    /// Pullback along `z = u^m`: since `δ_z = δ_u / m`, each `a_j(z)·δ_z^j`
    /// becomes `a_j(u^m)·m^(−j)·δ_u^j`.
    pub fn ramify(&self, m: u32) -> Result<ScalarOperator, FormalError> {
        if m == 0 {
            return Err(FormalError::InvalidOperator("ramification index must be at least 1".into()));
        }
        let minv = GaussianRational::from_int(m as i64).inv().expect("nonzero");
        let mut factor = GaussianRational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.substitute_power(m as i64).scale(&factor));
            factor *= &minv;
        }
        Ok(ScalarOperator { coeffs, covector: None, wronskian: None })
    }

    /// Conjugation by an exponential: with `δ(f) = g`, the operator `L_g`
    /// satisfying `L(e^f·w) = e^f·L_g(w)` is `Σ a_j·(δ + g)^j`.
    pub fn twist(&self, g: &LaurentPoly) -> ScalarOperator {
        let shifted = OperatorPoly::new(vec![g.clone(), LaurentPoly::one()]);
        let mut acc = OperatorPoly::zero();
        let mut power = OperatorPoly::scalar(LaurentPoly::one());
        for a in &self.coeffs {
            acc = acc.add(&OperatorPoly::scalar(a.clone()).mul(&power));
            power = power.mul(&shifted);
        }
        ScalarOperator { coeffs: acc.coeffs, covector: None, wronskian: None }
    }

    /// Companion system for `Y = (u, δu, …, δ^(r−1)u)`. Requires `a_r` to be
    /// a monomial so that `a_j / a_r` stays a Laurent polynomial.
    pub fn companion(&self) -> Result<ConnectionSystem, FormalError> {
        let r = self.order();
        let (c, e) = self.leading().as_monomial().ok_or(FormalError::NonMonomialLeading)?;
        let inv = LaurentPoly::monomial(c.inv().expect("nonzero monomial"), -e);
        let mut m = LaurentMatrix::zeros(r, r);
        for i in 0..r - 1 {
            m[(i, i + 1)] = LaurentPoly::one();
        }
        for j in 0..r {
            m[(r - 1, j)] = -(&self.coeffs[j] * &inv);
        }
        Ok(ConnectionSystem::new(m, "companion")?)
    }
}
