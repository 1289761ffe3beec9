use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{fuchs_criterion, FormalError, ScalarOperator};
use crate::exact::{all_roots_real, GaussianRational, Poly};
use crate::numeric::poly_roots;

/// Indicial polynomial of a regular singular operator and its roots.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicialData {
    /// Monic, degree equal to the operator order.
    pub polynomial: Poly,
    /// Roots with multiplicity, sorted by `(re, im)`.
    pub exponents_numeric: Vec<Complex64>,
    /// Exact answer to "every root is real", via Sturm on `p·p̄`.
    pub all_real: bool,
}

impl IndicialData {
    /// Monodromy eigenvalues `e^(2πi·b)`, one per exponent.
    pub fn monodromy_eigenvalues(&self) -> Vec<Complex64> {
        self.exponents_numeric.iter().map(|b| (Complex64::new(0.0, std::f64::consts::TAU) * b).exp()).collect()
    }

    pub fn max_abs_exponent(&self) -> f64 {
        self.exponents_numeric.iter().map(|b| b.norm()).fold(0.0, f64::max)
    }
}

/// `p(x) = Σ_j coeff(a_j, z^v*)·x^j` with `v* = min_j v(a_j)`, made monic.
pub fn indicial_polynomial(l: &ScalarOperator) -> Result<IndicialData, FormalError> {
    if !fuchs_criterion(l) {
        return Err(FormalError::NotRegularSingular);
    }
    let v = l.leading().valuation().expect("a_r is nonzero");
    let p = Poly::new(l.coeffs().iter().map(|a| a.coeff(v)).collect()).monic();
    debug_assert_eq!(p.degree(), Some(l.order()));
    let all_real = all_roots_real(&p)?;
    let exponents_numeric = roots_with_multiplicity(&p)?;
    Ok(IndicialData { polynomial: p, exponents_numeric, all_real })
}

/// Numeric roots computed factor by factor of the squarefree decomposition,
/// so repeated roots are found as simple roots of a lower-degree factor.
pub fn roots_with_multiplicity(p: &Poly) -> Result<Vec<Complex64>, FormalError> {
    let mut out = Vec::new();
    for (f, k) in p.squarefree_decomposition() {
        for root in simple_roots(&f)? {
            out.extend(std::iter::repeat_n(root, k));
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// Numeric roots of a squarefree polynomial; linear factors are solved exactly.
pub fn simple_roots(f: &Poly) -> Result<Vec<Complex64>, FormalError> {
    if f.degree() == Some(1) {
        let root = -(&f.coeff(0) / &f.coeff(1));
        return Ok(vec![root.to_complex()]);
    }
    Ok(poly_roots(&f.to_complex_coeffs())?)
}

pub fn unitary_exponent_test(ind: &IndicialData) -> bool {
    ind.all_real
}

/// Disk `|x − center| < radius` containing exactly one root of a squarefree
/// factor of the indicial polynomial and no real point.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatingDisk {
    pub factor: Poly,
    pub center: GaussianRational,
    pub radius: BigRational,
    /// Set when the exact Rouché inequality held on the boundary circle.
    pub confirmed: bool,
}

impl IsolatingDisk {
    pub fn center_numeric(&self) -> Complex64 {
        self.center.to_complex()
    }

    pub fn radius_numeric(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.radius).unwrap_or(f64::NAN)
    }
}

/// Isolates the non-real root of largest imaginary part.
///
/// With `s(c + w) = Σ p_k·w^k`, the exact inequality
/// `max(|Re p_1|, |Im p_1|)·ρ > Σ_{k≠1} (|Re p_k| + |Im p_k|)·ρ^k` makes the
/// linear term dominate on `|w| = ρ`, so by Rouché `s` has exactly one root in
/// the disk. Requiring `|Im c| > ρ` keeps the disk off the real axis.
pub fn isolate_non_real_root(ind: &IndicialData) -> Result<Option<IsolatingDisk>, FormalError> {
    let mut best: Option<(Poly, Complex64)> = None;
    for (f, _) in ind.polynomial.squarefree_decomposition() {
        for root in simple_roots(&f)? {
            if best.as_ref().is_none_or(|(_, b)| root.im.abs() > b.im.abs()) {
                best = Some((f.clone(), root));
            }
        }
    }
    let Some((factor, root)) = best else {
        return Ok(None);
    };
    if root.im == 0.0 {
        return Ok(None);
    }
    let center = GaussianRational::from_complex(root).ok_or(FormalError::InvalidOperator("non-finite root".into()))?;
    let shifted = factor.taylor_shift(&center);
    let im_abs = center.im.abs();
    let mut radius = dyadic_below(&(&im_abs / BigRational::from_integer(2.into())));
    for _ in 0..40 {
        if radius < im_abs && rouche_holds(&shifted, &radius) {
            return Ok(Some(IsolatingDisk { factor, center, radius, confirmed: true }));
        }
        radius /= BigRational::from_integer(4.into());
    }
    let radius = dyadic_below(&(&im_abs / BigRational::from_integer(2.into())));
    Ok(Some(IsolatingDisk { factor, center, radius, confirmed: false }))
}

fn rouche_holds(shifted: &Poly, rho: &BigRational) -> bool {
    let c = shifted.coeffs();
    if c.len() < 2 {
        return false;
    }
    let lhs = c[1].abs_lower() * rho;
    let mut rhs = BigRational::zero();
    let mut pow = BigRational::one();
    for (k, pk) in c.iter().enumerate() {
        if k != 1 {
            rhs += pk.abs_upper() * &pow;
        }
        pow = &pow * rho;
    }
    lhs > rhs
}

/// Largest power of two not exceeding a positive rational.
fn dyadic_below(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mut p = BigRational::one();
    while &p > x {
        p /= &two;
    }
    while &(&p * &two) <= x {
        p *= &two;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::LaurentPoly;

    fn g(p: i64, q: i64) -> GaussianRational {
        GaussianRational::ratio(p, q)
    }

    fn c(x: GaussianRational) -> LaurentPoly {
        LaurentPoly::constant(x)
    }

    #[test]
    fn examples() {
        let l = ScalarOperator::new(vec![LaurentPoly::zero(), c(g(-1, 2)), LaurentPoly::one()]).unwrap();
        let ind = indicial_polynomial(&l).unwrap();
        assert_eq!(ind.polynomial, Poly::new(vec![g(0, 1), g(-1, 2), g(1, 1)]));
        assert!(ind.all_real && unitary_exponent_test(&ind));
        assert!((ind.exponents_numeric[1] - Complex64::new(0.5, 0.0)).norm() < 1e-15);

        let l = ScalarOperator::new(vec![c(-GaussianRational::i()), LaurentPoly::one()]).unwrap();
        let ind = indicial_polynomial(&l).unwrap();
        assert!(!ind.all_real);
        let disk = isolate_non_real_root(&ind).unwrap().unwrap();
        assert!(disk.confirmed);
        assert!((disk.center_numeric() - Complex64::i()).norm() < 1e-15);

        // δ² + zδ + z²
        let l = ScalarOperator::new(vec![LaurentPoly::z_pow(2), LaurentPoly::z_pow(1), LaurentPoly::one()]).unwrap();
        let ind = indicial_polynomial(&l).unwrap();
        assert_eq!(ind.polynomial, Poly::monomial(g(1, 1), 2));
        assert_eq!(ind.exponents_numeric, vec![Complex64::new(0.0, 0.0); 2]);
        assert!(ind.all_real);
    }

    #[test]
    fn irregular_is_rejected() {
        let l = ScalarOperator::new(vec![-LaurentPoly::z_pow(-1), LaurentPoly::one()]).unwrap();
        assert_eq!(indicial_polynomial(&l), Err(FormalError::NotRegularSingular));
    }

    #[test]
    fn disk_for_quadratic_pair() {
        // x² − 2x + 5, roots 1 ± 2i
        let p = Poly::new(vec![g(5, 1), g(-2, 1), g(1, 1)]);
        let ind =
            IndicialData { exponents_numeric: roots_with_multiplicity(&p).unwrap(), polynomial: p, all_real: false };
        let d = isolate_non_real_root(&ind).unwrap().unwrap();
        assert!(d.confirmed);
        assert!((d.center_numeric().im.abs() - 2.0).abs() < 1e-12);
        assert!(d.radius_numeric() < 2.0);
    }
}
