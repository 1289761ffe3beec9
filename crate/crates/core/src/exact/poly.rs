use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Field, GaussianRational};

/// Dense univariate polynomial over a field, coefficients indexed by degree.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DensePoly<F> {
    coeffs: Vec<F>,
}

/// Polynomials over ℚ(i).
pub type Poly = DensePoly<GaussianRational>;
/// Polynomials over ℚ.
pub type RealPoly = DensePoly<BigRational>;

impl<F: Field> DensePoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DensePoly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        DensePoly::new(vec![c])
    }

    /// `c·x^deg`
    pub fn monomial(c: F, deg: usize) -> Self {
        let mut v = vec![F::zero(); deg + 1];
        v[deg] = c;
        DensePoly::new(v)
    }

    /// `x − root`
    pub fn linear_root(root: F) -> Self {
        DensePoly::new(vec![-root, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &F) -> Self {
        DensePoly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(lc) => {
                let inv = F::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        DensePoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * F::from_int(k as i64)).collect())
    }

    /// Euclidean division. Returns `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lc_inv = F::one() / divisor.lc()?.clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Some((DensePoly::zero(), DensePoly::zero()));
        };
        if nd < dd {
            return Some((DensePoly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() * lc_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((DensePoly::new(quot), DensePoly::new(rem)))
    }

    /// Exact quotient; panics if `divisor` is zero. The remainder is dropped.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).expect("division by zero polynomial").0
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's squarefree decomposition: pairs `(f_k, k)` with each `f_k`
    /// monic, squarefree, pairwise coprime and `p = c·Π f_k^k`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = DensePoly::gcd(self, &d);
        let mut b = self.div_exact(&a0);
        let c = d.div_exact(&a0);
        let mut dd = &c - &b.derivative();
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = DensePoly::gcd(&b, &dd);
            let nb = b.div_exact(&a);
            let nc = dd.div_exact(&a);
            dd = &nc - &nb.derivative();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.monic(), k));
            }
            b = nb;
            k += 1;
        }
        out
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> DensePoly<G> {
        DensePoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = DensePoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<F: Field> Add for &DensePoly<F> {
    type Output = DensePoly<F>;
    fn add(self, o: &DensePoly<F>) -> DensePoly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<F: Field> Sub for &DensePoly<F> {
    type Output = DensePoly<F>;
    fn sub(self, o: &DensePoly<F>) -> DensePoly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<F: Field> Mul for &DensePoly<F> {
    type Output = DensePoly<F>;
    fn mul(self, o: &DensePoly<F>) -> DensePoly<F> {
        if self.is_zero() || o.is_zero() {
            return DensePoly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        DensePoly::new(v)
    }
}

impl<F: Field> Neg for &DensePoly<F> {
    type Output = DensePoly<F>;
    fn neg(self) -> DensePoly<F> {
        DensePoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Poly {
    /// Coefficient-wise complex conjugate p̄, so that p̄(x̄) is the conjugate of p(x).
    pub fn conj(&self) -> Poly {
        self.map(|c| c.conj())
    }

    /// `Some` when every coefficient is real.
    pub fn to_real(&self) -> Option<RealPoly> {
        if self.coeffs.iter().all(|c| c.is_real()) {
            Some(self.map(|c| c.re.clone()))
        } else {
            None
        }
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_complex()).collect()
    }

    /// Coefficients of `p(center + w)` in powers of `w` (Taylor shift).
    pub fn taylor_shift(&self, center: &GaussianRational) -> Poly {
        let mut work = self.coeffs.clone();
        let n = work.len();
        // repeated synthetic division by (x - center)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &work[j + 1] * center;
                work[j] = &work[j] + &t;
            }
        }
        Poly::new(work)
    }
}

impl RealPoly {
    pub fn to_gaussian(&self) -> Poly {
        self.map(|c| GaussianRational::real(c.clone()))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Prints in the variable `x`, highest degree first, e.g. `x^2 - 1/2*x`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = split_sign(c);
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coef = if k > 0 && mag.is_one() {
                String::new()
            } else if !mag.re.is_zero() && !mag.im.is_zero() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            let star = if !coef.is_empty() && !var.is_empty() { "*" } else { "" };
            write!(f, "{sep}{coef}{star}{var}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_gaussian().fmt(f)
    }
}

/// Splits a coefficient into (negative?, magnitude-ish) for pretty printing:
/// real and pure-imaginary values get their sign pulled out.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    use num_traits::Signed;
    if c.im.is_zero() && c.re.is_negative() || c.re.is_zero() && c.im.is_negative() {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn rp(c: &[i64]) -> RealPoly {
        RealPoly::new(c.iter().map(|&v| q(v, 1)).collect())
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(RealPoly::zero().degree(), None);
        assert_eq!(rp(&[0, 0, 0]).degree(), None);
        assert_eq!(rp(&[3]).degree(), Some(0));
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = &rp(&[-1, 1]) * &rp(&[2, 1]);
        let b = &rp(&[-1, 1]) * &rp(&[-3, 1]);
        assert_eq!(RealPoly::gcd(&a, &b), rp(&[-1, 1]));
        let (qq, r) = a.div_rem(&rp(&[-1, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(qq, rp(&[2, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // x^3 (x-1)^2 (x+1)
        let p = &(&rp(&[0, 0, 0, 1]) * &rp(&[-1, 1]).pow(2)) * &rp(&[1, 1]);
        let dec = p.squarefree_decomposition();
        assert_eq!(dec, vec![(rp(&[1, 1]), 1), (rp(&[-1, 1]), 2), (rp(&[0, 1]), 3)]);
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = Poly::new(vec![
            GaussianRational::from_ints(1, 2),
            GaussianRational::from_ints(0, -1),
            GaussianRational::ratio(3, 2),
        ]);
        let c = GaussianRational::from_ints(2, 1);
        let s = p.taylor_shift(&c);
        assert_eq!(s.coeff(0), p.eval(&c));
        assert_eq!(s.coeff(1), p.derivative().eval(&c));
        assert_eq!(s.coeff(2), p.coeff(2));
    }

    #[test]
    fn display_forms() {
        let p = Poly::new(vec![GaussianRational::zero(), GaussianRational::ratio(-1, 2), GaussianRational::one()]);
        assert_eq!(p.to_string(), "x^2 - 1/2*x");
        let p = Poly::new(vec![-GaussianRational::i(), GaussianRational::one()]);
        assert_eq!(p.to_string(), "x - i");
    }
}
