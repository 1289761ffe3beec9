use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::exact::{GaussianRational, Poly, Ring};

/// Laurent polynomial in `z` over ℚ(i): a finite map exponent → nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, GaussianRational>,
}

impl LaurentPoly {
    pub fn monomial(c: GaussianRational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    pub fn constant(c: GaussianRational) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    /// `z^e`
    pub fn z_pow(e: i64) -> Self {
        LaurentPoly::monomial(GaussianRational::one(), e)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, GaussianRational)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &GaussianRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> GaussianRational {
        self.terms.get(&e).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Lowest exponent; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of the lowest-order term.
    pub fn trailing_coeff(&self) -> Option<&GaussianRational> {
        self.terms.values().next()
    }

    /// `Some((c, k))` when the polynomial is the single term `c·z^k`, i.e. a unit.
    pub fn as_monomial(&self) -> Option<(&GaussianRational, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Euler derivation δ = z·d/dz.
    pub fn delta(&self) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, c * &GaussianRational::from_int(*e))))
    }

    /// δ applied `k` times: each term `c·z^e` becomes `e^k·c·z^e`.
    pub fn delta_pow(&self, k: u32) -> Self {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| {
            let f = GaussianRational::from_int(*e).pow(k);
            (*e, c * &f)
        }))
    }

    /// Ordinary derivative d/dz.
    pub fn derivative(&self) -> Self {
        self.delta().shift(-1)
    }

    /// Substitution z ↦ z^m.
    pub fn substitute_power(&self, m: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e * m, c.clone())).collect() }
    }

    pub fn conj(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect() }
    }

    pub fn eval_exact(&self, z: &GaussianRational) -> Option<GaussianRational> {
        let zinv = if self.valuation().is_some_and(|v| v < 0) { Some(z.inv()?) } else { None };
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 { z.pow(*e as u32) } else { zinv.as_ref()?.pow((-*e) as u32) };
            acc += &(c * &p);
        }
        Some(acc)
    }

    /// Double-precision evaluation at a nonzero point (or any point when there
    /// are no negative exponents).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|(e, c)| c.to_complex() * z.powi(*e as i32)).sum()
    }

    /// Writes `self = z^v · p(z)` with `p(0) ≠ 0`; `None` for zero.
    pub fn split_monomial(&self) -> Option<(i64, Poly)> {
        let v = self.valuation()?;
        let deg = (self.degree()? - v) as usize;
        let mut coeffs = vec![GaussianRational::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[(e - v) as usize] = c.clone();
        }
        Some((v, Poly::new(coeffs)))
    }

    pub fn from_poly(p: &Poly, shift: i64) -> Self {
        LaurentPoly::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| (k as i64 + shift, c.clone())))
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::constant(GaussianRational::one())
    }
}

impl Ring for LaurentPoly {
    fn from_int(n: i64) -> Self {
        LaurentPoly::constant(GaussianRational::from_int(n))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: i64, q: i64) -> GaussianRational {
        GaussianRational::ratio(p, q)
    }

    #[test]
    fn arithmetic_cancels_zero_terms() {
        let a = LaurentPoly::from_terms([(-1, g(1, 1)), (2, g(3, 1))]);
        let b = LaurentPoly::from_terms([(-1, g(-1, 1))]);
        let s = &a + &b;
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.valuation(), Some(2));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivations() {
        let a = LaurentPoly::from_terms([(-2, g(1, 1)), (0, g(5, 1)), (3, g(1, 2))]);
        assert_eq!(a.delta(), LaurentPoly::from_terms([(-2, g(-2, 1)), (3, g(3, 2))]));
        assert_eq!(a.derivative(), LaurentPoly::from_terms([(-3, g(-2, 1)), (2, g(3, 2))]));
        assert_eq!(a.delta_pow(2), a.delta().delta());
    }

    #[test]
    fn evaluation() {
        let a = LaurentPoly::z_pow(-1);
        assert!((a.eval(Complex64::new(2.0, 0.0)) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let b = &LaurentPoly::z_pow(1) + &LaurentPoly::one();
        assert!((b.eval(Complex64::i()) - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert_eq!(a.eval_exact(&g(2, 1)), Some(g(1, 2)));
        assert_eq!(a.eval_exact(&g(0, 1)), None);
    }

    #[test]
    fn split_and_rebuild() {
        let a = LaurentPoly::from_terms([(-2, g(1, 1)), (1, g(-7, 3))]);
        let (v, p) = a.split_monomial().unwrap();
        assert_eq!(v, -2);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(LaurentPoly::from_poly(&p, v), a);
    }
}
