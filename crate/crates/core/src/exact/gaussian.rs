use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Ring};

/// An element of ℚ(i). Both parts are kept reduced by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `p/q + 0i`. Panics on `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        GaussianRational::real(BigRational::new(p.into(), q.into()))
    }

    pub fn i() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Upper bound for the modulus: |re| + |im|.
    pub fn abs_upper(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    /// Lower bound for the modulus: max(|re|, |im|).
    pub fn abs_lower(&self) -> BigRational {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact dyadic value of a finite float pair.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        Some(GaussianRational::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::real(BigRational::one())
    }
}

impl Ring for GaussianRational {
    fn from_int(n: i64) -> Self {
        GaussianRational::from_ints(n, 0)
    }
}

impl Field for GaussianRational {}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        GaussianRational::real(r)
    }
}

impl From<BigInt> for GaussianRational {
    fn from(n: BigInt) -> Self {
        GaussianRational::real(BigRational::from_integer(n))
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self.mul(&o.inv().expect("division by zero Gaussian rational"))
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
    };
}
forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);
forward_by_value!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_imag(r: &BigRational) -> String {
    if r.is_one() {
        "i".to_string()
    } else {
        format!("{}i", fmt_rat(r))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{}{}", sign, fmt_imag(&self.im.abs()))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}", fmt_rat(&self.re), sign, fmt_imag(&self.im.abs()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_identities() {
        let a = GaussianRational::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer(3.into()));
        let b = GaussianRational::from_ints(-2, 5);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
        assert_eq!(&a * &a.conj(), GaussianRational::real(a.norm_sqr()));
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn display() {
        assert_eq!(GaussianRational::ratio(1, 2).to_string(), "1/2");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!(GaussianRational::from_ints(1, -2).to_string(), "1 - 2i");
    }
}
