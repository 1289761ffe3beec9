use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactError, Poly, RealPoly};

/// `p / gcd(p, p')`, made monic. The result has the same roots as `p`, all simple.
pub fn squarefree_part(p: &RealPoly) -> Result<RealPoly, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let g = RealPoly::gcd(p, &p.derivative());
    Ok(p.div_exact(&g).monic())
}

/// Clears denominators and removes the content, keeping the sign of the
/// leading coefficient.
fn primitive_integer(p: &RealPoly) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> =
        p.coeffs().iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    remove_content(ints)
}

fn remove_content(v: Vec<BigInt>) -> Vec<BigInt> {
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() || content.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &content).collect()
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Pseudo-remainder `lc(b)^t · a  mod  b`, returned with the exponent `t`
/// actually used (at most `deg a − deg b + 1`).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, usize) {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.to_vec();
    let mut t = 0;
    while r.len() > db && !r.is_empty() {
        t += 1;
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= lcb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lcr * bj;
        }
        r = trim(r);
    }
    (r, t)
}

fn sign_at_pos_inf(p: &[BigInt]) -> i32 {
    p.last().map_or(0, |c| if c.is_positive() { 1 } else { -1 })
}

fn sign_at_neg_inf(p: &[BigInt]) -> i32 {
    let s = sign_at_pos_inf(p);
    if (p.len() - 1) % 2 == 1 {
        -s
    } else {
        s
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm chain of `p` with integer coefficients, built from signed
/// pseudo-remainders with the content removed at every step.
///
/// Each element is a positive multiple of the corresponding element of the
/// classical chain `p, p', −rem(p, p'), …`, so sign counts are unchanged.
pub fn sturm_chain(p: &RealPoly) -> Result<Vec<Vec<BigInt>>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let p0 = primitive_integer(p);
    let p1 = primitive_integer(&p.derivative());
    let mut chain = vec![p0];
    if p1.is_empty() {
        return Ok(chain);
    }
    chain.push(p1);
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.len() == 1 {
            break;
        }
        let (prem, t) = pseudo_rem(a, b);
        if prem.is_empty() {
            break;
        }
        // prem = lc(b)^t · rem, so −rem has the sign of −sgn(lc)^t · prem
        let lc_neg = b.last().is_some_and(Signed::is_negative);
        let flip = !(lc_neg && t % 2 == 1);
        let next: Vec<BigInt> = if flip { prem.into_iter().map(|c| -c).collect() } else { prem };
        chain.push(remove_content(next));
    }
    Ok(chain)
}

/// Number of distinct real roots of a squarefree polynomial, from the sign
/// variations of its Sturm chain at −∞ and +∞.
pub fn sturm_real_root_count(p: &RealPoly) -> Result<usize, ExactError> {
    let chain = sturm_chain(p)?;
    if chain.last().is_some_and(|g| g.len() > 1) {
        return Err(ExactError::NotSquarefree);
    }
    let at_neg = variations(chain.iter().map(|q| sign_at_neg_inf(q)));
    let at_pos = variations(chain.iter().map(|q| sign_at_pos_inf(q)));
    Ok(at_neg - at_pos)
}

/// True iff every complex root of `p` is real.
///
/// The roots of the conjugate polynomial p̄ are the complex conjugates of the
/// roots of p, so P = p·p̄ has real coefficients and its root set is
/// roots(p) ∪ conj(roots(p)). Hence every root of p is real exactly when P
/// has only real roots, i.e. when the squarefree part of P has as many
/// distinct real roots as its degree.
pub fn all_roots_real(p: &Poly) -> Result<bool, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let prod = p * &p.conj();
    let real = prod.to_real().expect("p·p̄ has real coefficients");
    let sf = squarefree_part(&real)?;
    let deg = sf.degree().unwrap_or(0);
    Ok(sturm_real_root_count(&sf)? == deg)
}
