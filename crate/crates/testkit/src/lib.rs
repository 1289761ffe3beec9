//! Seeded random inputs shared by the property tests and the acceptance
//! suite. Every generator is a plain function of an RNG so that a failing
//! case can be replayed from its seed.

use connexion::connection::{ConnectionSystem, GaugeTransform, LaurentMatrix, LaurentPoly};
use connexion::exact::{GaussianRational, Matrix, Poly};
use connexion::formal::ScalarOperator;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound.max(1));
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let q = rational(rng, bound);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Real with probability `1 − p_complex`, otherwise with a random imaginary part.
pub fn gaussian<R: Rng>(rng: &mut R, bound: i64, p_complex: f64) -> GaussianRational {
    let re = rational(rng, bound);
    let im = if rng.gen_bool(p_complex) { rational(rng, bound) } else { BigRational::zero() };
    GaussianRational::new(re, im)
}

pub fn nonzero_gaussian<R: Rng>(rng: &mut R, bound: i64, p_complex: f64) -> GaussianRational {
    loop {
        let c = gaussian(rng, bound, p_complex);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Shape of a random Laurent-polynomial matrix.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_rank: usize,
    pub min_exp: i64,
    pub max_exp: i64,
    /// Probability that an entry is nonzero.
    pub density: f64,
    pub max_terms: usize,
    /// Bound on numerators and denominators.
    pub bound: i64,
    pub p_complex: f64,
}

impl Shape {
    pub const SMALL: Shape =
        Shape { max_rank: 3, min_exp: -2, max_exp: 2, density: 0.6, max_terms: 2, bound: 3, p_complex: 0.2 };
}

pub fn laurent<R: Rng>(rng: &mut R, shape: &Shape) -> LaurentPoly {
    let n = rng.gen_range(1..=shape.max_terms.max(1));
    LaurentPoly::from_terms(
        (0..n).map(|_| (rng.gen_range(shape.min_exp..=shape.max_exp), gaussian(rng, shape.bound, shape.p_complex))),
    )
}

pub fn laurent_matrix<R: Rng>(rng: &mut R, r: usize, shape: &Shape) -> LaurentMatrix {
    let rows = (0..r)
        .map(|_| {
            (0..r)
                .map(|_| if rng.gen_bool(shape.density) { laurent(rng, shape) } else { LaurentPoly::zero() })
                .collect()
        })
        .collect();
    LaurentMatrix::from_rows(rows).expect("square")
}

pub fn system<R: Rng>(rng: &mut R, shape: &Shape) -> ConnectionSystem {
    let r = rng.gen_range(1..=shape.max_rank);
    ConnectionSystem::new(laurent_matrix(rng, r, shape), "random").expect("square")
}

fn random_matrix(r: usize, mut entry: impl FnMut() -> GaussianRational) -> Matrix<GaussianRational> {
    Matrix::from_rows((0..r).map(|_| (0..r).map(|_| entry()).collect()).collect()).expect("square")
}

fn is_nilpotent(m: &Matrix<GaussianRational>) -> bool {
    let mut p = m.clone();
    for _ in 1..m.rows() {
        p = p.mul(m);
    }
    p.is_zero()
}

/// `A = z^(−k)·A_0 + (terms of higher order)` with `k ≥ 1` and `A_0` not
/// nilpotent, which forces a Newton slope equal to `k`.
pub fn irregular_system<R: Rng>(rng: &mut R, max_rank: usize, max_pole: i64) -> ConnectionSystem {
    let r = rng.gen_range(1..=max_rank);
    let k = rng.gen_range(1..=max_pole);
    let lead = loop {
        let m = random_matrix(r, || if rng.gen_bool(0.6) { gaussian(rng, 3, 0.2) } else { GaussianRational::zero() });
        if !is_nilpotent(&m) {
            break m;
        }
    };
    let tail_shape = Shape { min_exp: 1 - k, max_exp: 1, density: 0.4, max_terms: 2, ..Shape::SMALL };
    let tail = laurent_matrix(rng, r, &tail_shape);
    let matrix = LaurentMatrix::from_fn(r, r, |i, j| &LaurentPoly::monomial(lead[(i, j)].clone(), -k) + &tail[(i, j)]);
    ConnectionSystem::new(matrix, "irregular").expect("square")
}

/// Constant system `B` with real and imaginary parts in `{n/4 : |n| ≤ 5}`,
/// so every entry has modulus below 2.
pub fn constant_system<R: Rng>(rng: &mut R, max_rank: usize) -> ConnectionSystem {
    let r = rng.gen_range(1..=max_rank);
    let quarter = |rng: &mut R| BigRational::new(BigInt::from(rng.gen_range(-5..=5)), BigInt::from(4));
    let b = random_matrix(r, || {
        let re = quarter(rng);
        GaussianRational::new(re, if rng.gen_bool(0.5) { quarter(rng) } else { BigRational::zero() })
    });
    ConnectionSystem::constant(&b).expect("square")
}

/// A product of elementary transvections `I + c·z^e·E_ij` with `i ≠ j` and
/// `e ∈ [−1, 1]`, optionally times `diag(z^a, z^−a, 1, …)`; determinant 1.
pub fn unit_gauge<R: Rng>(rng: &mut R, r: usize) -> GaugeTransform {
    let mut p = LaurentMatrix::identity(r);
    if r >= 2 {
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..r);
            let j = (i + rng.gen_range(1..r)) % r;
            let mut e = LaurentMatrix::identity(r);
            e[(i, j)] = LaurentPoly::monomial(nonzero_gaussian(rng, 2, 0.2), rng.gen_range(-1..=1));
            p = p.mul(&e);
        }
        if rng.gen_bool(0.3) {
            let a = rng.gen_range(-1..=1);
            let mut d = LaurentMatrix::identity(r);
            d[(0, 0)] = LaurentPoly::z_pow(a);
            d[(1, 1)] = LaurentPoly::z_pow(-a);
            p = p.mul(&d);
        }
    }
    GaugeTransform::new(p).expect("transvections have determinant 1")
}

/// Scalar operator of order `1..=max_order` with nonzero leading coefficient.
pub fn operator<R: Rng>(rng: &mut R, max_order: usize, shape: &Shape) -> ScalarOperator {
    let n = rng.gen_range(1..=max_order);
    let mut coeffs: Vec<LaurentPoly> =
        (0..n).map(|_| if rng.gen_bool(shape.density) { laurent(rng, shape) } else { LaurentPoly::zero() }).collect();
    let lead = loop {
        let c = laurent(rng, shape);
        if !c.is_zero() {
            break c;
        }
    };
    coeffs.push(lead);
    ScalarOperator::new(coeffs).expect("leading coefficient is nonzero")
}

/// Operator whose leading coefficient is a monomial, as the companion
/// construction requires.
pub fn monomial_operator<R: Rng>(rng: &mut R, max_order: usize, shape: &Shape) -> ScalarOperator {
    let op = operator(rng, max_order, shape);
    let mut coeffs = op.coeffs().to_vec();
    let r = coeffs.len() - 1;
    coeffs[r] = LaurentPoly::monomial(nonzero_gaussian(rng, shape.bound, shape.p_complex), rng.gen_range(0..=1));
    ScalarOperator::new(coeffs).expect("leading coefficient is nonzero")
}

/// A polynomial of degree `1..=max_degree` built from factors whose root
/// type is known, together with whether all its roots are real.
///
/// Factors: `x − a` with `a ∈ ℚ`; `x² + p·x + q` with `p² > 4q` (two real,
/// possibly irrational roots) or `p² < 4q` (a conjugate pair); `x − (a + bi)`
/// with `b ≠ 0`. The product is scaled by a random nonzero element of ℚ(i).
pub fn constructed_polynomial<R: Rng>(rng: &mut R, max_degree: usize, want_real: bool) -> (Poly, bool) {
    let x = |c: Vec<GaussianRational>| Poly::new(c);
    let real = |q: BigRational| GaussianRational::real(q);
    let mut p = Poly::one();
    let mut deg = 0usize;
    let mut all_real = true;
    let target = rng.gen_range(1..=max_degree);
    let mut non_real_placed = false;
    while deg < target {
        let room = target - deg;
        // kinds: 0 rational root, 1 real quadratic, 2 conjugate pair, 3 non-real linear
        let kind = if !want_real && !non_real_placed && room <= 2 {
            if room >= 2 {
                rng.gen_range(2..=3)
            } else {
                3
            }
        } else {
            match (want_real, room >= 2) {
                (true, true) => rng.gen_range(0..=1),
                (true, false) => 0,
                (false, true) => rng.gen_range(0..=3),
                (false, false) => {
                    if rng.gen_bool(0.5) {
                        0
                    } else {
                        3
                    }
                }
            }
        };
        let factor = match kind {
            0 => Poly::linear_root(real(rational(rng, 9))),
            1 | 2 => {
                let pc = rational(rng, 6);
                // q = p²/4 ∓ t with t > 0, so p² − 4q = ±4t.
                let disc_sign = if kind == 1 { -1 } else { 1 };
                let t = BigRational::new(BigInt::from(rng.gen_range(1..=20)), BigInt::from(rng.gen_range(1..=4)));
                let q =
                    &pc * &pc / BigRational::from_integer(4.into()) + BigRational::from_integer(disc_sign.into()) * t;
                x(vec![real(q), real(pc), GaussianRational::one()])
            }
            _ => {
                let b = nonzero_rational(rng, 6);
                Poly::linear_root(GaussianRational::new(rational(rng, 6), b))
            }
        };
        if kind == 2 || kind == 3 {
            all_real = false;
            non_real_placed = true;
        }
        deg += factor.degree().expect("nonzero factor");
        p = &p * &factor;
    }
    let scalar = nonzero_gaussian(rng, 5, 0.5);
    (p.scale(&scalar), all_real)
}

/// Stirling numbers of the second kind `S(k, j)` for `0 ≤ j ≤ k ≤ n`, so
/// that `δ^k = Σ_j S(k, j)·z^j·D^j` with `δ = z·d/dz`.
pub fn stirling2(n: usize) -> Vec<Vec<f64>> {
    let mut s = vec![vec![0.0; n + 1]; n + 1];
    s[0][0] = 1.0;
    for k in 1..=n {
        for j in 1..=k {
            s[k][j] = j as f64 * s[k - 1][j] + s[k - 1][j - 1];
        }
    }
    s
}

pub type Dense = Vec<Vec<Complex64>>;

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// `e^X` by scaling and squaring: a degree-30 Taylor sum for `X/2^s` with
/// `‖X/2^s‖_F ≤ 1/2`, squared `s` times. Plain nested vectors, so it shares
/// no arithmetic with the crate under test.
pub fn expm(x: &Dense) -> Dense {
    let n = x.len();
    let norm = x.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let f = 0.5f64.powi(s);
    let scaled: Dense = x.iter().map(|row| row.iter().map(|c| c * f).collect()).collect();
    let identity: Dense =
        (0..n).map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    let mut term = identity.clone();
    let mut sum = identity;
    for k in 1..=30 {
        term = dense_mul(&term, &scaled);
        for (srow, trow) in sum.iter_mut().zip(term.iter_mut()) {
            for (s, t) in srow.iter_mut().zip(trow.iter_mut()) {
                *t /= k as f64;
                *s += *t;
            }
        }
    }
    for _ in 0..s {
        sum = dense_mul(&sum, &sum);
    }
    sum
}
