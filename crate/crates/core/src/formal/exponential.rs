use std::fmt;

use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use super::{newton_polygon_slopes, simple_roots, FormalError, NewtonEdge, ScalarOperator};
use crate::connection::LaurentPoly;
use crate::exact::{GaussianRational, Poly, Ring};

/// Largest denominator tried when recognising a numeric root as an exact
/// Gaussian rational (the candidate is then checked exactly).
const RATIONAL_DENOMINATOR_BOUND: i64 = 1 << 20;

/// A root of an edge polynomial: exact, or a squarefree defining polynomial
/// over ℚ(i) together with a numeric approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum LeadingCoefficient {
    Exact(GaussianRational),
    Algebraic { defining: Poly, approx: Complex64 },
}

impl LeadingCoefficient {
    pub fn numeric(&self) -> Complex64 {
        match self {
            LeadingCoefficient::Exact(q) => q.to_complex(),
            LeadingCoefficient::Algebraic { approx, .. } => *approx,
        }
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            LeadingCoefficient::Exact(q) => Some(q),
            LeadingCoefficient::Algebraic { .. } => None,
        }
    }
}

impl fmt::Display for LeadingCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeadingCoefficient::Exact(q) => write!(f, "{q}"),
            LeadingCoefficient::Algebraic { defining, approx } => {
                write!(f, "root of {defining} near {:.6}{:+.6}i", approx.re, approx.im)
            }
        }
    }
}

/// After `z = u^m`, a block of formal solutions behaves like
/// `exp(−q·u^(−k)/k)`, i.e. `δ_u y ≈ q·u^(−k)·y`; `k/m` is the slope.
///
/// The phase of the primitive `−q·u^(−k)/k` differs from `q·u^(−k)` by the
/// real factor `−1/k`, so `Im(q·d^(−k)) ≠ 0` is the same oscillation
/// condition in both normalisations.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTerm {
    pub slope: Ratio<i64>,
    pub ramification: u32,
    pub pole_order: u32,
    pub q: LeadingCoefficient,
    pub multiplicity: usize,
    /// Exact `q`: twisting the ramified operator by `exp(−q·u^(−k)/k)` moves
    /// exactly `multiplicity` solutions below slope `k`. Algebraic `q`: the
    /// defining polynomial divides the edge polynomial.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeadingExponentials {
    pub entries: Vec<LeadingTerm>,
}

impl LeadingExponentials {
    /// Least common multiple of the per-slope ramification indices.
    pub fn ramification(&self) -> u32 {
        self.entries.iter().fold(1u32, |acc, e| num_integer::lcm(acc, e.ramification))
    }
}

pub fn leading_exponential_terms(l: &ScalarOperator) -> Result<LeadingExponentials, FormalError> {
    let polygon = newton_polygon_slopes(l);
    if !polygon.has_positive_slope() {
        return Err(FormalError::RegularSingularInput);
    }
    let mut entries = Vec::new();
    for edge in polygon.positive_edges() {
        entries.extend(edge_terms(l, edge)?);
    }
    Ok(LeadingExponentials { entries })
}

/// `χ(c) = Σ_{j on edge} coeff(a_j, z^v(a_j))·m^(−j)·c^(j − j_start)`.
pub fn edge_polynomial(l: &ScalarOperator, edge: &NewtonEdge) -> Poly {
    let (k, m) = (*edge.slope.numer(), *edge.slope.denom());
    let (j0, v0) = edge.start;
    let level = m * v0 - k * j0 as i64;
    let minv = GaussianRational::from_int(m).inv().expect("nonzero");
    let mut coeffs = vec![GaussianRational::zero(); edge.length + 1];
    for j in j0..=edge.end.0 {
        let a = l.coeff(j);
        if let Some(v) = a.valuation() {
            if m * v - k * j as i64 == level {
                coeffs[j - j0] = &a.coeff(v) * &minv.pow(j as u32);
            }
        }
    }
    Poly::new(coeffs)
}

fn edge_terms(l: &ScalarOperator, edge: &NewtonEdge) -> Result<Vec<LeadingTerm>, FormalError> {
    let (k, m) = (*edge.slope.numer(), *edge.slope.denom());
    let chi = edge_polynomial(l, edge);
    let mut out = Vec::new();
    for (f, mult) in chi.squarefree_decomposition() {
        for root in simple_roots(&f)? {
            let q = match recognise_root(&f, root) {
                Some(exact) => LeadingCoefficient::Exact(exact),
                None => LeadingCoefficient::Algebraic { defining: f.clone(), approx: root },
            };
            let certified = match &q {
                LeadingCoefficient::Exact(qe) => twist_certifies(l, k, m, qe, mult)?,
                LeadingCoefficient::Algebraic { .. } => chi.div_rem(&f).is_some_and(|(_, r)| r.is_zero()),
            };
            out.push(LeadingTerm {
                slope: edge.slope,
                ramification: m as u32,
                pole_order: k as u32,
                q,
                multiplicity: mult,
                certified,
            });
        }
    }
    out.sort_by(|a, b| {
        let (x, y) = (a.q.numeric(), b.q.numeric());
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    Ok(out)
}

/// Exact root of `f` near `approx`, if one with bounded denominators exists.
fn recognise_root(f: &Poly, approx: Complex64) -> Option<GaussianRational> {
    if f.degree() == Some(1) {
        return Some(-(&f.coeff(0) / &f.coeff(1)));
    }
    let re = best_rational(approx.re)?;
    let im = best_rational(approx.im)?;
    let cand = GaussianRational::new(re, im);
    f.eval(&cand).is_zero().then_some(cand)
}

/// Continued-fraction convergent of `x` with denominator at most the bound.
fn best_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let (p2, q2) = (ai.checked_mul(p1)?.checked_add(p0)?, ai.checked_mul(q1)?.checked_add(q0)?);
        if q2 > RATIONAL_DENOMINATOR_BOUND {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    (q1 != 0).then(|| BigRational::new(p1.into(), q1.into()))
}

/// Twists the ramified operator by `δ_u ↦ δ_u + q·u^(−k)` and checks that
/// exactly `mult` solutions drop below slope `k` while the part above `k`
/// is unchanged.
fn twist_certifies(l: &ScalarOperator, k: i64, m: i64, q: &GaussianRational, mult: usize) -> Result<bool, FormalError> {
    let ramified = l.ramify(m as u32)?;
    let before = newton_polygon_slopes(&ramified);
    let twisted = ramified.twist(&LaurentPoly::monomial(q.clone(), -k));
    let after = newton_polygon_slopes(&twisted);
    let kk = Ratio::from_integer(k);
    let below = |p: &super::NewtonPolygon| p.slopes().iter().filter(|s| s.0 < kk).map(|s| s.1).sum::<usize>();
    let above = |p: &super::NewtonPolygon| p.slopes().into_iter().filter(|s| s.0 > kk).collect::<Vec<_>>();
    Ok(below(&after) == mult && above(&after) == above(&before))
}

/// Numeric size of `q`, for thresholds.
pub fn q_modulus(q: &LeadingCoefficient) -> f64 {
    match q {
        LeadingCoefficient::Exact(g) => g.norm_sqr().to_f64().map(f64::sqrt).unwrap_or(f64::NAN),
        LeadingCoefficient::Algebraic { approx, .. } => approx.norm(),
    }
}
