use num_traits::Zero;

use super::{FormalError, ScalarOperator};
use crate::connection::{ConnectionSystem, LaurentMatrix, LaurentPoly};
use crate::exact::{GaussianRational, Ring};

/// Candidate budget for the covector search.
pub const CYCLIC_SEARCH_CAP: usize = 10_000;

/// Cyclic-vector reduction of `z·Y′ = A·Y` to a scalar δ-operator.
///
/// For a covector `c`, set `c_0 = c`, `c_{k+1} = δ(c_k) + c_k·A`, so that
/// `δ^k(c·Y) = c_k·Y`. With `W` the matrix of rows `c_0..c_{r−1}` and
/// `det W ≠ 0`, writing `c_r = λ·W` gives
/// `L = det(W)·δ^r − Σ_k (c_r·adj W)_k·δ^k`, normalized so that the lowest
/// term of `a_r` is `1·z^0`.
///
/// Candidates, first success wins: `e_1`; `e_1 + t·e_2 + t²·e_3 + …` for
/// `t = 1..=r(r−1)`; then covectors with integer polynomial entries of degree
/// `< r`, by increasing height, support size, value pattern and support.
pub fn cyclic_vector_operator(sys: &ConnectionSystem) -> Result<ScalarOperator, FormalError> {
    let r = sys.rank();
    let mut tried = 0usize;
    for c in candidates(r) {
        tried += 1;
        if tried > CYCLIC_SEARCH_CAP {
            break;
        }
        if let Some(op) = try_covector(sys, &c)? {
            return Ok(op);
        }
    }
    Err(FormalError::CyclicSearchExhausted { candidates: CYCLIC_SEARCH_CAP })
}

/// Builds `L` from a given covector, or `None` when it is not cyclic.
pub fn try_covector(sys: &ConnectionSystem, c: &[LaurentPoly]) -> Result<Option<ScalarOperator>, FormalError> {
    let r = sys.rank();
    let a = sys.matrix();
    let mut rows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(r + 1);
    rows.push(c.to_vec());
    for k in 0..r {
        let prev = &rows[k];
        let prod = a.left_mul_row(prev);
        rows.push(prev.iter().zip(prod).map(|(p, q)| &p.delta() + &q).collect());
    }
    let w = LaurentMatrix::from_rows(rows[..r].to_vec()).expect("square rows");
    let det = w.det()?;
    if det.is_zero() {
        return Ok(None);
    }
    let adj = w.adjugate()?;
    let lam = adj.left_mul_row(&rows[r]);
    let mut coeffs: Vec<LaurentPoly> = lam.into_iter().map(|x| -x).collect();
    coeffs.push(det.clone());
    let op = ScalarOperator::new(coeffs)?.with_covector(c.to_vec(), det);
    Ok(Some(op.normalized()))
}

fn constant_row(values: &[i64]) -> Vec<LaurentPoly> {
    values.iter().map(|&v| LaurentPoly::constant(GaussianRational::from_int(v))).collect()
}

fn candidates(r: usize) -> impl Iterator<Item = Vec<LaurentPoly>> {
    let moment = (0..=(r * r.saturating_sub(1)) as i64).map(move |t| {
        let vals: Vec<i64> = (0..r as u32).map(|j| if j == 0 { 1 } else { t.pow(j) }).collect();
        constant_row(&vals)
    });
    moment.chain(PolynomialCovectors::new(r))
}

/// Integer polynomial covectors of degree `< r`, flattened to `r·r`
/// coefficient slots; slot `i·r + d` is the coefficient of `z^d` in entry `i`.
/// Order: height, then support size, then value pattern, then support
/// positions in lexicographic order.
struct PolynomialCovectors {
    r: usize,
    height: i64,
    support: usize,
    signs: u64,
    combo: Vec<usize>,
    done_level: bool,
}

impl PolynomialCovectors {
    fn new(r: usize) -> Self {
        PolynomialCovectors { r, height: 1, support: 1, signs: 0, combo: vec![0], done_level: false }
    }

    fn slots(&self) -> usize {
        self.r * self.r
    }

    /// Value patterns for `support` slots: each slot takes a magnitude in
    /// `1..=height` and a sign; at least one magnitude equals `height`.
    /// Encoded as a mixed-radix counter in `signs`; positive values first.
    fn pattern(&self) -> Option<Vec<i64>> {
        let h = self.height as u64;
        let base = 2 * h;
        let mut x = self.signs;
        let mut vals = Vec::with_capacity(self.support);
        for _ in 0..self.support {
            let d = x % base;
            x /= base;
            let mag = (h - d % h) as i64;
            let sign = if d < h { 1 } else { -1 };
            vals.push(sign * mag);
        }
        if x > 0 {
            return None;
        }
        Some(vals)
    }

    fn advance_combo(&mut self) -> bool {
        let n = self.slots();
        let s = self.combo.len();
        let mut i = s;
        while i > 0 {
            i -= 1;
            if self.combo[i] < n - s + i {
                self.combo[i] += 1;
                for j in i + 1..s {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for PolynomialCovectors {
    type Item = Vec<LaurentPoly>;

    fn next(&mut self) -> Option<Vec<LaurentPoly>> {
        loop {
            if self.done_level {
                self.done_level = false;
                self.signs = 0;
                self.support += 1;
                if self.support > self.slots() {
                    self.support = 1;
                    self.height += 1;
                }
                self.combo = (0..self.support).collect();
            }
            let Some(vals) = self.pattern() else {
                self.done_level = true;
                continue;
            };
            let entries = if vals.iter().any(|v| v.abs() == self.height) {
                let mut entries = vec![LaurentPoly::zero(); self.r];
                for (slot, v) in self.combo.iter().zip(&vals) {
                    let (i, d) = (slot / self.r, slot % self.r);
                    entries[i].add_term(d as i64, &GaussianRational::from_int(*v));
                }
                Some(entries)
            } else {
                None
            };
            if !self.advance_combo() {
                self.combo = (0..self.support).collect();
                self.signs += 1;
            }
            if let Some(e) = entries {
                return Some(e);
            }
        }
    }
}
