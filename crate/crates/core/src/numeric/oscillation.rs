use std::f64::consts::TAU;

use num_complex::Complex64;

use super::NumericError;
use crate::connection::{LaurentPoly, Ray};

pub const MAX_OSCILLATION_LEVELS: usize = 60;
/// Geometric samples per dyadic level.
pub const SAMPLES_PER_LEVEL: usize = 64;
/// Beyond this phase magnitude a double no longer resolves `2π` steps reliably.
const PHASE_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OscillationClass {
    Bounded,
    Growing,
}

impl OscillationClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OscillationClass::Bounded => "bounded",
            OscillationClass::Growing => "growing",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscillationReport {
    pub levels: usize,
    /// `counts[j]`: crossings of `2πℤ` by the phase on `[ρ·2^(−j), ρ]`;
    /// `counts[0] = 0`, nondecreasing, length `levels + 1`.
    pub counts: Vec<u64>,
    pub classification: OscillationClass,
    /// Set when the phase exceeded `2^52` and sampling stopped; later levels
    /// repeat the last count and the classification uses the levels reached.
    pub truncated: bool,
    pub levels_reached: usize,
}

impl OscillationReport {
    pub fn total(&self) -> u64 {
        *self.counts.last().unwrap_or(&0)
    }
}

/// Numeric Laurent terms `(e, c)` of `Q_prim(u) = Σ c·u^e`.
pub fn numeric_terms(q: &LaurentPoly) -> Vec<(i64, Complex64)> {
    q.terms().map(|(e, c)| (e, c.to_complex())).collect()
}

/// Counts how often `φ(x) = Im(Q_prim(x·d) + b·log(x·d))` crosses `2πℤ`
/// as `x` decreases from `ρ` to `ρ·2^(−J)`, with `log(x·d) = ln x + 2πiθ`.
/// Growing iff `counts[J] > 4·counts[J/2]`.
pub fn oscillation_count(
    qprim: &[(i64, Complex64)],
    b: Complex64,
    ray: &Ray,
    levels: usize,
) -> Result<OscillationReport, NumericError> {
    if levels > MAX_OSCILLATION_LEVELS {
        return Err(NumericError::InvalidPath(format!("at most {MAX_OSCILLATION_LEVELS} levels")));
    }
    if qprim.iter().any(|(e, _)| *e >= 0) {
        return Err(NumericError::InvalidPath("Q_prim must have only negative exponents".into()));
    }
    let d = ray.direction();
    let arg = ray.angle();
    let rho = ray.radius();
    let phase = |x: f64| -> f64 {
        let z = d * x;
        let q: Complex64 = qprim.iter().map(|(e, c)| c * z.powi(*e as i32)).sum();
        (q + b * Complex64::new(x.ln(), arg)).im
    };
    let mut counts = vec![0u64; levels + 1];
    let mut prev = phase(rho);
    let mut total = 0u64;
    let mut truncated = false;
    let mut reached = 0;
    #[allow(clippy::needless_range_loop)]
    'levels: for j in 1..=levels {
        for s in 1..=SAMPLES_PER_LEVEL {
            let x = rho * 2f64.powf(-((j - 1) as f64 + s as f64 / SAMPLES_PER_LEVEL as f64));
            let cur = phase(x);
            if !cur.is_finite() || cur.abs() > PHASE_LIMIT {
                truncated = true;
                break 'levels;
            }
            total += crossings(prev, cur);
            prev = cur;
        }
        counts[j] = total;
        reached = j;
    }
    let last = counts[reached];
    for c in counts.iter_mut().skip(reached + 1) {
        *c = last;
    }
    let half = reached / 2;
    let classification = if reached > 0 && counts[reached] > 4 * counts[half] {
        OscillationClass::Growing
    } else {
        OscillationClass::Bounded
    };
    Ok(OscillationReport { levels, counts, classification, truncated, levels_reached: reached })
}

/// Number of points of `2πℤ` in the half-open interval from `a` (excluded)
/// to `b` (included).
fn crossings(a: f64, b: f64) -> u64 {
    let (ka, kb) = (a / TAU, b / TAU);
    let n = if b >= a { kb.floor() - ka.floor() } else { ka.ceil() - kb.ceil() };
    n.max(0.0) as u64
}
