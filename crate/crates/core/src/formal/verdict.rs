use num_complex::Complex64;
use num_rational::Ratio;

use super::{
    cyclic_vector_operator, fuchs_criterion, indicial_polynomial, isolate_non_real_root, leading_exponential_terms,
    newton_polygon_slopes, q_modulus, unitary_exponent_test, FormalError, IndicialData, IsolatingDisk,
    LeadingExponentials, LeadingTerm, NewtonPolygon, ScalarOperator,
};
use crate::connection::ConnectionSystem;
use crate::exact::{all_roots_real, charpoly, Poly};

/// Safety margin on the witness inequality, in units of `|q|·ε`.
const WITNESS_ULP_MARGIN: f64 = 1e3;

/// Direction `d` on which the leading exponential oscillates.
///
/// `turn_u` is the angle of `d` in the ramified variable `u` (with
/// `z = u^m`); `turn_z = m·turn_u mod 1` is the same ray in the `z`-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessDirection {
    pub turn_u: Ratio<i64>,
    pub turn_z: Ratio<i64>,
    /// `Im(q·d^(−k))`.
    pub im_value: f64,
    /// The bound `|im_value|` was checked against.
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    RegularUnitary { indicial: IndicialData },
    PositiveSlope { term: LeadingTerm, direction: WitnessDirection },
    NonRealExponent { polynomial: Poly, disk: IsolatingDisk },
}

/// Verdict derived from its certificate, so `definable` always equals
/// `regular_singular ∧ unitary`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefinabilityVerdict {
    pub certificate: Certificate,
}

impl DefinabilityVerdict {
    pub fn regular_singular(&self) -> bool {
        !matches!(self.certificate, Certificate::PositiveSlope { .. })
    }

    /// `None` when the system is irregular and exponents are not defined.
    pub fn unitary(&self) -> Option<bool> {
        match self.certificate {
            Certificate::RegularUnitary { .. } => Some(true),
            Certificate::NonRealExponent { .. } => Some(false),
            Certificate::PositiveSlope { .. } => None,
        }
    }

    pub fn definable(&self) -> bool {
        self.regular_singular() && self.unitary() == Some(true)
    }
}

/// Everything the exact pipeline computes for one system.
#[derive(Clone, Debug)]
pub struct FormalAnalysis {
    pub operator: ScalarOperator,
    pub polygon: NewtonPolygon,
    pub leading: Option<LeadingExponentials>,
    pub indicial: Option<IndicialData>,
    /// For systems holomorphic at 0: whether `charpoly(A(0))` is real-rooted.
    /// Exponents of the system and of `L` differ by integers, so this must
    /// agree with the indicial answer.
    pub residue_all_real: Option<bool>,
    pub verdict: DefinabilityVerdict,
}

pub fn is_regular_singular(sys: &ConnectionSystem) -> Result<bool, FormalError> {
    let l = cyclic_vector_operator(sys)?;
    let by_polygon = !newton_polygon_slopes(&l).has_positive_slope();
    debug_assert_eq!(by_polygon, fuchs_criterion(&l));
    Ok(by_polygon)
}

pub fn decide_definable(sys: &ConnectionSystem) -> Result<DefinabilityVerdict, FormalError> {
    Ok(analyze_formal(sys)?.verdict)
}

pub fn analyze_formal(sys: &ConnectionSystem) -> Result<FormalAnalysis, FormalError> {
    let operator = cyclic_vector_operator(sys)?;
    let polygon = newton_polygon_slopes(&operator);
    let regular = !polygon.has_positive_slope();
    if regular != fuchs_criterion(&operator) {
        return Err(FormalError::Inconsistent("Fuchs criterion disagrees with the Newton polygon".into()));
    }
    let residue_all_real =
        if sys.is_logarithmic() { Some(all_roots_real(&charpoly(&sys.coefficient(0))?)?) } else { None };
    if regular {
        let ind = indicial_polynomial(&operator)?;
        if residue_all_real.is_some_and(|r| r != ind.all_real) {
            return Err(FormalError::Inconsistent("residue eigenvalues disagree with indicial exponents".into()));
        }
        let certificate = if unitary_exponent_test(&ind) {
            Certificate::RegularUnitary { indicial: ind.clone() }
        } else {
            let disk = isolate_non_real_root(&ind)?
                .ok_or_else(|| FormalError::Inconsistent("no non-real root found numerically".into()))?;
            Certificate::NonRealExponent { polynomial: ind.polynomial.clone(), disk }
        };
        return Ok(FormalAnalysis {
            operator,
            polygon,
            leading: None,
            indicial: Some(ind),
            residue_all_real,
            verdict: DefinabilityVerdict { certificate },
        });
    }
    let leading = leading_exponential_terms(&operator)?;
    let certificate = positive_slope_certificate(&leading)?;
    Ok(FormalAnalysis {
        operator,
        polygon,
        leading: Some(leading),
        indicial: None,
        residue_all_real,
        verdict: DefinabilityVerdict { certificate },
    })
}

/// Uses the largest slope and, within it, the first `q` in `(re, im)` order.
fn positive_slope_certificate(leading: &LeadingExponentials) -> Result<Certificate, FormalError> {
    let max = leading.entries.iter().map(|t| t.slope).max().ok_or(FormalError::RegularSingularInput)?;
    let term = leading.entries.iter().find(|t| t.slope == max).expect("max slope present").clone();
    let direction = witness_direction(term.q.numeric(), q_modulus(&term.q), term.pole_order, term.ramification)
        .ok_or_else(|| FormalError::Inconsistent("no witness direction found".into()))?;
    Ok(Certificate::PositiveSlope { term, direction })
}

/// Scans `θ = t/(8k)` turns for `|Im(q·d^(−k))| ≥ |q|/2`, then falls back to
/// `t/(32k)` with `|q|/10`. `Im(q·d^(−k))` vanishes on exactly `2k`
/// directions, so the first scan succeeds for every `q ≠ 0`.
pub fn witness_direction(q: Complex64, q_abs: f64, k: u32, m: u32) -> Option<WitnessDirection> {
    let margin = WITNESS_ULP_MARGIN * f64::EPSILON * q_abs;
    for (samples, fraction) in [(8 * k as i64, 0.5), (32 * k as i64, 0.1)] {
        let threshold = q_abs * fraction;
        for t in 0..samples {
            let turn = Ratio::new(t, samples);
            let angle = std::f64::consts::TAU * t as f64 / samples as f64;
            let dk = Complex64::from_polar(1.0, -(k as f64) * angle);
            let im = (q * dk).im;
            if im.abs() >= threshold + margin {
                let tz = turn * m as i64;
                let turn_z = tz - Ratio::from_integer(tz.to_integer());
                return Some(WitnessDirection { turn_u: turn, turn_z, im_value: im, threshold });
            }
        }
    }
    None
}
