use num_complex::Complex64;
use num_rational::Ratio;

use crate::connection::Ray;
use crate::formal::{Certificate, FormalAnalysis, LeadingTerm};
use crate::numeric::{oscillation_count, NumericError, OscillationClass, OscillationReport};

/// Oscillation of one formal solution block along one ray.
#[derive(Clone, Debug)]
pub struct BranchOscillation {
    /// What was counted, e.g. `q = 2, k = 1, m = 2` or `b = 1/2`.
    pub label: String,
    /// Direction in the variable the phase lives in (`u` with `z = u^m`).
    pub turn: Ratio<i64>,
    pub report: OscillationReport,
}

#[derive(Clone, Debug)]
pub struct SystemOscillation {
    pub turn_z: Ratio<i64>,
    pub branches: Vec<BranchOscillation>,
    /// Growing iff some branch grows.
    pub classification: OscillationClass,
}

/// Phase terms of `exp(−q·u^(−k)/k)`.
fn primitive(term: &LeadingTerm) -> Vec<(i64, Complex64)> {
    let k = term.pole_order as f64;
    vec![(-(term.pole_order as i64), -term.q.numeric() / k)]
}

/// Counts phase crossings for every formal solution block along the
/// `z`-ray of angle `turn_z`.
///
/// Irregular systems use each leading exponential on each of the `m`
/// `u`-rays `(turn_z + j)/m` over it, with `b = 0`; regular singular systems
/// use each exponent `b` with no exponential part.
pub fn oscillate_system(
    analysis: &FormalAnalysis,
    turn_z: Ratio<i64>,
    levels: usize,
) -> Result<SystemOscillation, NumericError> {
    let ray_at = |t: Ratio<i64>| Ray::new(t, 1.0).map_err(|e| NumericError::InvalidPath(e.to_string()));
    let mut branches = Vec::new();
    if let Some(leading) = &analysis.leading {
        for term in &leading.entries {
            let m = term.ramification as i64;
            for j in 0..m {
                let ray = ray_at((turn_z + j) / m)?;
                let report = oscillation_count(&primitive(term), Complex64::new(0.0, 0.0), &ray, levels)?;
                branches.push(BranchOscillation {
                    label: format!("q = {}, k = {}, m = {}", term.q, term.pole_order, term.ramification),
                    turn: ray.turn(),
                    report,
                });
            }
        }
    } else if let Some(ind) = &analysis.indicial {
        let ray = ray_at(turn_z)?;
        let mut seen: Vec<Complex64> = Vec::new();
        for &b in &ind.exponents_numeric {
            if seen.iter().any(|s| (s - b).norm() < 1e-12) {
                continue;
            }
            seen.push(b);
            let report = oscillation_count(&[], b, &ray, levels)?;
            branches.push(BranchOscillation {
                label: format!("b = {:.6}{:+.6}i", b.re, b.im),
                turn: ray.turn(),
                report,
            });
        }
    }
    let classification = if branches.iter().any(|b| b.report.classification == OscillationClass::Growing) {
        OscillationClass::Growing
    } else {
        OscillationClass::Bounded
    };
    Ok(SystemOscillation {
        turn_z: Ray::new(turn_z, 1.0).map(|r| r.turn()).unwrap_or(turn_z),
        branches,
        classification,
    })
}

/// The oscillation count of the certified leading term along its witness
/// direction, or `None` for regular singular systems.
pub fn witness_oscillation(
    analysis: &FormalAnalysis,
    levels: usize,
) -> Option<Result<OscillationReport, NumericError>> {
    let Certificate::PositiveSlope { term, direction } = &analysis.verdict.certificate else {
        return None;
    };
    Some(
        Ray::new(direction.turn_u, 1.0)
            .map_err(|e| NumericError::InvalidPath(e.to_string()))
            .and_then(|ray| oscillation_count(&primitive(term), Complex64::new(0.0, 0.0), &ray, levels)),
    )
}
