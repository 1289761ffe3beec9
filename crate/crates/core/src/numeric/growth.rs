use num_complex::Complex64;

use super::integrate::{propagate_segment, NumericSystem, OVERFLOW_NORM};
use super::{CMatrix, NumericError};
use crate::connection::{ConnectionSystem, Ray};

/// Deepest dyadic level the probe integrates to.
pub const MAX_GROWTH_LEVELS: usize = 30;
/// Heuristic stabilisation band for `s_j`.
pub const STABILITY_BAND: f64 = 0.5;
/// Number of trailing levels that must lie in the band.
pub const STABILITY_WINDOW: usize = 5;
const UNDERFLOW_NORM: f64 = 1e-280;
const PROBE_TOLERANCE: f64 = 1e-12;
/// A polynomially bounded frame needs a few steps per level; exhausting this
/// budget means a stiff exponential factor forced the steps down.
const PROBE_STEP_BUDGET: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    PolynomiallyBounded,
    SuperPolynomial,
    DecayingSuperPolynomial,
}

impl GrowthClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            GrowthClass::PolynomiallyBounded => "polynomially_bounded",
            GrowthClass::SuperPolynomial => "super_polynomial",
            GrowthClass::DecayingSuperPolynomial => "decaying_super_polynomial",
        }
    }
}

/// Advisory classification; the band and window are heuristics.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub classification: GrowthClass,
    /// `s_j = log‖Y(x_j)‖ / log x_j` at `x_j = ρ·2^(−j)`, for the levels reached.
    /// After an overflow the last log-norm is the overflow threshold.
    pub exponents: Vec<f64>,
    pub log_norms: Vec<f64>,
    pub levels_reached: usize,
    /// Set when integration stopped early on overflow, underflow, step-size
    /// collapse or an exhausted step budget.
    pub stopped_early: bool,
}

/// Integrates `Y(ρ·d) = I` inward along the ray to `ρ·2^(−J)`.
pub fn growth_probe(sys: &ConnectionSystem, ray: &Ray, levels: usize) -> Result<GrowthReport, NumericError> {
    if levels == 0 || levels > MAX_GROWTH_LEVELS {
        return Err(NumericError::InvalidPath(format!("growth levels must be in 1..={MAX_GROWTH_LEVELS}")));
    }
    let ns = NumericSystem::new(sys);
    let rho = ray.radius();
    let mut y = CMatrix::identity(sys.rank());
    let mut log_w = Complex64::new(0.0, 0.0);
    let mut steps = 0usize;
    let mut exponents = Vec::new();
    let mut log_norms = Vec::new();
    let mut stopped_early = false;
    let mut underflow = false;
    for j in 1..=levels {
        let za = ray.point(rho * 0.5f64.powi(j as i32 - 1));
        let zb = ray.point(rho * 0.5f64.powi(j as i32));
        let mut tiny = false;
        let res = propagate_segment(
            &ns,
            za,
            zb,
            PROBE_TOLERANCE,
            &mut y,
            &mut log_w,
            &mut steps,
            PROBE_STEP_BUDGET,
            &mut |_, m| {
                tiny = m.frobenius_norm() < UNDERFLOW_NORM;
                tiny
            },
        );
        match res {
            Ok(()) if !tiny => {}
            Ok(()) => {
                underflow = true;
                stopped_early = true;
            }
            Err(NumericError::Overflow { .. }) => {
                stopped_early = true;
                log_norms.push(OVERFLOW_NORM.ln());
                break;
            }
            Err(NumericError::StepUnderflow { .. }) | Err(NumericError::StepBudget(_)) => {
                stopped_early = true;
                break;
            }
            Err(e) => return Err(e),
        }
        let ln = y.frobenius_norm().ln();
        let lx = (rho * 0.5f64.powi(j as i32)).ln();
        log_norms.push(ln);
        if lx.abs() > 1e-12 {
            exponents.push(ln / lx);
        }
        if stopped_early {
            break;
        }
    }
    let classification = classify(&exponents, &log_norms, stopped_early, underflow);
    let levels_reached = log_norms.len();
    Ok(GrowthReport { classification, levels_reached, exponents, log_norms, stopped_early })
}

fn classify(exponents: &[f64], log_norms: &[f64], stopped: bool, underflow: bool) -> GrowthClass {
    if underflow {
        return GrowthClass::DecayingSuperPolynomial;
    }
    if stopped {
        return GrowthClass::SuperPolynomial;
    }
    if exponents.len() >= STABILITY_WINDOW {
        let last = exponents[exponents.len() - 1];
        let tail = &exponents[exponents.len() - STABILITY_WINDOW..];
        if tail.iter().all(|s| (s - last).abs() <= STABILITY_BAND) {
            return GrowthClass::PolynomiallyBounded;
        }
    }
    let first = log_norms.first().copied().unwrap_or(0.0);
    let last = log_norms.last().copied().unwrap_or(0.0);
    if last >= first {
        GrowthClass::SuperPolynomial
    } else {
        GrowthClass::DecayingSuperPolynomial
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::LaurentPoly;
    use crate::exact::GaussianRational;
    use num_rational::Ratio;
    use num_traits::Zero;

    fn ray(p: i64, q: i64) -> Ray {
        Ray::new(Ratio::new(p, q), 1.0).unwrap()
    }

    #[test]
    fn half_power_is_bounded() {
        let sys =
            ConnectionSystem::from_rows(vec![vec![LaurentPoly::constant(GaussianRational::ratio(1, 2))]]).unwrap();
        let g = growth_probe(&sys, &ray(0, 1), 20).unwrap();
        assert_eq!(g.classification, GrowthClass::PolynomiallyBounded);
        assert!((g.exponents.last().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn euler_decays_on_positive_axis() {
        let sys = ConnectionSystem::from_rows(vec![vec![LaurentPoly::z_pow(-1)]]).unwrap();
        let g = growth_probe(&sys, &ray(0, 1), 20).unwrap();
        assert_eq!(g.classification, GrowthClass::DecayingSuperPolynomial);
        let g = growth_probe(&sys, &ray(1, 2), 20).unwrap();
        assert_eq!(g.classification, GrowthClass::SuperPolynomial);
    }

    #[test]
    fn stiff_decaying_mode_stops_on_budget() {
        let z = LaurentPoly::zero();
        let sys = ConnectionSystem::from_rows(vec![
            vec![LaurentPoly::z_pow(-2), z.clone()],
            vec![z, LaurentPoly::constant(GaussianRational::ratio(1, 2))],
        ])
        .unwrap();
        let g = growth_probe(&sys, &ray(1, 16), 20).unwrap();
        assert!(g.stopped_early);
        assert_eq!(g.classification, GrowthClass::SuperPolynomial);
    }

    #[test]
    fn nilpotent_is_bounded() {
        let z = LaurentPoly::zero();
        let sys =
            ConnectionSystem::from_rows(vec![vec![z.clone(), LaurentPoly::z_pow(0)], vec![z.clone(), z]]).unwrap();
        let g = growth_probe(&sys, &ray(0, 1), 30).unwrap();
        assert_eq!(g.classification, GrowthClass::PolynomiallyBounded);
    }
}
