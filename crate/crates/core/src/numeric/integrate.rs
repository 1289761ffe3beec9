use num_complex::Complex64;

use super::{CMatrix, NumericError};
use crate::connection::{ConnectionSystem, Ray};

/// Taylor order per step.
pub const TAYLOR_ORDER: usize = 20;
/// Steps never exceed this fraction of the distance to the pole.
const MAX_STEP_FRACTION: f64 = 0.4;
/// Norms above this count as overflow.
pub const OVERFLOW_NORM: f64 = 1e290;
/// Factor by which the projected step count may exceed the budget.
const BUDGET_PROJECTION_SLACK: f64 = 8.0;

/// Step budget of one path integration.
pub const MAX_STEPS: usize = 2_000_000;
/// Minimum distance between a path and the pole.
pub const MIN_POLE_DISTANCE: f64 = 1e-6;
/// Stepping guard; lower than the path precondition so inward growth probes
/// can reach `ρ·2^(−30)`.
const STEP_POLE_GUARD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum PathKind {
    /// From `x_from·d` to `x_to·d` along the ray of `d`.
    RaySegment { direction: Ray, x_from: f64, x_to: f64 },
    /// Counterclockwise polygon with `segments` chords inscribed in
    /// `|z| = radius`, starting and ending at `z = radius`.
    Loop { radius: f64, segments: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub kind: PathKind,
    pub tolerance: f64,
}

impl PathSpec {
    pub fn ray_segment(direction: Ray, x_from: f64, x_to: f64, tolerance: f64) -> Result<Self, NumericError> {
        if !(x_from >= MIN_POLE_DISTANCE && x_to >= MIN_POLE_DISTANCE && x_from.is_finite() && x_to.is_finite()) {
            return Err(NumericError::InvalidPath(format!(
                "ray endpoints must be finite and at least {MIN_POLE_DISTANCE} from 0"
            )));
        }
        PathSpec { kind: PathKind::RaySegment { direction, x_from, x_to }, tolerance }.validated()
    }

    pub fn closed_loop(radius: f64, segments: usize, tolerance: f64) -> Result<Self, NumericError> {
        if !(radius.is_finite() && radius > MIN_POLE_DISTANCE) {
            return Err(NumericError::InvalidPath(format!("loop radius must exceed {MIN_POLE_DISTANCE}")));
        }
        if segments < 8 {
            return Err(NumericError::InvalidPath("a loop needs at least 8 segments".into()));
        }
        PathSpec { kind: PathKind::Loop { radius, segments }, tolerance }.validated()
    }

    fn validated(self) -> Result<Self, NumericError> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-4) {
            return Err(NumericError::InvalidPath("tolerance must lie in (0, 1e-4]".into()));
        }
        Ok(self)
    }

    /// Vertices of the polygonal path.
    pub fn vertices(&self) -> Vec<Complex64> {
        match &self.kind {
            PathKind::RaySegment { direction, x_from, x_to } => vec![direction.point(*x_from), direction.point(*x_to)],
            PathKind::Loop { radius, segments } => (0..=*segments)
                .map(|k| {
                    if k == *segments {
                        Complex64::new(*radius, 0.0)
                    } else {
                        Complex64::from_polar(*radius, std::f64::consts::TAU * k as f64 / *segments as f64)
                    }
                })
                .collect(),
        }
    }
}

/// `A(z)/z` as numeric Laurent terms, plus the trace of `A`.
#[derive(Clone, Debug)]
pub struct NumericSystem {
    rank: usize,
    /// Row-major; entry terms `(p, c)` mean `c·z^p` in `A(z)/z`.
    entries: Vec<Vec<(i64, Complex64)>>,
    trace: Vec<(i64, Complex64)>,
}

impl NumericSystem {
    pub fn new(sys: &ConnectionSystem) -> Self {
        let r = sys.rank();
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                entries.push(sys.entry(i, j).terms().map(|(e, c)| (e - 1, c.to_complex())).collect());
            }
        }
        let trace = sys.trace().terms().map(|(e, c)| (e, c.to_complex())).collect();
        NumericSystem { rank: r, entries, trace }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Taylor coefficients `Y_0 = y0, Y_1, …, Y_order` of the solution through
    /// `(z0, y0)`, so `Y(z0 + t) = Σ Y_n·t^n`.
    pub fn taylor_frame(&self, z0: Complex64, y0: &CMatrix, order: usize) -> Vec<CMatrix> {
        series(&self.taylor_coefficients(z0, order.max(1)), y0).into_iter().take(order + 1).collect()
    }

    /// Taylor coefficients `F_0..F_n` of `A(z)/z` at `z0`, using
    /// `z^p = Σ_n C(p, n)·z0^(p−n)·t^n` with `t = z − z0`.
    fn taylor_coefficients(&self, z0: Complex64, n: usize) -> Vec<CMatrix> {
        let r = self.rank;
        let mut out = vec![CMatrix::zeros(r); n + 1];
        for (idx, terms) in self.entries.iter().enumerate() {
            let (i, j) = (idx / r, idx % r);
            for &(p, c) in terms {
                let mut t = c * z0.powi(p as i32);
                for (k, f) in out.iter_mut().enumerate() {
                    if t == Complex64::new(0.0, 0.0) {
                        break;
                    }
                    f[(i, j)] += t;
                    t = t * (p as f64 - k as f64) / ((k as f64 + 1.0) * z0);
                }
            }
        }
        out
    }

    /// `∫ tr(A(z))/z dz` from `za` to `zb` along a segment not passing
    /// through 0 and turning by less than π around it.
    fn trace_integral(&self, za: Complex64, zb: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(e, c) in &self.trace {
            if e == 0 {
                acc += c * (zb / za).ln();
            } else {
                acc += c * (zb.powi(e as i32) - za.powi(e as i32)) / e as f64;
            }
        }
        acc
    }
}

/// Result of propagating `Y(start) = I` along a path.
#[derive(Clone, Debug)]
pub struct Integration {
    /// `T_n ⋯ T_1` for the chord transfer matrices `T_k`.
    pub end: CMatrix,
    /// `∫ tr(A)/z dz` along the path with the branch of `log` followed
    /// continuously; `det Y(end) = exp(log_wronskian)`.
    pub log_wronskian: Complex64,
    /// `Π det T_k`. Equal to `det Y(end)` in exact arithmetic, but each
    /// factor is well conditioned even when the product matrix is not.
    pub chord_determinant: Complex64,
    pub steps: usize,
}

impl Integration {
    /// `|Π det T_k − exp(W)| / |exp(W)|`.
    pub fn wronskian_residual(&self) -> f64 {
        let expected = self.log_wronskian.exp();
        (self.chord_determinant - expected).norm() / expected.norm()
    }
}

pub fn integrate_fundamental(sys: &ConnectionSystem, path: &PathSpec) -> Result<CMatrix, NumericError> {
    Ok(integrate_path(&NumericSystem::new(sys), path)?.end)
}

pub fn integrate_path(ns: &NumericSystem, path: &PathSpec) -> Result<Integration, NumericError> {
    let mut y = CMatrix::identity(ns.rank());
    let mut w = Complex64::new(0.0, 0.0);
    let mut det = Complex64::new(1.0, 0.0);
    let mut steps = 0usize;
    let verts = path.vertices();
    for pair in verts.windows(2) {
        let mut t = CMatrix::identity(ns.rank());
        propagate_segment(ns, pair[0], pair[1], path.tolerance, &mut t, &mut w, &mut steps, MAX_STEPS, &mut |_, _| {
            false
        })?;
        det *= t.det();
        y = t.mul(&y);
        if !y.is_finite() || y.frobenius_norm() > OVERFLOW_NORM {
            return Err(NumericError::Overflow { at: format!("{}", pair[1]) });
        }
    }
    Ok(Integration { end: y, log_wronskian: w, chord_determinant: det, steps })
}

/// Continues the frame `y` (the value at `za`) along the segment `za → zb`.
pub fn continue_frame(
    ns: &NumericSystem,
    za: Complex64,
    zb: Complex64,
    tol: f64,
    y: &CMatrix,
) -> Result<CMatrix, NumericError> {
    let mut out = y.clone();
    let (mut w, mut steps) = (Complex64::new(0.0, 0.0), 0usize);
    propagate_segment(ns, za, zb, tol, &mut out, &mut w, &mut steps, MAX_STEPS, &mut |_, _| false)?;
    Ok(out)
}

/// Taylor-steps `Y` along the segment `za → zb`. `observe` sees every
/// accepted point and the frame there; returning `true` stops the segment.
#[allow(clippy::too_many_arguments)]
pub(crate) fn propagate_segment(
    ns: &NumericSystem,
    za: Complex64,
    zb: Complex64,
    tol: f64,
    y: &mut CMatrix,
    log_w: &mut Complex64,
    steps: &mut usize,
    max_steps: usize,
    observe: &mut dyn FnMut(Complex64, &CMatrix) -> bool,
) -> Result<(), NumericError> {
    let total = (zb - za).norm();
    if total == 0.0 {
        return Ok(());
    }
    let dir = (zb - za) / total;
    let mut s = 0.0f64;
    let mut z = za;
    while s < total {
        if *steps >= max_steps {
            return Err(NumericError::StepBudget(max_steps));
        }
        let dist = z.norm();
        if dist < STEP_POLE_GUARD {
            return Err(NumericError::StepUnderflow { at: format!("{z}") });
        }
        let f = ns.taylor_coefficients(z, TAYLOR_ORDER);
        let coeffs = series(&f, y);
        let y0 = coeffs[0].frobenius_norm().max(f64::MIN_POSITIVE);
        let mut h = MAX_STEP_FRACTION * dist;
        for n in [TAYLOR_ORDER - 1, TAYLOR_ORDER] {
            let yn = coeffs[n].frobenius_norm();
            if yn > 0.0 {
                h = h.min((tol * y0 / yn).powf(1.0 / n as f64));
            }
        }
        if !h.is_finite() || h < 1e-14 * dist {
            return Err(NumericError::StepUnderflow { at: format!("{z}") });
        }
        // Give up early when the current step size cannot finish the segment
        // within a few multiples of the remaining budget.
        if *steps as f64 + (total - s) / h > BUDGET_PROJECTION_SLACK * max_steps as f64 {
            return Err(NumericError::StepBudget(max_steps));
        }
        // Rounding in `s` must not leave a sliver step at the end.
        let last = s + h >= total - 1e-14 * dist;
        let dz = if last { zb - z } else { dir * h };
        let mut next = coeffs[TAYLOR_ORDER].clone();
        for c in coeffs[..TAYLOR_ORDER].iter().rev() {
            next = next.scale(dz).add(c);
        }
        let znew = if last { zb } else { z + dz };
        *log_w += ns.trace_integral(z, znew);
        *y = next;
        *steps += 1;
        if !y.is_finite() || y.frobenius_norm() > OVERFLOW_NORM {
            return Err(NumericError::Overflow { at: format!("{znew}") });
        }
        if observe(znew, y) {
            return Ok(());
        }
        z = znew;
        s = if last { total } else { s + h };
    }
    Ok(())
}

/// Taylor coefficients of `Y` from `(n+1)·Y_{n+1} = Σ_k F_k·Y_{n−k}`.
fn series(f: &[CMatrix], y0: &CMatrix) -> Vec<CMatrix> {
    let n = f.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    out.push(y0.clone());
    for m in 0..n {
        let mut acc = CMatrix::zeros(y0.dim());
        for k in 0..=m {
            acc = acc.add(&f[k].mul(&out[m - k]));
        }
        out.push(acc.scale(Complex64::new(1.0 / (m as f64 + 1.0), 0.0)));
    }
    out
}
