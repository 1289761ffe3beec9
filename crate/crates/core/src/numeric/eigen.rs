use num_complex::Complex64;

use super::{CMatrix, NumericError};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of a square complex matrix, sorted by `(re, im)`.
///
/// Parlett–Reinsch balancing, Householder reduction to Hessenberg form, then
/// single-shift QR sweeps (Wilkinson shifts, Givens rotations) with
/// deflation of negligible subdiagonal entries.
pub fn approx_eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>, NumericError> {
    if !m.is_finite() {
        return Err(NumericError::NonFinite);
    }
    let n = m.dim();
    let mut h = m.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0usize;
    while hi > 0 {
        if hi == 1 {
            eig.push(h[(0, 0)]);
            break;
        }
        // find the start of the trailing unreduced block
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { h.inf_norm() } else { s };
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(NumericError::NoConvergence { iterations: iter });
        }
        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi - 1, hi - 1)] + Complex64::new(h[(hi - 1, hi - 2)].norm() * 0.75, 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eig)
}

fn wilkinson_shift(h: &CMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 2, hi - 2)];
    let b = h[(hi - 2, hi - 1)];
    let c = h[(hi - 1, hi - 2)];
    let d = h[(hi - 1, hi - 1)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step `H − μI = QR, H ← RQ + μI` on rows/cols `lo..hi`.
fn qr_sweep(h: &mut CMatrix, lo: usize, hi: usize, mu: Complex64) {
    for k in lo..hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rots.push((c, s));
    }
    for (idx, (c, s)) in rots.into_iter().enumerate() {
        let k = lo + idx;
        let top = (k + 2).min(hi - 1);
        for i in lo..=top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = -s * x + y * c;
        }
    }
    for k in lo..hi {
        h[(k, k)] += mu;
    }
}

/// Unitary `[[c, s], [−s̄, c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    let phase = a / na;
    (na / r, phase * b.conj() / r)
}

fn balance(h: &mut CMatrix) {
    let n = h.dim();
    let radix = 2.0f64;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[(j, i)].norm();
                    r += h[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    h[(i, j)] /= f;
                    h[(j, i)] *= f;
                }
            }
        }
    }
}

fn hessenberg(h: &mut CMatrix) {
    let n = h.dim();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x.clone();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H ← (I − 2vvᴴ/vᴴv) H
        for j in 0..n {
            let dot: Complex64 = (0..v.len()).map(|t| v[t].conj() * h[(k + 1 + t, j)]).sum();
            let f = dot * (2.0 / vnorm2);
            for t in 0..v.len() {
                h[(k + 1 + t, j)] -= v[t] * f;
            }
        }
        // H ← H (I − 2vvᴴ/vᴴv)
        for i in 0..n {
            let dot: Complex64 = (0..v.len()).map(|t| h[(i, k + 1 + t)] * v[t]).sum();
            let f = dot * (2.0 / vnorm2);
            for t in 0..v.len() {
                h[(i, k + 1 + t)] -= f * v[t].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Roots of `Σ coeffs[k]·x^k` (nonzero leading coefficient) via companion
/// matrix eigenvalues followed by a few Newton polishing steps.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, NumericError> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lc = c[deg];
    let comp = CMatrix::from_fn(deg, |i, j| {
        if i == 0 {
            -c[deg - 1 - j] / lc
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut roots = approx_eigenvalues(&comp)?;
    for r in roots.iter_mut() {
        *r = polish(&c, *r);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn eval_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

fn polish(c: &[Complex64], mut x: Complex64) -> Complex64 {
    let (mut px, _) = eval_with_derivative(c, x);
    for _ in 0..4 {
        let (p, dp) = eval_with_derivative(c, x);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let cand = x - p / dp;
        let (pc, _) = eval_with_derivative(c, cand);
        if pc.norm() < px.norm() {
            x = cand;
            px = pc;
        } else {
            break;
        }
    }
    x
}

/// Greedy nearest-neighbour matching of two multisets. Returns the largest
/// matched distance, or `None` when sizes differ.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (best, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[best] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}
