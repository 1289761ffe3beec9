//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances are fixed below; random inputs come from
//! fixed seeds.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use connexion::connection::{gauge_transform, ramified_pullback, ConnectionSystem, LaurentPoly};
use connexion::exact::all_roots_real;
use connexion::formal::{analyze_formal, FormalAnalysis};
use connexion::grammar::{parse_input, print_canonical, ParsedInput, SourceDocument};
use connexion::numeric::{
    approx_eigenvalues, continue_frame, match_multisets, numeric_monodromy, CMatrix, NumericSystem, OscillationClass,
    DEFAULT_RADIUS, DEFAULT_TOLERANCE,
};
use connexion::report::{
    builtin_corpus, oscillate_system, run_corpus, witness_oscillation, AnalysisOptions, CaseOutcome,
};
use connexion_testkit::{
    constant_system, constructed_polynomial, expm, irregular_system, operator, rng, stirling2, system, unit_gauge,
    Dense, Shape,
};
use num_complex::Complex64;
use num_rational::Ratio;

const CORPUS_SECONDS: f64 = 10.0;
/// Agreement of `e^(2πib)` multisets and monodromy spectra, relative to
/// `max(1, largest modulus)`.
const SPECTRUM_TOL: f64 = 1e-6;
const WRONSKIAN_TOL: f64 = 1e-8;
const CYCLIC_TOL: f64 = 1e-6;
const WITNESS_LEVELS: usize = 40;
const WITNESS_MIN_COUNT: u64 = 100;
const REGULAR_LEVELS: usize = 60;

type Outcome = Result<String, String>;

fn unit_circle(b: &[Complex64]) -> Vec<Complex64> {
    b.iter().map(|b| (Complex64::new(0.0, std::f64::consts::TAU) * b).exp()).collect()
}

fn spectra_agree(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    let scale = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max);
    match_multisets(a, b).filter(|d| *d <= SPECTRUM_TOL * scale)
}

fn check(failures: Vec<String>, ok: String) -> Outcome {
    if failures.is_empty() {
        Ok(ok)
    } else {
        Err(format!("{} failure(s); first: {}", failures.len(), failures[0]))
    }
}

fn corpus_decisions(outcomes: &[CaseOutcome], seconds: f64) -> Outcome {
    let failed: Vec<String> =
        outcomes.iter().filter(|o| !o.passed()).map(|o| format!("{}: {}", o.name, o.failures.join("; "))).collect();
    if outcomes.len() < 12 {
        return Err(format!("only {} corpus cases", outcomes.len()));
    }
    if seconds >= CORPUS_SECONDS {
        return Err(format!("corpus took {seconds:.2} s"));
    }
    check(failed, format!("{} cases agree with their expectations in {seconds:.2} s", outcomes.len()))
}

fn gauge_invariance() -> Outcome {
    let shape = Shape { max_rank: 4, min_exp: -4, max_exp: 4, density: 0.5, max_terms: 2, bound: 3, p_complex: 0.2 };
    let mut failures = Vec::new();
    let mut regular = 0;
    for seed in 0..100u64 {
        let mut g = rng(0x6a09_e667 ^ seed);
        let a = system(&mut g, &shape);
        let p = unit_gauge(&mut g, a.rank());
        let (x, y) = match (analyze_formal(&a), gauge_transform(&a, &p).map(|b| analyze_formal(&b))) {
            (Ok(x), Ok(Ok(y))) => (x, y),
            other => {
                failures.push(format!("seed {seed}: analysis failed: {:?}", other.1.err()));
                continue;
            }
        };
        let real = |f: &FormalAnalysis| f.indicial.as_ref().map(|i| i.all_real);
        let circle = |f: &FormalAnalysis| f.indicial.as_ref().map(|i| unit_circle(&i.exponents_numeric));
        let same = x.polygon.slopes() == y.polygon.slopes()
            && x.verdict.regular_singular() == y.verdict.regular_singular()
            && real(&x) == real(&y)
            && match (circle(&x), circle(&y)) {
                (Some(u), Some(v)) => spectra_agree(&u, &v).is_some(),
                (None, None) => true,
                _ => false,
            };
        regular += usize::from(x.verdict.regular_singular());
        if !same {
            failures.push(format!("seed {seed}: invariants differ for rank {}", a.rank()));
        }
    }
    check(failures, format!("100/100 systems invariant ({regular} regular singular)"))
}

fn pullback_scaling() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let a = irregular_system(&mut rng(0xbb67_ae85 ^ seed), 4, 3);
        let Ok(base) = analyze_formal(&a) else {
            failures.push(format!("seed {seed}: analysis failed"));
            continue;
        };
        if !base.polygon.has_positive_slope() {
            failures.push(format!("seed {seed}: generated system is not irregular"));
        }
        for m in [2u32, 3, 5] {
            let want: Vec<(Ratio<i64>, usize)> =
                base.polygon.slopes().iter().map(|(s, n)| (s * m as i64, *n)).collect();
            match ramified_pullback(&a, m).map(|b| analyze_formal(&b)) {
                Ok(Ok(f)) if f.polygon.slopes() == want => {}
                _ => failures.push(format!("seed {seed}, m = {m}: slopes not scaled")),
            }
        }
    }
    check(failures, "300/300 pullbacks scale every slope by m".into())
}

fn from_dense(d: &Dense) -> CMatrix {
    CMatrix::from_rows(d).expect("square")
}

fn constant_monodromy() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_residual = 0.0f64;
    for seed in 0..50u64 {
        let sys = constant_system(&mut rng(0x3c6e_f372 ^ seed), 4);
        let b = sys.coefficient(0);
        let x: Dense = (0..sys.rank())
            .map(|i| {
                (0..sys.rank()).map(|j| Complex64::new(0.0, std::f64::consts::TAU) * b[(i, j)].to_complex()).collect()
            })
            .collect();
        let oracle = approx_eigenvalues(&from_dense(&expm(&x))).expect("oracle spectrum");
        let m = match numeric_monodromy(&sys, DEFAULT_RADIUS, DEFAULT_TOLERANCE) {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        worst_residual = worst_residual.max(m.wronskian_residual);
        if spectra_agree(&m.eigenvalues, &oracle).is_none() {
            failures.push(format!("seed {seed}: {:?} vs oracle {:?}", m.eigenvalues, oracle));
        }
        if m.wronskian_residual > WRONSKIAN_TOL {
            failures.push(format!("seed {seed}: Wronskian residual {:.2e}", m.wronskian_residual));
        }
    }
    check(failures, format!("50/50 spectra match e^(2πiB); worst Wronskian residual {worst_residual:.1e}"))
}

fn symbolic_numeric(outcomes: &[CaseOutcome]) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for o in outcomes {
        let Some(r) = &o.report else { continue };
        let Some(ind) = &r.formal.indicial else { continue };
        n += 1;
        match &r.monodromy {
            Some(m) if spectra_agree(&unit_circle(&ind.exponents_numeric), &m.eigenvalues).is_some() => {}
            Some(m) => failures.push(format!("{}: {:?}", o.name, m.eigenvalues)),
            None => failures.push(format!("{}: no numeric monodromy", o.name)),
        }
    }
    if !outcomes.iter().any(|o| o.name == "nilpotent" && o.report.as_ref().is_some_and(|r| r.formal.indicial.is_some()))
    {
        failures.push("the nilpotent case was not checked".into());
    }
    check(failures, format!("{n} regular singular cases match e^(2πib), nilpotent included"))
}

fn oscillation_dichotomy(outcomes: &[CaseOutcome]) -> Outcome {
    let mut failures = Vec::new();
    let (mut irregular, mut regular) = (0, 0);
    let mut least = u64::MAX;
    for o in outcomes {
        let Some(r) = &o.report else { continue };
        let f = &r.formal;
        if let Some(w) = witness_oscillation(f, WITNESS_LEVELS) {
            irregular += 1;
            match w {
                Ok(w) if w.classification == OscillationClass::Growing && w.total() >= WITNESS_MIN_COUNT => {
                    least = least.min(w.total())
                }
                Ok(w) => failures.push(format!("{}: {} with count {}", o.name, w.classification.as_str(), w.total())),
                Err(e) => failures.push(format!("{}: {e}", o.name)),
            }
        } else if let Some(ind) = f.indicial.as_ref().filter(|i| i.all_real) {
            regular += 1;
            let max_b = ind.exponents_numeric.iter().map(|b| b.norm()).fold(0.0, f64::max);
            let bound =
                (max_b * REGULAR_LEVELS as f64 * std::f64::consts::LN_2 / std::f64::consts::TAU).ceil() as u64 + 1;
            for turn in [Ratio::new(0, 1), Ratio::new(1, 4), Ratio::new(3, 8)] {
                match oscillate_system(f, turn, REGULAR_LEVELS) {
                    Ok(s) => {
                        for b in s.branches.iter().filter(|b| b.report.total() > bound) {
                            failures.push(format!("{} {}: count {} > {bound}", o.name, b.label, b.report.total()));
                        }
                    }
                    Err(e) => failures.push(format!("{}: {e}", o.name)),
                }
            }
        }
    }
    check(
        failures,
        format!("{irregular} witnesses grow (least count {least}); {regular} real-exponent cases stay bounded"),
    )
}

fn unitarity_decider() -> Outcome {
    let mut failures = Vec::new();
    for seed in 0..200u64 {
        let (p, expected) = constructed_polynomial(&mut rng(0xa54f_f53a ^ seed), 8, seed % 2 == 0);
        match all_roots_real(&p) {
            Ok(got) if got == expected => {}
            other => failures.push(format!("seed {seed}: {other:?}, expected {expected} for {p}")),
        }
    }
    check(failures, "200/200 constructed polynomials classified".into())
}

/// `D^i c` evaluated at `z0`, for `i = 0..=n`.
fn covector_derivatives(c: &[LaurentPoly], z0: Complex64, n: usize) -> Vec<Vec<Complex64>> {
    let mut cur = c.to_vec();
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(cur.iter().map(|p| p.eval(z0)).collect());
        cur = cur.iter().map(|p| p.derivative()).collect();
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Largest `|L(u)| / scale` over the columns of `u = c·Y` at `z0`, where
/// `Y` is continued numerically from `base`, its derivatives come from the
/// local Taylor expansion, and `δ^k = Σ_j S(k, j)·z^j·D^j`. `scale` is the
/// sum of the moduli of all elementary contributions to `L(u)`, so
/// cancellation inside `δ^k u` is measured against the terms that cancel.
fn cyclic_defect(sys: &ConnectionSystem, f: &FormalAnalysis, base: Complex64, z0: Complex64) -> Result<f64, String> {
    let l = &f.operator;
    let r = l.order();
    let c = l.covector().ok_or("operator carries no covector")?;
    let ns = NumericSystem::new(sys);
    let y =
        continue_frame(&ns, base, z0, DEFAULT_TOLERANCE, &CMatrix::identity(sys.rank())).map_err(|e| e.to_string())?;
    let taylor = ns.taylor_frame(z0, &y, r);
    let dc = covector_derivatives(c, z0, r);
    let s = stirling2(r);
    let n = sys.rank();
    let mut worst = 0.0f64;
    for col in 0..n {
        // D^j u = Σ_i C(j, i)·(D^i c)·(D^(j−i) Y), with D^m Y = m!·Y_m;
        // each entry is (value, sum of moduli of its contributions).
        let du: Vec<(Complex64, f64)> = (0..=r)
            .map(|j| {
                (0..=j).flat_map(|i| (0..n).map(move |k| (i, k))).fold(
                    (Complex64::new(0.0, 0.0), 0.0),
                    |acc, (i, k)| {
                        let fact: f64 = (1..=(j - i)).map(|v| v as f64).product();
                        let t = dc[i][k] * taylor[j - i][(k, col)] * binomial(j, i) * fact;
                        (acc.0 + t, acc.1 + t.norm())
                    },
                )
            })
            .collect();
        let (mut value, mut scale) = (Complex64::new(0.0, 0.0), 0.0f64);
        for (k, stirling) in s.iter().enumerate().take(r + 1) {
            let a = l.coeff(k).eval(z0);
            for j in 0..=k {
                let w = a * stirling[j] * z0.powi(j as i32);
                value += w * du[j].0;
                scale += w.norm() * du[j].1;
            }
        }
        worst = worst.max(value.norm() / scale.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

fn cyclic_soundness() -> Outcome {
    let mut systems: Vec<(String, ConnectionSystem)> =
        builtin_corpus().iter().map(|c| (c.name.clone(), c.system().expect("corpus system"))).collect();
    let shape = Shape { max_rank: 3, min_exp: -2, max_exp: 2, density: 0.6, max_terms: 2, bound: 3, p_complex: 0.2 };
    let mut seed = 0u64;
    while systems.len() < 50 {
        systems.push((format!("random seed {seed}"), system(&mut rng(0x510e_527f ^ seed), &shape)));
        seed += 1;
    }
    let base = Complex64::new(0.6, 0.0);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (name, sys) in &systems {
        let f = match analyze_formal(sys) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        for k in 0..20 {
            let angle = (k as f64 / 19.0 - 0.5) * 0.9 * std::f64::consts::PI;
            let z0 = Complex64::from_polar(0.45 + 0.02 * k as f64, angle);
            match cyclic_defect(sys, &f, base, z0) {
                Ok(d) if d <= CYCLIC_TOL => worst = worst.max(d),
                Ok(d) => failures.push(format!("{name} at {z0:.3}: |L(u)|/scale = {d:.2e}")),
                Err(e) => failures.push(format!("{name} at {z0:.3}: {e}")),
            }
        }
    }
    check(failures, format!("50 systems × 20 points; worst |L(u)|/scale {worst:.1e}"))
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/malformed")
}

fn parser_round_trip() -> Outcome {
    let wide = Shape { max_rank: 4, min_exp: -6, max_exp: 6, density: 0.6, max_terms: 3, bound: 100, p_complex: 0.3 };
    let mut failures = Vec::new();
    for seed in 0..1000u64 {
        let mut g = rng(0x9b05_688c ^ seed);
        let x = if seed % 4 == 0 {
            ParsedInput::Operator(operator(&mut g, 4, &wide))
        } else {
            ParsedInput::System(system(&mut g, &wide))
        };
        let text = print_canonical(&x);
        match parse_input(&SourceDocument::new(text.as_str(), "printed")) {
            Ok(back) if back == x => {}
            other => failures.push(format!("seed {seed}: {other:?}")),
        }
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "cx"))
        .collect();
    files.sort();
    for path in &files {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let Some(expect) = text.lines().next().and_then(|l| l.strip_prefix("# expect ")) else {
            failures.push(format!("{}: no '# expect L:C' header", path.display()));
            continue;
        };
        let out = Command::new(env!("CARGO_BIN_EXE_connexion"))
            .arg("decide")
            .arg(path)
            .output()
            .map_err(|e| e.to_string())?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        let located = format!("{}:{}:", path.display(), expect.trim());
        if out.status.code() != Some(1) || !stderr.contains(&located) {
            failures.push(format!("{}: exit {:?}, {}", path.display(), out.status.code(), stderr.trim()));
        }
    }
    check(
        failures,
        format!("1000/1000 round trips; {} malformed fixtures exit 1 at the expected position", files.len()),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + Sync + 'a>;

fn main() -> ExitCode {
    let start = Instant::now();
    let outcomes = run_corpus(&builtin_corpus(), None, &AnalysisOptions::default());
    let corpus_seconds = start.elapsed().as_secs_f64();

    let criteria: Vec<(&str, Criterion)> = vec![
        ("decision corpus", Box::new(|| corpus_decisions(&outcomes, corpus_seconds))),
        ("gauge invariance", Box::new(gauge_invariance)),
        ("pullback slope scaling", Box::new(pullback_scaling)),
        ("monodromy vs matrix exponential", Box::new(constant_monodromy)),
        ("symbolic-numeric agreement", Box::new(|| symbolic_numeric(&outcomes))),
        ("oscillation dichotomy", Box::new(|| oscillation_dichotomy(&outcomes))),
        ("unitarity decider", Box::new(unitarity_decider)),
        ("cyclic-vector soundness", Box::new(cyclic_soundness)),
        ("parser round trip", Box::new(parser_round_trip)),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    (f(), t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), 0.0))).collect()
    });

    let mut failed = 0;
    for (i, ((name, _), (outcome, secs))) in criteria.iter().zip(&results).enumerate() {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag} {name}: {detail} [{secs:.1} s]", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
