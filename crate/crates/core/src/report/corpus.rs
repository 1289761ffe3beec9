use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Deserialize;
use thiserror::Error;

use super::{analyze_system, validate_report, AnalysisOptions, AnalysisReport, EIGENVALUE_MATCH_TOLERANCE};
use crate::connection::{gauge_transform, ramified_pullback, ConnectionSystem, GaugeTransform, ModelError};
use crate::formal::FormalError;
use crate::grammar::{parse_input, parse_laurent, ParseDiagnostic, ParsedInput, SourceDocument};
use crate::numeric::match_multisets;

const BUILTIN: &str = include_str!("corpus.toml");
/// Agreement required between expected exact values and computed floats.
const VALUE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus file: {0}")]
    Toml(String),
    #[error("case {case}: {source}")]
    Parse { case: String, source: ParseDiagnostic },
    #[error("case {case}: {source}")]
    Model { case: String, source: ModelError },
    #[error("case {case}: {source}")]
    Formal { case: String, source: FormalError },
}

#[derive(Deserialize)]
struct CorpusFile {
    case: Vec<CorpusCase>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusCase {
    pub name: String,
    pub input: String,
    /// Gauge matrix in system syntax, applied after parsing.
    pub gauge: Option<String>,
    /// Ramification index of a pullback applied last.
    pub pullback: Option<u32>,
    pub provenance: String,
    pub expected: Expected,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub definable: bool,
    pub regular_singular: bool,
    pub certificate: String,
    /// `[num, den, multiplicity]`.
    pub slopes: Vec<[i64; 3]>,
    pub exponents: Option<Vec<String>>,
    #[serde(default)]
    pub exponents_mod_integers: bool,
    pub leading_q: Option<Vec<String>>,
}

impl CorpusCase {
    /// The input after the optional gauge and pullback.
    pub fn system(&self) -> Result<ConnectionSystem, CorpusError> {
        let parse = |text: &str| {
            parse_input(&SourceDocument::new(text, self.name.as_str()))
                .map_err(|source| CorpusError::Parse { case: self.name.clone(), source })
        };
        let model = |source| CorpusError::Model { case: self.name.clone(), source };
        let mut sys = parse(&self.input)?
            .to_system()
            .map_err(|source| CorpusError::Formal { case: self.name.clone(), source })?;
        if let Some(g) = &self.gauge {
            let ParsedInput::System(p) = parse(g)? else {
                return Err(CorpusError::Toml(format!("case {}: gauge must be a matrix", self.name)));
            };
            sys = gauge_transform(&sys, &GaugeTransform::new(p.matrix().clone()).map_err(model)?).map_err(model)?;
        }
        if let Some(m) = self.pullback {
            sys = ramified_pullback(&sys, m).map_err(model)?;
        }
        Ok(sys.with_label(self.name.as_str()))
    }
}

pub fn load_corpus(text: &str) -> Result<Vec<CorpusCase>, CorpusError> {
    let file: CorpusFile = toml::from_str(text).map_err(|e| CorpusError::Toml(e.to_string()))?;
    let mut cases = file.case;
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = cases.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(CorpusError::Toml(format!("duplicate case name {}", w[0].name)));
    }
    Ok(cases)
}

/// The cases shipped with the library, sorted by name.
pub fn builtin_corpus() -> Vec<CorpusCase> {
    load_corpus(BUILTIN).expect("built-in corpus is well formed")
}

#[derive(Debug)]
pub struct CaseOutcome {
    pub name: String,
    pub failures: Vec<String>,
    pub report: Option<AnalysisReport>,
    pub elapsed_ms: f64,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn exact_value(text: &str) -> Result<Complex64, String> {
    let p = parse_laurent(text).map_err(|d| format!("expected value {text:?}: {d}"))?;
    if p.terms().any(|(e, _)| e != 0) {
        return Err(format!("expected value {text:?} is not a constant"));
    }
    Ok(p.coeff(0).to_complex())
}

fn exact_values(texts: &[String]) -> Result<Vec<Complex64>, String> {
    texts.iter().map(|t| exact_value(t)).collect()
}

fn unit_circle(b: &[Complex64]) -> Vec<Complex64> {
    b.iter().map(|b| (Complex64::new(0.0, std::f64::consts::TAU) * b).exp()).collect()
}

/// Compares one case's report with its expectations.
pub fn check_report(case: &CorpusCase, r: &AnalysisReport) -> Vec<String> {
    let e = &case.expected;
    let mut fails = Vec::new();
    let mut expect = |ok: bool, what: String| {
        if !ok {
            fails.push(what);
        }
    };
    expect(r.definable() == e.definable, format!("definable: got {}, expected {}", r.definable(), e.definable));
    expect(
        r.regular_singular() == e.regular_singular,
        format!("regular_singular: got {}, expected {}", r.regular_singular(), e.regular_singular),
    );
    expect(
        r.certificate_kind() == e.certificate,
        format!("certificate: got {}, expected {}", r.certificate_kind(), e.certificate),
    );
    let mut want: Vec<(Ratio<i64>, usize)> =
        e.slopes.iter().map(|[n, d, m]| (Ratio::new(*n, *d), *m as usize)).collect();
    want.sort();
    let got = r.slopes();
    expect(got == want, format!("slopes: got {got:?}, expected {want:?}"));

    if let Some(texts) = &e.exponents {
        match (exact_values(texts), &r.formal.indicial) {
            (Err(msg), _) => expect(false, msg),
            (Ok(_), None) => expect(false, "exponents expected but none computed".into()),
            (Ok(want), Some(ind)) => {
                let (a, b) = if e.exponents_mod_integers {
                    (unit_circle(&ind.exponents_numeric), unit_circle(&want))
                } else {
                    (ind.exponents_numeric.clone(), want)
                };
                let d = match_multisets(&a, &b);
                expect(
                    d.is_some_and(|d| d <= VALUE_TOLERANCE),
                    format!("exponents: got {:?}, expected {texts:?}", ind.exponents_numeric),
                );
            }
        }
    }
    if let Some(texts) = &e.leading_q {
        match (exact_values(texts), &r.formal.leading) {
            (Err(msg), _) => expect(false, msg),
            (Ok(_), None) => expect(false, "leading exponentials expected but none computed".into()),
            (Ok(want), Some(l)) => {
                let got: Vec<Complex64> = l.entries.iter().map(|t| t.q.numeric()).collect();
                let covered = |xs: &[Complex64], ys: &[Complex64]| {
                    xs.iter().all(|x| ys.iter().any(|y| (x - y).norm() <= VALUE_TOLERANCE))
                };
                expect(
                    covered(&got, &want) && covered(&want, &got),
                    format!("leading q: got {got:?}, expected {texts:?}"),
                );
                expect(l.entries.iter().all(|t| t.certified), "leading q not self-certified".into());
            }
        }
    }
    if let Some(err) = &r.numeric_error {
        expect(false, format!("numeric failure: {err}"));
    }
    if r.regular_singular() {
        let scale = r
            .formal
            .indicial
            .as_ref()
            .map_or(1.0, |i| i.monodromy_eigenvalues().iter().map(|l| l.norm()).fold(1.0, f64::max));
        expect(
            r.eigenvalue_match_distance.is_some_and(|d| d <= EIGENVALUE_MATCH_TOLERANCE * scale),
            format!("numeric monodromy vs exp(2πi·b): distance {:?}", r.eigenvalue_match_distance),
        );
    }
    if let Err(errs) = validate_report(&r.to_json()) {
        expect(false, format!("report fails schema: {}", errs.join("; ")));
    }
    fails
}

pub fn run_case(case: &CorpusCase, opts: &AnalysisOptions) -> CaseOutcome {
    let start = Instant::now();
    let (failures, report) = match case.system() {
        Err(e) => (vec![e.to_string()], None),
        Ok(sys) => match analyze_system(&sys, opts) {
            Err(e) => (vec![format!("analysis failed: {e}")], None),
            Ok(r) => (check_report(case, &r), Some(r)),
        },
    };
    CaseOutcome { name: case.name.clone(), failures, report, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 }
}

/// Runs the cases whose name equals `filter` (all cases without one),
/// concurrently, returning outcomes sorted by name.
pub fn run_corpus(cases: &[CorpusCase], filter: Option<&str>, opts: &AnalysisOptions) -> Vec<CaseOutcome> {
    let selected: Vec<&CorpusCase> = cases.iter().filter(|c| filter.is_none_or(|f| c.name == f)).collect();
    let mut out: Vec<CaseOutcome> = std::thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|c| s.spawn(move || run_case(c, opts))).collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect()
    });
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}
