//! End-to-end analysis of one system: the exact verdict plus numeric
//! evidence, rendered as a JSON report or a text summary. Also hosts the
//! built-in corpus and the oscillation driver used by the command line.

mod corpus;
mod json;
mod oscillate;
mod schema;

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde_json::Value;

pub use corpus::{
    builtin_corpus, check_report, load_corpus, run_case, run_corpus, CaseOutcome, CorpusCase, CorpusError, Expected,
};
pub use oscillate::{oscillate_system, witness_oscillation, BranchOscillation, SystemOscillation};
pub use schema::{validate, validate_report, REPORT_SCHEMA};

use crate::connection::{poincare_rank, ConnectionSystem, Ray};
use crate::formal::{analyze_formal, Certificate, DefinabilityVerdict, FormalAnalysis, FormalError};
use crate::grammar::print_laurent;
use crate::numeric::{
    growth_probe, match_multisets, numeric_monodromy_with, GrowthReport, MonodromyResult, NumericError, DEFAULT_RADIUS,
    DEFAULT_SEGMENTS, DEFAULT_TOLERANCE,
};

/// Numeric parameters of an analysis run.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    pub radius: f64,
    pub tolerance: f64,
    pub segments: usize,
    /// Dyadic levels of the growth probe; 0 skips it.
    pub growth_levels: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            radius: DEFAULT_RADIUS,
            tolerance: DEFAULT_TOLERANCE,
            segments: DEFAULT_SEGMENTS,
            growth_levels: 20,
        }
    }
}

/// Symbolic and numeric eigenvalue multisets further apart than this
/// (relative to the eigenvalue scale) produce a warning.
pub const EIGENVALUE_MATCH_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct GrowthSummary {
    pub turn: Ratio<i64>,
    pub report: GrowthReport,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub rank: usize,
    pub poincare_rank: u64,
    pub formal: FormalAnalysis,
    pub monodromy: Option<MonodromyResult>,
    pub eigenvalue_match_distance: Option<f64>,
    pub growth: Option<GrowthSummary>,
    /// First hard numeric failure; the report is still complete otherwise.
    pub numeric_error: Option<NumericError>,
    pub warnings: Vec<String>,
    pub formal_ms: f64,
    pub numeric_ms: f64,
}

/// Runs the exact pipeline, then the numeric checks. Exact failures are
/// errors; numeric failures are recorded in the report.
pub fn analyze_system(sys: &ConnectionSystem, opts: &AnalysisOptions) -> Result<AnalysisReport, FormalError> {
    let t0 = Instant::now();
    let formal = analyze_formal(sys)?;
    let formal_ms = t0.elapsed().as_secs_f64() * 1e3;

    let t1 = Instant::now();
    let mut warnings = Vec::new();
    let mut numeric_error = None;
    let monodromy = match numeric_monodromy_with(sys, opts.radius, opts.tolerance, opts.segments) {
        Ok(m) => Some(m),
        Err(e) => {
            numeric_error = Some(e);
            None
        }
    };
    let mut eigenvalue_match_distance = None;
    if let (Some(m), Some(ind)) = (&monodromy, &formal.indicial) {
        let symbolic = ind.monodromy_eigenvalues();
        eigenvalue_match_distance = match_multisets(&m.eigenvalues, &symbolic);
        let scale = symbolic.iter().map(|l| l.norm()).fold(1.0, f64::max);
        if eigenvalue_match_distance.is_none_or(|d| d > EIGENVALUE_MATCH_TOLERANCE * scale) {
            warnings.push(format!(
                "numeric monodromy eigenvalues differ from exp(2πi·b) by {:?}",
                eigenvalue_match_distance
            ));
        }
    }
    if let Some(m) = &monodromy {
        if m.wronskian_residual > 1e-8 {
            warnings.push(format!("Wronskian residual {:.3e} exceeds 1e-8", m.wronskian_residual));
        }
    }
    let growth = if opts.growth_levels == 0 {
        None
    } else {
        let turn = match &formal.verdict.certificate {
            Certificate::PositiveSlope { direction, .. } => direction.turn_z,
            _ => Ratio::zero(),
        };
        let probe = Ray::new(turn, opts.radius)
            .map_err(|e| NumericError::InvalidPath(e.to_string()))
            .and_then(|ray| growth_probe(sys, &ray, opts.growth_levels));
        match probe {
            Ok(report) => Some(GrowthSummary { turn, report }),
            Err(e) => {
                warnings.push(format!("growth probe failed: {e}"));
                None
            }
        }
    };
    if formal.leading.as_ref().is_some_and(|l| l.entries.iter().any(|t| !t.certified)) {
        warnings.push("some leading exponential coefficients failed self-certification".into());
    }
    Ok(AnalysisReport {
        rank: sys.rank(),
        poincare_rank: poincare_rank(sys).order,
        formal,
        monodromy,
        eigenvalue_match_distance,
        growth,
        numeric_error,
        warnings,
        formal_ms,
        numeric_ms: t1.elapsed().as_secs_f64() * 1e3,
    })
}

fn fmt_ratio(r: Ratio<i64>) -> String {
    r.to_string()
}

fn fmt_complex(c: Complex64) -> String {
    format!("{:.10} {} {:.10}i", c.re, if c.im < 0.0 { '-' } else { '+' }, c.im.abs())
}

pub fn certificate_summary(c: &Certificate) -> String {
    match c {
        Certificate::RegularUnitary { .. } => "regular singular, all exponents real".into(),
        Certificate::PositiveSlope { term, direction } => {
            format!("slope {} > 0, witness direction θ={}", fmt_ratio(term.slope), fmt_ratio(direction.turn_z))
        }
        Certificate::NonRealExponent { polynomial, disk } => format!(
            "non-real exponent within {:.3e} of {}, root of {}",
            disk.radius_numeric(),
            fmt_complex(disk.center_numeric()),
            polynomial
        ),
    }
}

/// The one-line verdict: `definable: true` or `definable: false (…)`.
pub fn decide_line(v: &DefinabilityVerdict) -> String {
    if v.definable() {
        "definable: true".into()
    } else {
        format!("definable: false ({})", certificate_summary(&v.certificate))
    }
}

impl AnalysisReport {
    pub fn regular_singular(&self) -> bool {
        self.formal.verdict.regular_singular()
    }

    pub fn definable(&self) -> bool {
        self.formal.verdict.definable()
    }

    pub fn exponents_all_real(&self) -> Option<bool> {
        self.formal.indicial.as_ref().map(|i| i.all_real)
    }

    /// Slope multiset, increasing, equal slopes merged.
    pub fn slopes(&self) -> Vec<(Ratio<i64>, usize)> {
        let mut out: Vec<(Ratio<i64>, usize)> = Vec::new();
        for (s, m) in self.formal.polygon.slopes() {
            match out.last_mut() {
                Some((t, n)) if *t == s => *n += m,
                _ => out.push((s, m)),
            }
        }
        out
    }

    pub fn ramification(&self) -> i64 {
        self.formal.polygon.ramification()
    }

    pub fn certificate_kind(&self) -> &'static str {
        match self.formal.verdict.certificate {
            Certificate::RegularUnitary { .. } => "RegularUnitary",
            Certificate::PositiveSlope { .. } => "PositiveSlope",
            Certificate::NonRealExponent { .. } => "NonRealExponent",
        }
    }

    pub fn certificate_summary(&self) -> String {
        certificate_summary(&self.formal.verdict.certificate)
    }

    pub fn decide_line(&self) -> String {
        decide_line(&self.formal.verdict)
    }

    pub fn to_json(&self) -> Value {
        let f = &self.formal;
        let slopes = Value::Array(
            self.slopes()
                .into_iter()
                .map(|(s, m)| {
                    json::object([
                        ("num", Value::from(*s.numer())),
                        ("den", Value::from(*s.denom())),
                        ("mult", Value::from(m)),
                    ])
                })
                .collect(),
        );
        let leading = json::opt(f.leading.as_ref(), |l| {
            Value::Array(
                l.entries
                    .iter()
                    .map(|t| {
                        json::object([
                            ("slope", json::ratio(t.slope)),
                            ("ramification", Value::from(t.ramification)),
                            ("pole_order", Value::from(t.pole_order)),
                            ("multiplicity", Value::from(t.multiplicity)),
                            ("q_exact", Value::from(t.q.to_string())),
                            ("q", json::complex(t.q.numeric())),
                            ("certified", Value::from(t.certified)),
                        ])
                    })
                    .collect(),
            )
        });
        let ind = f.indicial.as_ref();
        json::object([
            ("rank", Value::from(self.rank)),
            ("poincare_rank", Value::from(self.poincare_rank)),
            ("regular_singular", Value::from(self.regular_singular())),
            ("slopes", slopes),
            ("ramification", Value::from(self.ramification())),
            ("leading_exponentials", leading),
            ("indicial_polynomial", json::opt(ind, |i| Value::from(i.polynomial.to_string()))),
            ("exponents_numeric", json::opt(ind, |i| json::complex_list(&i.exponents_numeric))),
            ("exponents_all_real", json::opt(self.exponents_all_real(), Value::from)),
            (
                "monodromy_eigenvalues_numeric",
                json::opt(self.monodromy.as_ref(), |m| json::complex_list(&m.eigenvalues)),
            ),
            ("definable_flat_sections", Value::from(self.definable())),
            ("certificate", self.certificate_json()),
            ("diagnostics", self.diagnostics_json()),
        ])
    }

    fn certificate_json(&self) -> Value {
        let mut fields: Vec<(&str, Value)> =
            vec![("kind", Value::from(self.certificate_kind())), ("summary", Value::from(self.certificate_summary()))];
        let keys = [
            "slope",
            "pole_order",
            "ramification",
            "q_exact",
            "q",
            "witness_turn",
            "witness_turn_u",
            "witness_im",
            "polynomial",
            "disk_center",
            "disk_radius",
            "disk_confirmed",
        ];
        let mut values: Vec<Value> = vec![Value::Null; keys.len()];
        let mut set = |key: &str, v: Value| {
            let i = keys.iter().position(|k| *k == key).expect("known certificate key");
            values[i] = v;
        };
        match &self.formal.verdict.certificate {
            Certificate::RegularUnitary { indicial } => set("polynomial", Value::from(indicial.polynomial.to_string())),
            Certificate::PositiveSlope { term, direction } => {
                set("slope", json::ratio(term.slope));
                set("pole_order", Value::from(term.pole_order));
                set("ramification", Value::from(term.ramification));
                set("q_exact", Value::from(term.q.to_string()));
                set("q", json::complex(term.q.numeric()));
                set("witness_turn", Value::from(fmt_ratio(direction.turn_z)));
                set("witness_turn_u", Value::from(fmt_ratio(direction.turn_u)));
                set("witness_im", json::float(direction.im_value));
            }
            Certificate::NonRealExponent { polynomial, disk } => {
                set("polynomial", Value::from(polynomial.to_string()));
                set("disk_center", Value::from(disk.center.to_string()));
                set("disk_radius", Value::from(disk.radius.to_string()));
                set("disk_confirmed", Value::from(disk.confirmed));
            }
        }
        fields.extend(keys.iter().copied().zip(values));
        json::object(fields)
    }

    fn diagnostics_json(&self) -> Value {
        let m = self.monodromy.as_ref();
        json::object([
            ("monodromy_residual", json::opt(m, |m| json::float(m.residual))),
            ("wronskian_residual", json::opt(m, |m| json::float(m.wronskian_residual))),
            ("eigenvalue_match_distance", json::opt(self.eigenvalue_match_distance, json::float)),
            ("residue_all_real", json::opt(self.formal.residue_all_real, Value::from)),
            (
                "covector",
                json::opt(self.formal.operator.covector(), |c| {
                    Value::Array(c.iter().map(|p| Value::from(print_laurent(p))).collect())
                }),
            ),
            (
                "growth",
                json::opt(self.growth.as_ref(), |g| {
                    json::object([
                        ("turn", Value::from(fmt_ratio(g.turn))),
                        ("classification", Value::from(g.report.classification.as_str())),
                        ("levels_reached", Value::from(g.report.levels_reached)),
                        ("last_exponent", json::opt(g.report.exponents.last().copied(), json::float)),
                    ])
                }),
            ),
            ("numeric_error", json::opt(self.numeric_error.as_ref(), |e| Value::from(e.to_string()))),
            ("warnings", Value::Array(self.warnings.iter().cloned().map(Value::from).collect())),
            (
                "timings_ms",
                json::object([("formal", json::float(self.formal_ms)), ("numeric", json::float(self.numeric_ms))]),
            ),
        ])
    }

    pub fn render_text(&self) -> String {
        let f = &self.formal;
        let none = || "-".to_string();
        let slopes =
            self.slopes().into_iter().map(|(s, m)| format!("{} (x{m})", fmt_ratio(s))).collect::<Vec<_>>().join(", ");
        let leading = f.leading.as_ref().map_or_else(none, |l| {
            l.entries
                .iter()
                .map(|t| {
                    format!(
                        "slope {}: q = {} (m={}, k={}, mult {}{})",
                        fmt_ratio(t.slope),
                        t.q,
                        t.ramification,
                        t.pole_order,
                        t.multiplicity,
                        if t.certified { ", certified" } else { ", uncertified" }
                    )
                })
                .collect::<Vec<_>>()
                .join("; ")
        });
        let list = |v: &[Complex64]| v.iter().map(|c| fmt_complex(*c)).collect::<Vec<_>>().join(", ");
        let ind = f.indicial.as_ref();
        let mut rows = vec![
            ("rank", self.rank.to_string()),
            ("poincare rank", self.poincare_rank.to_string()),
            ("regular singular", self.regular_singular().to_string()),
            ("slopes", slopes),
            ("ramification", self.ramification().to_string()),
            ("leading exponentials", leading),
            ("indicial polynomial", ind.map_or_else(none, |i| i.polynomial.to_string())),
            ("exponents", ind.map_or_else(none, |i| list(&i.exponents_numeric))),
            ("exponents all real", self.exponents_all_real().map_or_else(none, |b| b.to_string())),
            ("monodromy eigenvalues", self.monodromy.as_ref().map_or_else(none, |m| list(&m.eigenvalues))),
            ("monodromy residual", self.monodromy.as_ref().map_or_else(none, |m| format!("{:.3e}", m.residual))),
            ("definable flat sections", self.definable().to_string()),
            ("certificate", format!("{}: {}", self.certificate_kind(), self.certificate_summary())),
        ];
        if let Some(g) = &self.growth {
            rows.push((
                "growth probe",
                format!("{} along θ={} (advisory)", g.report.classification.as_str(), fmt_ratio(g.turn)),
            ));
        }
        if let Some(e) = &self.numeric_error {
            rows.push(("numeric error", e.to_string()));
        }
        for w in &self.warnings {
            rows.push(("warning", w.clone()));
        }
        rows.iter().map(|(k, v)| format!("{k:<24} {v}")).collect::<Vec<_>>().join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::LaurentPoly;
    use crate::exact::GaussianRational;

    fn scalar(p: LaurentPoly) -> ConnectionSystem {
        ConnectionSystem::from_rows(vec![vec![p]]).unwrap()
    }

    #[test]
    fn euler_report() {
        let r = analyze_system(&scalar(LaurentPoly::z_pow(-1)), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.decide_line(), "definable: false (slope 1 > 0, witness direction θ=1/8)");
        let v = r.to_json();
        validate_report(&v).unwrap();
        assert_eq!(v["slopes"].to_string(), r#"[{"num":1,"den":1,"mult":1}]"#);
        assert_eq!(v["exponents_all_real"], Value::Null);
        assert_eq!(v["certificate"]["witness_turn"], "1/8");
        assert_eq!(v["poincare_rank"], 1);
    }

    #[test]
    fn half_report() {
        let r =
            analyze_system(&scalar(LaurentPoly::constant(GaussianRational::ratio(1, 2))), &AnalysisOptions::default())
                .unwrap();
        assert_eq!(r.decide_line(), "definable: true");
        let v = r.to_json();
        validate_report(&v).unwrap();
        assert_eq!(v["exponents_numeric"][0]["re"].as_f64(), Some(0.5));
        assert_eq!(v["indicial_polynomial"], "x - 1/2");
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        assert!(r.render_text().contains("definable flat sections  true"));
    }

    #[test]
    fn imaginary_report() {
        let r =
            analyze_system(&scalar(LaurentPoly::constant(GaussianRational::i())), &AnalysisOptions::default()).unwrap();
        assert!(!r.definable());
        assert_eq!(r.certificate_kind(), "NonRealExponent");
        let v = r.to_json();
        validate_report(&v).unwrap();
        assert_eq!(v["exponents_all_real"], false);
        assert!((r.monodromy.unwrap().eigenvalues[0].re - (-std::f64::consts::TAU).exp()).abs() < 1e-9);
    }
}
