mod error;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use connexion::connection::{ConnectionSystem, Ray};
use connexion::formal::analyze_formal;
use connexion::formal::FormalError;
use connexion::grammar::{parse_input, SourceDocument};
use connexion::numeric::{
    numeric_monodromy_with, DEFAULT_RADIUS, DEFAULT_SEGMENTS, DEFAULT_TOLERANCE, MAX_OSCILLATION_LEVELS,
};
use connexion::report::{analyze_system, builtin_corpus, decide_line, oscillate_system, run_corpus, AnalysisOptions};

use error::CliError;

/// `println!` that ignores a closed stdout, so piping into `head` is quiet.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

/// Local analysis of z·Y' = A(z)·Y at z = 0: slopes, exponents, monodromy
/// and whether the flat sections are definable.
#[derive(Parser)]
#[command(name = "connexion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: slopes, leading exponentials, exponents, monodromy, verdict.
    Analyze {
        /// Input file, or `-` for standard input.
        file: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// One-line verdict with its certificate.
    Decide { file: String },
    /// Numeric monodromy around 0.
    Monodromy {
        file: String,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEGMENTS)]
        segments: usize,
    },
    /// Phase crossings of the formal solutions along a ray.
    Oscillate {
        file: String,
        /// Direction as a fraction P/Q of a full turn.
        #[arg(long)]
        direction: String,
        #[arg(long, default_value_t = 40)]
        levels: usize,
    },
    /// Runs the built-in corpus.
    Corpus {
        /// Run only the case with this name.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn read_system(file: &str) -> Result<ConnectionSystem, CliError> {
    let doc = if file == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|source| CliError::Io { path: file.into(), source })?;
        SourceDocument::stdin(&text)
    } else {
        let text = std::fs::read_to_string(file).map_err(|source| CliError::Io { path: file.into(), source })?;
        SourceDocument::new(text, file)
    };
    let parsed = parse_input(&doc).map_err(|diagnostic| CliError::Parse { origin: doc.origin.clone(), diagnostic })?;
    Ok(parsed.to_system()?)
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn analyze(file: &str, format: Format) -> Result<(), CliError> {
    let sys = read_system(file)?;
    let report = analyze_system(&sys, &AnalysisOptions::default())?;
    match format {
        Format::Json => {
            out!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes"))
        }
        Format::Text => out!("{}", report.render_text()),
    }
    match report.numeric_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn decide(file: &str) -> Result<(), CliError> {
    out!("{}", decide_line(&analyze_formal(&read_system(file)?)?.verdict));
    Ok(())
}

fn monodromy(file: &str, radius: f64, tol: f64, segments: usize) -> Result<(), CliError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::Usage(format!("--radius must be positive, got {radius}")));
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1e-4], got {tol}")));
    }
    if segments < DEFAULT_SEGMENTS {
        return Err(CliError::Usage(format!("--segments must be at least {DEFAULT_SEGMENTS}")));
    }
    let sys = read_system(file)?;
    let m = numeric_monodromy_with(&sys, radius, tol, segments)?;
    out!("eigenvalues:");
    for l in &m.eigenvalues {
        let flag = if (l.norm() - 1.0).abs() > 1e-6 { "  |λ| ≠ 1" } else { "" };
        out!(
            "  {} {} {}i   |λ| = {:.10}{flag}",
            sci(l.re),
            if l.im < 0.0 { '-' } else { '+' },
            sci(l.im.abs()),
            l.norm()
        );
    }
    out!("residual: {:.3e}", m.residual);
    out!("wronskian residual: {:.3e}", m.wronskian_residual);
    out!("radius: {}  segments: {}", m.radius_used, m.segments);
    Ok(())
}

fn oscillate(file: &str, direction: &str, levels: usize) -> Result<(), CliError> {
    let turn = Ray::parse_turn(direction).map_err(|e| CliError::Usage(e.to_string()))?;
    if levels == 0 || levels > MAX_OSCILLATION_LEVELS {
        return Err(CliError::Usage(format!("--levels must lie in 1..={MAX_OSCILLATION_LEVELS}")));
    }
    let analysis = analyze_formal(&read_system(file)?)?;
    let osc = oscillate_system(&analysis, turn, levels)?;
    out!("direction θ={} (z-plane), levels J={levels}", osc.turn_z);
    for b in &osc.branches {
        let r = &b.report;
        let half = r.counts[levels / 2];
        out!(
            "{} on θ={}: count {} at J, {} at J/2, {}{}",
            b.label,
            b.turn,
            r.total(),
            half,
            r.classification.as_str(),
            if r.truncated { format!(" (phase overflow after level {})", r.levels_reached) } else { String::new() }
        );
        out!("  counts: {}", r.counts.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
    }
    out!("classification: {}", osc.classification.as_str());
    Ok(())
}

fn corpus(filter: Option<&str>) -> Result<(), CliError> {
    let cases = builtin_corpus();
    let outcomes = run_corpus(&cases, filter, &AnalysisOptions::default());
    if outcomes.is_empty() {
        out!("0 cases matched filter {:?}", filter.unwrap_or(""));
        return Ok(());
    }
    for o in &outcomes {
        let verdict = o.report.as_ref().map_or("-".to_string(), |r| r.definable().to_string());
        out!(
            "{} {:<28} definable={:<5} {:>8.1} ms",
            if o.passed() { "PASS" } else { "FAIL" },
            o.name,
            verdict,
            o.elapsed_ms
        );
        for f in &o.failures {
            out!("     {f}");
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    out!("{} cases, {passed} passed", outcomes.len());
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(CliError::Formal(FormalError::Inconsistent(format!("{} corpus cases failed", outcomes.len() - passed))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze { file, format } => analyze(&file, format),
        Command::Decide { file } => decide(&file),
        Command::Monodromy { file, radius, tol, segments } => monodromy(&file, radius, tol, segments),
        Command::Oscillate { file, direction, levels } => oscillate(&file, &direction, levels),
        Command::Corpus { filter } => corpus(filter.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
