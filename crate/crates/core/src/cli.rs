//! Command-line front end.
//!
//! Exit statuses: 0 when every requested check passed, 1 when a check
//! failed, 2 for usage errors (including a non-prime `--p`), 3 when a
//! resource cap was hit.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::analysis::{
    brute_force_distance, brute_force_distance_rule, saturation_csv, saturation_table,
    AnalysisError, Geometry, DEFAULT_WORD_CAP,
};
use crate::automaton::Rule;
use crate::codespace::{code_params, CodeError, CodeParams};
use crate::field::{make_prime, multinomial_mod_p, FieldError, Prime};
use crate::matrix::FpMatrix;
use crate::pascal::{pascal_matrix, side_checked, PascalError, DEFAULT_CELL_CAP};
use crate::render::{to_ascii, to_pbm, RenderHeader};
use crate::verify::{run as run_suites, Suite, VerifyConfig, VerifyError};

#[derive(Debug, Parser)]
#[command(
    name = "fractal-codes",
    version,
    about = "Sierpinski-triangle fractal codes over prime fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render the Pascal matrix, or one layer of the 3D Pascal tensor.
    Render(RenderArgs),
    /// Exact code parameters n, k, d.
    Params(ParamsArgs),
    /// Brute-force code distance.
    Distance(DistanceArgs),
    /// Run property suites and print a JSON failure report.
    Verify(VerifyArgs),
    /// Singleton / local-bound saturation table.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=3))]
    pub dim: u64,
    /// Time layer of the 3D tensor (required with --dim 3).
    #[arg(long)]
    pub layer: Option<usize>,
    #[arg(long, value_enum, default_value_t = RenderFormat::Pbm)]
    pub format: RenderFormat,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Pbm,
    Ascii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    pub dim: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleChoice {
    Sierpinski,
    /// `x(t+1)_r = x(t)_{r−1} + x(t)_r + x(t)_{r+1}`, D = 2 only.
    ThreeTap,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    pub dim: u64,
    #[arg(long, value_enum, default_value_t = RuleChoice::Sierpinski)]
    pub rule: RuleChoice,
    /// Maximum number of logical words to enumerate.
    #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
    pub cap: u128,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,
    /// Randomized draws; without it small spaces are enumerated.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Seed for the ChaCha8 generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    pub dim: u64,
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub p_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub m_list: Vec<u32>,
    /// Interaction range ω of the local bound.
    #[arg(long, default_value_t = 2.0)]
    pub omega: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PascalError> for CliError {
    fn from(e: PascalError) -> Self {
        match e {
            PascalError::TooLarge { .. } | PascalError::Overflow(_) => CliError::Resource(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Pascal(inner) => inner.into(),
            CodeError::TooLarge { .. } | CodeError::Overflow(_) => CliError::Resource(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Code(inner) => inner.into(),
            AnalysisError::CapExceeded { .. } => CliError::Resource(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        if e.is_resource_cap() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Rendered output and whether every check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn prime(p: u64) -> Result<Prime, CliError> {
    Ok(make_prime(p)?)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Render(a) => render(a),
        Command::Params(a) => params(a),
        Command::Distance(a) => distance(a),
        Command::Verify(a) => verify(a),
        Command::Bounds(a) => bounds(a),
    }
}

fn render(a: &RenderArgs) -> Result<Outcome, CliError> {
    let p = prime(a.p)?;
    let matrix = match (a.dim, a.layer) {
        (2, None) => pascal_matrix(p, a.m)?.as_matrix().clone(),
        (2, Some(_)) => return Err(CliError::Usage("--layer applies only to --dim 3".into())),
        (_, None) => return Err(CliError::Usage("--dim 3 requires --layer".into())),
        (_, Some(t)) => {
            let side = side_checked(p, a.m, 2, DEFAULT_CELL_CAP)?;
            if t >= side {
                return Err(CliError::Usage(format!("--layer {t} is outside 0..{side}")));
            }
            FpMatrix::from_fn(p, side, side, |r1, r2| {
                multinomial_mod_p(t as u64, &[r1 as u64, r2 as u64], p).value()
            })
        }
    };
    let text = match a.format {
        RenderFormat::Pbm => to_pbm(
            &matrix,
            &RenderHeader {
                p: p.get(),
                m: a.m,
                dim: a.dim as usize,
                layer: a.layer,
            },
        ),
        RenderFormat::Ascii => to_ascii(&matrix),
    };
    Ok(Outcome::pass(text))
}

fn params(a: &ParamsArgs) -> Result<Outcome, CliError> {
    let params = code_params(prime(a.p)?, a.m, a.dim as usize)?;
    let text = match a.format {
        ReportFormat::Json => to_json(&params),
        ReportFormat::Csv => format!("{}\n{}\n", CodeParams::csv_header(), params.csv_row()),
    };
    Ok(Outcome::pass(text))
}

fn distance(a: &DistanceArgs) -> Result<Outcome, CliError> {
    let p = prime(a.p)?;
    let params = code_params(p, a.m, a.dim as usize)?;
    let report = match a.rule {
        RuleChoice::Sierpinski => brute_force_distance(&params, a.cap)?,
        RuleChoice::ThreeTap => {
            if a.dim != 2 {
                return Err(CliError::Usage("--rule three-tap is defined for --dim 2 only".into()));
            }
            let geometry = Geometry::code(p, a.m, 2)?;
            let admissible = geometry.simplex_positions(params.side as usize);
            let mut report = brute_force_distance_rule(&Rule::three_tap(p), &geometry, &admissible, a.cap)?;
            report.rule = "three-tap".into();
            report
        }
    };
    Ok(Outcome {
        text: to_json(&report),
        passed: report.agrees(),
    })
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let cfg = VerifyConfig {
        p: prime(a.p)?,
        m: a.m,
        trials: a.trials,
        seed: a.seed,
    };
    let reports = run_suites(a.suite, &cfg)?;
    let passed = reports.iter().all(|r| r.passed());
    let text = if a.suite == Suite::All {
        to_json(&reports)
    } else {
        to_json(&reports[0])
    };
    Ok(Outcome { text, passed })
}

fn bounds(a: &BoundsArgs) -> Result<Outcome, CliError> {
    if a.omega.is_nan() || a.omega < 1.0 {
        return Err(CliError::Usage(format!("--omega must be at least 1, got {}", a.omega)));
    }
    if a.m_list.contains(&0) {
        return Err(CliError::Usage("--m-list entries must be at least 1".into()));
    }
    let primes = a.p_list.iter().map(|&p| prime(p)).collect::<Result<Vec<_>, _>>()?;
    let rows = saturation_table(&primes, &a.m_list, a.dim as usize, a.omega)?;
    let text = match a.format {
        ReportFormat::Csv => saturation_csv(&rows),
        ReportFormat::Json => to_json(&rows),
    };
    Ok(Outcome::pass(text))
}

fn output_target(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Render(a) => a.out.output.as_ref(),
        Command::Params(a) => a.out.output.as_ref(),
        Command::Distance(a) => a.out.output.as_ref(),
        Command::Verify(a) => a.out.output.as_ref(),
        Command::Bounds(a) => a.out.output.as_ref(),
    }
}

fn emit(command: &Command, text: &str) -> Result<(), CliError> {
    match output_target(command) {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|outcome| {
        emit(&cli.command, &outcome.text)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<Outcome, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("fractal-codes").chain(args.iter().copied()))
            .expect("arguments parse");
        execute(&cli.command)
    }

    #[test]
    fn render_small() {
        let out = exec(&["render", "--p", "2", "--m", "1"]).unwrap();
        assert_eq!(out.text, "P1\n# p=2 m=1 dim=2 layer=none\n2 2\n10\n11\n");
        let out = exec(&["render", "--p", "2", "--m", "3"]).unwrap();
        assert_eq!(out.text.lines().skip(3).flat_map(|l| l.chars()).filter(|&c| c == '1').count(), 27);
        let out = exec(&["render", "--p", "2", "--m", "2", "--dim", "3", "--layer", "3"]).unwrap();
        assert_eq!(
            out.text,
            "P1\n# p=2 m=2 dim=3 layer=3\n4 4\n1111\n1010\n1100\n1000\n"
        );
        assert!(matches!(
            exec(&["render", "--p", "2", "--m", "2", "--dim", "3"]),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn params_outputs() {
        let out = exec(&["params", "--p", "2", "--m", "2"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!((v["n"].as_u64(), v["k_spins"].as_u64(), v["d"].as_u64()), (Some(32), Some(4), Some(9)));
        let out = exec(&["params", "--p", "2", "--m", "1", "--dim", "3", "--format", "csv"]).unwrap();
        assert!(out.text.starts_with("p,m,D,L,n,k_spins,k_bits,d,dimension\n2,1,3,2,32,3,"));
        let err = exec(&["params", "--p", "4", "--m", "1"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn distance_outputs() {
        let out = exec(&["distance", "--p", "2", "--m", "2"]).unwrap();
        assert!(out.passed);
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!((v["oracle_d"].as_u64(), v["theory_d"].as_u64()), (Some(9), Some(9)));
        let err = exec(&["distance", "--p", "2", "--m", "5", "--cap", "1000"]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let out = exec(&["distance", "--p", "2", "--m", "1", "--rule", "three-tap"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert!(out.passed);
        assert!(v["theory_d"].is_null());
        assert_eq!(v["rule"], "three-tap");
    }

    #[test]
    fn bounds_outputs() {
        let out = exec(&["bounds", "--dim", "2", "--p-list", "2,3,5", "--m-list", "1,2", "--format", "csv"]).unwrap();
        assert_eq!(out.text.lines().count(), 7);
        let out = exec(&["bounds", "--dim", "3", "--p-list", "2", "--m-list", "1"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v[0]["dimension"].as_f64(), Some(2.0));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["fractal-codes", "verify", "--suite", "nope", "--p", "2", "--m", "1"]), 2);
        assert_eq!(run(["fractal-codes", "bounds", "--p-list", "", "--m-list", "1"]), 2);
        assert_eq!(run(["fractal-codes", "params", "--p", "2", "--m", "0"]), 2);
    }
}
