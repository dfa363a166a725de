//! The `genentropy` command line: `compute`, `verify` and `sweep`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 unreadable
//! input or arguments (including an empty sweep grid), 3 parameters that
//! violate a family's constraints.

mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub use input::{parse_inline, read_file, Input};

use crate::distributions::Normalization;
use crate::entropies::{conditional, EntropyParams, System};
use crate::error::Error;
use crate::generators::PseudoAddGenerator;
use crate::harness::{run_subject, run_suite, AxiomReport, Broken, Subject, TrialConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONSTRAINT: u8 = 3;

/// Largest number of rows a sweep will produce.
const MAX_SWEEP_ROWS: usize = 1_000_000;

/// A failed command together with its exit code.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn constraint(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONSTRAINT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::constraint(e.to_string())
    }
}

fn io_error(e: std::io::Error) -> CliError {
    CliError::input(format!("write failed: {e}"))
}

/// Shortest decimal form that parses back to the same `f64`. Negative zero
/// prints as `0.0`.
pub fn format_number(v: f64) -> String {
    let v = v + 0.0;
    format!("{v:?}")
}

#[derive(Debug, Parser)]
#[command(name = "genentropy", version, about = "Generalized entropies and axiom verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an entropy on a distribution, or on a joint together with its conditional entropy.
    Compute(ComputeArgs),
    /// Run the randomized axiom checks and emit a report.
    Verify(VerifyArgs),
    /// Evaluate an entropy over a grid of one parameter.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Shannon,
    Nath,
    Renyi,
    Tsallis,
    SharmaMittal,
    Gaussian,
    Generalized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GammaConvention {
    /// `γ = 1 − α`
    Tsallis,
    /// `γ = 2^{1−α} − 1`
    HavrdaCharvat,
    /// `γ = 2^{1−q} − 1`
    SharmaMittal,
    /// `γ = 1 − q`
    FrankDaffertshofer,
}

#[derive(Clone, Debug, Default, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "gamma_convention")]
    pub gamma: Option<f64>,
    /// Derive γ from α or q instead of passing --gamma.
    #[arg(long, value_enum)]
    pub gamma_convention: Option<GammaConvention>,
    /// Scale of the Shannon-type terms; defaults to -1.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Generator of the generalized family as JSON, e.g. '{"variant":"gamma-exp","lambda":-1,"gamma":-0.5}'.
    #[arg(long)]
    pub h: Option<String>,
}

fn need(v: Option<f64>, name: &str, family: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::input(format!("--{name} is required for --family {family}")))
}

impl FamilyArgs {
    fn gamma(&self, family: &str) -> Result<f64, CliError> {
        if let Some(g) = self.gamma {
            return Ok(g);
        }
        match self.gamma_convention {
            None => Err(CliError::input(format!(
                "--gamma or --gamma-convention is required for --family {family}"
            ))),
            Some(GammaConvention::Tsallis) => Ok(1.0 - need(self.alpha, "alpha", family)?),
            Some(GammaConvention::HavrdaCharvat) => {
                Ok((1.0 - need(self.alpha, "alpha", family)?).exp2() - 1.0)
            }
            Some(GammaConvention::SharmaMittal) => Ok((1.0 - need(self.q, "q", family)?).exp2() - 1.0),
            Some(GammaConvention::FrankDaffertshofer) => Ok(1.0 - need(self.q, "q", family)?),
        }
    }

    /// Validated parameters; missing arguments are input errors, constraint
    /// violations are constraint errors.
    pub fn params(&self) -> Result<EntropyParams, CliError> {
        let family = self
            .family
            .ok_or_else(|| CliError::input("--family is required"))?;
        let name = family.to_possible_value().expect("no skipped variants");
        let name = name.get_name();
        let tau = self.tau.unwrap_or(-1.0);
        let p = match family {
            FamilyName::Shannon => EntropyParams::shannon(tau),
            FamilyName::Renyi => EntropyParams::renyi(need(self.alpha, "alpha", name)?),
            FamilyName::Nath => EntropyParams::nath(
                tau,
                need(self.lambda, "lambda", name)?,
                self.alpha.unwrap_or(1.0),
            ),
            FamilyName::Tsallis => {
                EntropyParams::tsallis(need(self.alpha, "alpha", name)?, self.gamma(name)?, tau)
            }
            FamilyName::SharmaMittal => EntropyParams::sharma_mittal(
                need(self.q, "q", name)?,
                need(self.alpha, "alpha", name)?,
                self.gamma(name)?,
            ),
            FamilyName::Gaussian => EntropyParams::gaussian(need(self.q, "q", name)?, self.gamma(name)?),
            FamilyName::Generalized => {
                let text = self
                    .h
                    .as_deref()
                    .ok_or_else(|| CliError::input("--h is required for --family generalized"))?;
                let h: PseudoAddGenerator = serde_json::from_str(text)
                    .map_err(|e| CliError::input(format!("cannot parse --h: {e}")))?;
                EntropyParams::generalized(h, tau, need(self.lambda, "lambda", name)?, self.alpha.unwrap_or(1.0))
            }
        };
        Ok(p?)
    }
}

#[derive(Clone, Debug, Args)]
pub struct InputArgs {
    /// Inline JSON: `[p1, p2, ...]` or `[[row], [row], ...]` for a joint.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub dist: Option<String>,
    /// A .json or .csv file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Rescale inputs that do not sum to 1 instead of rejecting them.
    #[arg(long)]
    pub normalize: bool,
}

impl InputArgs {
    fn read(&self) -> Result<Input, CliError> {
        let mode = if self.normalize {
            Normalization::Renormalize
        } else {
            Normalization::Strict
        };
        match (&self.dist, &self.input) {
            (Some(text), _) => parse_inline(text, mode),
            (None, Some(path)) => read_file(path, mode),
            (None, None) => Err(CliError::input("--dist or --input is required")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ValueFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub input: InputArgs,
    /// System whose conditional entropy is reported for joints; defaults to the family's own.
    #[arg(long, value_parser = parse_system)]
    pub system: Option<System>,
    #[arg(long, value_enum, default_value_t = ValueFormat::Text)]
    pub format: ValueFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_parser = parse_system)]
    pub system: Option<System>,
    /// Every family on the default parameter grid, the reductions and the mean-gap checks.
    #[arg(long, conflicts_with_all = ["family", "system"])]
    pub all: bool,
    #[arg(long, env = "ENTROPY_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Random distributions per dimension for maximality and expandability.
    #[arg(long)]
    pub simplex_trials: Option<usize>,
    /// Tolerance for composition, additivity and power-law identities.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Add a functional known to violate some axioms.
    #[arg(long, value_parser = parse_broken)]
    pub inject: Vec<Broken>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Alpha,
    Q,
    Gamma,
    Tau,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

fn parse_system(s: &str) -> Result<System, String> {
    System::parse(s).ok_or_else(|| format!("unknown system {s:?} (expected SK, NSK, ASK, GSK or SM)"))
}

fn parse_broken(s: &str) -> Result<Broken, String> {
    Broken::parse(s).ok_or_else(|| {
        let names: Vec<_> = Broken::ALL.iter().map(Broken::as_str).collect();
        format!("unknown functional {s:?} (expected one of {})", names.join(", "))
    })
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out`. Returns the exit code on success.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<u8, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{}", e.render()).map_err(io_error)?;
                return Ok(EXIT_OK);
            }
            return Err(CliError::input(e.render().to_string().trim_end().to_string()));
        }
    };
    match cli.command {
        Command::Compute(a) => cmd_compute(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
    }
}

#[derive(Serialize)]
struct ComputeOutput {
    family: &'static str,
    params: EntropyParams,
    entropy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditional: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    system: Option<System>,
}

pub fn cmd_compute(a: &ComputeArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let params = a.family.params()?;
    let input = a.input.read()?;
    let result = match &input {
        Input::Dist(p) => ComputeOutput {
            family: params.name(),
            params,
            entropy: params.value(p)?,
            conditional: None,
            system: None,
        },
        Input::Joint(j) => {
            let subject = Subject::from(params);
            let system = a.system.unwrap_or(params.composition_rule().system);
            let rule = crate::harness::rule_for(system, &subject)?;
            ComputeOutput {
                family: params.name(),
                params,
                entropy: params.value(&j.flatten())?,
                conditional: Some(conditional(j, &params, &rule)?),
                system: Some(system),
            }
        }
    };
    match a.format {
        ValueFormat::Text => {
            writeln!(out, "{}", format_number(result.entropy)).map_err(io_error)?;
            if let Some(c) = result.conditional {
                writeln!(out, "{}", format_number(c)).map_err(io_error)?;
            }
        }
        ValueFormat::Json => {
            let text = serde_json::to_string(&result).expect("output serializes");
            writeln!(out, "{text}").map_err(io_error)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let mut cfg = TrialConfig::with_seed(a.seed);
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(t) = a.simplex_trials {
        cfg.simplex_trials = t;
    }
    if let Some(t) = a.tolerance {
        cfg.tolerance = t;
    }
    cfg.validate().map_err(|e| CliError::input(e.to_string()))?;

    let report = if a.all {
        cfg.inject = a.inject.clone();
        run_suite(&cfg)?
    } else {
        let mut checks = Vec::new();
        let mut label = String::from("SK");
        if a.family.family.is_some() {
            let subject = Subject::from(a.family.params()?);
            let system = a.system.unwrap_or(subject.rule().system);
            label = system.to_string();
            checks.extend(run_subject(&subject, system, &cfg)?);
        } else if a.inject.is_empty() {
            return Err(CliError::input("verify needs --all, --family or --inject"));
        }
        for b in &a.inject {
            checks.extend(run_subject(&Subject::from(*b), System::Sk, &cfg)?);
        }
        AxiomReport::new(label, cfg.seed, cfg.trials, checks)
    };

    let text = match a.format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Text => report.to_text(),
    };
    match &a.output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            let failed = report.failures().count();
            writeln!(
                out,
                "{} checks, {failed} failed: {}",
                report.checks.len(),
                if report.passed { "PASS" } else { "FAIL" }
            )
            .map_err(io_error)?;
        }
        None => out.write_all(text.as_bytes()).map_err(io_error)?,
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Grid points `from, from + step, ...` up to `to`, rounded to 12 decimals
/// so that decimal steps print cleanly.
pub fn sweep_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || from > to {
        return Err(CliError::input(format!(
            "empty grid: from {from} to {to} step {step}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() + 1.0;
    if count > MAX_SWEEP_ROWS as f64 {
        return Err(CliError::input(format!("grid has more than {MAX_SWEEP_ROWS} points")));
    }
    Ok((0..count as usize)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let grid = sweep_grid(a.from, a.to, a.step)?;
    let p = match a.input.read()? {
        Input::Dist(p) => p,
        Input::Joint(_) => return Err(CliError::input("sweep needs a distribution, not a joint")),
    };
    let name = a.param.to_possible_value().expect("no skipped variants");
    let name = name.get_name();
    let mut rows = Vec::with_capacity(grid.len());
    for &x in &grid {
        let mut fam = a.family.clone();
        let slot = match a.param {
            SweepParam::Alpha => &mut fam.alpha,
            SweepParam::Q => &mut fam.q,
            SweepParam::Gamma => &mut fam.gamma,
            SweepParam::Tau => &mut fam.tau,
            SweepParam::Lambda => &mut fam.lambda,
        };
        *slot = Some(x);
        let params = fam.params().map_err(|e| CliError {
            message: format!("at {name} = {x}: {}", e.message),
            ..e
        })?;
        rows.push((x, params.value(&p)?));
    }
    match a.format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([name, "entropy"]).map_err(|e| CliError::input(e.to_string()))?;
            for (x, v) in &rows {
                w.write_record([format_number(*x), format_number(*v)])
                    .map_err(|e| CliError::input(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::input(e.to_string()))?;
            out.write_all(&bytes).map_err(io_error)?;
        }
        TableFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                value: f64,
                entropy: f64,
            }
            #[derive(Serialize)]
            struct Table<'a> {
                param: &'a str,
                rows: Vec<Row>,
            }
            let table = Table {
                param: name,
                rows: rows.iter().map(|&(value, entropy)| Row { value, entropy }).collect(),
            };
            let text = serde_json::to_string_pretty(&table).expect("table serializes");
            writeln!(out, "{text}").map_err(io_error)?;
        }
    }
    Ok(EXIT_OK)
}
