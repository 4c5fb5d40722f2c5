//! Batch front end for the `nonext` library.
//!
//! Every command writes one report to standard output, as a JSON object
//! `{"command", "config", "results", "passed", ...}` or as CSV rows. Exit
//! status is 0 when everything passed, 1 when a check failed and 2 on an
//! input or configuration error.

pub mod input;
pub mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use nonext::axioms::{self, IDENTITY_TOL, LIMIT_K_MAX, MAXIMALITY_TOL};
use nonext::phi::default_grid;
use nonext::reconstruction::proof_identity_residual;
use nonext::sampling::{flat_dirichlet, random_product, random_refinement, seeded_rng, DEFAULT_SEED};
use nonext::{
    generalized_entropy, havrda_charvat, normalized_tsallis, reconstruct_rational, shannon, tsallis,
    uniqueness_check, validate_phi, CheckReport, PhiSpec, PhiTolerances, QParam,
};

use crate::input::Input;
use crate::sweep::{continuity_report, QRange};

/// Environment variable that replaces the default seed.
pub const SEED_ENV: &str = "NONEXT_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{op}: {source}")]
    Kernel {
        op: &'static str,
        #[source]
        source: nonext::Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn kernel(op: &'static str) -> impl FnOnce(nonext::Error) -> CliError {
    move |source| CliError::Kernel { op, source }
}

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "nonext", version, about = "Nonextensive entropies and axiom checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate one entropy at one q.
    Eval(EvalArgs),
    /// Evaluate the entropy over a range of q.
    Sweep(SweepArgs),
    /// Run axiom and identity checks.
    Verify(VerifyArgs),
    /// Check the admissibility conditions of a phi function.
    PhiValidate(PhiValidateArgs),
    /// Compare the rational reconstruction with the closed form.
    Reconstruct(ReconstructArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Sweep(_) => "sweep",
            Command::Verify(_) => "verify",
            Command::PhiValidate(_) => "phi-validate",
            Command::Reconstruct(_) => "reconstruct",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PhiArgs {
    /// Built-in phi: tsallis, cubic or havrda_charvat.
    #[arg(long, conflicts_with = "phi_poly")]
    pub phi: Option<String>,
    /// Coefficients c0,c1,... of P in phi(q) = (q-1) * P(q).
    #[arg(long, allow_hyphen_values = true, value_name = "COEFFS")]
    pub phi_poly: Option<String>,
}

impl PhiArgs {
    pub fn resolve(&self) -> Result<PhiSpec, CliError> {
        if let Some(coeffs) = &self.phi_poly {
            let parsed = coeffs
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Parse(format!("--phi-poly: `{c}` is not a number")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            return PhiSpec::polynomial(parsed).map_err(kernel("phi-poly"));
        }
        PhiSpec::builtin(self.phi.as_deref().unwrap_or("tsallis")).map_err(kernel("phi"))
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// (1 - sum p^q) / phi(q)
    #[default]
    Generalized,
    Tsallis,
    NormalizedTsallis,
    HavrdaCharvat,
    Shannon,
}

fn parse_q(s: &str) -> Result<f64, String> {
    let q: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    QParam::new(q).map(QParam::get).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EvalArgs {
    /// Input file, or `-` for standard input.
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long, value_parser = parse_q)]
    pub q: f64,
    #[command(flatten)]
    pub phi: PhiArgs,
    #[arg(long, value_enum, default_value_t = Measure::Generalized)]
    pub measure: Measure,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub dist: PathBuf,
    /// LO:HI:STEP
    #[arg(long)]
    pub q_range: QRange,
    #[command(flatten)]
    pub phi: PhiArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Additivity,
    Pseudo,
    Maximality,
    Expand,
    Limit,
    Symmetry,
    All,
}

impl Suite {
    fn expand(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Additivity, Pseudo, Maximality, Expand, Limit, Symmetry],
            one => vec![one],
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long, value_parser = parse_q)]
    pub q: f64,
    #[command(flatten)]
    pub phi: PhiArgs,
    /// Tolerance for additivity, pseudoadditivity and maximality.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Additional random inputs per check, drawn from the seed.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Finest step 10^-K for the q -> 1 limit check.
    #[arg(long, default_value_t = LIMIT_K_MAX)]
    pub k_max: i32,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PhiValidateArgs {
    #[command(flatten)]
    pub phi: PhiArgs,
    /// Tolerance on derivative comparisons.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Zero test for phi(1).
    #[arg(long)]
    pub zero_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReconstructArgs {
    /// Distribution, or `{"m": [...]}` multiplicities for an exact rational point.
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long, value_parser = parse_q)]
    pub q: f64,
    #[command(flatten)]
    pub phi: PhiArgs,
    /// Denominator M of the rational approximation.
    #[arg(long, default_value_t = 10_000)]
    pub denominator: u64,
    /// Tolerance on an exact rational input.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Result of one run: the rendered report and whether everything passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub output: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.command {
        Command::Eval(args) => eval(config, args),
        Command::Sweep(args) => sweep(config, args),
        Command::Verify(args) => verify(config, args),
        Command::PhiValidate(args) => phi_validate(config, args),
        Command::Reconstruct(args) => reconstruct(config, args),
    }
}

fn q_param(q: f64) -> Result<QParam, CliError> {
    QParam::new(q).map_err(kernel("q"))
}

fn render_json(config: &RunConfig, results: Value, passed: bool, extra: Option<(&str, Value)>) -> String {
    let mut report = json!({
        "command": config.command.name(),
        "config": config.command,
        "results": results,
        "passed": passed,
    });
    if let Some((key, value)) = extra {
        report[key] = value;
    }
    let mut out = serde_json::to_string_pretty(&report).expect("report is valid JSON");
    out.push('\n');
    out
}

fn render_csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(to_io)?;
    for row in rows {
        w.write_record(&row).map_err(to_io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

// Debug formatting switches to exponent notation for very small or large values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn check_rows(reports: &[CheckReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                serde_json::to_value(r.status).unwrap().as_str().unwrap().to_string(),
                r.passed.to_string(),
                num(r.residual),
                num(r.tol),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                r.note.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

const CHECK_HEADER: [&str; 7] = ["name", "status", "passed", "residual", "tol", "seed", "note"];

fn finish_checks(config: &RunConfig, format: OutputFormat, reports: Vec<CheckReport>) -> Result<Outcome, CliError> {
    let passed = reports.iter().all(CheckReport::is_ok);
    let output = match format {
        OutputFormat::Json => render_json(config, serde_json::to_value(&reports).unwrap(), passed, None),
        OutputFormat::Csv => render_csv(&CHECK_HEADER, check_rows(&reports))?,
    };
    Ok(Outcome { passed, output })
}

fn eval(config: &RunConfig, args: &EvalArgs) -> Result<Outcome, CliError> {
    let d = Input::load(&args.dist)?.distribution();
    let q = q_param(args.q)?;
    let (phi_name, entropy) = match args.measure {
        Measure::Generalized => {
            let phi = args.phi.resolve()?;
            let s = generalized_entropy(&d, q, &phi).map_err(kernel("eval"))?;
            (phi.name().to_string(), s)
        }
        Measure::Tsallis => ("tsallis".into(), tsallis(&d, q)),
        Measure::NormalizedTsallis => ("tsallis".into(), normalized_tsallis(&d, q)),
        Measure::HavrdaCharvat => ("havrda_charvat".into(), havrda_charvat(&d, q)),
        Measure::Shannon => (String::new(), shannon(&d)),
    };
    let output = match args.output.format {
        OutputFormat::Json => render_json(
            config,
            json!([{ "measure": args.measure, "phi": phi_name, "q": q.get(), "entropy": entropy }]),
            true,
            Some(("entropy", json!(entropy))),
        ),
        OutputFormat::Csv => render_csv(
            &["measure", "phi", "q", "entropy"],
            vec![vec![
                serde_json::to_value(args.measure).unwrap().as_str().unwrap().to_string(),
                phi_name,
                num(q.get()),
                num(entropy),
            ]],
        )?,
    };
    Ok(Outcome { passed: true, output })
}

fn sweep(config: &RunConfig, args: &SweepArgs) -> Result<Outcome, CliError> {
    let d = Input::load(&args.dist)?.distribution();
    let phi = args.phi.resolve()?;
    let qs = args.q_range.points();
    let values = qs
        .iter()
        .map(|&q| generalized_entropy(&d, q_param(q)?, &phi).map_err(kernel("sweep")))
        .collect::<Result<Vec<_>, _>>()?;
    let continuity = continuity_report(&qs, &values);
    let passed = continuity.is_ok();
    let output = match args.output.format {
        OutputFormat::Json => {
            let rows: Vec<Value> = qs
                .iter()
                .zip(&values)
                .map(|(q, s)| json!({ "q": q, "entropy": s }))
                .collect();
            render_json(config, Value::Array(rows), passed, Some(("continuity", json!(continuity))))
        }
        OutputFormat::Csv => render_csv(
            &["q", "entropy"],
            qs.iter()
                .zip(&values)
                .map(|(q, s)| vec![num(*q), num(*s)])
                .collect(),
        )?,
    };
    Ok(Outcome { passed, output })
}

fn verify(config: &RunConfig, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let input = Input::load(&args.dist)?;
    let phi = args.phi.resolve()?;
    let q = q_param(args.q)?;
    let identity_tol = args.tol.unwrap_or(IDENTITY_TOL);
    let max_tol = args.tol.unwrap_or(MAXIMALITY_TOL);
    let d = input.distribution();
    let mut rng = seeded_rng(args.seed);
    let mut reports = Vec::new();

    for suite in args.suite.expand() {
        match suite {
            Suite::Additivity => {
                let op = "verify: shannon_additivity";
                reports.push(axioms::check_shannon_additivity(&input.refinement(), q, &phi, identity_tol).map_err(kernel(op))?);
                for _ in 0..args.trials {
                    let r = random_refinement(&mut rng, 8, 8);
                    reports.push(axioms::check_shannon_additivity(&r, q, &phi, identity_tol).map_err(kernel(op))?);
                }
            }
            Suite::Pseudo => {
                let op = "verify: pseudoadditivity";
                reports.push(axioms::check_pseudoadditivity(&input.product_system(), q, &phi, identity_tol).map_err(kernel(op))?);
                for _ in 0..args.trials {
                    let s = random_product(&mut rng, 8);
                    reports.push(axioms::check_pseudoadditivity(&s, q, &phi, identity_tol).map_err(kernel(op))?);
                }
            }
            Suite::Maximality => {
                let op = "verify: maximality";
                reports.push(axioms::check_maximality(&d, q, &phi, max_tol).map_err(kernel(op))?);
                for _ in 0..args.trials {
                    let sample = flat_dirichlet(&mut rng, d.len());
                    reports.push(axioms::check_maximality(&sample, q, &phi, max_tol).map_err(kernel(op))?);
                }
            }
            Suite::Expand => {
                let op = "verify: expandability";
                reports.push(axioms::check_expandability(&d, q, &phi, 0.0).map_err(kernel(op))?);
                for _ in 0..args.trials {
                    let sample = flat_dirichlet(&mut rng, d.len());
                    reports.push(axioms::check_expandability(&sample, q, &phi, 0.0).map_err(kernel(op))?);
                }
            }
            Suite::Limit => {
                let op = "verify: shannon_limit";
                reports.push(axioms::check_shannon_limit(&d, &phi, args.k_max).map_err(kernel(op))?);
                for _ in 0..args.trials {
                    let sample = flat_dirichlet(&mut rng, d.len());
                    reports.push(axioms::check_shannon_limit(&sample, &phi, args.k_max).map_err(kernel(op))?);
                }
            }
            Suite::Symmetry => {
                let op = "verify: symmetry";
                reports.push(axioms::check_symmetry(&d, q, &phi, args.seed).map_err(kernel(op))?);
                for _ in 0..args.trials {
                    let sample = flat_dirichlet(&mut rng, d.len());
                    let seed = rng.random();
                    reports.push(axioms::check_symmetry(&sample, q, &phi, seed).map_err(kernel(op))?);
                }
            }
            Suite::All => unreachable!("expanded above"),
        }
    }
    finish_checks(config, args.output.format, reports)
}

fn phi_validate(config: &RunConfig, args: &PhiValidateArgs) -> Result<Outcome, CliError> {
    let phi = args.phi.resolve()?;
    let defaults = PhiTolerances::default();
    let tol = PhiTolerances {
        derivative: args.tol.unwrap_or(defaults.derivative),
        zero: args.zero_tol.unwrap_or(defaults.zero),
    };
    let report = validate_phi(&phi, &default_grid(), tol).map_err(kernel("phi-validate"))?;
    let passed = report.all_passed();
    let output = match args.output.format {
        OutputFormat::Json => render_json(config, json!([report]), passed, None),
        OutputFormat::Csv => render_csv(
            &["condition", "passed", "measured", "witness_q"],
            report
                .conditions()
                .iter()
                .map(|(name, c)| {
                    vec![
                        name.to_string(),
                        c.passed.to_string(),
                        c.measured.map(num).unwrap_or_default(),
                        c.witness_q.iter().map(|&q| num(q)).collect::<Vec<_>>().join(";"),
                    ]
                })
                .collect(),
        )?,
    };
    Ok(Outcome { passed, output })
}

fn reconstruct(config: &RunConfig, args: &ReconstructArgs) -> Result<Outcome, CliError> {
    let input = Input::load(&args.dist)?;
    let phi = args.phi.resolve()?;
    let q = q_param(args.q)?;
    let reports = match &input {
        Input::Rational(rd) => {
            let rebuilt = reconstruct_rational(rd, q, &phi).map_err(kernel("reconstruct"))?;
            let closed = generalized_entropy(&rd.to_distribution(), q, &phi).map_err(kernel("reconstruct"))?;
            let identity = proof_identity_residual(rd, q);
            vec![
                CheckReport::new("reconstruction", (rebuilt - closed).abs(), args.tol.unwrap_or(1e-10), false)
                    .with_witness(json!({
                        "q": q.get(),
                        "phi": phi.name(),
                        "multiplicities": rd.multiplicities(),
                        "reconstructed": rebuilt,
                        "closed_form": closed,
                    })),
                CheckReport::new("proof_identity", identity, 1e-12, true)
                    .with_witness(json!({ "q": q.get(), "multiplicities": rd.multiplicities() })),
            ]
        }
        other => vec![uniqueness_check(&other.distribution(), q, &phi, args.denominator, args.seed)
            .map_err(kernel("reconstruct"))?],
    };
    finish_checks(config, args.output.format, reports)
}
