//! Command-line frontend.
//!
//! Exit codes: 0 no violations, 1 violations found, 2 usage or input error,
//! 3 numerical failure or failed output.

mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use files::{
    number, parse_polynomial, polynomial_json, read_polynomial, report_json, write_polynomial, write_report,
    PolynomialFile, ReportOptions,
};

use crate::error::Error;
use crate::harness::{
    default_alpha_grid, default_eps_grid, default_level_ratios, extremal_search, necessity_check, run_campaign,
    HarnessConfig, InequalityKind, SearchConfig,
};
use crate::norms::{NormInput, NormKind, NormRequest};
use crate::quadrature::{MaximizeConfig, QuadratureConfig};
use crate::sampling::SamplerSpec;
use crate::weights::binomial_weights;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "CONTRACTIVE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "contractive", version, about = "Numerical checks of contractive inequalities for Hardy spaces")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one norm of a polynomial read from a file.
    Norm(NormArgs),
    /// Print c_alpha(0), ..., c_alpha(n).
    Weights(WeightsArgs),
    /// Run a seeded random campaign for one inequality.
    Test(TestArgs),
    /// Fit the small-eps margin slope of the Riesz necessity family.
    Necessity(NecessityArgs),
    /// Simplex search for the smallest margin.
    Search(SearchArgs),
    /// Compare two report files.
    ReportDiff(ReportDiffArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormChoice {
    Hardy,
    Lebesgue,
    Geometric,
    Bergman,
    U,
    UPrime,
    LittlewoodPaley,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindChoice {
    Burbea,
    Dual,
    Bergman,
    Riesz,
    RieszGeom,
    Measure,
    Uf,
    Radial,
    Logconvex,
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadratureConfig, Error> {
        QuadratureConfig::new(self.abs_tol, self.rel_tol, self.max_subdivisions)
    }
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub kind: NormChoice,
    #[arg(long)]
    pub p: Option<f64>,
    /// Lebesgue exponent; `inf` for the sup norm.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub file: PathBuf,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub n: usize,
}

/// Parameters of the inequality under test.
#[derive(Debug, Clone, Args)]
pub struct KindArgs {
    pub kind: KindChoice,
    /// Burbea exponent.
    #[arg(long)]
    pub p: Option<f64>,
    /// Dual exponent.
    #[arg(long)]
    pub q: Option<f64>,
    /// Riesz source exponent; `inf` allowed.
    #[arg(long)]
    pub r: Option<f64>,
    /// Bergman or log-convexity exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Exponent grid for `uf`.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Decreasing level ratios for `radial`.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    /// Negative frequencies of trigonometric samples.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Positive frequencies of trigonometric samples.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Sampler exponent for kinds other than `burbea`.
    #[arg(long)]
    pub sampler_p: Option<f64>,
    /// Real Gaussian coefficients.
    #[arg(long)]
    pub real: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Report file.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write elapsed_ms = 0 in the report.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NecessityArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 16)]
    pub pool: u64,
    #[arg(long, default_value_t = 300)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// File for the worst polynomial found.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportDiffArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Skip the elapsed_ms field.
    #[arg(long)]
    pub ignore_timing: bool,
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn output_failure(e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_NUMERICAL, message: format!("cannot write output: {e}") }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match CliConfig::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Norm(a) => run_norm(a, out),
        Command::Weights(a) => run_weights(a, out),
        Command::Test(a) => run_test(a, out, err),
        Command::Necessity(a) => run_necessity(a, out),
        Command::Search(a) => run_search(a, out),
        Command::ReportDiff(a) => run_report_diff(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn run_norm(a: &NormArgs, out: &mut dyn Write) -> Outcome {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| usage(format!("--kind {:?} needs --{name}", a.kind)));
    let kind = match a.kind {
        NormChoice::Hardy => NormKind::Hardy { p: need(a.p, "p")? },
        NormChoice::Lebesgue => NormKind::Lebesgue { r: need(a.r, "r")? },
        NormChoice::Geometric => NormKind::GeometricMean,
        NormChoice::Bergman => NormKind::Bergman { p: need(a.p, "p")?, alpha: need(a.alpha, "alpha")? },
        NormChoice::U => NormKind::UValue { alpha: need(a.alpha, "alpha")? },
        NormChoice::UPrime => NormKind::UDerivative { alpha: need(a.alpha, "alpha")? },
        NormChoice::LittlewoodPaley => NormKind::LittlewoodPaley,
    };
    let input = match read_polynomial(&a.file)? {
        PolynomialFile::Analytic(f) => NormInput::Analytic(f),
        PolynomialFile::Trig(t) => NormInput::Trig(t),
    };
    let value = NormRequest { kind, cfg: a.quad.config()? }.evaluate(&input)?;
    writeln!(out, "{value}").map_err(output_failure)?;
    Ok(EXIT_OK)
}

fn run_weights(a: &WeightsArgs, out: &mut dyn Write) -> Outcome {
    let w = binomial_weights(a.alpha, a.n)?;
    let line: Vec<String> = w.values().iter().map(|v| v.to_string()).collect();
    writeln!(out, "{}", line.join(" ")).map_err(output_failure)?;
    Ok(EXIT_OK)
}

/// Builds the inequality from the kind flags, rejecting flags the kind does not use.
pub fn inequality_kind(a: &KindArgs) -> Result<InequalityKind, Error> {
    let name = a.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let given: [(&str, bool); 8] = [
        ("p", a.p.is_some()),
        ("q", a.q.is_some()),
        ("r", a.r.is_some()),
        ("alpha", a.alpha.is_some()),
        ("beta", a.beta.is_some()),
        ("lambda", a.lambda.is_some()),
        ("alphas", a.alphas.is_some()),
        ("levels", a.levels.is_some()),
    ];
    let allowed: &[&str] = match a.kind {
        KindChoice::Burbea => &["p"],
        KindChoice::Dual => &["q"],
        KindChoice::Bergman => &["alpha"],
        KindChoice::Riesz => &["r"],
        KindChoice::RieszGeom => &[],
        KindChoice::Measure => &["lambda"],
        KindChoice::Uf => &["alphas"],
        KindChoice::Radial => &["levels"],
        KindChoice::Logconvex => &["alpha", "beta"],
    };
    if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !allowed.contains(f)) {
        return Err(Error::Domain(format!("--{flag} does not apply to {name}")));
    }
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Error::Domain(format!("{name} needs --{flag}")));
    let kind = match a.kind {
        KindChoice::Burbea => InequalityKind::Burbea { p: need(a.p, "p")? },
        KindChoice::Dual => InequalityKind::Dual { q: need(a.q, "q")? },
        KindChoice::Bergman => InequalityKind::BergmanEmbed { alpha: need(a.alpha, "alpha")? },
        KindChoice::Riesz => InequalityKind::Riesz { r: need(a.r, "r")? },
        KindChoice::RieszGeom => InequalityKind::RieszGeometric,
        KindChoice::Measure => InequalityKind::Measure { lambda: need(a.lambda, "lambda")? },
        KindChoice::Uf => {
            InequalityKind::UfMonotone { alpha_grid: a.alphas.clone().unwrap_or_else(default_alpha_grid) }
        }
        KindChoice::Radial => {
            InequalityKind::RadialMonotone { level_ratios: a.levels.clone().unwrap_or_else(default_level_ratios) }
        }
        KindChoice::Logconvex => {
            InequalityKind::LogConvex { alpha: need(a.alpha, "alpha")?, beta: need(a.beta, "beta")? }
        }
    };
    kind.validate()?;
    Ok(kind)
}

/// Sampler for `kind`. Burbea campaigns sample with their own exponent,
/// Bergman embeddings with `2/alpha`, the remaining analytic kinds with `p = 2`
/// unless `--sampler-p` is given.
pub fn sampler_spec(kind: &InequalityKind, a: &SamplerArgs) -> Result<SamplerSpec, Error> {
    let spec = if kind.needs_trig() {
        if a.sampler_p.is_some() {
            return Err(Error::Domain("--sampler-p does not apply to trigonometric samples".into()));
        }
        SamplerSpec::standard_trig(a.m, a.n, a.seed)
    } else {
        let p = match (kind, a.sampler_p) {
            (InequalityKind::Burbea { p }, None) => *p,
            (InequalityKind::BergmanEmbed { alpha }, None) => 2.0 / alpha,
            (_, Some(p)) => p,
            (_, None) => 2.0,
        };
        SamplerSpec::burbea(p, a.degree, a.seed)?
    };
    Ok(spec.with_real_coefficients(a.real))
}

fn threads(t: Option<usize>) -> Result<Option<usize>, Failure> {
    match t {
        Some(0) => Err(usage("--threads must be at least 1")),
        t => Ok(t),
    }
}

fn run_test(a: &TestArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let kind = inequality_kind(&a.kind)?;
    let spec = sampler_spec(&kind, &a.sampler)?;
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let cfg = HarnessConfig { quadrature: a.quad.config()?, maximize: MaximizeConfig::default(), tol: a.tol };
    let report = run_campaign(&kind, &spec, a.trials, &cfg, threads(a.threads)?)?;

    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(output_failure);
    w(out, format!("{}: {}", report.kind.tag(), report.kind))?;
    w(out, format!("trials {}  failed {}  violations {}", report.trials, report.failed_trials(), report.violations))?;
    match &report.worst_case {
        Some(wc) => w(
            out,
            format!("min margin {} (trial {}, lhs {}, rhs {})", report.min_margin, wc.trial_index, wc.lhs, wc.rhs),
        )?,
        None => w(out, "min margin undefined (no trial succeeded)".into())?,
    }
    if matches!(kind, InequalityKind::UfMonotone { .. }) {
        w(out, format!("acceptance rate {}", report.acceptance_rate))?;
    }
    if report.quasi_norm {
        w(out, "note: target exponent below 1, H^q is only a quasi-norm".into())?;
    }
    if report.rechecked > 0 {
        w(out, format!("rechecked at tighter quadrature: {}", report.rechecked))?;
    }
    for f in report.failures.iter().take(5) {
        let _ = writeln!(err, "trial {} failed: {}", f.trial_index, f.message);
    }
    if report.failures.len() > 5 {
        let _ = writeln!(err, "... {} more failed trials", report.failures.len() - 5);
    }
    if let Some(path) = &a.output {
        write_report(&report, &ReportOptions { command: "test", no_timing: a.no_timing }, path)
            .map_err(output_failure)?;
    }
    Ok(if report.violations > 0 {
        EXIT_VIOLATION
    } else if report.failed_trials() > 0 {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    })
}

fn run_necessity(a: &NecessityArgs, out: &mut dyn Write) -> Outcome {
    let eps = a.eps.clone().unwrap_or_else(default_eps_grid);
    let res = necessity_check(a.r, a.q, &eps, &a.quad.config()?)?;
    let mut text = format!("r {}  q {}  rho {}\n", res.r, res.q, res.rho);
    for (e, m) in &res.margins {
        text += &format!("eps {e}  margin {m}\n");
    }
    text += &format!(
        "slope {}  predicted {}  relative error {}\n{}\n",
        res.slope,
        res.predicted,
        res.relative_error(),
        res.verdict
    );
    write!(out, "{text}").map_err(output_failure)?;
    // Negative margins mean the inequality fails for this family.
    Ok(if res.margins.iter().any(|(_, m)| *m < -a.tol) { EXIT_VIOLATION } else { EXIT_OK })
}

fn run_search(a: &SearchArgs, out: &mut dyn Write) -> Outcome {
    let kind = inequality_kind(&a.kind)?;
    let spec = sampler_spec(&kind, &a.sampler)?;
    let cfg = HarnessConfig { quadrature: a.quad.config()?, maximize: MaximizeConfig::default(), tol: a.tol };
    let search = SearchConfig { restarts: a.restarts, pool: a.pool, max_evals: a.max_evals, step: a.step };
    let res = extremal_search(&kind, &spec, &search, &cfg)?;
    let wc = &res.worst;
    let text = format!(
        "{}: {}\nworst margin {} (lhs {}, rhs {}, error estimate {})\nevaluations {}\n{}\n",
        kind.tag(),
        kind,
        wc.margin,
        wc.lhs,
        wc.rhs,
        res.error_estimate,
        res.evaluations,
        polynomial_json(wc.sample.min_degree(), wc.sample.coeffs())
    );
    write!(out, "{text}").map_err(output_failure)?;
    if let Some(path) = &a.output {
        write_polynomial(path, wc.sample.min_degree(), wc.sample.coeffs()).map_err(output_failure)?;
    }
    Ok(if res.violation { EXIT_VIOLATION } else { EXIT_OK })
}

fn run_report_diff(a: &ReportDiffArgs, out: &mut dyn Write) -> Outcome {
    let load = |p: &PathBuf| -> Result<(String, serde_json::Map<String, serde_json::Value>), Failure> {
        let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        match value {
            serde_json::Value::Object(m) => Ok((text, m)),
            _ => Err(usage(format!("{}: not a report object", p.display()))),
        }
    };
    let (ta, ma) = load(&a.first)?;
    let (tb, mb) = load(&a.second)?;
    if ta == tb {
        writeln!(out, "identical").map_err(output_failure)?;
        return Ok(EXIT_OK);
    }
    let mut keys: Vec<&String> = ma.keys().chain(mb.keys()).collect();
    keys.sort();
    keys.dedup();
    let differing: Vec<&String> = keys
        .into_iter()
        .filter(|k| !(a.ignore_timing && k.as_str() == "elapsed_ms"))
        .filter(|k| ma.get(*k) != mb.get(*k))
        .collect();
    if differing.is_empty() {
        writeln!(out, "equivalent").map_err(output_failure)?;
        return Ok(EXIT_OK);
    }
    for k in &differing {
        let show = |v: Option<&serde_json::Value>| v.map_or("<missing>".to_string(), |v| v.to_string());
        writeln!(out, "{k}: {} | {}", show(ma.get(*k)), show(mb.get(*k))).map_err(output_failure)?;
    }
    Ok(EXIT_VIOLATION)
}
