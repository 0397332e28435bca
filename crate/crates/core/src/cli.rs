//! Command-line front end: classification, closed-form tables and the
//! verification runs, with JSON or CSV reports.
//!
//! Exit codes: 0 when every verdict passes, 1 on a failed check, 2 on
//! invalid input, 3 on an inadmissible `lambda`.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::characters::ZetaChoice;
use crate::fock::FockError;
use crate::verify::{
    self, Complex, Estimate, McConfig, Method, Outcome, Verdict, VerifyError,
};
use crate::weights::{
    admissible_sweep, c_squared_of, classify_theta, dual_sigma, formal_degree_product,
    weyl_dim, zeta_closed, BlockWeight, ClosedValue, HCParameter, HalfInt, SigmaParams, ThetaCase,
    ThetaDatum, WeightError,
};

/// Smallest sample count accepted by the Monte Carlo commands.
pub const MIN_SAMPLES: u64 = 10_000;

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "HOLOZETA_SEED";

#[derive(Debug, Parser)]
#[command(name = "holozeta", version, about = "Zeta integrals of holomorphic discrete series of U(n,1)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Monte Carlo sample count (at least 10^4).
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,

    /// Relative tolerance; an extra cap for Monte Carlo runs.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    MonteCarlo,
    Quadrature,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::MonteCarlo => Method::MonteCarlo,
            MethodArg::Quadrature => Method::Quadrature,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Theta-pair data of one parameter.
    Classify {
        #[arg(long)]
        lambda: String,
    },
    /// c^2, zeta value, dimension and formal-degree product over a sweep.
    Table {
        /// Explicit parameters; repeat the flag for several.
        #[arg(long, action = ArgAction::Append)]
        lambda: Vec<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Largest absolute entry of the sweep.
        #[arg(long, default_value = "7/2")]
        bound: String,
    },
    /// The scalar integral S on D_{p,q}.
    VerifyS {
        /// Take sigma = Lambda^vee on D_{n,1} from this parameter.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Highest weight of sigma_1 (or its determinant power).
        #[arg(long, default_value = "0")]
        kappa: String,
        /// Highest weight of sigma_2 (or its determinant power).
        #[arg(long, default_value = "0")]
        iota: String,
        #[arg(long)]
        s: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Quadrature)]
        method: MethodArg,
    },
    /// The scalar integral T at s (default (n+1)/2).
    VerifyT {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Quadrature)]
        method: MethodArg,
    },
    /// The zeta integral against its closed form.
    VerifyZeta {
        #[arg(long)]
        lambda: String,
        /// Integrate the radial integrand left after the K integration.
        #[arg(long)]
        reduced: bool,
        /// Flip every carried square root of a determinant.
        #[arg(long)]
        flip: bool,
    },
    /// The b_t route against the a_t route of the oscillator coefficient.
    VerifyProp61 {
        #[arg(long, action = ArgAction::Append)]
        lambda: Vec<String>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Gaussian-rational arithmetic with exact unitaries.
        #[arg(long)]
        exact: bool,
    },
    /// Closed form of omega(a_t) against kernel integration.
    VerifyAt {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Schur orthogonality of U(m) characters.
    VerifySchur {
        /// Highest weights; repeat the flag for several.
        #[arg(long, action = ArgAction::Append)]
        weight: Vec<String>,
    },
    /// Formal-degree ratio over a set of parameters.
    VerifyFd {
        #[arg(long, action = ArgAction::Append)]
        lambda: Vec<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value = "7/2")]
        bound: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Table { .. } => "table",
            Command::VerifyS { .. } => "verify-s",
            Command::VerifyT { .. } => "verify-t",
            Command::VerifyZeta { .. } => "verify-zeta",
            Command::VerifyProp61 { .. } => "verify-prop61",
            Command::VerifyAt { .. } => "verify-at",
            Command::VerifySchur { .. } => "verify-schur",
            Command::VerifyFd { .. } => "verify-fd",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode report: {0}")]
    Encode(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        fn weight_code(e: &WeightError) -> u8 {
            match e {
                WeightError::Inadmissible { .. } => 3,
                _ => 2,
            }
        }
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::Weight(e) => weight_code(e),
            CliError::Verify(VerifyError::Weight(e)) => weight_code(e),
            CliError::Verify(VerifyError::Fock(FockError::Inadmissible(_))) => 3,
            CliError::Verify(
                VerifyError::PoleAdjacent { .. }
                | VerifyError::Divergent { .. }
                | VerifyError::InvalidConfig(_),
            ) => 2,
            CliError::Verify(_) | CliError::Encode(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Exact value with a float rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedJson {
    pub rational: String,
    pub pi_exp: i32,
    pub float: f64,
}

impl From<&ClosedValue> for ClosedJson {
    fn from(c: &ClosedValue) -> Self {
        ClosedJson {
            rational: c.rational.to_string(),
            pi_exp: c.pi_exp,
            float: c.to_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateJson {
    pub value: Complex,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl EstimateJson {
    fn new(e: &Estimate, workers: Option<usize>) -> Self {
        EstimateJson {
            value: e.value,
            stderr: e.stderr,
            samples: e.samples,
            seed: e.seed,
            workers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsJson {
    #[serde(rename = "Lambda")]
    pub lambda: BlockWeight,
    #[serde(rename = "LambdaDual")]
    pub lambda_dual: BlockWeight,
    #[serde(rename = "LambdaPrime")]
    pub lambda_prime: BlockWeight,
}

/// One result line: a parameter, its exact value, an estimate and a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub lambda: Option<String>,
    pub case: Option<ThetaCase>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub weights: Option<WeightsJson>,
    pub closed: Option<ClosedJson>,
    pub estimate: Option<EstimateJson>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl Row {
    fn empty(verdict: Verdict) -> Self {
        Row {
            lambda: None,
            case: None,
            p: None,
            q: None,
            weights: None,
            closed: None,
            estimate: None,
            verdict,
            details: None,
        }
    }

    fn for_theta(theta: &ThetaDatum, verdict: Verdict) -> Self {
        Row {
            lambda: Some(theta.lambda.to_string()),
            case: Some(theta.case),
            p: Some(theta.p),
            q: Some(theta.q),
            weights: Some(WeightsJson {
                lambda: theta.blattner.clone(),
                lambda_dual: theta.dual.clone(),
                lambda_prime: theta.prime.clone(),
            }),
            ..Row::empty(verdict)
        }
    }

    fn with_outcome(mut self, o: &Outcome, workers: Option<usize>) -> Self {
        self.closed = Some((&o.closed).into());
        let workers = (o.method == Method::MonteCarlo).then_some(workers).flatten();
        self.estimate = Some(EstimateJson::new(&o.estimate, workers));
        self.verdict = o.verdict;
        self
    }
}

/// A full report. `wall_time` is the only field that varies between runs
/// with the same arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(flatten)]
    pub summary: Row,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Row>,
    pub wall_time: f64,
}

impl Report {
    pub fn verdict(&self) -> Verdict {
        self.summary.verdict
    }
}

/// Flat CSV record of a [`Row`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub command: String,
    pub lambda: Option<String>,
    pub case: Option<ThetaCase>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub closed_rational: Option<String>,
    pub closed_pi_exp: Option<i32>,
    pub closed_float: Option<f64>,
    pub estimate_re: Option<f64>,
    pub estimate_im: Option<f64>,
    pub stderr: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub c_squared: Option<String>,
    pub dim: Option<u64>,
    pub fd_product: Option<String>,
    pub verdict: Verdict,
}

impl CsvRecord {
    fn new(command: &str, row: &Row) -> Self {
        let detail = |key: &str| row.details.as_ref().and_then(|d| d.get(key)).cloned();
        let text = |key: &str| detail(key).and_then(|v| v.as_str().map(str::to_owned));
        CsvRecord {
            command: command.to_owned(),
            lambda: row.lambda.clone(),
            case: row.case,
            p: row.p,
            q: row.q,
            closed_rational: row.closed.as_ref().map(|c| c.rational.clone()),
            closed_pi_exp: row.closed.as_ref().map(|c| c.pi_exp),
            closed_float: row.closed.as_ref().map(|c| c.float),
            estimate_re: row.estimate.as_ref().map(|e| e.value.re),
            estimate_im: row.estimate.as_ref().map(|e| e.value.im),
            stderr: row.estimate.as_ref().map(|e| e.stderr),
            samples: row.estimate.as_ref().map(|e| e.samples),
            seed: row.estimate.as_ref().map(|e| e.seed),
            c_squared: text("c_squared"),
            dim: detail("dim").and_then(|v| v.as_u64()),
            fd_product: text("formal_degree_product"),
            verdict: row.verdict,
        }
    }
}

/// CSV records of a report: one per row, or the summary when there are none.
pub fn csv_records(report: &Report) -> Vec<CsvRecord> {
    if report.rows.is_empty() {
        vec![CsvRecord::new(&report.command, &report.summary)]
    } else {
        report.rows.iter().map(|r| CsvRecord::new(&report.command, r)).collect()
    }
}

pub fn write_csv(records: &[CsvRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| CliError::Encode(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Invalid(format!("csv: {e}")))
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Encode(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => write_csv(&csv_records(report)),
    }
}

fn parse_lambda(s: &str) -> Result<HCParameter> {
    Ok(HCParameter::parse(s)?)
}

fn parse_lambdas(list: &[String]) -> Result<Vec<HCParameter>> {
    list.iter().map(|s| parse_lambda(s)).collect()
}

fn parse_halfints(s: &str) -> Result<Vec<HalfInt>> {
    s.split(',')
        .enumerate()
        .map(|(i, tok)| {
            HalfInt::from_str(tok).map_err(|e| CliError::Invalid(format!("entry {i} ({tok:?}): {e}")))
        })
        .collect()
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| CliError::Invalid(format!("{s:?} is not a rational: {e}")))
}

fn parse_bound(s: &str) -> Result<i64> {
    Ok(HalfInt::from_str(s)
        .map_err(|e| CliError::Invalid(format!("bound {s:?}: {e}")))?
        .twice()
        .abs())
}

fn sweep(n: usize, bound: &str) -> Result<Vec<HCParameter>> {
    if n == 0 {
        return Err(CliError::Invalid("n must be at least 1".into()));
    }
    Ok(admissible_sweep(n, parse_bound(bound)?))
}

fn sigma_from_flags(p: usize, q: usize, kappa: &str, iota: &str) -> Result<SigmaParams> {
    let k = parse_halfints(kappa)?;
    let i = parse_halfints(iota)?;
    match (k.len(), i.len()) {
        (a, 1) if a == p => Ok(SigmaParams::SecondOneDim { kappa: k, iota: i[0] }),
        (1, b) if b == q => Ok(SigmaParams::FirstOneDim { kappa: k[0], iota: i }),
        (a, b) => Err(CliError::Invalid(format!(
            "need {p} kappa entries with one iota, or one kappa with {q} iota entries; got {a} and {b}"
        ))),
    }
}

/// Admissibility conditions of `theta`, rendered with their values.
pub fn constraints(theta: &ThetaDatum) -> Vec<String> {
    let l = theta.lambda.entries();
    let n = theta.n;
    let mut out = vec![format!("lambda_n = {} > lambda_(n+1) = {}", l[n - 1], l[n])];
    let g = theta.gamma;
    let list = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" >= ");
    match theta.case {
        ThetaCase::CaseI => {
            out.push(format!("gamma = {g} >= 0"));
            out.push(format!("alpha: {}", list(&theta.alphas)));
            out.push(format!("alpha_n = {} >= gamma + 2 = {}", theta.alphas[n - 1], g + 2));
        }
        ThetaCase::CaseII => {
            out.push(format!("gamma = {g} >= 0"));
            if theta.p > 0 {
                out.push(format!("beta: {} >= 0", list(&theta.betas)));
            }
            if !theta.alphas.is_empty() {
                out.push(format!("alpha: {} >= 0", list(&theta.alphas)));
            }
            if theta.p > 0 {
                out.push(format!(
                    "beta_1 = {} <= gamma - 2p = {}",
                    theta.betas[0],
                    g - 2 * theta.p as i64
                ));
            }
        }
    }
    out
}

struct Ctx {
    cfg: McConfig,
    tol: Option<f64>,
    workers: usize,
}

impl Ctx {
    fn new(cli: &Cli) -> Self {
        let mut cfg = McConfig::new(cli.samples, cli.seed);
        if let Some(w) = cli.workers {
            cfg = cfg.with_workers(w);
        }
        Ctx {
            workers: cfg.workers,
            cfg,
            tol: cli.tol,
        }
    }

    fn require_samples(&self, method: Method) -> Result<()> {
        if method == Method::MonteCarlo && self.cfg.samples < MIN_SAMPLES {
            return Err(CliError::Invalid(format!(
                "--samples must be at least {MIN_SAMPLES} for Monte Carlo runs, got {}",
                self.cfg.samples
            )));
        }
        Ok(())
    }
}

fn all_pass(rows: &[Row]) -> Verdict {
    Verdict::from_bool(rows.iter().all(|r| r.verdict.is_pass()))
}

fn default_prop61_set() -> Vec<HCParameter> {
    let mut v: Vec<HCParameter> = admissible_sweep(1, 6);
    v.extend(
        admissible_sweep(2, 6)
            .into_iter()
            .filter(|l| classify_theta(l).is_ok_and(|t| t.case == ThetaCase::CaseI)),
    );
    v
}

fn default_schur_weights() -> Vec<Vec<HalfInt>> {
    [
        "0,0", "1,0", "3/2,-1/2", "2,-1", "5/2,1/2", "0,0,0", "1,0,0", "1,1,0", "3/2,1/2,-1/2",
        "2,0,-1",
    ]
    .iter()
    .map(|s| parse_halfints(s).expect("static weight"))
    .collect()
}

/// Runs one command and builds its report.
pub fn run(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let ctx = Ctx::new(cli);
    let (summary, rows) = match &cli.command {
        Command::Classify { lambda } => {
            let theta = classify_theta(&parse_lambda(lambda)?)?;
            let mut row = Row::for_theta(&theta, Verdict::Pass);
            row.closed = Some((&zeta_closed(&theta.lambda)?).into());
            row.details = Some(json!({
                "a": theta.a,
                "b": theta.b,
                "gamma": theta.gamma,
                "alphas": theta.alphas,
                "betas": theta.betas,
                "m": theta.m,
                "c_squared": c_squared_of(&theta).to_string(),
                "constraints": constraints(&theta),
            }));
            (row, Vec::new())
        }
        Command::Table { lambda, n, bound } => {
            let lambdas = if lambda.is_empty() { sweep(*n, bound)? } else { parse_lambdas(lambda)? };
            let rows = lambdas
                .iter()
                .map(|l| {
                    let theta = classify_theta(l)?;
                    let mut row = Row::for_theta(&theta, Verdict::Pass);
                    row.closed = Some((&zeta_closed(l)?).into());
                    row.details = Some(json!({
                        "c_squared": c_squared_of(&theta).to_string(),
                        "dim": weyl_dim(l),
                        "formal_degree_product": formal_degree_product(l).to_string(),
                    }));
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?;
            (Row::empty(Verdict::Pass), rows)
        }
        Command::VerifyS { lambda, p, q, kappa, iota, s, method } => {
            let method = Method::from(*method);
            ctx.require_samples(method)?;
            let s_val = parse_rational(s)?;
            let (row, p, q, sigma) = match lambda {
                Some(l) => {
                    let theta = classify_theta(&parse_lambda(l)?)?;
                    let sigma = dual_sigma(&theta);
                    (Row::for_theta(&theta, Verdict::Pass), theta.n, 1, sigma)
                }
                None => {
                    let mut row = Row::empty(Verdict::Pass);
                    row.p = Some(*p);
                    row.q = Some(*q);
                    (row, *p, *q, sigma_from_flags(*p, *q, kappa, iota)?)
                }
            };
            let o = verify::verify_s(p, q, &sigma, &s_val, method, &ctx.cfg, ctx.tol)?;
            let mut row = row.with_outcome(&o, Some(ctx.workers));
            row.details = Some(json!({
                "domain": [p, q],
                "s": s_val.to_string(),
                "method": method,
                "rel_err": o.rel_err,
            }));
            (row, Vec::new())
        }
        Command::VerifyT { lambda, s, method } => {
            let method = Method::from(*method);
            ctx.require_samples(method)?;
            let theta = classify_theta(&parse_lambda(lambda)?)?;
            let s_val = match s {
                Some(s) => parse_rational(s)?,
                None => BigRational::new((theta.n as i64 + 1).into(), 2.into()),
            };
            let o = verify::verify_t(&theta, &s_val, method, &ctx.cfg, ctx.tol)?;
            let mut row = Row::for_theta(&theta, Verdict::Pass).with_outcome(&o, Some(ctx.workers));
            row.details = Some(json!({
                "s": s_val.to_string(),
                "method": method,
                "rel_err": o.rel_err,
            }));
            (row, Vec::new())
        }
        Command::VerifyZeta { lambda, reduced, flip } => {
            ctx.require_samples(Method::MonteCarlo)?;
            let l = parse_lambda(lambda)?;
            let theta = classify_theta(&l)?;
            let choice = if *flip { ZetaChoice::Flipped } else { ZetaChoice::Principal };
            let o = if *reduced {
                verify::verify_zeta_reduced(&l, &ctx.cfg, ctx.tol)?
            } else {
                verify::verify_zeta_with(&l, &ctx.cfg, ctx.tol, choice)?
            };
            let mut row = Row::for_theta(&theta, Verdict::Pass).with_outcome(&o, Some(ctx.workers));
            row.details = Some(json!({
                "integrand": if *reduced { "reduced" } else { "full" },
                "rel_err": o.rel_err,
            }));
            (row, Vec::new())
        }
        Command::VerifyProp61 { lambda, trials, exact } => {
            let lambdas = if lambda.is_empty() { default_prop61_set() } else { parse_lambdas(lambda)? };
            let rows = if *exact {
                lambdas
                    .iter()
                    .map(|l| {
                        let theta = classify_theta(l)?;
                        let ok = verify::verify_prop61_exact(l, *trials, ctx.cfg.seed)?;
                        let mut row = Row::for_theta(&theta, Verdict::from_bool(ok));
                        row.details = Some(json!({"trials": trials, "exact": true}));
                        Ok(row)
                    })
                    .collect::<Result<Vec<_>>>()?
            } else {
                let rep = verify::verify_prop61(&lambdas, *trials, ctx.cfg.seed, ctx.tol.unwrap_or(1e-9))?;
                rep.rows
                    .iter()
                    .map(|r| {
                        let theta = classify_theta(&r.lambda)?;
                        let mut row = Row::for_theta(&theta, r.verdict);
                        row.details = Some(json!({"trials": r.trials, "max_rel_err": r.max_rel_err}));
                        Ok(row)
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            (Row::empty(all_pass(&rows)), rows)
        }
        Command::VerifyAt { n, degree } => {
            if *n == 0 {
                return Err(CliError::Invalid("n must be at least 1".into()));
            }
            let rep = verify::verify_at(*n, *degree)?;
            let mut row = Row::empty(rep.verdict());
            row.details = Some(json!({
                "n": rep.n,
                "max_degree": rep.max_degree,
                "monomials": rep.monomials,
                "mismatches": rep.mismatches,
            }));
            (row, Vec::new())
        }
        Command::VerifySchur { weight } => {
            ctx.require_samples(Method::MonteCarlo)?;
            let weights = if weight.is_empty() {
                default_schur_weights()
            } else {
                weight.iter().map(|w| parse_halfints(w)).collect::<Result<Vec<_>>>()?
            };
            let one = ClosedValue::rational(BigRational::from_integer(1.into()));
            let rows: Vec<Row> = verify::verify_schur(&weights, &ctx.cfg)?
                .iter()
                .map(|r| {
                    let mut row = Row::empty(r.verdict);
                    row.closed = Some((&one).into());
                    row.estimate = Some(EstimateJson::new(&r.estimate, Some(ctx.workers)));
                    row.details = Some(json!({"weight": crate::weights::format_weights(&r.weight)}));
                    row
                })
                .collect();
            (Row::empty(all_pass(&rows)), rows)
        }
        Command::VerifyFd { lambda, n, bound } => {
            let lambdas = if lambda.is_empty() { sweep(*n, bound)? } else { parse_lambdas(lambda)? };
            let rep = verify::verify_formal_degree(&lambdas)?;
            let rows = rep
                .rows
                .iter()
                .map(|r| {
                    let theta = classify_theta(&r.lambda)?;
                    let mut row = Row::for_theta(&theta, Verdict::Pass);
                    row.closed = Some((&r.ratio).into());
                    row.details = Some(json!({
                        "dim": r.dim,
                        "closed_s": r.closed_s.to_string(),
                        "formal_degree_product": r.product.to_string(),
                    }));
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut summary = Row::empty(rep.verdict());
            if let Some((i, j)) = rep.mismatch {
                summary.details = Some(json!({"mismatch": [i, j]}));
            }
            (summary, rows)
        }
    };
    Ok(Report {
        command: cli.command.name().to_owned(),
        summary,
        rows,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs, writes the report and returns the exit code.
pub fn execute(cli: &Cli) -> Result<u8> {
    let report = run(cli)?;
    let text = render(&report, cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(if report.verdict().is_pass() { 0 } else { 1 })
}

/// The JSON schema reports validate against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("holozeta").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn classify_smallest() {
        let rep = run(&cli(&["classify", "--lambda", "3/2,1/2"])).unwrap();
        let s = &rep.summary;
        assert_eq!(s.case, Some(ThetaCase::CaseI));
        assert_eq!((s.p, s.q), (Some(1), Some(1)));
        let d = s.details.as_ref().unwrap();
        assert_eq!(d["gamma"], 0);
        assert_eq!(d["alphas"], json!([2]));
        assert_eq!(d["c_squared"], "1/2");
        assert_eq!(s.closed.as_ref().unwrap().rational, "1/2");
        assert_eq!(s.closed.as_ref().unwrap().pi_exp, 1);
    }

    #[test]
    fn exit_codes() {
        let err = run(&cli(&["classify", "--lambda", "1/2,3/2"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run(&cli(&["classify", "--lambda", "1/2,x"])).unwrap_err();
        assert!(err.to_string().contains("entry 1"), "{err}");
        assert_eq!(err.exit_code(), 2);
        let err = run(&cli(&["classify", "--lambda", "1,0"])).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = run(&cli(&["verify-zeta", "--lambda", "3/2,1/2", "--samples", "100"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run(&cli(&["verify-s", "--s", "6/5"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn sigma_flags() {
        assert!(matches!(sigma_from_flags(2, 1, "1,0", "0"), Ok(SigmaParams::SecondOneDim { .. })));
        assert!(matches!(sigma_from_flags(1, 2, "0", "0,-1"), Ok(SigmaParams::FirstOneDim { .. })));
        assert!(sigma_from_flags(2, 2, "1,0", "0,1").is_err());
    }

    #[test]
    fn constraints_render_values() {
        let theta = classify_theta(&HCParameter::parse("3/2,1/2").unwrap()).unwrap();
        let c = constraints(&theta);
        assert!(c.iter().any(|s| s == "alpha_n = 2 >= gamma + 2 = 2"), "{c:?}");
        let theta = classify_theta(&HCParameter::parse("-1/2,-7/2").unwrap()).unwrap();
        assert!(constraints(&theta).iter().any(|s| s.starts_with("beta_1")));
        let theta = classify_theta(&HCParameter::parse("1/2,-5/2").unwrap()).unwrap();
        assert!(!constraints(&theta).iter().any(|s| s.starts_with("beta")));
    }

    #[test]
    fn table_csv_round_trip() {
        let rep = run(&cli(&["table", "--n", "2", "--bound", "5/2"])).unwrap();
        assert!(!rep.rows.is_empty());
        let recs = csv_records(&rep);
        assert_eq!(read_csv(&write_csv(&recs).unwrap()).unwrap(), recs);
    }
}
