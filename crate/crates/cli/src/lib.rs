//! `lsdisc`: generation, counting and discrepancy scans of LS-sequences.
//!
//! Every command builds its whole output in memory before anything is
//! written, so a failed invocation never leaves partial output behind.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use ls_discrepancy::discrepancy::{discrepancies, log_slope};
use ls_discrepancy::partition::{count_table, endpoints_with, generate_with, Limits};
use ls_discrepancy::{
    counts_closed_form, derived_constants, iterate, make_rho, regime_scan, Convention,
    ConvergenceRow, Error, Integrand64, LsParams, Mode, Normalization, RefineOptions, ScanConfig,
    StepSummary,
};

pub mod output;

use output::{json_float, Cell, Format, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "lsdisc", version, about = "LS-sequences of partitions and their discrepancy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the endpoints of one partition.
    Generate(GenerateArgs),
    /// Interval counts t_n, l_n, s_n and the closed-form residual.
    Counts(CountsArgs),
    /// β, Sβ, regime, A, B and γ.
    Regime(RegimeArgs),
    /// Per-level discrepancy with a boundedness verdict.
    Scan(ScanArgs),
    /// Run the general ρ-refinement engine.
    Refine(RefineArgs),
    /// QMC convergence table for a built-in integrand.
    Integrate(IntegrateArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Number of long intervals.
    #[arg(long = "L")]
    pub l: u32,
    /// Number of short intervals.
    #[arg(long = "S")]
    pub s: u32,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Rejected: every command is deterministic.
    #[arg(long, hide = true)]
    pub seed: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum PointsArg {
    #[default]
    Right,
    Left,
}

impl From<PointsArg> for Convention {
    fn from(p: PointsArg) -> Self {
        match p {
            PointsArg::Right => Convention::RightEndpoints,
            PointsArg::Left => Convention::LeftEndpoints,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeArg {
    Exact,
    #[default]
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum NormalizeArg {
    /// The regime's own normalization.
    #[default]
    Auto,
    Linear,
    Log,
    Gamma,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t)]
    pub points: PointsArg,
    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CountsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Highest level listed.
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub n_min: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RegimeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long)]
    pub n_max: u32,
    #[arg(long, value_enum, default_value_t)]
    pub points: PointsArg,
    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t)]
    pub normalize: NormalizeArg,
    /// First level of the band window (default: n_max − 10).
    #[arg(long)]
    pub window_min: Option<u32>,
    #[arg(long)]
    pub window_max: Option<u32>,
    #[arg(long, default_value_t = 5.0)]
    pub ratio_limit: f64,
    #[arg(long, default_value_t = 0.02)]
    pub slope_limit: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("template").required(true).args(["rho", "alpha"])))]
pub struct RefineArgs {
    /// Template interval lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rho: Option<Vec<f64>>,
    /// Kakutani splitting ratio.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub n: u32,
    /// Add D* and D of each step's endpoints.
    #[arg(long)]
    pub discrepancy: bool,
    /// List the final partition's endpoints instead of the step table.
    #[arg(long)]
    pub endpoints: bool,
    #[arg(long, value_enum, default_value_t)]
    pub points: PointsArg,
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// identity, square, sin2pi, step or const.
    #[arg(long = "fn")]
    pub function: String,
    /// Single level; shorthand for --n-min N --n-max N.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    pub n: Option<u32>,
    #[arg(long)]
    pub n_min: Option<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long, value_enum, default_value_t)]
    pub points: PointsArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Failure with its process exit code.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_cap() {
            3
        } else if e.is_consistency() {
            4
        } else {
            2
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Rendered output of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    /// Human-readable lines for standard error.
    pub notes: Vec<String>,
    pub path: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::usage(e.to_string()))?;
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Generate(a) => finish(&a.out, Format::Csv, cmd_generate(a)),
        Command::Counts(a) => finish(&a.out, Format::Csv, cmd_counts(a)),
        Command::Regime(a) => finish(&a.out, Format::Json, cmd_regime(a)),
        Command::Scan(a) => finish(&a.out, Format::Csv, cmd_scan(a)),
        Command::Refine(a) => finish(&a.out, Format::Csv, cmd_refine(a)),
        Command::Integrate(a) => finish(&a.out, Format::Csv, cmd_integrate(a)),
    }
}

fn finish(
    out: &OutputArgs,
    default: Format,
    result: Result<(Table, Vec<String>), CliError>,
) -> Result<Output, CliError> {
    if out.seed.is_some() {
        return Err(CliError::usage(
            "--seed is not accepted: every command is deterministic",
        ));
    }
    let (table, notes) = result?;
    Ok(Output {
        body: table.render(out.format.unwrap_or(default)),
        notes,
        path: out.output.clone(),
    })
}

fn params_of(p: &ParamArgs) -> Result<LsParams, CliError> {
    Ok(LsParams::new(p.l, p.s)?)
}

fn param_meta(table: &mut Table, params: LsParams) {
    let c = derived_constants(params);
    table.meta(
        "params",
        json!({ "L": params.long(), "S": params.short() }),
    );
    table.meta("beta", json_float(c.beta_float));
    table.meta("regime", c.regime.label());
    table.meta("gamma", json_float(c.gamma));
}

fn tool_meta(table: &mut Table, convention: Option<Convention>, mode: Option<Mode>) {
    if let Some(c) = convention {
        table.meta("convention", c.label());
    }
    if let Some(m) = mode {
        table.meta("mode", m.label());
    }
    table.meta("version", VERSION);
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<(Table, Vec<String>), CliError> {
    let params = params_of(&a.params)?;
    let limits = Limits::default();
    let mode = Mode::from(a.mode);
    let convention = Convention::from(a.points);
    let seq = generate_with(params, a.n, &limits)?;
    let pts = endpoints_with::<f64>(&seq, convention, mode, &limits)?;

    let mut table = match mode {
        Mode::Float => Table::new(&["index", "endpoint"]),
        Mode::Exact => Table::new(&["index", "endpoint", "a", "b"]),
    };
    let first = match convention {
        Convention::RightEndpoints => 1,
        Convention::LeftEndpoints => 0,
    };
    for (i, &x) in pts.values().iter().enumerate() {
        let mut row = vec![Cell::from(first + i), Cell::from(x)];
        if let Some(exact) = pts.exact() {
            row.push(Cell::Exact(exact[i].a().to_string()));
            row.push(Cell::Exact(exact[i].b().to_string()));
        }
        table.push(row);
    }
    param_meta(&mut table, params);
    table.meta("n", a.n);
    tool_meta(&mut table, Some(convention), Some(mode));
    Ok((table, Vec::new()))
}

pub fn cmd_counts(a: &CountsArgs) -> Result<(Table, Vec<String>), CliError> {
    let params = params_of(&a.params)?;
    if a.n_min > a.n {
        return Err(CliError::usage(format!("--n-min {} exceeds --n {}", a.n_min, a.n)));
    }
    let mut table = Table::new(&["n", "t", "l", "s", "closed_form_residual"]);
    for c in count_table(params, a.n).into_iter().skip(a.n_min as usize) {
        let closed = counts_closed_form(params, c.n)?;
        let residual = closed - BigInt::from(c.t.clone());
        table.push(vec![
            c.n.into(),
            Cell::Exact(c.t.to_string()),
            Cell::Exact(c.l.to_string()),
            Cell::Exact(c.s.to_string()),
            Cell::Exact(residual.to_string()),
        ]);
    }
    param_meta(&mut table, params);
    tool_meta(&mut table, None, None);
    Ok((table, Vec::new()))
}

pub fn cmd_regime(a: &RegimeArgs) -> Result<(Table, Vec<String>), CliError> {
    let params = params_of(&a.params)?;
    let c = derived_constants(params);
    let mut table = Table::new(&[
        "L", "S", "beta", "s_beta", "regime", "A", "B", "A_exact", "B_exact", "gamma",
    ]);
    table.push(vec![
        params.long().into(),
        params.short().into(),
        c.beta_float.into(),
        c.s_beta().into(),
        c.regime.label().into(),
        c.a.to_f64().into(),
        c.b.to_f64().into(),
        Cell::Exact(c.a.to_string()),
        Cell::Exact(c.b.to_string()),
        c.gamma.into(),
    ]);
    param_meta(&mut table, params);
    tool_meta(&mut table, None, None);
    Ok((table, Vec::new()))
}

pub fn cmd_scan(a: &ScanArgs) -> Result<(Table, Vec<String>), CliError> {
    let params = params_of(&a.params)?;
    let constants = derived_constants(params);
    let normalization = match a.normalize {
        NormalizeArg::Auto => None,
        NormalizeArg::Linear => Some(Normalization::Linear),
        NormalizeArg::Log => Some(Normalization::Logarithmic),
        NormalizeArg::Gamma => Some(Normalization::Power(constants.gamma)),
    };
    let window = match (a.window_min, a.window_max) {
        (None, None) => None,
        (lo, hi) => Some((
            lo.unwrap_or(a.n_min.max(a.n_max.saturating_sub(10))),
            hi.unwrap_or(a.n_max),
        )),
    };
    let config = ScanConfig {
        convention: a.points.into(),
        mode: a.mode.into(),
        normalization,
        window,
        ratio_limit: a.ratio_limit,
        slope_limit: a.slope_limit,
        ..ScanConfig::default()
    };
    let report = regime_scan(params, a.n_min, a.n_max, &config)?;

    let mut table = Table::new(&["n", "t_n", "d_star", "d", "normalized", "regime"]);
    for r in &report.rows {
        table.push(vec![
            r.n.into(),
            r.t.into(),
            r.d_star.into(),
            r.d.into(),
            r.normalized.into(),
            r.regime.label().into(),
        ]);
    }
    param_meta(&mut table, params);
    table.meta("normalization", report.normalization.label());
    table.meta("window", json!([report.window.0, report.window.1]));
    table.meta("band_min", json_float(report.band_min));
    table.meta("band_max", json_float(report.band_max));
    table.meta("log_slope", json_float(report.slope));
    table.meta("ratio_limit", json_float(config.ratio_limit));
    table.meta("slope_limit", json_float(config.slope_limit));
    table.meta("verdict", report.verdict.label());
    tool_meta(&mut table, Some(config.convention), Some(config.mode));
    let note = format!(
        "verdict: {} ({} normalization, window {}..={}, band {}..{}, ratio {}, log-slope {})",
        report.verdict.label(),
        report.normalization.label(),
        report.window.0,
        report.window.1,
        output::fmt_float(report.band_min),
        output::fmt_float(report.band_max),
        output::fmt_float(report.band_max / report.band_min),
        output::fmt_float(report.slope),
    );
    Ok((table, vec![note]))
}

/// A step summary with its optional `(D*, D)`.
type StepRow = (StepSummary<f64>, Option<(f64, f64)>);

pub fn cmd_refine(a: &RefineArgs) -> Result<(Table, Vec<String>), CliError> {
    let lengths = match (&a.rho, a.alpha) {
        (Some(rho), None) => rho.clone(),
        (None, Some(alpha)) => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(CliError::usage(format!("--alpha must lie in (0, 1), got {alpha}")));
            }
            vec![alpha, 1.0 - alpha]
        }
        _ => return Err(CliError::usage("exactly one of --rho and --alpha is required")),
    };
    let rho = make_rho(&lengths)?;
    let opts = RefineOptions {
        rel_tol: a.rel_tol,
        ..RefineOptions::default()
    };
    let convention = Convention::from(a.points);
    let pick = |pi: &ls_discrepancy::GenericPartition64| -> Vec<f64> {
        match convention {
            Convention::RightEndpoints => pi.right_endpoints().to_vec(),
            Convention::LeftEndpoints => pi.left_endpoints().to_vec(),
        }
    };

    let mut steps: Vec<StepRow> = Vec::new();
    let mut failure = None;
    let last = iterate(&rho, a.n, &opts, |pi| {
        let disc = if a.discrepancy {
            match discrepancies(&pick(pi)) {
                Ok(d) => Some(d),
                Err(e) => {
                    failure.get_or_insert(e);
                    None
                }
            }
        } else {
            None
        };
        steps.push((StepSummary::of(pi), disc));
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }

    let mut table = if a.endpoints {
        let mut t = Table::new(&["index", "endpoint"]);
        let first = match convention {
            Convention::RightEndpoints => 1,
            Convention::LeftEndpoints => 0,
        };
        for (i, x) in pick(&last).into_iter().enumerate() {
            t.push(vec![(first + i).into(), x.into()]);
        }
        t
    } else if a.discrepancy {
        let mut t = Table::new(&["step", "intervals", "max_length", "d_star", "d"]);
        for (s, d) in &steps {
            let (ds, dd) = d.expect("computed for every step");
            t.push(vec![
                s.step.into(),
                s.intervals.into(),
                s.max_length.into(),
                ds.into(),
                dd.into(),
            ]);
        }
        t
    } else {
        let mut t = Table::new(&["step", "intervals", "max_length"]);
        for (s, _) in &steps {
            t.push(vec![s.step.into(), s.intervals.into(), s.max_length.into()]);
        }
        t
    };
    table.meta(
        "rho",
        Value::Array(rho.lengths().iter().map(|&x| json_float(x)).collect()),
    );
    table.meta("n", a.n);
    table.meta("rel_tol", json_float(a.rel_tol));
    tool_meta(&mut table, Some(convention), Some(Mode::Float));
    Ok((table, Vec::new()))
}

pub fn cmd_integrate(a: &IntegrateArgs) -> Result<(Table, Vec<String>), CliError> {
    let params = params_of(&a.params)?;
    let f = Integrand64::builtin(&a.function).ok_or_else(|| {
        CliError::usage(format!(
            "unknown function '{}'; expected identity, square, sin2pi, step or const",
            a.function
        ))
    })?;
    let (lo, hi) = match (a.n, a.n_min, a.n_max) {
        (Some(n), _, _) => (n, n),
        (None, lo, Some(hi)) => (lo.unwrap_or(1), hi),
        (None, _, None) => return Err(CliError::usage("give --n or --n-max")),
    };
    if lo > hi {
        return Err(CliError::usage(format!("--n-min {lo} exceeds --n-max {hi}")));
    }
    let convention = Convention::from(a.points);
    let rows: Vec<ConvergenceRow> = ls_discrepancy::convergence_table(&f, params, lo..=hi, convention)?;

    let mut table = Table::new(&[
        "n",
        "t_n",
        "estimate",
        "abs_error",
        "error_t",
        "koksma_bound",
        "satisfied",
    ]);
    for r in &rows {
        table.push(vec![
            r.n.into(),
            r.t.into(),
            r.report.estimate.into(),
            r.report.abs_error.into(),
            r.scaled_error.into(),
            r.report.variation_bound.into(),
            r.report.bound_satisfied.into(),
        ]);
    }
    param_meta(&mut table, params);
    table.meta("function", f.name);
    table.meta("exact_integral", json_float(f.exact_integral));
    table.meta("total_variation", f.total_variation.map_or(Value::Null, json_float));
    if rows.len() >= 2 && rows.iter().all(|r| r.scaled_error > 0.0) {
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (f64::from(r.n), r.scaled_error)).collect();
        table.meta("error_t_log_slope", json_float(log_slope(&samples)));
    }
    tool_meta(&mut table, Some(convention), Some(Mode::Float));
    Ok((table, Vec::new()))
}
