//! Command implementations behind the `infoeff` binary.
//!
//! Exit codes: 0 success, 2 malformed input, 3 domain errors, 4 I/O.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use infoeff::coin::{
    closed_form_efficiency_fair, closed_form_efficiency_unfair_quotes, closed_form_entropy,
    closed_form_quote_entropy, coin_joint, sweep, table_to_csv, CoinGameParams, Curve, Grid,
    DEFAULT_GRID_POINTS,
};
use infoeff::estimation::{
    estimate_efficiency, quotes_from_pairs, read_quotes, read_samples, EstimationConfig,
    DEFAULT_RESAMPLES, DEFAULT_SMOOTHING,
};
use infoeff::kelly::{kelly_strategy, simulate_runs, simulate_with, BettingGame, SimulationConfig};
use infoeff::rng::DEFAULT_SEED;
use infoeff::{efficiency_with_quotes, EfficiencyReport, InfoSetLabel};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

pub mod svg;

#[derive(Debug, Parser)]
#[command(
    name = "infoeff",
    version,
    about = "Entropy-based efficiency of event-generating systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate efficiency from (signal, outcome) samples.
    Measure(MeasureArgs),
    /// Evaluate the coin game in closed form and through the general measures.
    Coin(CoinArgs),
    /// Play the Kelly strategy on the coin game and compare with the growth bound.
    Simulate(SimulateArgs),
    /// Write the four coin-game curves as CSV (and SVG).
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureFormat {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Sample CSV with header `signal,outcome`.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Quote file with header `label,q`.
    #[arg(long, value_name = "FILE", conflicts_with = "quote_values")]
    pub quotes: Option<PathBuf>,
    /// Inline quotes, e.g. `h=0.4,t=0.6`.
    #[arg(long, value_name = "LABEL=Q,...", value_parser = parse_quote_pairs)]
    pub quote_values: Option<QuotePairs>,
    /// Pseudo-count added to every (outcome, signal) cell.
    #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
    pub smoothing: f64,
    /// Bootstrap resamples for the confidence interval.
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    pub resamples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Name of the information set the signals represent.
    #[arg(long, default_value = "strong")]
    pub info_set: InfoSetLabel,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct CoinParamArgs {
    /// Probability of tails.
    #[arg(long, default_value_t = 0.5)]
    pub p_tail: f64,
    /// Probability that the tip names the realized side.
    #[arg(long, default_value_t = 0.5)]
    pub accuracy: f64,
    /// Quoted probability of tails.
    #[arg(long, default_value_t = 0.5)]
    pub q_tail: f64,
}

impl CoinParamArgs {
    fn params(&self) -> infoeff::Result<CoinGameParams> {
        CoinGameParams::new(self.p_tail, self.accuracy, self.q_tail)
    }
}

#[derive(Debug, Args)]
pub struct CoinArgs {
    #[command(flatten)]
    pub coin: CoinParamArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub coin: CoinParamArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub rounds: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Independent runs, each on its own random stream.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    /// Write the log2-wealth path of run 0 to this CSV file.
    #[arg(long, value_name = "FILE")]
    pub trajectory: Option<PathBuf>,
    /// Number of points kept in the trajectory.
    #[arg(long, default_value_t = 1000)]
    pub trajectory_points: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    All,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long, value_enum, default_value_t = Which::All)]
    pub which: Which,
    /// Directory receiving `figN.csv` (and `figN.svg`).
    #[arg(long, visible_alias = "out", value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
    /// `svg` writes the chart next to the CSV.
    #[arg(long, value_enum, default_value_t = FigureFormat::Csv)]
    pub format: FigureFormat,
    /// Points on the [0, 1] parameter grid; open-domain curves drop both endpoints.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub points: usize,
}

/// Inline `label=q` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotePairs(pub Vec<(String, f64)>);

fn parse_quote_pairs(s: &str) -> Result<QuotePairs, String> {
    s.split(',')
        .map(|pair| {
            let (label, q) = pair
                .split_once('=')
                .ok_or_else(|| format!("expected LABEL=Q, got {pair:?}"))?;
            let q = q.trim().parse::<f64>().map_err(|e| format!("{q:?}: {e}"))?;
            Ok((label.trim().to_string(), q))
        })
        .collect::<Result<_, _>>()
        .map(QuotePairs)
}

/// A failed command with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn io(path: &Path, err: io::Error) -> Self {
        Self {
            code: 4,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<infoeff::Error> for CliError {
    fn from(err: infoeff::Error) -> Self {
        Self {
            code: if err.is_parse() { 2 } else { 3 },
            message: err.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CliError> for ExitCode {
    fn from(err: CliError) -> Self {
        ExitCode::from(err.code)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Measure(args) => cmd_measure(&args),
        Command::Coin(args) => cmd_coin(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Figures(args) => cmd_figures(&args).map(|files| {
            for f in files {
                println!("{}", f.display());
            }
        }),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

/// Renders a serializable value either as pretty JSON or as `field,value` rows.
fn render<T: Serialize>(value: &T, format: ReportFormat) -> String {
    let value = serde_json::to_value(value).expect("reports serialize");
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut s = String::from("field,value\n");
            if let Value::Object(map) = value {
                for (key, v) in map {
                    match v {
                        Value::Array(items) => {
                            for item in items {
                                writeln!(s, "{key},{}", csv_cell(&item)).unwrap();
                            }
                        }
                        v => writeln!(s, "{key},{}", csv_cell(&v)).unwrap(),
                    }
                }
            }
            s
        }
    }
}

fn csv_cell(v: &Value) -> String {
    let text = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

pub fn cmd_measure(args: &MeasureArgs) -> CliResult<()> {
    let samples = read_samples(open(&args.input)?)?;
    let quotes = match (&args.quotes, &args.quote_values) {
        (Some(path), _) => Some(read_quotes(open(path)?, samples.outcome_labels())?),
        (None, Some(pairs)) => Some(quotes_from_pairs(&pairs.0, samples.outcome_labels())?),
        (None, None) => None,
    };
    let config = EstimationConfig {
        smoothing: args.smoothing,
        resamples: args.resamples,
        seed: args.seed,
        info_set: args.info_set.clone(),
    };
    let report = estimate_efficiency(&samples, quotes.as_ref(), &config)?;
    emit(args.out.as_deref(), &render(&report, args.format))
}

/// Coin-game report: general measures, the closed forms valid for these
/// parameters, and the largest disagreement between the two.
#[derive(Debug, Clone, Serialize)]
pub struct CoinReport {
    pub p_tail: f64,
    pub accuracy: f64,
    pub q_tail: f64,
    #[serde(flatten)]
    pub report: EfficiencyReport,
    pub closed_form_h_x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_eff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_h_q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_eff_q: Option<f64>,
    pub consistency_delta: f64,
}

pub fn coin_report(params: &CoinGameParams) -> infoeff::Result<CoinReport> {
    let system = coin_joint(params)?;
    let report = efficiency_with_quotes(&system.joint, &system.quotes, InfoSetLabel::Strong)?;
    let fair_coin = params.p_tail == 0.5;
    let closed_form_h_x = closed_form_entropy(params.p_tail);
    let closed_form_eff = fair_coin.then(|| closed_form_efficiency_fair(params.accuracy));
    let closed_form_h_q = fair_coin.then(|| closed_form_quote_entropy(params.q_tail));
    let closed_form_eff_q = (fair_coin && params.accuracy == 0.5)
        .then(|| closed_form_efficiency_unfair_quotes(params.q_tail));

    let pairs = [
        (Some(closed_form_h_x), Some(report.h_x.value())),
        (closed_form_eff, report.eff),
        (closed_form_h_q, report.h_q.map(|b| b.value())),
        (closed_form_eff_q, report.eff_q),
    ];
    let consistency_delta = pairs
        .iter()
        .filter_map(|&(a, b)| Some((a? - b?).abs()))
        .fold(0.0, f64::max);
    Ok(CoinReport {
        p_tail: params.p_tail,
        accuracy: params.accuracy,
        q_tail: params.q_tail,
        report,
        closed_form_h_x,
        closed_form_eff,
        closed_form_h_q,
        closed_form_eff_q,
        consistency_delta,
    })
}

pub fn cmd_coin(args: &CoinArgs) -> CliResult<()> {
    let report = coin_report(&args.coin.params()?)?;
    emit(args.out.as_deref(), &render(&report, args.format))
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub run: u64,
    pub mean_growth: f64,
    pub final_log2_wealth: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub p_tail: f64,
    pub accuracy: f64,
    pub q_tail: f64,
    pub rounds: u64,
    pub seed: u64,
    pub runs: u64,
    /// Expected growth of the Kelly strategy, `H(q) - H(X|Y)`.
    pub target: f64,
    /// Mean of the per-run growth rates.
    pub mean_growth: f64,
    pub abs_error: f64,
    pub max_abs_error: f64,
    pub per_run: Vec<RunSummary>,
}

impl SimulationSummary {
    fn to_csv(&self) -> String {
        let mut s = String::from("run,rounds,mean_growth,final_log2_wealth,target,abs_error\n");
        for r in &self.per_run {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.run, self.rounds, r.mean_growth, r.final_log2_wealth, self.target, r.abs_error
            )
            .unwrap();
        }
        writeln!(
            s,
            "all,{},{},,{},{}",
            self.rounds * self.runs,
            self.mean_growth,
            self.target,
            self.abs_error
        )
        .unwrap();
        s
    }
}

pub fn simulation_summary(
    args: &SimulateArgs,
) -> infoeff::Result<(SimulationSummary, Option<String>)> {
    let params = args.coin.params()?;
    let system = coin_joint(&params)?;
    let game = BettingGame::from_coin(&system)?;
    let kelly = kelly_strategy(&system.prior, &system.channel)?;
    let target = infoeff::max_growth_with_quotes(&system.joint, &system.quotes)?.value();
    if args.runs == 0 {
        return Err(infoeff::Error::DomainViolation {
            value: 0.0,
            domain: "runs >= 1".into(),
        });
    }
    let results = simulate_runs(&game, &kelly, args.rounds, args.seed, args.runs)?;
    let trajectory = match args.trajectory {
        Some(_) => {
            let config = SimulationConfig {
                trajectory_points: Some(args.trajectory_points),
                ..SimulationConfig::new(args.rounds, args.seed)
            };
            simulate_with(&game, &kelly, &config)?.trajectory_csv()
        }
        None => None,
    };

    let per_run: Vec<RunSummary> = results
        .iter()
        .map(|r| RunSummary {
            run: r.run,
            mean_growth: r.mean_growth,
            final_log2_wealth: r.final_log2_wealth,
            abs_error: (r.mean_growth - target).abs(),
        })
        .collect();
    let mean_growth = per_run.iter().map(|r| r.mean_growth).sum::<f64>() / per_run.len() as f64;
    let max_abs_error = per_run.iter().map(|r| r.abs_error).fold(0.0, f64::max);
    let summary = SimulationSummary {
        p_tail: params.p_tail,
        accuracy: params.accuracy,
        q_tail: params.q_tail,
        rounds: args.rounds,
        seed: args.seed,
        runs: args.runs,
        target,
        mean_growth,
        abs_error: (mean_growth - target).abs(),
        max_abs_error,
        per_run,
    };
    Ok((summary, trajectory))
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    let (summary, trajectory) = simulation_summary(args)?;
    if let (Some(path), Some(csv)) = (&args.trajectory, trajectory) {
        fs::write(path, csv).map_err(|e| CliError::io(path, e))?;
    }
    let text = match args.format {
        ReportFormat::Json => render(&summary, ReportFormat::Json),
        ReportFormat::Csv => summary.to_csv(),
    };
    emit(args.out.as_deref(), &text)
}

/// Figure number (1 to 4) to curve.
pub fn figure_curve(n: usize) -> Curve {
    Curve::ALL[n - 1]
}

/// Writes the requested figures and returns the paths written, in order.
pub fn cmd_figures(args: &FiguresArgs) -> CliResult<Vec<PathBuf>> {
    let numbers: Vec<usize> = match args.which {
        Which::One => vec![1],
        Which::Two => vec![2],
        Which::Three => vec![3],
        Which::Four => vec![4],
        Which::All => vec![1, 2, 3, 4],
    };
    let tables = numbers
        .par_iter()
        .map(|&n| {
            let curve = figure_curve(n);
            sweep(curve, &Grid::unit(curve, args.points)).map(|t| (n, curve, t))
        })
        .collect::<infoeff::Result<Vec<_>>>()?;

    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    let mut written = Vec::new();
    for (n, curve, table) in tables {
        let csv = args.out_dir.join(format!("fig{n}.csv"));
        fs::write(&csv, table_to_csv(&table)).map_err(|e| CliError::io(&csv, e))?;
        written.push(csv);
        if args.format == FigureFormat::Svg {
            let (x_label, y_label) = curve.axis_labels();
            let chart = svg::line_chart(&format!("Figure {n}"), x_label, y_label, &table);
            let path = args.out_dir.join(format!("fig{n}.svg"));
            fs::write(&path, chart).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
