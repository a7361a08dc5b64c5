//! The `hockey-predict` command line.
//!
//! Every command writes a table, either as CSV preceded by `#` metadata
//! lines or as a JSON object `{meta, columns, rows}`. Numbers are written with
//! 10 significant digits.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::distributions::{Density, Window};
use crate::evaluation::{prediction_error, risk_curve, truncated_truth, RiskSetup, Shapes};
use crate::ingest::{parse_game_log, reduce_to_stat, GameRecord, X2Mode};
use crate::predictive::{
    predictive_summaries, q_hat_0, q_hat_1, PredictionProblem, Restricted, SufficientStat, Unrestricted,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hockey-predict", version, about = "Predictive densities for the waiting time until the r-th goal")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Normalized q0 and q1 on a grid over the window.
    Predict(RunOptions),
    /// Mode, mean and 20/50/90 % quantiles of q0 and q1.
    Summarize(RunOptions),
    /// Monte Carlo KL risk of q0 and q1 over a grid of scale ratios.
    RiskCurve(RunOptions),
    /// KL loss of q0 and q1 against a truncated gamma truth.
    PredictionError(RunOptions),
    /// Untruncated q0, q1 and their ratio on a grid.
    DensityTable(RunOptions),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Predict(_) => "predict",
            Command::Summarize(_) => "summarize",
            Command::RiskCurve(_) => "risk-curve",
            Command::PredictionError(_) => "prediction-error",
            Command::DensityTable(_) => "density-table",
        }
    }

    pub fn options(&self) -> &RunOptions {
        match self {
            Command::Predict(o)
            | Command::Summarize(o)
            | Command::RiskCurve(o)
            | Command::PredictionError(o)
            | Command::DensityTable(o) => o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunOptions {
    /// Shape of team A's observation.
    #[arg(long, default_value_t = 3.0)]
    pub r1: f64,
    /// Shape of team B's observation.
    #[arg(long, default_value_t = 3.0)]
    pub r2: f64,
    /// Shape of the future waiting time.
    #[arg(long = "r-prime", default_value_t = 3.0)]
    pub r_prime: f64,
    /// Team A's statistic, instead of a game log.
    #[arg(long, conflicts_with = "team_a_log")]
    pub x1: Option<f64>,
    /// Team B's statistic, instead of a game log.
    #[arg(long, conflicts_with = "team_b_log")]
    pub x2: Option<f64>,
    #[arg(long = "team-a-log", value_name = "PATH")]
    pub team_a_log: Option<PathBuf>,
    #[arg(long = "team-b-log", value_name = "PATH")]
    pub team_b_log: Option<PathBuf>,
    /// Team to select from team A's log; defaults to the only team in it.
    #[arg(long = "team-a", value_name = "NAME")]
    pub team_a: Option<String>,
    #[arg(long = "team-b", value_name = "NAME")]
    pub team_b: Option<String>,
    /// Season points of team A.
    #[arg(long = "points-a")]
    pub points_a: Option<u32>,
    /// Season points of team B.
    #[arg(long = "points-b")]
    pub points_b: Option<u32>,
    /// Rescaling of team B's statistic: raw, or times (R_A/R_B) or (R_A/R_B)².
    #[arg(long = "x2-mode", default_value = "raw", value_parser = parse_x2_mode)]
    pub x2_mode: X2Mode,
    /// Truncation window `LO,HI`; `HI` may be `inf`.
    #[arg(long, default_value = "0,60", value_parser = parse_window)]
    pub window: Window,
    /// Number of grid points.
    #[arg(long, default_value_t = 600)]
    pub grid: usize,
    /// Monte Carlo draws per grid point.
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 20_180_412)]
    pub seed: u64,
    /// Ratios λ_A/λ_B for risk-curve.
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,2,3,4,6,8")]
    pub ratios: Vec<f64>,
    /// Scale λ_A for risk-curve.
    #[arg(long, default_value_t = 1.0)]
    pub lambda1: f64,
    /// Truncate the risk computation to the window as well.
    #[arg(long = "risk-truncated")]
    pub risk_truncated: bool,
    /// Shape of the gamma truth for prediction-error.
    #[arg(long = "truth-shape", default_value_t = 3.0)]
    pub truth_shape: f64,
    /// Scale of the gamma truth for prediction-error.
    #[arg(long = "truth-scale", default_value_t = 18.3)]
    pub truth_scale: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn parse_x2_mode(s: &str) -> std::result::Result<X2Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
    let num = |t: &str| -> std::result::Result<f64, String> {
        match t.trim() {
            "inf" | "infinity" => Ok(f64::INFINITY),
            v => v.parse().map_err(|_| format!("{v:?} is not a number")),
        }
    };
    Window::new(num(lo)?, num(hi)?).map_err(|e| e.to_string())
}

/// The fully resolved configuration echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(flatten)]
    pub options: RunOptions,
}

struct Observations {
    a: SufficientStat,
    b: Option<SufficientStat>,
}

fn read_log(path: &Path) -> Result<Vec<GameRecord>> {
    let file = File::open(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    parse_game_log(BufReader::new(file))
}

fn sole_team(records: &[GameRecord], path: &Path) -> Result<String> {
    let mut teams: Vec<&str> = records.iter().map(|r| r.team.as_str()).collect();
    teams.sort_unstable();
    teams.dedup();
    match teams.as_slice() {
        [t] => Ok(t.to_string()),
        [] => Err(Error::EmptySelection(path.display().to_string())),
        _ => Err(Error::Config(format!(
            "{} lists several teams; choose one with --team-a/--team-b",
            path.display()
        ))),
    }
}

fn stat_from(
    explicit: Option<f64>,
    log: &Option<PathBuf>,
    team: &Option<String>,
    r: f64,
    mode: X2Mode,
    points: Option<(u32, u32)>,
) -> Result<Option<SufficientStat>> {
    match (explicit, log) {
        (Some(x), None) => Ok(Some(SufficientStat::new(x * mode.factor(points)?, r)?)),
        (None, Some(path)) => {
            let records = read_log(path)?;
            let team = match team {
                Some(t) => t.clone(),
                None => sole_team(&records, path)?,
            };
            Ok(Some(reduce_to_stat(&records, &team, r, mode, points)?))
        }
        (None, None) => Ok(None),
        (Some(_), Some(_)) => Err(Error::Config("give either a statistic or a game log, not both".into())),
    }
}

fn observations(o: &RunOptions) -> Result<Observations> {
    let a = stat_from(o.x1, &o.team_a_log, &o.team_a, o.r1, X2Mode::Raw, None)?
        .ok_or_else(|| Error::Config("team A needs --x1 or --team-a-log".into()))?;
    let points = match (o.points_b, o.points_a) {
        (Some(b), Some(a)) => Some((b, a)),
        _ => None,
    };
    let b = stat_from(o.x2, &o.team_b_log, &o.team_b, o.r2, o.x2_mode, points)?;
    Ok(Observations { a, b })
}

fn require_b(obs: &Observations) -> Result<SufficientStat> {
    obs.b
        .ok_or_else(|| Error::Config("team B needs --x2 or --team-b-log".into()))
}

fn grid(window: Window, n: usize) -> Result<Vec<f64>> {
    if !window.is_bounded() {
        return Err(Error::Config("a grid needs a bounded window".into()));
    }
    if n == 0 {
        return Err(Error::Config("grid must have at least one point".into()));
    }
    let h = window.width() / n as f64;
    Ok((0..n).map(|i| window.lo + (i as f64 + 0.5) * h).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Rows of output with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Derived quantities reported alongside the config, e.g. resolved statistics.
    pub notes: Vec<(&'static str, f64)>,
}

fn round10(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.9e}").parse().expect("formatted float parses")
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(v) => round10(*v).to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(v) if v.is_finite() => json!(round10(*v)),
        Cell::Num(v) => json!(v.to_string()),
        Cell::Text(s) => json!(s),
    }
}

fn stat_notes(obs: &Observations) -> Vec<(&'static str, f64)> {
    let mut notes = vec![("x1", obs.a.x)];
    if let Some(b) = obs.b {
        notes.push(("x2", b.x));
    }
    notes
}

/// Run the command without writing anything.
pub fn execute(command: &Command) -> Result<Table> {
    let o = command.options();
    match command {
        Command::Predict(_) => {
            let obs = observations(o)?;
            let b = require_b(&obs)?;
            let p = PredictionProblem::restricted(obs.a, b, o.r_prime, o.window)?;
            let (q0, q1) = (q_hat_0(&p)?, q_hat_1(&p)?);
            let rows = grid(o.window, o.grid)?
                .into_iter()
                .map(|y| vec![y.into(), q0.pdf(y).into(), q1.pdf(y).into()])
                .collect();
            Ok(Table {
                columns: vec!["y", "q0", "q1"],
                rows,
                notes: stat_notes(&obs),
            })
        }
        Command::DensityTable(_) => {
            let obs = observations(o)?;
            let b = require_b(&obs)?;
            let q0 = Unrestricted::new(obs.a, o.r_prime)?;
            let q1 = Restricted::new(obs.a, b, o.r_prime)?;
            let rows = grid(o.window, o.grid)?
                .into_iter()
                .map(|y| vec![y.into(), q0.pdf(y).into(), q1.pdf(y).into(), q1.weight(y).into()])
                .collect();
            Ok(Table {
                columns: vec!["y", "q0_untruncated", "q1_untruncated", "weight"],
                rows,
                notes: stat_notes(&obs),
            })
        }
        Command::Summarize(_) => {
            let obs = observations(o)?;
            let mut rows = Vec::new();
            let p = match obs.b {
                Some(b) => PredictionProblem::restricted(obs.a, b, o.r_prime, o.window)?,
                None => PredictionProblem::unrestricted(obs.a, o.r_prime, o.window)?,
            };
            let mut push = |name: &str, row: crate::predictive::Table2Row| {
                let mut r: Vec<Cell> = vec![name.into()];
                r.extend(row.as_array().into_iter().map(Cell::from));
                rows.push(r);
            };
            push("q0", predictive_summaries(&q_hat_0(&p)?)?);
            if p.team_b.is_some() {
                push("q1", predictive_summaries(&q_hat_1(&p)?)?);
            }
            Ok(Table {
                columns: vec!["estimator", "mode", "mean", "p20", "p50", "p90"],
                rows,
                notes: stat_notes(&obs),
            })
        }
        Command::PredictionError(_) => {
            let obs = observations(o)?;
            let b = require_b(&obs)?;
            let p = PredictionProblem::restricted(obs.a, b, o.r_prime, o.window)?;
            let truth = truncated_truth(o.truth_shape, o.truth_scale, o.window)?;
            let rows = vec![
                vec!["q0".into(), prediction_error(&truth, &q_hat_0(&p)?)?.into()],
                vec!["q1".into(), prediction_error(&truth, &q_hat_1(&p)?)?.into()],
            ];
            Ok(Table {
                columns: vec!["estimator", "pe"],
                rows,
                notes: stat_notes(&obs),
            })
        }
        Command::RiskCurve(_) => {
            let setup = RiskSetup {
                shapes: Shapes {
                    r1: o.r1,
                    r2: o.r2,
                    r_prime: o.r_prime,
                },
                samples: o.samples,
                seed: o.seed,
                window: if o.risk_truncated { o.window } else { Window::POSITIVE },
            };
            let c = risk_curve(&o.ratios, o.lambda1, &setup)?;
            let rows = (0..c.ratios.len())
                .map(|i| {
                    vec![
                        c.ratios[i].into(),
                        c.risk_q0[i].into(),
                        c.risk_q1[i].into(),
                        c.std_err_q0[i].into(),
                        c.std_err_q1[i].into(),
                        c.std_err_diff[i].into(),
                    ]
                })
                .collect();
            Ok(Table {
                columns: vec!["ratio", "risk_q0", "risk_q1", "std_err_q0", "std_err_q1", "std_err_diff"],
                rows,
                notes: Vec::new(),
            })
        }
    }
}

fn meta(config: &RunConfig, notes: &[(&'static str, f64)]) -> Value {
    let mut resolved = Map::new();
    for (k, v) in notes {
        resolved.insert((*k).to_string(), json!(round10(*v)));
    }
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": config.command,
        "seed": config.options.seed,
        "config": config,
        "resolved": resolved,
    })
}

/// Render `table` as CSV with a `#` metadata block, or as JSON.
pub fn render(config: &RunConfig, table: &Table) -> String {
    let meta = meta(config, &table.notes);
    match config.options.format {
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (c, v) in table.columns.iter().zip(r) {
                        m.insert((*c).to_string(), cell_json(v));
                    }
                    Value::Object(m)
                })
                .collect();
            let doc = json!({ "meta": meta, "columns": table.columns, "rows": rows });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!("# hockey-predict {}\n", env!("CARGO_PKG_VERSION")));
            s.push_str(&format!("# command: {}\n", config.command));
            s.push_str(&format!("# seed: {}\n", config.options.seed));
            s.push_str(&format!("# config: {}\n", meta["config"]));
            s.push_str(&format!("# resolved: {}\n", meta["resolved"]));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.columns).expect("in-memory write");
            for r in &table.rows {
                w.write_record(r.iter().map(cell_text)).expect("in-memory write");
            }
            s.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8"));
            s
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Parse `args`, run, and write the output; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let config = RunConfig {
        command: cli.command.name(),
        options: cli.command.options().clone(),
    };
    let table = match execute(&cli.command) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = render(&config, &table);
    let written = match &config.options.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_CONFIG;
    }
    EXIT_OK
}
