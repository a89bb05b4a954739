//! Command-line front end: builds an [`ExperimentConfig`] from a JSON file
//! and flags, runs it, and writes `report.json`, `seeds.csv` and
//! `histogram.csv`.

mod config;

pub use config::{AgentSettings, ExperimentConfig, Mode, Preset};

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use crate::engine::{seed_hash, Game};
use crate::error::{Error, Result};
use crate::games::BuiltinGame;
use crate::runner::{self, BlockSpec, RunOptions, SeedDistribution, SkillSweep};
use crate::stats::{self, MetricsReport};
use crate::with_game;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "seedspan",
    version,
    about = "Measure how much a game's randomness decides its outcome"
)]
pub struct Args {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Number of sampled seeds.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Games per seed.
    #[arg(long)]
    pub games: Option<usize>,
    /// Budget, or a comma-separated ladder for sweeps.
    #[arg(long, value_delimiter = ',')]
    pub budget: Option<Vec<u32>>,
    /// Stream(s) to hold fixed in disentangle mode.
    #[arg(long = "fix-stream", value_delimiter = ',')]
    pub fix_stream: Option<Vec<String>>,
    #[arg(long)]
    pub root_seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed and game counts; `--seeds` and `--games` still win.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// verify-variance mixtures, e.g. `beta:2,5`.
    #[arg(long = "mixture")]
    pub mixtures: Vec<String>,
}

/// Merges the config file, preset and flags, in that order of precedence
/// (later wins), and validates the result.
pub fn resolve(args: &Args) -> Result<ExperimentConfig> {
    let mut value = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("config: cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<Value>(&text).map_err(|e| Error::Config(format!("config: {e}")))?
        }
        None => json!({}),
    };
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Config("config: top level must be a JSON object".into()))?;
    if let Some(p) = args.preset {
        let (s, g) = p.sizes();
        obj.insert("n_seeds".into(), json!(s));
        obj.insert("n_games".into(), json!(g));
    }
    let mut set = |key: &str, v: Value| {
        obj.insert(key.into(), v);
    };
    if let Some(g) = &args.game {
        set("game", json!(g));
    }
    if let Some(m) = args.mode {
        set("mode", serde_json::to_value(m).expect("mode serializes"));
    }
    if let Some(s) = args.seeds {
        set("n_seeds", json!(s));
    }
    if let Some(g) = args.games {
        set("n_games", json!(g));
    }
    if let Some(b) = &args.budget {
        if b.len() == 1 {
            set("budget", json!(b[0]));
        }
        set("budgets", json!(b));
    }
    if let Some(f) = &args.fix_stream {
        set("fixed_stream", json!(f));
    }
    if let Some(r) = args.root_seed {
        set("root_seed", json!(r));
    }
    if let Some(w) = args.workers {
        set("workers", json!(w));
    }
    if let Some(o) = &args.out {
        set("out", json!(o));
    }
    if !args.mixtures.is_empty() {
        set("mixtures", json!(args.mixtures));
    }
    if !obj.contains_key("mode") {
        return Err(Error::Config("mode: required".into()));
    }
    let config: ExperimentConfig = serde_json::from_value(value).map_err(|e| Error::Config(format!("config: {e}")))?;
    config.validate()?;
    Ok(config)
}

/// One row of the printed summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub metric: String,
    pub value: f64,
    pub ci: Option<[f64; 2]>,
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Value,
    pub seeds_csv: Option<String>,
    pub histogram_csv: Option<String>,
    pub summary: Vec<SummaryRow>,
}

impl RunOutput {
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string_pretty(&self.report)?;
        text.push('\n');
        fs::write(dir.join("report.json"), text)?;
        if let Some(csv) = &self.seeds_csv {
            fs::write(dir.join("seeds.csv"), csv)?;
        }
        if let Some(csv) = &self.histogram_csv {
            fs::write(dir.join("histogram.csv"), csv)?;
        }
        Ok(())
    }

    pub fn summary_table(&self) -> String {
        let mut out = format!("{:<32} {:>10}  {}\n", "metric", "value", "95% CI");
        for r in &self.summary {
            let ci = r.ci.map_or(String::from("-"), |[lo, hi]| format!("[{lo:.4}, {hi:.4}]"));
            out.push_str(&format!("{:<32} {:>10.4}  {}\n", r.metric, r.value, ci));
        }
        out
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Bootstrap intervals of the four metrics of one distribution.
pub fn metric_intervals(dist: &SeedDistribution, n_boot: usize, confidence: f64, boot_seed: u64) -> Result<Value> {
    let n = dist.n_games as u64;
    let ci = |f: &dyn Fn(&[f64]) -> f64, tag: u64| -> Result<[f64; 2]> {
        let (lo, hi) = stats::bootstrap_ci(
            f,
            &dist.win_rates,
            n_boot,
            0.95,
            seed_hash("cli/bootstrap", &[boot_seed, tag]),
        )?;
        Ok([lo, hi])
    };
    let entropy = |v: &[f64]| stats::entropy(v).unwrap_or(f64::NAN);
    let span = |v: &[f64]| stats::span(v).unwrap_or(f64::NAN);
    let trimmed = |v: &[f64]| stats::trimmed_span(v, stats::DEFAULT_TRIM).unwrap_or(f64::NAN);
    let outliers = |v: &[f64]| stats::outlier_fraction_of(v, n, mean(v), confidence).unwrap_or(f64::NAN);
    let grand = |v: &[f64]| mean(v);
    Ok(json!({
        "confidence": 0.95,
        "n_boot": n_boot,
        "entropy": ci(&entropy, 0)?,
        "span": ci(&span, 1)?,
        "trimmed_span": ci(&trimmed, 2)?,
        "outlier_fraction": ci(&outliers, 3)?,
        "grand_mean": ci(&grand, 4)?,
    }))
}

fn metric_rows(prefix: &str, m: &MetricsReport, cis: &Value) -> Vec<SummaryRow> {
    let get = |k: &str| serde_json::from_value::<[f64; 2]>(cis[k].clone()).ok();
    [
        ("grand_mean", m.grand_mean),
        ("entropy", m.entropy),
        ("span", m.span),
        ("trimmed_span", m.trimmed_span),
        ("outlier_fraction", m.outlier_fraction),
    ]
    .into_iter()
    .map(|(k, v)| SummaryRow {
        metric: format!("{prefix}{k}"),
        value: v,
        ci: get(k),
    })
    .collect()
}

fn distribution_block(
    dist: &SeedDistribution,
    config: &ExperimentConfig,
    boot_seed: u64,
) -> Result<(Value, Vec<SummaryRow>)> {
    let metrics = MetricsReport::with_params(dist, config.confidence, stats::DEFAULT_TRIM)?;
    let cis = metric_intervals(dist, config.n_boot, config.confidence, boot_seed)?;
    let rows = metric_rows("", &metrics, &cis);
    let value = json!({
        "metrics": metrics,
        "metric_cis": cis,
        "variance": {
            "single_game": stats::single_game_variance(dist)?,
            "mirrored_game": stats::mirrored_game_variance(dist)?,
        },
        "distribution": dist,
    });
    Ok((value, rows))
}

fn sweep_csv(sweep: &SkillSweep) -> Result<(String, String)> {
    let mut seeds = String::from("budget,seed,win_rate,n_games\n");
    let mut hist = String::from("budget,bucket_lo,bucket_hi,count\n");
    for (b, row) in sweep.budgets.iter().zip(&sweep.rows) {
        for line in row.seeds_csv().lines().skip(1) {
            seeds.push_str(&format!("{b},{line}\n"));
        }
        for line in stats::histogram_csv(&row.win_rates)?.lines().skip(1) {
            hist.push_str(&format!("{b},{line}\n"));
        }
    }
    Ok((seeds, hist))
}

fn run_game<G: Game>(game: &G, config: &ExperimentConfig) -> Result<RunOutput> {
    let root = config.root_seed()?;
    let options = RunOptions::new(root, config.workers);
    let boot_seed = seed_hash("cli/boot-root", &[root]);
    let seats = game.def().seats;
    let agents = vec![config.agent_config(config.budget); seats];
    let single = |dist: &SeedDistribution, extra: Value| -> Result<RunOutput> {
        let (mut value, summary) = distribution_block(dist, config, boot_seed)?;
        if let Value::Object(extra) = extra {
            value.as_object_mut().expect("object").extend(extra);
        }
        Ok(RunOutput {
            report: value,
            seeds_csv: Some(dist.seeds_csv()),
            histogram_csv: Some(stats::histogram_csv(&dist.win_rates)?),
            summary,
        })
    };
    match config.mode {
        Mode::Distribution => {
            let spec = BlockSpec::new(&game.def().name, config.n_games, agents);
            let dist = runner::run_distribution(game, &spec, config.n_seeds, &options)?;
            single(&dist, json!({}))
        }
        Mode::Disentangle => {
            let dist = runner::run_disentangled(
                game,
                &config.fixed_stream,
                config.n_seeds,
                config.n_games,
                &agents,
                &options,
            )?;
            single(&dist, json!({ "fixed_streams": config.fixed_stream }))
        }
        Mode::Mirror => {
            let (pairs, dist) = runner::run_mirrored(game, &agents, config.n_seeds, config.n_games / 2, &options)?;
            let mut out = single(&dist, json!({ "pairs": pairs }))?;
            out.summary.push(SummaryRow {
                metric: "mean_pair_value".into(),
                value: pairs.mean_pair_value,
                ci: None,
            });
            out.summary.push(SummaryRow {
                metric: "mirrored_per_game_variance".into(),
                value: pairs.per_game_variance,
                ci: None,
            });
            Ok(out)
        }
        Mode::SkillSweep | Mode::Nonmonotonic => {
            let template = config.agent_config(1);
            let sweep = runner::run_skill_sweep(
                game,
                &config.budgets,
                config.n_seeds,
                config.n_games,
                &template,
                &options,
            )?;
            let mut rows = Vec::new();
            let mut summary = Vec::new();
            for (b, dist) in sweep.budgets.iter().zip(&sweep.rows) {
                let metrics = MetricsReport::with_params(dist, config.confidence, stats::DEFAULT_TRIM)?;
                let cis = metric_intervals(dist, config.n_boot, config.confidence, boot_seed)?;
                summary.extend(metric_rows(&format!("b{b}/"), &metrics, &cis));
                rows.push(json!({ "budget": b, "metrics": metrics, "metric_cis": cis }));
            }
            let mut report = json!({ "budget_metrics": rows, "sweep": sweep });
            if config.mode == Mode::Nonmonotonic {
                let nm = stats::nonmonotonic_seeds(&sweep, config.confidence)?;
                for b in &nm.interior {
                    summary.push(SummaryRow {
                        metric: format!("b{}/nonmonotonic_fraction", b.budget),
                        value: b.fraction,
                        ci: None,
                    });
                }
                summary.push(SummaryRow {
                    metric: "nonmonotonic_total".into(),
                    value: nm.total_fraction,
                    ci: None,
                });
                report["nonmonotonic"] = serde_json::to_value(nm)?;
            }
            let (seeds, hist) = sweep_csv(&sweep)?;
            Ok(RunOutput {
                report,
                seeds_csv: Some(seeds),
                histogram_csv: Some(hist),
                summary,
            })
        }
        Mode::VerifyVariance => unreachable!("handled without a game"),
    }
}

fn run_verify(config: &ExperimentConfig) -> Result<RunOutput> {
    let root = config.root_seed()?;
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    for (i, m) in config.mixture_list()?.iter().enumerate() {
        let r = stats::verify_variance(m, config.n_draws, seed_hash("cli/verify", &[root, i as u64]))?;
        for c in &r.checks {
            summary.push(SummaryRow {
                metric: format!("{}/{}{}", m.label(), c.name, if c.pass { "" } else { " FAIL" }),
                value: c.observed,
                ci: Some([
                    c.expected - c.tolerance_sigmas * c.sigma,
                    c.expected + c.tolerance_sigmas * c.sigma,
                ]),
            });
        }
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(RunOutput {
        report: json!({ "pass": pass, "mixtures": reports }),
        seeds_csv: None,
        histogram_csv: None,
        summary,
    })
}

/// Runs a validated config. Nothing is written to disk.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let mut out = if config.mode == Mode::VerifyVariance {
        run_verify(config)?
    } else {
        let game = BuiltinGame::from_name(&config.game)?;
        with_game!(&game, g => run_game(g, config))?
    };
    let result = std::mem::take(&mut out.report);
    out.report = json!({
        "software": { "name": "seedspan", "version": VERSION },
        "config": config,
        "mode": config.mode,
        "result": result,
    });
    Ok(out)
}

/// Exit status for an error: 2 for configuration problems, 3 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) => 2,
        _ => 3,
    }
}

/// Entry point shared by the binary and tests. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match resolve(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let result = run(&config).and_then(|out| {
        let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
        out.write(&dir)?;
        Ok((out, dir))
    });
    match result {
        Ok((out, dir)) => {
            print!("{}", out.summary_table());
            println!("reports written to {}", dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
