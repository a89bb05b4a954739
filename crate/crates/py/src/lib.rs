//! Python module `pyseedspan`. Results come back as plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use seedspan::agents::AgentConfig;
use seedspan::cli::ExperimentConfig;
use seedspan::engine::{play_game as play, SeedSet};
use seedspan::games::{BuiltinGame, GAME_NAMES};
use seedspan::runner::{self, BlockSpec, RunOptions, SeedDistribution};
use seedspan::stats::{self, MetricsReport, Mixture};
use seedspan::{with_game, Error};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn game(name: &str) -> PyResult<BuiltinGame> {
    BuiltinGame::from_name(name).map_err(to_py_err)
}

/// Names of the built-in games.
#[pyfunction]
fn games() -> Vec<&'static str> {
    GAME_NAMES.to_vec()
}

/// Chance stream names declared by `game`.
#[pyfunction]
fn stream_names(game_name: &str) -> PyResult<Vec<String>> {
    Ok(game(game_name)?.def().stream_names.clone())
}

/// Plays one game; `budgets[s]` is 0 for a random agent in seat `s`.
#[pyfunction]
#[pyo3(signature = (game_name, master_seed, budgets = vec![0, 0], redet_seed = 0, agent_seeds = None))]
fn play_game<'py>(
    py: Python<'py>,
    game_name: &str,
    master_seed: u64,
    budgets: Vec<u32>,
    redet_seed: u64,
    agent_seeds: Option<Vec<u64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let g = game(game_name)?;
    let agents: Vec<AgentConfig> = budgets.iter().map(|&b| AgentConfig::with_budget(b)).collect();
    let agent_seeds = agent_seeds.unwrap_or_else(|| (0..agents.len() as u64).collect());
    let seeds = SeedSet::new(master_seed, redet_seed, agent_seeds);
    let outcome = py
        .detach(|| with_game!(&g, g => play(g, &seeds, &agents)))
        .map_err(to_py_err)?;
    to_py(py, &outcome)
}

/// Per-seed first-seat win rates with every stream fixed per seed.
#[pyfunction]
#[pyo3(signature = (game_name, n_seeds, n_games, root_seed, budget = 0, workers = 1))]
fn run_distribution<'py>(
    py: Python<'py>,
    game_name: &str,
    n_seeds: usize,
    n_games: usize,
    root_seed: u64,
    budget: u32,
    workers: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let g = game(game_name)?;
    let spec = BlockSpec::new(game_name, n_games, vec![AgentConfig::with_budget(budget); 2]);
    let options = RunOptions::new(root_seed, workers);
    let dist = py
        .detach(|| with_game!(&g, g => runner::run_distribution(g, &spec, n_seeds, &options)))
        .map_err(to_py_err)?;
    to_py(py, &dist)
}

/// Randomness metrics of a list of per-seed win rates.
#[pyfunction]
#[pyo3(signature = (win_rates, n_games, confidence = stats::DEFAULT_CONFIDENCE, trim = stats::DEFAULT_TRIM))]
fn metrics<'py>(
    py: Python<'py>,
    win_rates: Vec<f64>,
    n_games: usize,
    confidence: f64,
    trim: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let ids = (0..win_rates.len() as u64).collect();
    let dist = SeedDistribution::from_rates("external", ids, win_rates, n_games).map_err(to_py_err)?;
    to_py(
        py,
        &MetricsReport::with_params(&dist, confidence, trim).map_err(to_py_err)?,
    )
}

/// Central interval of a Binomial(n, p) rate.
#[pyfunction]
#[pyo3(signature = (n, p, confidence = stats::DEFAULT_CONFIDENCE))]
fn binomial_interval(n: u64, p: f64, confidence: f64) -> PyResult<(f64, f64)> {
    stats::binomial_interval(n, p, confidence).map_err(to_py_err)
}

/// Monte-Carlo check of the single and mirrored variance formulas for a
/// mixture such as `"beta:2,5"`.
#[pyfunction]
#[pyo3(signature = (mixture, n_draws = 100_000, seed = 0))]
fn verify_variance<'py>(py: Python<'py>, mixture: &str, n_draws: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let m = Mixture::parse(mixture).map_err(to_py_err)?;
    let report = py
        .detach(|| stats::verify_variance(&m, n_draws, seed))
        .map_err(to_py_err)?;
    to_py(py, &report)
}

/// Runs a full experiment from a JSON config (the CLI's file format) and
/// returns the report without writing files.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let config: ExperimentConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(format!("config: {e}")))?;
    let out = py.detach(|| seedspan::cli::run(&config)).map_err(to_py_err)?;
    to_py(py, &out.report)
}

#[pymodule]
fn pyseedspan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", seedspan::cli::VERSION)?;
    m.add_function(wrap_pyfunction!(games, m)?)?;
    m.add_function(wrap_pyfunction!(stream_names, m)?)?;
    m.add_function(wrap_pyfunction!(play_game, m)?)?;
    m.add_function(wrap_pyfunction!(run_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_interval, m)?)?;
    m.add_function(wrap_pyfunction!(verify_variance, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
