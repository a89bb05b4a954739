use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::agents::{AgentConfig, DEFAULT_ROLLOUT_DEPTH_CAP};
use crate::error::{Error, Result};
use crate::games::BuiltinGame;
use crate::stats::Mixture;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Distribution,
    SkillSweep,
    Mirror,
    Disentangle,
    Nonmonotonic,
    VerifyVariance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// 50 seeds × 500 games.
    Desk,
    /// 200 seeds × 1000 games.
    Paper,
}

impl Preset {
    pub fn sizes(self) -> (usize, usize) {
        match self {
            Preset::Desk => (50, 500),
            Preset::Paper => (200, 1000),
        }
    }
}

/// Search settings shared by every ISMCTS agent of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSettings {
    #[serde(default = "default_c")]
    pub exploration_constant: f64,
    #[serde(default = "default_cap")]
    pub rollout_depth_cap: u32,
}

fn default_c() -> f64 {
    std::f64::consts::SQRT_2
}

fn default_cap() -> u32 {
    DEFAULT_ROLLOUT_DEPTH_CAP
}

impl Default for AgentSettings {
    fn default() -> Self {
        AgentSettings {
            exploration_constant: default_c(),
            rollout_depth_cap: default_cap(),
        }
    }
}

fn default_seeds() -> usize {
    Preset::Desk.sizes().0
}

fn default_games() -> usize {
    Preset::Desk.sizes().1
}

fn default_workers() -> usize {
    1
}

fn default_boot() -> usize {
    1000
}

fn default_draws() -> usize {
    100_000
}

fn default_confidence() -> f64 {
    0.99
}

/// One experiment, as read from the JSON config file and flag overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub game: String,
    pub mode: Mode,
    #[serde(default = "default_seeds")]
    pub n_seeds: usize,
    /// Games per seed (in mirror mode, twice the number of pairs).
    #[serde(default = "default_games")]
    pub n_games: usize,
    /// Budget of both seats; 0 is the random agent.
    #[serde(default)]
    pub budget: u32,
    /// Ladder for skill-sweep and nonmonotonic modes.
    #[serde(default)]
    pub budgets: Vec<u32>,
    #[serde(default)]
    pub agent: AgentSettings,
    /// Streams held fixed in disentangle mode.
    #[serde(default)]
    pub fixed_stream: Vec<String>,
    pub root_seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Bootstrap resamples for metric intervals.
    #[serde(default = "default_boot")]
    pub n_boot: usize,
    /// Confidence of outlier and non-monotonic tests.
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    /// verify-variance mixtures, e.g. `beta:2,5`.
    #[serde(default)]
    pub mixtures: Vec<String>,
    #[serde(default = "default_draws")]
    pub n_draws: usize,
}

impl ExperimentConfig {
    pub fn new(game: &str, mode: Mode, root_seed: u64) -> Self {
        ExperimentConfig {
            game: game.to_owned(),
            mode,
            n_seeds: default_seeds(),
            n_games: default_games(),
            budget: 0,
            budgets: Vec::new(),
            agent: AgentSettings::default(),
            fixed_stream: Vec::new(),
            root_seed: Some(root_seed),
            out: None,
            workers: 1,
            n_boot: default_boot(),
            confidence: default_confidence(),
            mixtures: Vec::new(),
            n_draws: default_draws(),
        }
    }

    pub fn agent_config(&self, budget: u32) -> AgentConfig {
        let mut a = AgentConfig::with_budget(budget);
        a.exploration_constant = self.agent.exploration_constant;
        a.rollout_depth_cap = self.agent.rollout_depth_cap;
        a
    }

    pub fn root_seed(&self) -> Result<u64> {
        self.root_seed
            .ok_or_else(|| Error::Config("root_seed: required (runs are never seeded from the clock)".into()))
    }

    /// Mixtures for verify-variance, with the default catalogue when empty.
    pub fn mixture_list(&self) -> Result<Vec<Mixture>> {
        if self.mixtures.is_empty() {
            return Ok(vec![
                Mixture::Beta { alpha: 2.0, beta: 5.0 },
                Mixture::TwoPoint { a: 0.2, b: 0.8 },
                Mixture::PointMass { p: 0.5 },
            ]);
        }
        self.mixtures
            .iter()
            .map(|m| Mixture::parse(m).map_err(|e| Error::Config(format!("mixtures: {e}"))))
            .collect()
    }

    /// Field-level checks for the selected mode.
    pub fn validate(&self) -> Result<()> {
        let field = |name: &str, msg: String| Err(Error::Config(format!("{name}: {msg}")));
        self.root_seed()?;
        if self.workers == 0 {
            return field("workers", "must be at least 1".into());
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return field("confidence", format!("must be in (0, 1), got {}", self.confidence));
        }
        if self.mode == Mode::VerifyVariance {
            if self.n_draws < 4 {
                return field("n_draws", "must be at least 4".into());
            }
            self.mixture_list()?;
            return Ok(());
        }
        let game = BuiltinGame::from_name(&self.game).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("game: {m}")),
            other => other,
        })?;
        if self.n_seeds < 2 {
            return field("n_seeds", format!("must be at least 2, got {}", self.n_seeds));
        }
        if self.n_games == 0 {
            return field("n_games", "must be at least 1".into());
        }
        if self.n_boot == 0 {
            return field("n_boot", "must be at least 1".into());
        }
        self.agent_config(1).validate()?;
        match self.mode {
            Mode::SkillSweep | Mode::Nonmonotonic => {
                let min = if self.mode == Mode::Nonmonotonic { 3 } else { 1 };
                if self.budgets.len() < min {
                    return field(
                        "budgets",
                        format!("needs at least {min} budgets, got {:?}", self.budgets),
                    );
                }
                if self.budgets.windows(2).any(|w| w[0] >= w[1]) {
                    return field(
                        "budgets",
                        format!("must be strictly increasing, got {:?}", self.budgets),
                    );
                }
            }
            Mode::Mirror if !self.n_games.is_multiple_of(2) => {
                return field(
                    "n_games",
                    format!("mirror mode plays pairs, needs an even count, got {}", self.n_games),
                );
            }
            Mode::Disentangle => {
                let def = game.def();
                if self.fixed_stream.is_empty() {
                    return field(
                        "fixed_stream",
                        format!(
                            "required in disentangle mode; {} declares [{}]",
                            def.name,
                            def.stream_names.join(", ")
                        ),
                    );
                }
                for s in &self.fixed_stream {
                    if def.stream_index(s).is_none() {
                        return field(
                            "fixed_stream",
                            format!(
                                "{} has no stream {s:?}; valid streams are [{}]",
                                def.name,
                                def.stream_names.join(", ")
                            ),
                        );
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}
