//! Seeded decision makers: a uniform-random agent and an Information-Set
//! MCTS agent with a fixed iteration budget.

mod ismcts;

pub use ismcts::{ucb1_select, ChildStats};

use serde::{Deserialize, Serialize};

use crate::engine::{derive_stream, Action, ChanceStream, Game, InfoSet};
use crate::error::{Error, Result};

pub const DEFAULT_ROLLOUT_DEPTH_CAP: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Random,
    Ismcts,
}

fn default_c() -> f64 {
    std::f64::consts::SQRT_2
}

fn default_depth_cap() -> u32 {
    DEFAULT_ROLLOUT_DEPTH_CAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub kind: AgentKind,
    /// Iterations per decision; 0 for the random agent.
    #[serde(default)]
    pub budget: u32,
    #[serde(default = "default_c")]
    pub exploration_constant: f64,
    #[serde(default = "default_depth_cap")]
    pub rollout_depth_cap: u32,
    /// Seed used when a run holds agent seeds fixed; playouts otherwise take
    /// their agent seeds from the game's `SeedSet`.
    #[serde(default)]
    pub agent_seed: u64,
}

impl AgentConfig {
    pub fn random() -> Self {
        AgentConfig {
            kind: AgentKind::Random,
            budget: 0,
            exploration_constant: default_c(),
            rollout_depth_cap: DEFAULT_ROLLOUT_DEPTH_CAP,
            agent_seed: 0,
        }
    }

    pub fn ismcts(budget: u32) -> Self {
        AgentConfig {
            kind: AgentKind::Ismcts,
            budget,
            ..Self::random()
        }
    }

    /// Budget 0 is the random agent, anything else ISMCTS.
    pub fn with_budget(budget: u32) -> Self {
        if budget == 0 {
            Self::random()
        } else {
            Self::ismcts(budget)
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            AgentKind::Random if self.budget != 0 => {
                return Err(Error::Config(format!(
                    "agent.budget: a random agent must have budget 0, got {}",
                    self.budget
                )))
            }
            AgentKind::Ismcts if self.budget == 0 => {
                return Err(Error::Config("agent.budget: an ismcts agent needs budget >= 1".into()))
            }
            _ => {}
        }
        if !(self.exploration_constant >= 0.0 && self.exploration_constant.is_finite()) {
            return Err(Error::Config(format!(
                "agent.exploration_constant: must be finite and non-negative, got {}",
                self.exploration_constant
            )));
        }
        if self.rollout_depth_cap == 0 {
            return Err(Error::Config("agent.rollout_depth_cap: must be positive".into()));
        }
        Ok(())
    }
}

/// One agent instance, owned by a single playout.
#[derive(Debug)]
pub struct Agent {
    config: AgentConfig,
    rng: ChanceStream,
    last_iterations: u32,
    search: ismcts::Search,
    legal: Vec<Action>,
}

impl Agent {
    pub fn new(config: &AgentConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        Ok(Agent {
            config: config.clone(),
            rng: derive_stream(seed, "agent")?,
            last_iterations: 0,
            search: ismcts::Search::default(),
            legal: Vec::new(),
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    /// Search iterations spent on the most recent decision.
    pub fn iterations(&self) -> u32 {
        self.last_iterations
    }

    /// Visit counts of the root children after the last ISMCTS decision.
    pub fn root_visits(&self) -> Vec<(Action, u32)> {
        self.search.root_visits()
    }

    /// Chooses an action. `redet` supplies the redeterminization samples; it
    /// is the only channel through which hidden state is ever sampled.
    pub fn act<G: Game>(&mut self, info: &InfoSet<'_, G>, redet: &mut ChanceStream) -> Result<Action> {
        if info.is_terminal() {
            return Err(Error::Contract("act called on a terminal state".into()));
        }
        self.legal.clear();
        info.legal_actions(&mut self.legal);
        if self.legal.is_empty() {
            return Err(Error::Contract("no legal actions".into()));
        }
        match self.config.kind {
            AgentKind::Random => {
                self.last_iterations = 0;
                Ok(self.legal[self.rng.below(self.legal.len() as u64) as usize])
            }
            AgentKind::Ismcts => {
                let action = self.search.run(info, &self.legal, &self.config, redet, &mut self.rng);
                self.last_iterations = self.config.budget;
                Ok(action)
            }
        }
    }
}

#[cfg(test)]
mod tests;
