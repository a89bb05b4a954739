use serde::{Deserialize, Serialize};

use super::{BlockResult, FixedStreams, PositionPolicy};
use crate::agents::AgentConfig;
use crate::error::{Error, Result};

/// First-player win rates for a list of fixed seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedDistribution {
    pub game: String,
    /// Which sample of seeds this is (`game`, `stream/deck`, ...).
    pub label: String,
    pub seed_ids: Vec<u64>,
    /// `(wins + 0.5 · draws) / n_games` of the first seat, per seed.
    pub win_rates: Vec<f64>,
    pub n_games: usize,
    pub grand_mean: f64,
    pub draw_fraction: f64,
    pub forced_draws: usize,
    /// Per-seed hash of all the block's trace digests.
    pub digests: Vec<String>,
    pub agents: Vec<AgentConfig>,
    pub fixed: FixedStreams,
    pub position_policy: PositionPolicy,
    pub heterogeneous: bool,
}

impl SeedDistribution {
    /// Builds a distribution from rates alone, for synthetic inputs.
    pub fn from_rates(game: &str, seed_ids: Vec<u64>, win_rates: Vec<f64>, n_games: usize) -> Result<Self> {
        if win_rates.is_empty() || seed_ids.len() != win_rates.len() {
            return Err(Error::InvalidArgument(format!(
                "need one rate per seed, got {} seeds and {} rates",
                seed_ids.len(),
                win_rates.len()
            )));
        }
        if n_games == 0 || win_rates.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::InvalidArgument(
                "rates must lie in [0, 1] and n_games >= 1".into(),
            ));
        }
        Ok(SeedDistribution {
            game: game.to_owned(),
            label: "synthetic".into(),
            grand_mean: win_rates.iter().sum::<f64>() / win_rates.len() as f64,
            digests: vec![String::new(); seed_ids.len()],
            seed_ids,
            win_rates,
            n_games,
            draw_fraction: 0.0,
            forced_draws: 0,
            agents: Vec::new(),
            fixed: FixedStreams::All,
            position_policy: PositionPolicy::Fixed,
            heterogeneous: false,
        })
    }

    /// `seed,win_rate,n_games` rows.
    pub fn seeds_csv(&self) -> String {
        let mut out = String::from("seed,win_rate,n_games\n");
        for (seed, rate) in self.seed_ids.iter().zip(&self.win_rates) {
            out.push_str(&format!("{seed},{rate},{}\n", self.n_games));
        }
        out
    }
}

/// Possible totals of one mirrored pair for the reference agent.
pub const PAIR_VALUES: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirroredPairResult {
    pub seed_ids: Vec<u64>,
    pub n_pairs: usize,
    /// Per seed, how many pairs totalled each of [`PAIR_VALUES`].
    pub pair_counts: Vec<[usize; 5]>,
    pub mean_pair_value: f64,
    /// Sample variance of the pair totals over all pairs.
    pub pair_variance: f64,
    pub per_game_variance: f64,
    pub heterogeneous: bool,
}

impl MirroredPairResult {
    pub(super) fn from_blocks(dist: &SeedDistribution, blocks: &[BlockResult], heterogeneous: bool) -> Self {
        let pair_counts: Vec<[usize; 5]> = blocks
            .iter()
            .map(|b| {
                let mut c = [0usize; 5];
                for &v in &b.pair_values {
                    c[(v * 2.0).round() as usize] += 1;
                }
                c
            })
            .collect();
        let values: Vec<f64> = blocks.iter().flat_map(|b| b.pair_values.iter().copied()).collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        MirroredPairResult {
            seed_ids: dist.seed_ids.clone(),
            n_pairs: blocks.first().map_or(0, |b| b.pair_values.len()),
            pair_counts,
            mean_pair_value: mean,
            pair_variance: var,
            per_game_variance: var / 2.0,
            heterogeneous,
        }
    }
}

/// Win rates over an increasing budget ladder on one shared seed list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkillSweep {
    pub game: String,
    pub budgets: Vec<u32>,
    /// One distribution per budget, in ladder order.
    pub rows: Vec<SeedDistribution>,
}

impl SkillSweep {
    /// Builds a sweep from a rate matrix `rates[budget][seed]`.
    pub fn from_rates(
        game: &str,
        budgets: Vec<u32>,
        seed_ids: Vec<u64>,
        rates: Vec<Vec<f64>>,
        n_games: usize,
    ) -> Result<Self> {
        if budgets.len() != rates.len() {
            return Err(Error::InvalidArgument("one rate row per budget".into()));
        }
        let rows = rates
            .into_iter()
            .map(|r| SeedDistribution::from_rates(game, seed_ids.clone(), r, n_games))
            .collect::<Result<Vec<_>>>()?;
        Ok(SkillSweep {
            game: game.to_owned(),
            budgets,
            rows,
        })
    }

    pub fn seed_ids(&self) -> &[u64] {
        self.rows.first().map_or(&[], |r| &r.seed_ids)
    }

    /// `win_rates[budget][seed]`.
    pub fn win_rates(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.win_rates.clone()).collect()
    }
}
