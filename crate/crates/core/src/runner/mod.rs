//! Experiment orchestration: seed blocks, seed distributions, mirrored
//! pairs, skill sweeps and per-stream disentanglement.
//!
//! Every playout's seeds are hashed from `(root seed, block id, game index,
//! role)`, so results do not depend on how playouts are scheduled across
//! worker threads.

mod types;

pub use types::{MirroredPairResult, SeedDistribution, SkillSweep, PAIR_VALUES};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{AgentConfig, AgentKind};
use crate::engine::{play_game, seed_hash, Game, GameOutcome, SeedSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PositionPolicy {
    /// Agent `k` always sits in seat `k`.
    #[default]
    Fixed,
    /// Seats rotate by one for every game.
    Rotate,
    /// Games come in pairs sharing the game seeds, with agents swapped.
    Mirror,
}

/// Which game streams the block seed holds constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedStreams {
    /// The block seed is the game master seed: every stream is fixed.
    All,
    /// Only these streams take the block seed; the rest vary per game.
    Only(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AgentSeeding {
    /// New agent and redeterminization seeds for every playout.
    #[default]
    Fresh,
    /// Every playout uses each agent's configured `agent_seed`.
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub game: String,
    pub fixed: FixedStreams,
    pub n_games: usize,
    /// Agent configurations, indexed by agent (seat under `Fixed`).
    pub agents: Vec<AgentConfig>,
    #[serde(default)]
    pub position_policy: PositionPolicy,
    #[serde(default)]
    pub agent_seeding: AgentSeeding,
}

impl BlockSpec {
    pub fn new(game: &str, n_games: usize, agents: Vec<AgentConfig>) -> Self {
        BlockSpec {
            game: game.to_owned(),
            fixed: FixedStreams::All,
            n_games,
            agents,
            position_policy: PositionPolicy::Fixed,
            agent_seeding: AgentSeeding::Fresh,
        }
    }

    pub fn validate<G: Game>(&self, game: &G) -> Result<()> {
        let def = game.def();
        if self.n_games == 0 {
            return Err(Error::Config("n_games: must be at least 1".into()));
        }
        if self.agents.len() != def.seats {
            return Err(Error::Config(format!(
                "agents: {} needs {} agent configs, got {}",
                def.name,
                def.seats,
                self.agents.len()
            )));
        }
        for a in &self.agents {
            a.validate()?;
        }
        match self.position_policy {
            PositionPolicy::Mirror if !self.n_games.is_multiple_of(2) => {
                return Err(Error::Config(format!(
                    "n_games: mirror needs an even count, got {}",
                    self.n_games
                )))
            }
            PositionPolicy::Rotate if !self.n_games.is_multiple_of(def.seats) => {
                return Err(Error::Config(format!(
                    "n_games: rotate needs a multiple of {} seats, got {}",
                    def.seats, self.n_games
                )))
            }
            _ => {}
        }
        if let FixedStreams::Only(names) = &self.fixed {
            if def.stream_names.is_empty() {
                return Err(Error::Config(format!(
                    "fixed_stream: {} declares no chance streams",
                    def.name
                )));
            }
            if names.is_empty() {
                return Err(Error::Config("fixed_stream: name at least one stream".into()));
            }
            for n in names {
                if def.stream_index(n).is_none() {
                    return Err(Error::Config(format!(
                        "fixed_stream: {} has no stream {n:?}; declared streams are {}",
                        def.name,
                        def.stream_names.join(", ")
                    )));
                }
            }
        }
        Ok(())
    }

    /// True when seats play different agent kinds or budgets.
    pub fn heterogeneous(&self) -> bool {
        self.agents
            .windows(2)
            .any(|w| w[0].kind != w[1].kind || w[0].budget != w[1].budget)
    }

    /// Agent index seated at each seat for game `g`.
    fn seating(&self, g: usize, seats: usize) -> Vec<usize> {
        let shift = match self.position_policy {
            PositionPolicy::Fixed => 0,
            PositionPolicy::Rotate | PositionPolicy::Mirror => g % seats,
        };
        (0..seats).map(|s| (s + shift) % seats).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub root_seed: u64,
    pub workers: usize,
}

impl RunOptions {
    pub fn new(root_seed: u64, workers: usize) -> Self {
        RunOptions { root_seed, workers }
    }
}

/// Result of one seed block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockResult {
    pub game_seed: u64,
    /// Mean score per seat.
    pub seat_means: Vec<f64>,
    /// Mean score per agent index.
    pub agent_means: Vec<f64>,
    pub n_games: usize,
    pub draws: usize,
    pub forced_draws: usize,
    /// Hash of the ordered trace digests of every playout in the block.
    pub digest: u64,
    /// Mirror policy only: agent 0's total over each pair.
    pub pair_values: Vec<f64>,
}

const ROLE_REDET: u64 = 0;
const ROLE_MASTER: u64 = 1;
const ROLE_AGENT: u64 = 16;

struct Block {
    game_seed: u64,
    nonce: u64,
}

fn block_nonce(root: u64, block_id: u64) -> u64 {
    seed_hash("runner/block", &[root, block_id])
}

fn game_seeds(spec: &BlockSpec, block: &Block, g: usize, seats: usize) -> SeedSet {
    let sub = |index: usize, role: u64| seed_hash("runner/game", &[block.nonce, index as u64, role]);
    // Mirror pairs share every game stream.
    let stream_index = match spec.position_policy {
        PositionPolicy::Mirror => g / 2,
        _ => g,
    };
    let mut seeds = match &spec.fixed {
        FixedStreams::All => SeedSet::new(block.game_seed, 0, Vec::new()),
        FixedStreams::Only(names) => names
            .iter()
            .fold(SeedSet::new(sub(stream_index, ROLE_MASTER), 0, Vec::new()), |s, n| {
                s.with_override(n, block.game_seed)
            }),
    };
    match spec.agent_seeding {
        AgentSeeding::Fresh => {
            seeds.redeterminization_seed = sub(g, ROLE_REDET);
            seeds.agent_seeds = (0..seats).map(|s| sub(g, ROLE_AGENT + s as u64)).collect();
        }
        AgentSeeding::Fixed => {
            let seating = spec.seating(g, seats);
            seeds.agent_seeds = seating.iter().map(|&a| spec.agents[a].agent_seed).collect();
            seeds.redeterminization_seed = seed_hash("runner/fixed-redet", &seeds.agent_seeds);
        }
    }
    seeds
}

struct GameRecord {
    outcome: GameOutcome,
    seating: Vec<usize>,
}

fn play_one<G: Game>(game: &G, spec: &BlockSpec, block: &Block, g: usize) -> Result<GameRecord> {
    let seats = game.def().seats;
    let seating = spec.seating(g, seats);
    let seeds = game_seeds(spec, block, g, seats);
    let agents: Vec<AgentConfig> = seating.iter().map(|&a| spec.agents[a].clone()).collect();
    let outcome = play_game(game, &seeds, &agents).map_err(|e| e.in_block(block.game_seed, g))?;
    Ok(GameRecord { outcome, seating })
}

fn aggregate(spec: &BlockSpec, block: &Block, records: &[GameRecord], seats: usize) -> BlockResult {
    let n = records.len() as f64;
    let mut seat_means = vec![0.0; seats];
    let mut agent_means = vec![0.0; seats];
    let mut digests = Vec::with_capacity(records.len());
    let (mut draws, mut forced) = (0, 0);
    for r in records {
        for (s, &score) in r.outcome.scores.iter().enumerate() {
            seat_means[s] += score;
            agent_means[r.seating[s]] += score;
        }
        draws += r.outcome.is_draw() as usize;
        forced += r.outcome.forced_draw as usize;
        digests.push(r.outcome.trace_digest);
    }
    seat_means
        .iter_mut()
        .chain(agent_means.iter_mut())
        .for_each(|m| *m /= n);
    let agent0 = |r: &GameRecord| r.outcome.scores[r.seating.iter().position(|&a| a == 0).unwrap()];
    let pair_values = match spec.position_policy {
        PositionPolicy::Mirror => records.chunks(2).map(|p| agent0(&p[0]) + agent0(&p[1])).collect(),
        _ => Vec::new(),
    };
    BlockResult {
        game_seed: block.game_seed,
        seat_means,
        agent_means,
        n_games: records.len(),
        draws,
        forced_draws: forced,
        digest: seed_hash("runner/digests", &digests),
        pair_values,
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::Config("workers: must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("workers: {e}")))
}

/// Runs several blocks as one flat list of playouts.
fn run_blocks<G: Game>(game: &G, spec: &BlockSpec, blocks: &[Block], workers: usize) -> Result<Vec<BlockResult>> {
    spec.validate(game)?;
    let items: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|b| (0..spec.n_games).map(move |g| (b, g)))
        .collect();
    let records: Vec<Result<GameRecord>> = pool(workers)?.install(|| {
        items
            .par_iter()
            .map(|&(b, g)| play_one(game, spec, &blocks[b], g))
            .collect()
    });
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    let seats = game.def().seats;
    Ok(records
        .chunks(spec.n_games)
        .zip(blocks)
        .map(|(chunk, block)| aggregate(spec, block, chunk, seats))
        .collect())
}

/// Plays one block of `spec.n_games` with the given game seed. `block_id`
/// selects the per-game sub-seeds.
pub fn run_block<G: Game>(
    game: &G,
    spec: &BlockSpec,
    game_seed: u64,
    block_id: u64,
    options: &RunOptions,
) -> Result<BlockResult> {
    let block = Block {
        game_seed,
        nonce: block_nonce(options.root_seed, block_id),
    };
    Ok(run_blocks(game, spec, &[block], options.workers)?.remove(0))
}

/// The `i`-th sampled seed of a run; `label` separates independent samples.
pub fn sampled_seed(root: u64, label: &str, i: usize) -> u64 {
    seed_hash(&format!("runner/seed/{label}"), &[root, i as u64])
}

fn distribution_from_blocks<G: Game>(
    game: &G,
    spec: &BlockSpec,
    label: &str,
    results: &[BlockResult],
) -> SeedDistribution {
    let n_games = spec.n_games;
    let total_games = (n_games * results.len()) as f64;
    let win_rates: Vec<f64> = results.iter().map(|r| r.seat_means[0]).collect();
    SeedDistribution {
        game: game.def().name.clone(),
        label: label.to_owned(),
        seed_ids: results.iter().map(|r| r.game_seed).collect(),
        grand_mean: win_rates.iter().sum::<f64>() / win_rates.len() as f64,
        win_rates,
        n_games,
        draw_fraction: results.iter().map(|r| r.draws).sum::<usize>() as f64 / total_games,
        forced_draws: results.iter().map(|r| r.forced_draws).sum(),
        digests: results.iter().map(|r| crate::engine::digest_hex(r.digest)).collect(),
        agents: spec.agents.clone(),
        fixed: spec.fixed.clone(),
        position_policy: spec.position_policy,
        heterogeneous: spec.heterogeneous(),
    }
}

fn run_seeded<G: Game>(
    game: &G,
    spec: &BlockSpec,
    label: &str,
    n_seeds: usize,
    options: &RunOptions,
) -> Result<(SeedDistribution, Vec<BlockResult>)> {
    if n_seeds < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_seeds: need at least 2 seeds, got {n_seeds}"
        )));
    }
    let blocks: Vec<Block> = (0..n_seeds)
        .map(|i| Block {
            game_seed: sampled_seed(options.root_seed, label, i),
            nonce: block_nonce(options.root_seed, i as u64),
        })
        .collect();
    let results = run_blocks(game, spec, &blocks, options.workers)?;
    Ok((distribution_from_blocks(game, spec, label, &results), results))
}

/// Samples `n_seeds` game seeds from the root seed and plays one block of
/// `spec.n_games` per seed with every game stream fixed.
pub fn run_distribution<G: Game>(
    game: &G,
    spec: &BlockSpec,
    n_seeds: usize,
    options: &RunOptions,
) -> Result<SeedDistribution> {
    let mut spec = spec.clone();
    spec.fixed = FixedStreams::All;
    run_seeded(game, &spec, "game", n_seeds, options).map(|(d, _)| d)
}

/// Plays `n_pairs` position-swapped pairs per seed.
pub fn run_mirrored<G: Game>(
    game: &G,
    agents: &[AgentConfig],
    n_seeds: usize,
    n_pairs: usize,
    options: &RunOptions,
) -> Result<(MirroredPairResult, SeedDistribution)> {
    if n_pairs == 0 {
        return Err(Error::Config("n_pairs: must be at least 1".into()));
    }
    let mut spec = BlockSpec::new(&game.def().name, 2 * n_pairs, agents.to_vec());
    spec.position_policy = PositionPolicy::Mirror;
    let (dist, results) = run_seeded(game, &spec, "game", n_seeds, options)?;
    let pairs = MirroredPairResult::from_blocks(&dist, &results, spec.heterogeneous());
    Ok((pairs, dist))
}

/// Runs the same seeds and block nonces at every budget of the ladder; all
/// seats use the row's budget. Budget 0 is the random agent.
pub fn run_skill_sweep<G: Game>(
    game: &G,
    budgets: &[u32],
    n_seeds: usize,
    n_games: usize,
    template: &AgentConfig,
    options: &RunOptions,
) -> Result<SkillSweep> {
    if budgets.is_empty() || budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "budgets: must be non-empty and strictly increasing, got {budgets:?}"
        )));
    }
    let seats = game.def().seats;
    let rows = budgets
        .iter()
        .map(|&b| {
            let mut agent = template.clone();
            agent.budget = b;
            agent.kind = if b == 0 { AgentKind::Random } else { AgentKind::Ismcts };
            let spec = BlockSpec::new(&game.def().name, n_games, vec![agent; seats]);
            run_distribution(game, &spec, n_seeds, options)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SkillSweep {
        game: game.def().name.clone(),
        budgets: budgets.to_vec(),
        rows,
    })
}

/// Holds only the named streams fixed per block; every other stream, the
/// redeterminization seeds and the agent seeds vary per game. Seeds are
/// sampled under their own label, independent of [`run_distribution`].
pub fn run_disentangled<G: Game>(
    game: &G,
    fixed_streams: &[String],
    n_seeds: usize,
    n_games: usize,
    agents: &[AgentConfig],
    options: &RunOptions,
) -> Result<SeedDistribution> {
    let mut spec = BlockSpec::new(&game.def().name, n_games, agents.to_vec());
    spec.fixed = FixedStreams::Only(fixed_streams.to_vec());
    spec.validate(game)?;
    let label = format!("stream/{}", fixed_streams.join("+"));
    run_seeded(game, &spec, &label, n_seeds, options).map(|(d, _)| d)
}
