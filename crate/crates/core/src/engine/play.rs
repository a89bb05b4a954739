use serde::{Deserialize, Serialize};

use super::game::{valid_scores, Game, InfoSet};
use super::rng::derive_stream;
use super::seeds::{GameStreams, SeedSet};
use super::trace::{digest_hex, GameTrace, TraceRecord};
use crate::agents::{Agent, AgentConfig};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub scores: Vec<f64>,
    pub trace_digest: u64,
    /// The decision cap was hit and the game was scored as a draw.
    pub forced_draw: bool,
    pub decisions: usize,
    pub chance_draws: u64,
}

impl GameOutcome {
    pub fn digest_hex(&self) -> String {
        digest_hex(self.trace_digest)
    }

    pub fn is_draw(&self) -> bool {
        self.scores.iter().all(|&s| s != 1.0)
    }
}

/// Plays one full game.
pub fn play_game<G: Game>(game: &G, seeds: &SeedSet, agents: &[AgentConfig]) -> Result<GameOutcome> {
    play(game, seeds, agents, false, &mut |_| {}).map(|(o, _)| o)
}

/// Plays one game and keeps the ordered trace for replay audits.
pub fn play_game_traced<G: Game>(
    game: &G,
    seeds: &SeedSet,
    agents: &[AgentConfig],
) -> Result<(GameOutcome, GameTrace)> {
    let (outcome, records) = play(game, seeds, agents, true, &mut |_| {})?;
    let trace = GameTrace {
        game: game.def().name.clone(),
        trace_digest: outcome.digest_hex(),
        scores: outcome.scores.clone(),
        forced_draw: outcome.forced_draw,
        records,
    };
    Ok((outcome, trace))
}

/// Plays one game, handing every visited state to `inspect` (used for
/// invariant checks in tests).
pub fn play_game_inspected<G: Game>(
    game: &G,
    seeds: &SeedSet,
    agents: &[AgentConfig],
    inspect: &mut dyn FnMut(&G::State),
) -> Result<GameOutcome> {
    play(game, seeds, agents, false, inspect).map(|(o, _)| o)
}

fn play<G: Game>(
    game: &G,
    seeds: &SeedSet,
    agent_configs: &[AgentConfig],
    recording: bool,
    inspect: &mut dyn FnMut(&G::State),
) -> Result<(GameOutcome, Vec<TraceRecord>)> {
    let def = game.def();
    seeds.validate(def)?;
    if agent_configs.len() != def.seats {
        return Err(Error::InvalidArgument(format!(
            "{} needs {} agents, got {}",
            def.name,
            def.seats,
            agent_configs.len()
        )));
    }
    let mut agents = agent_configs
        .iter()
        .zip(&seeds.agent_seeds)
        .map(|(cfg, &seed)| Agent::new(cfg, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut redet = (0..def.seats)
        .map(|seat| derive_stream(seeds.redeterminization_seed, &format!("redet/{seat}")))
        .collect::<Result<Vec<_>>>()?;

    let mut streams = GameStreams::new(def, seeds, recording)?;
    let mut records = Vec::new();
    let mut state = game.initial_state(&mut streams);
    if recording {
        records.push(TraceRecord {
            seat: None,
            action: None,
            draws: std::mem::take(&mut streams.pending),
        });
    }
    inspect(&state);

    let mut legal = Vec::new();
    let mut decisions = 0usize;
    let mut forced_draw = false;
    while !game.is_terminal(&state) {
        if decisions >= def.max_rounds {
            forced_draw = true;
            break;
        }
        let seat = game.current_seat(&state);
        let action = agents[seat].act(&InfoSet::new(game, &state, seat), &mut redet[seat])?;
        legal.clear();
        game.legal_actions(&state, &mut legal);
        if !legal.contains(&action) {
            return Err(Error::Protocol {
                seat,
                turn: decisions,
                action,
            });
        }
        streams.hasher.action(seat, action);
        game.apply(&mut state, action, &mut streams);
        if recording {
            records.push(TraceRecord {
                seat: Some(seat),
                action: Some(action),
                draws: std::mem::take(&mut streams.pending),
            });
        }
        decisions += 1;
        inspect(&state);
    }

    let scores = if forced_draw {
        vec![1.0 / def.seats as f64; def.seats]
    } else {
        game.scores(&state)
            .ok_or_else(|| Error::Contract(format!("{}: terminal state without scores", def.name)))?
    };
    if !forced_draw && !valid_scores(&scores) {
        return Err(Error::Contract(format!("{}: invalid scores {scores:?}", def.name)));
    }
    let outcome = GameOutcome {
        scores,
        trace_digest: streams.hasher.finish(decisions),
        forced_draw,
        decisions,
        chance_draws: streams.total_draws(),
    };
    Ok((outcome, records))
}
