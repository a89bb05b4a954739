use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::rng::{Chance, ChanceStream};
use crate::error::{Error, Result};

/// A move, encoded as a small game-specific integer.
pub type Action = u16;

/// Default decision cap after which a playout is scored as a forced draw.
pub const DEFAULT_MAX_ROUNDS: usize = 1_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDef {
    pub name: String,
    pub seats: usize,
    pub stream_names: Vec<String>,
    pub max_rounds: usize,
}

impl GameDef {
    pub fn new(name: &str, seats: usize, stream_names: &[&str], max_rounds: usize) -> Result<Self> {
        if seats < 2 {
            return Err(Error::InvalidArgument(format!("{name}: a game needs at least 2 seats")));
        }
        for (i, s) in stream_names.iter().enumerate() {
            if s.is_empty() || stream_names[..i].contains(s) {
                return Err(Error::InvalidArgument(format!(
                    "{name}: stream names must be non-empty and unique, got {stream_names:?}"
                )));
            }
        }
        if max_rounds == 0 {
            return Err(Error::InvalidArgument(format!("{name}: max_rounds must be positive")));
        }
        Ok(GameDef {
            name: name.to_owned(),
            seats,
            stream_names: stream_names.iter().map(|s| s.to_string()).collect(),
            max_rounds,
        })
    }

    pub fn stream_index(&self, name: &str) -> Option<usize> {
        self.stream_names.iter().position(|s| s == name)
    }
}

/// Forward model of a game.
///
/// `apply` assumes a legal action; the checked entry point is
/// [`apply_action`]. All in-game randomness must be drawn from `chance` using
/// the index of one of [`GameDef::stream_names`].
pub trait Game: Send + Sync {
    type State: Clone + Send + Sync + Debug;

    fn def(&self) -> &GameDef;

    fn initial_state<C: Chance + ?Sized>(&self, chance: &mut C) -> Self::State;

    fn current_seat(&self, state: &Self::State) -> usize;

    fn is_terminal(&self, state: &Self::State) -> bool;

    /// Appends the legal actions, in canonical ascending order, to `out`.
    fn legal_actions(&self, state: &Self::State, out: &mut Vec<Action>);

    fn apply<C: Chance + ?Sized>(&self, state: &mut Self::State, action: Action, chance: &mut C);

    /// Per-seat scores (win 1, draw 0.5, loss 0) once the state is terminal.
    fn scores(&self, state: &Self::State) -> Option<Vec<f64>>;

    /// Samples a full state uniformly from those `observer` cannot tell apart
    /// from `state`. The result must depend only on what `observer` can see
    /// and on `rng`.
    fn redeterminize(&self, state: &Self::State, observer: usize, rng: &mut ChanceStream) -> Self::State;
}

/// Legal actions of a non-terminal state.
pub fn legal_actions<G: Game>(game: &G, state: &G::State) -> Result<Vec<Action>> {
    if game.is_terminal(state) {
        return Err(Error::Contract(format!(
            "{}: legal_actions on a terminal state",
            game.def().name
        )));
    }
    let mut out = Vec::new();
    game.legal_actions(state, &mut out);
    Ok(out)
}

/// Applies `action` after checking it is legal.
pub fn apply_action<G: Game, C: Chance + ?Sized>(
    game: &G,
    state: &mut G::State,
    action: Action,
    chance: &mut C,
) -> Result<()> {
    let legal = legal_actions(game, state)?;
    if !legal.contains(&action) {
        return Err(Error::Protocol {
            seat: game.current_seat(state),
            turn: 0,
            action,
        });
    }
    game.apply(state, action, chance);
    Ok(())
}

pub fn terminal_outcome<G: Game>(game: &G, state: &G::State) -> Option<Vec<f64>> {
    game.scores(state)
}

pub fn redeterminize<G: Game>(game: &G, state: &G::State, observer: usize, rng: &mut ChanceStream) -> Result<G::State> {
    if game.is_terminal(state) {
        return Err(Error::Contract("redeterminize on a terminal state".into()));
    }
    if observer >= game.def().seats {
        return Err(Error::InvalidArgument(format!("observer seat {observer} out of range")));
    }
    Ok(game.redeterminize(state, observer, rng))
}

/// What an agent is allowed to see of a state: the acting seat, its legal
/// actions, and samples of states consistent with its information. The
/// underlying state is not reachable through this type, and game seeds never
/// enter it.
pub struct InfoSet<'a, G: Game> {
    game: &'a G,
    state: &'a G::State,
    observer: usize,
}

impl<'a, G: Game> InfoSet<'a, G> {
    pub fn new(game: &'a G, state: &'a G::State, observer: usize) -> Self {
        InfoSet { game, state, observer }
    }

    pub fn game(&self) -> &'a G {
        self.game
    }

    pub fn observer(&self) -> usize {
        self.observer
    }

    pub fn is_terminal(&self) -> bool {
        self.game.is_terminal(self.state)
    }

    pub fn legal_actions(&self, out: &mut Vec<Action>) {
        self.game.legal_actions(self.state, out)
    }

    pub fn determinize(&self, rng: &mut ChanceStream) -> G::State {
        self.game.redeterminize(self.state, self.observer, rng)
    }
}

/// Checks the draw convention: one winner scoring 1, or at least two seats
/// sharing a draw at 0.5 with the rest on 0.
pub fn valid_scores(scores: &[f64]) -> bool {
    let ones = scores.iter().filter(|&&s| s == 1.0).count();
    let halves = scores.iter().filter(|&&s| s == 0.5).count();
    let zeros = scores.iter().filter(|&&s| s == 0.0).count();
    ones + halves + zeros == scores.len() && ((ones == 1 && halves == 0) || (ones == 0 && halves >= 2))
}
