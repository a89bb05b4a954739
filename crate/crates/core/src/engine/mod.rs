//! Deterministic game execution: named chance streams, seed sets, the
//! forward-model trait and single-game playout.

mod game;
mod play;
mod rng;
mod seeds;
mod trace;

pub use game::{
    apply_action, legal_actions, redeterminize, terminal_outcome, valid_scores, Action, Game, GameDef, InfoSet,
    DEFAULT_MAX_ROUNDS,
};
pub use play::{play_game, play_game_inspected, play_game_traced, GameOutcome};
pub use rng::{derive_stream, seed_hash, shuffle_with, Chance, ChanceStream};
pub use seeds::{Draw, SeedSet};
pub use trace::{digest_hex, GameTrace, TraceRecord};
