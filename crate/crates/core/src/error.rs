use thiserror::Error;

use crate::engine::Action;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// An agent (or caller) produced an action that is not legal in the current state.
    #[error("protocol error: seat {seat} played illegal action {action} at turn {turn}")]
    Protocol { seat: usize, turn: usize, action: Action },

    /// A precondition of a game or agent operation was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("game {game_index} of block with game seed {game_seed:#018x}: {source}")]
    Block {
        game_seed: u64,
        game_index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_block(self, game_seed: u64, game_index: usize) -> Self {
        Error::Block {
            game_seed,
            game_index,
            source: Box::new(self),
        }
    }
}
