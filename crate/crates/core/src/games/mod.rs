//! Built-in games. Each one covers a different kind of randomness:
//!
//! | name         | streams          | randomness                     |
//! |--------------|------------------|--------------------------------|
//! | `connect4`   | none             | none (control)                 |
//! | `cantstop`   | `dice`           | ongoing dice rolls             |
//! | `loveletter` | `burn`, `deck`   | initial shuffle                |
//! | `kuhn`       | `deal`           | a fresh deal every hand        |

pub mod cantstop;
pub mod connect4;
pub mod kuhn;
pub mod loveletter;

pub use cantstop::{CantStop, CantStopState};
pub use connect4::{Connect4, Connect4State};
pub use kuhn::{Kuhn, KuhnConfig, KuhnState};
pub use loveletter::{LoveLetter, LoveLetterState};

use crate::engine::{Game, GameDef};
use crate::error::{Error, Result};

/// Runs `$body` with `$g` bound to the concrete game inside a
/// [`BuiltinGame`], so generic code is monomorphised per game.
#[macro_export]
macro_rules! with_game {
    ($game:expr, $g:ident => $body:expr) => {
        match $game {
            $crate::games::BuiltinGame::Connect4($g) => $body,
            $crate::games::BuiltinGame::CantStop($g) => $body,
            $crate::games::BuiltinGame::LoveLetter($g) => $body,
            $crate::games::BuiltinGame::Kuhn($g) => $body,
        }
    };
}
pub use with_game;

pub const GAME_NAMES: [&str; 4] = ["connect4", "cantstop", "loveletter", "kuhn"];

/// One of the built-in games, selected by name.
#[derive(Clone, Debug)]
pub enum BuiltinGame {
    Connect4(Connect4),
    CantStop(CantStop),
    LoveLetter(LoveLetter),
    Kuhn(Kuhn),
}

impl BuiltinGame {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "connect4" => BuiltinGame::Connect4(Connect4::new()),
            "cantstop" => BuiltinGame::CantStop(CantStop::new()),
            "loveletter" => BuiltinGame::LoveLetter(LoveLetter::new()),
            "kuhn" => BuiltinGame::Kuhn(Kuhn::new()),
            _ => {
                return Err(Error::Config(format!(
                    "unknown game {name:?}; valid games are {}",
                    GAME_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn def(&self) -> &GameDef {
        with_game!(self, g => g.def())
    }
}

pub fn build_game(name: &str) -> Result<GameDef> {
    BuiltinGame::from_name(name).map(|g| g.def().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_streams() {
        assert!(build_game("connect4").unwrap().stream_names.is_empty());
        assert_eq!(build_game("cantstop").unwrap().stream_names, ["dice"]);
        assert_eq!(build_game("loveletter").unwrap().stream_names, ["burn", "deck"]);
        assert_eq!(build_game("kuhn").unwrap().stream_names, ["deal"]);
        for name in GAME_NAMES {
            assert_eq!(build_game(name).unwrap().seats, 2);
        }
    }

    #[test]
    fn unknown_game_lists_valid_names() {
        match build_game("poker") {
            Err(Error::Config(msg)) => {
                for name in GAME_NAMES {
                    assert!(msg.contains(name), "{msg}");
                }
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }
}
