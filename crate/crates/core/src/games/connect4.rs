//! Connect-4 on a 7×6 board.
//!
//! Action `c` (0..=6) drops a piece into column `c`. No chance streams: the
//! game is the perfect-information, chance-free control.

use crate::engine::{Action, Chance, ChanceStream, Game, GameDef, DEFAULT_MAX_ROUNDS};

pub const COLUMNS: usize = 7;
pub const ROWS: usize = 6;
// Each column takes 7 bits: 6 cells plus a sentinel that stops shifts wrapping.
const COLUMN_BITS: usize = ROWS + 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Connect4State {
    /// Bitboard per seat; bit `col * 7 + row`, row 0 at the bottom.
    pub pieces: [u64; 2],
    pub heights: [u8; COLUMNS],
    pub moves: u8,
    pub winner: Option<u8>,
}

impl Connect4State {
    pub fn empty() -> Self {
        Connect4State {
            pieces: [0; 2],
            heights: [0; COLUMNS],
            moves: 0,
            winner: None,
        }
    }

    /// Builds a position from rows given bottom-up, where `'X'` is seat 0,
    /// `'O'` seat 1 and `'.'` empty. Fails if pieces float or the winner
    /// field cannot be inferred consistently.
    pub fn from_rows(rows: &[&str]) -> Option<Self> {
        let mut s = Connect4State::empty();
        for (r, row) in rows.iter().enumerate() {
            for (c, ch) in row.chars().enumerate() {
                let seat = match ch {
                    'X' => 0,
                    'O' => 1,
                    '.' => continue,
                    _ => return None,
                };
                if s.heights[c] as usize != r {
                    return None;
                }
                s.pieces[seat] |= 1 << (c * COLUMN_BITS + r);
                s.heights[c] += 1;
                s.moves += 1;
            }
        }
        s.winner = (0..2).find(|&seat| has_four(s.pieces[seat])).map(|x| x as u8);
        Some(s)
    }

    pub fn cell(&self, col: usize, row: usize) -> Option<usize> {
        let bit = 1u64 << (col * COLUMN_BITS + row);
        (0..2).find(|&seat| self.pieces[seat] & bit != 0)
    }

    pub fn is_full(&self) -> bool {
        self.moves as usize == COLUMNS * ROWS
    }
}

fn has_four(b: u64) -> bool {
    for shift in [1, COLUMN_BITS, COLUMN_BITS - 1, COLUMN_BITS + 1] {
        let m = b & (b >> shift);
        if m & (m >> (2 * shift)) != 0 {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct Connect4 {
    def: GameDef,
}

impl Connect4 {
    pub fn new() -> Self {
        Connect4 {
            def: GameDef::new("connect4", 2, &[], DEFAULT_MAX_ROUNDS).expect("static definition"),
        }
    }
}

impl Default for Connect4 {
    fn default() -> Self {
        Self::new()
    }
}

impl Game for Connect4 {
    type State = Connect4State;

    fn def(&self) -> &GameDef {
        &self.def
    }

    fn initial_state<C: Chance + ?Sized>(&self, _chance: &mut C) -> Connect4State {
        Connect4State::empty()
    }

    fn current_seat(&self, state: &Connect4State) -> usize {
        (state.moves & 1) as usize
    }

    fn is_terminal(&self, state: &Connect4State) -> bool {
        state.winner.is_some() || state.is_full()
    }

    fn legal_actions(&self, state: &Connect4State, out: &mut Vec<Action>) {
        out.extend(
            (0..COLUMNS)
                .filter(|&c| (state.heights[c] as usize) < ROWS)
                .map(|c| c as Action),
        );
    }

    fn apply<C: Chance + ?Sized>(&self, state: &mut Connect4State, action: Action, _chance: &mut C) {
        let col = action as usize;
        debug_assert!(col < COLUMNS && (state.heights[col] as usize) < ROWS);
        let seat = self.current_seat(state);
        state.pieces[seat] |= 1 << (col * COLUMN_BITS + state.heights[col] as usize);
        state.heights[col] += 1;
        state.moves += 1;
        if has_four(state.pieces[seat]) {
            state.winner = Some(seat as u8);
        }
    }

    fn scores(&self, state: &Connect4State) -> Option<Vec<f64>> {
        match state.winner {
            Some(0) => Some(vec![1.0, 0.0]),
            Some(_) => Some(vec![0.0, 1.0]),
            None if state.is_full() => Some(vec![0.5, 0.5]),
            None => None,
        }
    }

    fn redeterminize(&self, state: &Connect4State, _observer: usize, _rng: &mut ChanceStream) -> Connect4State {
        state.clone()
    }
}
