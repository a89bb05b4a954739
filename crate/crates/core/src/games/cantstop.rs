//! Can't Stop, two players.
//!
//! Action encoding:
//! - `0` stop: bank temporary progress and pass the turn.
//! - `1` roll: roll the four dice again.
//! - `a * 16 + b` with `2 <= a <= b <= 12`: advance in columns `a` and `b`.
//! - `a * 16`: advance in column `a` only.
//!
//! Every turn begins with an automatic roll. A roll with no usable pairing is
//! a bust: temporary progress is lost and the turn passes. All dice come from
//! the `"dice"` stream, four draws per roll.

use crate::engine::{Action, Chance, ChanceStream, Game, GameDef, DEFAULT_MAX_ROUNDS};

pub const STOP: Action = 0;
pub const ROLL: Action = 1;
pub const DICE_STREAM: usize = 0;
/// Ladder length of columns 2..=12.
pub const COLUMN_LENGTHS: [u8; 11] = [3, 5, 7, 9, 11, 13, 11, 9, 7, 5, 3];
pub const MAX_MARKERS: u8 = 3;
pub const COLUMNS_TO_WIN: usize = 3;

pub fn pair_action(a: u8, b: u8) -> Action {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo as Action * 16 + hi as Action
}

pub fn single_action(a: u8) -> Action {
    a as Action * 16
}

/// Columns advanced by a move action (`None` for stop and roll).
pub fn action_columns(action: Action) -> Option<(u8, Option<u8>)> {
    if action < 32 {
        return None;
    }
    let a = (action / 16) as u8;
    let b = (action % 16) as u8;
    Some((a, if b == 0 { None } else { Some(b) }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Dice are showing; the player picks a pairing.
    ChoosePairing,
    /// A pairing was used; the player chooses to roll again or stop.
    RollOrStop,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CantStopState {
    /// Banked progress per seat, indexed by `column - 2`.
    pub progress: [[u8; 11]; 2],
    /// `Some(seat)` once a column has been claimed.
    pub owner: [Option<u8>; 11],
    /// Temporary marker position of the current seat (0 = no marker).
    pub temp: [u8; 11],
    pub markers: u8,
    pub dice: [u8; 4],
    pub phase: Phase,
    pub seat: u8,
    pub winner: Option<u8>,
    pub turns: u32,
    pub busts: u32,
}

impl CantStopState {
    pub fn fresh() -> Self {
        CantStopState {
            progress: [[0; 11]; 2],
            owner: [None; 11],
            temp: [0; 11],
            markers: 0,
            dice: [0; 4],
            phase: Phase::ChoosePairing,
            seat: 0,
            winner: None,
            turns: 0,
            busts: 0,
        }
    }

    fn position(&self, idx: usize) -> u8 {
        if self.temp[idx] > 0 {
            self.temp[idx]
        } else {
            self.progress[self.seat as usize][idx]
        }
    }

    /// Whether the current seat may advance in `column` with `markers` in use.
    fn usable(&self, column: u8, markers: u8) -> bool {
        let idx = (column - 2) as usize;
        self.owner[idx].is_none()
            && self.position(idx) < COLUMN_LENGTHS[idx]
            && (self.temp[idx] > 0 || markers < MAX_MARKERS)
    }

    fn room(&self, column: u8) -> u8 {
        let idx = (column - 2) as usize;
        COLUMN_LENGTHS[idx] - self.position(idx)
    }

    fn needs_marker(&self, column: u8) -> u8 {
        u8::from(self.temp[(column - 2) as usize] == 0)
    }

    /// Move options for `dice` in canonical order (empty means bust).
    pub fn pairing_options(&self, dice: [u8; 4]) -> Vec<Action> {
        let mut out = Vec::with_capacity(6);
        self.push_pairing_options(dice, &mut out);
        out
    }

    fn push_pairing_options(&self, d: [u8; 4], out: &mut Vec<Action>) {
        let pairings = [
            (d[0] + d[1], d[2] + d[3]),
            (d[0] + d[2], d[1] + d[3]),
            (d[0] + d[3], d[1] + d[2]),
        ];
        let m = self.markers;
        let mut buf = [0 as Action; 6];
        let mut n = 0;
        let mut push = |a: Action| {
            // Insertion into the sorted, duplicate-free prefix.
            let mut i = n;
            while i > 0 && buf[i - 1] > a {
                i -= 1;
            }
            if i > 0 && buf[i - 1] == a {
                return;
            }
            buf.copy_within(i..n, i + 1);
            buf[i] = a;
            n += 1;
        };
        for (x, y) in pairings {
            if x == y {
                if self.usable(x, m) {
                    push(if self.room(x) >= 2 {
                        pair_action(x, x)
                    } else {
                        single_action(x)
                    });
                }
                continue;
            }
            let ux = self.usable(x, m);
            let uy = self.usable(y, m);
            if ux && uy && m + self.needs_marker(x) + self.needs_marker(y) <= MAX_MARKERS {
                push(pair_action(x, y));
            } else {
                if ux {
                    push(single_action(x));
                }
                if uy {
                    push(single_action(y));
                }
            }
        }
        out.extend_from_slice(&buf[..n]);
    }

    /// Same as a non-empty `pairing_options(self.dice)`: some pairing has a
    /// usable column.
    fn has_option(&self) -> bool {
        let d = self.dice;
        let m = self.markers;
        [
            d[0] + d[1],
            d[2] + d[3],
            d[0] + d[2],
            d[1] + d[3],
            d[0] + d[3],
            d[1] + d[2],
        ]
        .iter()
        .any(|&c| self.usable(c, m))
    }

    fn advance(&mut self, column: u8) {
        let idx = (column - 2) as usize;
        if self.temp[idx] == 0 {
            self.temp[idx] = self.progress[self.seat as usize][idx];
            self.markers += 1;
        }
        self.temp[idx] = (self.temp[idx] + 1).min(COLUMN_LENGTHS[idx]);
    }

    pub fn claimed_by(&self, seat: usize) -> usize {
        self.owner.iter().filter(|o| **o == Some(seat as u8)).count()
    }
}

#[derive(Clone, Debug)]
pub struct CantStop {
    def: GameDef,
}

impl CantStop {
    pub fn new() -> Self {
        CantStop {
            def: GameDef::new("cantstop", 2, &["dice"], DEFAULT_MAX_ROUNDS).expect("static definition"),
        }
    }

    fn roll<C: Chance + ?Sized>(state: &mut CantStopState, chance: &mut C) {
        for die in state.dice.iter_mut() {
            *die = chance.draw(DICE_STREAM, 6) as u8 + 1;
        }
    }

    fn end_turn(state: &mut CantStopState) {
        state.temp = [0; 11];
        state.markers = 0;
        state.seat ^= 1;
        state.turns += 1;
    }

    /// Rolls for the current seat, passing the turn on every bust.
    fn roll_until_options<C: Chance + ?Sized>(state: &mut CantStopState, chance: &mut C) {
        loop {
            Self::roll(state, chance);
            state.phase = Phase::ChoosePairing;
            if state.has_option() {
                return;
            }
            state.busts += 1;
            Self::end_turn(state);
        }
    }
}

impl Default for CantStop {
    fn default() -> Self {
        Self::new()
    }
}

impl Game for CantStop {
    type State = CantStopState;

    fn def(&self) -> &GameDef {
        &self.def
    }

    fn initial_state<C: Chance + ?Sized>(&self, chance: &mut C) -> CantStopState {
        let mut s = CantStopState::fresh();
        Self::roll_until_options(&mut s, chance);
        s
    }

    fn current_seat(&self, state: &CantStopState) -> usize {
        state.seat as usize
    }

    fn is_terminal(&self, state: &CantStopState) -> bool {
        state.winner.is_some()
    }

    fn legal_actions(&self, state: &CantStopState, out: &mut Vec<Action>) {
        match state.phase {
            Phase::ChoosePairing => state.push_pairing_options(state.dice, out),
            Phase::RollOrStop => out.extend_from_slice(&[STOP, ROLL]),
        }
    }

    fn apply<C: Chance + ?Sized>(&self, state: &mut CantStopState, action: Action, chance: &mut C) {
        match (state.phase, action) {
            (Phase::RollOrStop, STOP) => {
                let seat = state.seat as usize;
                for (idx, &len) in COLUMN_LENGTHS.iter().enumerate() {
                    if state.temp[idx] > 0 {
                        state.progress[seat][idx] = state.temp[idx];
                        if state.temp[idx] == len {
                            state.owner[idx] = Some(seat as u8);
                            state.progress[seat ^ 1][idx] = 0;
                        }
                    }
                }
                if state.claimed_by(seat) >= COLUMNS_TO_WIN {
                    state.winner = Some(seat as u8);
                    state.temp = [0; 11];
                    state.markers = 0;
                    return;
                }
                Self::end_turn(state);
                Self::roll_until_options(state, chance);
            }
            (Phase::RollOrStop, ROLL) => {
                Self::roll(state, chance);
                state.phase = Phase::ChoosePairing;
                if !state.has_option() {
                    state.busts += 1;
                    Self::end_turn(state);
                    Self::roll_until_options(state, chance);
                }
            }
            (Phase::ChoosePairing, _) => {
                let (a, b) = action_columns(action).expect("move action");
                state.advance(a);
                if let Some(b) = b {
                    state.advance(b);
                }
                state.phase = Phase::RollOrStop;
            }
            _ => debug_assert!(false, "illegal Can't Stop action {action} in {:?}", state.phase),
        }
    }

    fn scores(&self, state: &CantStopState) -> Option<Vec<f64>> {
        state
            .winner
            .map(|w| if w == 0 { vec![1.0, 0.0] } else { vec![0.0, 1.0] })
    }

    fn redeterminize(&self, state: &CantStopState, _observer: usize, _rng: &mut ChanceStream) -> CantStopState {
        state.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Replays fixed die faces (1..=6), then sixes.
    struct Dice(Vec<u8>, usize);

    impl Chance for Dice {
        fn draw(&mut self, _stream: usize, bound: u32) -> u32 {
            assert_eq!(bound, 6);
            let v = self.0.get(self.1).copied().unwrap_or(6);
            self.1 += 1;
            v as u32 - 1
        }
    }

    #[test]
    fn pairings_of_one_two_three_four() {
        let s = CantStopState::fresh();
        assert_eq!(
            s.pairing_options([1, 2, 3, 4]),
            vec![pair_action(3, 7), pair_action(4, 6), pair_action(5, 5)]
        );
    }

    #[test]
    fn marker_limit_splits_pairs() {
        let mut s = CantStopState::fresh();
        s.temp[0] = 1; // column 2
        s.temp[10] = 1; // column 12
        s.markers = 2;
        // (3,7), (4,6), (5,5): only one new marker left.
        assert_eq!(
            s.pairing_options([1, 2, 3, 4]),
            vec![
                single_action(3),
                single_action(4),
                pair_action(5, 5),
                single_action(6),
                single_action(7)
            ]
        );
    }

    #[test]
    fn stop_banks_progress_and_passes() {
        let g = CantStop::new();
        let mut s = CantStopState::fresh();
        s.dice = [1, 2, 3, 4];
        let mut dice = Dice(vec![1, 1, 1, 1], 0);
        g.apply(&mut s, pair_action(3, 7), &mut dice);
        assert_eq!(s.phase, Phase::RollOrStop);
        g.apply(&mut s, STOP, &mut dice);
        assert_eq!(s.progress[0][1], 1);
        assert_eq!(s.progress[0][5], 1);
        assert_eq!(s.seat, 1);
        assert_eq!(s.markers, 0);
        assert_eq!(s.dice, [1, 1, 1, 1]);
    }

    #[test]
    fn bust_discards_temporary_progress() {
        let g = CantStop::new();
        let mut s = CantStopState::fresh();
        s.temp[4] = 2; // column 6
        s.temp[5] = 3; // column 7
        s.temp[6] = 1; // column 8
        s.markers = 3;
        s.phase = Phase::RollOrStop;
        // 1,1,1,1 only makes 2s: bust. Next roll for seat 1 is 6,6,6,6.
        let mut dice = Dice(vec![1, 1, 1, 1], 0);
        g.apply(&mut s, ROLL, &mut dice);
        assert_eq!(s.seat, 1);
        assert_eq!(s.temp, [0; 11]);
        assert_eq!(s.progress[0], [0; 11]);
        assert_eq!(s.dice, [6, 6, 6, 6]);
        assert_eq!(s.busts, 1);
    }

    #[test]
    fn claiming_three_columns_wins() {
        let g = CantStop::new();
        let mut s = CantStopState::fresh();
        s.owner[0] = Some(1);
        s.owner[5] = Some(1);
        s.owner[10] = Some(1);
        s.winner = Some(1);
        assert_eq!(g.scores(&s), Some(vec![0.0, 1.0]));

        let mut s = CantStopState::fresh();
        s.owner[0] = Some(0);
        s.owner[10] = Some(0);
        s.progress[0][5] = 12;
        s.progress[1][5] = 4;
        s.dice = [1, 6, 1, 1];
        let mut dice = Dice(vec![], 0);
        g.apply(&mut s, single_action(7), &mut dice);
        g.apply(&mut s, STOP, &mut dice);
        assert_eq!(s.owner[5], Some(0));
        assert_eq!(s.progress[1][5], 0);
        assert_eq!(g.scores(&s), Some(vec![1.0, 0.0]));
    }

    #[test]
    fn claimed_column_takes_no_progress() {
        let mut s = CantStopState::fresh();
        s.owner[5] = Some(1);
        // 1,6,1,6: pairings (7,7), (2,12), (7,7); column 7 is claimed.
        assert_eq!(s.pairing_options([1, 6, 1, 6]), vec![pair_action(2, 12)]);
    }
}
