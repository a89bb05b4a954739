//! Kuhn poker played as a short match.
//!
//! Each hand deals one of {J, Q, K} (0, 1, 2) to each seat from the `"deal"`
//! stream (exactly two draws per hand, so the deal sequence does not depend
//! on play). Both seats ante, the first actor alternates between hands, and
//! a single bet of fixed size is allowed. The match ends when a seat can no
//! longer ante or after `max_hands`; the larger stack wins, equal stacks draw.
//!
//! Actions: `0` check, `1` bet, `2` call, `3` fold.

use serde::{Deserialize, Serialize};

use crate::engine::{Action, Chance, ChanceStream, Game, GameDef, DEFAULT_MAX_ROUNDS};

pub const CHECK: Action = 0;
pub const BET: Action = 1;
pub const CALL: Action = 2;
pub const FOLD: Action = 3;

pub const JACK: u8 = 0;
pub const QUEEN: u8 = 1;
pub const KING: u8 = 2;

pub const DEAL_STREAM: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KuhnConfig {
    pub stack: u8,
    pub ante: u8,
    pub bet: u8,
    pub max_hands: u8,
}

impl Default for KuhnConfig {
    fn default() -> Self {
        KuhnConfig {
            stack: 4,
            ante: 1,
            bet: 1,
            max_hands: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KuhnState {
    pub stacks: [u8; 2],
    pub pot: u8,
    pub hole: [u8; 2],
    pub history: [Action; 3],
    pub history_len: u8,
    /// Hands completed so far.
    pub hand: u8,
    /// Seat that acts first in the current hand.
    pub first: u8,
    pub seat: u8,
    pub done: bool,
}

impl KuhnState {
    pub fn history(&self) -> &[Action] {
        &self.history[..self.history_len as usize]
    }

    pub fn chips(&self) -> u32 {
        self.stacks[0] as u32 + self.stacks[1] as u32 + self.pot as u32
    }
}

#[derive(Clone, Debug)]
pub struct Kuhn {
    def: GameDef,
    pub config: KuhnConfig,
}

impl Kuhn {
    pub fn new() -> Self {
        Self::with_config(KuhnConfig::default())
    }

    pub fn with_config(config: KuhnConfig) -> Self {
        Kuhn {
            def: GameDef::new("kuhn", 2, &["deal"], DEFAULT_MAX_ROUNDS).expect("static definition"),
            config,
        }
    }

    fn can_bet(&self, s: &KuhnState) -> bool {
        let b = self.config.bet;
        s.stacks[0] >= b && s.stacks[1] >= b
    }

    fn start_hand<C: Chance + ?Sized>(&self, s: &mut KuhnState, chance: &mut C) {
        let ante = self.config.ante;
        if s.stacks[0] < ante || s.stacks[1] < ante || s.hand >= self.config.max_hands {
            s.done = true;
            return;
        }
        s.stacks[0] -= ante;
        s.stacks[1] -= ante;
        s.pot = 2 * ante;
        let a = chance.draw(DEAL_STREAM, 3) as u8;
        let rest: Vec<u8> = (0..3).filter(|&c| c != a).collect();
        let b = rest[chance.draw(DEAL_STREAM, 2) as usize];
        s.hole = [a, b];
        s.history_len = 0;
        s.first = s.hand % 2;
        s.seat = s.first;
    }

    fn award<C: Chance + ?Sized>(&self, s: &mut KuhnState, winner: usize, chance: &mut C) {
        s.stacks[winner] += s.pot;
        s.pot = 0;
        s.hand += 1;
        self.start_hand(s, chance);
    }

    fn showdown_winner(s: &KuhnState) -> usize {
        if s.hole[0] > s.hole[1] {
            0
        } else {
            1
        }
    }
}

impl Default for Kuhn {
    fn default() -> Self {
        Self::new()
    }
}

impl Game for Kuhn {
    type State = KuhnState;

    fn def(&self) -> &GameDef {
        &self.def
    }

    fn initial_state<C: Chance + ?Sized>(&self, chance: &mut C) -> KuhnState {
        let mut s = KuhnState {
            stacks: [self.config.stack; 2],
            pot: 0,
            hole: [0; 2],
            history: [0; 3],
            history_len: 0,
            hand: 0,
            first: 0,
            seat: 0,
            done: false,
        };
        self.start_hand(&mut s, chance);
        s
    }

    fn current_seat(&self, state: &KuhnState) -> usize {
        state.seat as usize
    }

    fn is_terminal(&self, state: &KuhnState) -> bool {
        state.done
    }

    fn legal_actions(&self, state: &KuhnState, out: &mut Vec<Action>) {
        match state.history() {
            [] | [CHECK] => {
                out.push(CHECK);
                if self.can_bet(state) {
                    out.push(BET);
                }
            }
            [BET] | [CHECK, BET] => out.extend_from_slice(&[CALL, FOLD]),
            h => debug_assert!(false, "invalid Kuhn history {h:?}"),
        }
    }

    fn apply<C: Chance + ?Sized>(&self, state: &mut KuhnState, action: Action, chance: &mut C) {
        let seat = state.seat as usize;
        match action {
            CHECK if state.history() == [CHECK] => {
                let w = Self::showdown_winner(state);
                self.award(state, w, chance);
            }
            CHECK => {
                state.history[0] = CHECK;
                state.history_len = 1;
                state.seat ^= 1;
            }
            BET => {
                state.stacks[seat] -= self.config.bet;
                state.pot += self.config.bet;
                state.history[state.history_len as usize] = BET;
                state.history_len += 1;
                state.seat ^= 1;
            }
            CALL => {
                state.stacks[seat] -= self.config.bet;
                state.pot += self.config.bet;
                let w = Self::showdown_winner(state);
                self.award(state, w, chance);
            }
            FOLD => self.award(state, seat ^ 1, chance),
            _ => debug_assert!(false, "unknown Kuhn action {action}"),
        }
    }

    fn scores(&self, state: &KuhnState) -> Option<Vec<f64>> {
        if !state.done {
            return None;
        }
        Some(match state.stacks[0].cmp(&state.stacks[1]) {
            std::cmp::Ordering::Greater => vec![1.0, 0.0],
            std::cmp::Ordering::Less => vec![0.0, 1.0],
            std::cmp::Ordering::Equal => vec![0.5, 0.5],
        })
    }

    fn redeterminize(&self, state: &KuhnState, observer: usize, rng: &mut ChanceStream) -> KuhnState {
        let mine = state.hole[observer];
        let others: [u8; 2] = match mine {
            JACK => [QUEEN, KING],
            QUEEN => [JACK, KING],
            _ => [JACK, QUEEN],
        };
        let mut out = state.clone();
        out.hole[observer ^ 1] = others[rng.below(2) as usize];
        out
    }
}

/// Exact analysis of a single ante-1, bet-1 Kuhn hand by enumerating the
/// six deals and the betting tree. Used to validate agent behaviour.
pub mod tree {
    /// Behaviour strategy of the seat that acts first, per card (J, Q, K).
    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct FirstActor {
        pub bet: [f64; 3],
        /// Probability of calling after checking and facing a bet.
        pub call_after_check_bet: [f64; 3],
    }

    /// Behaviour strategy of the seat that acts second.
    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct SecondActor {
        pub call_vs_bet: [f64; 3],
        pub bet_after_check: [f64; 3],
    }

    const DEAL_PROB: f64 = 1.0 / 6.0;

    fn sign(a: usize, b: usize) -> f64 {
        if a > b {
            1.0
        } else {
            -1.0
        }
    }

    fn deals() -> impl Iterator<Item = (usize, usize)> {
        (0..3).flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| (a, b)))
    }

    /// First actor's expected chip gain per hand.
    pub fn expected_value(p1: &FirstActor, p2: &SecondActor) -> f64 {
        deals()
            .map(|(a, b)| {
                let s = sign(a, b);
                let bet_line = p2.call_vs_bet[b] * 2.0 * s + (1.0 - p2.call_vs_bet[b]);
                let check_bet = p1.call_after_check_bet[a] * 2.0 * s - (1.0 - p1.call_after_check_bet[a]);
                let check_line = p2.bet_after_check[b] * check_bet + (1.0 - p2.bet_after_check[b]) * s;
                DEAL_PROB * (p1.bet[a] * bet_line + (1.0 - p1.bet[a]) * check_line)
            })
            .sum()
    }

    /// The analytic equilibrium family, `alpha ∈ [0, 1/3]`.
    pub fn equilibrium(alpha: f64) -> (FirstActor, SecondActor) {
        (
            FirstActor {
                bet: [alpha, 0.0, 3.0 * alpha],
                call_after_check_bet: [0.0, alpha + 1.0 / 3.0, 1.0],
            },
            SecondActor {
                call_vs_bet: [0.0, 1.0 / 3.0, 1.0],
                bet_after_check: [1.0 / 3.0, 0.0, 1.0],
            },
        )
    }

    /// Pure best response of the second actor; ties prefer call / bet.
    pub fn best_response_second(p1: &FirstActor) -> SecondActor {
        let mut br = SecondActor {
            call_vs_bet: [0.0; 3],
            bet_after_check: [0.0; 3],
        };
        for b in 0..3 {
            let (mut call, mut fold, mut bet, mut check) = (0.0, 0.0, 0.0, 0.0);
            for a in (0..3).filter(|&a| a != b) {
                let s = sign(a, b);
                // Second actor's payoffs are the negation of the first's.
                call += p1.bet[a] * (-2.0 * s);
                fold -= p1.bet[a];
                let reach = 1.0 - p1.bet[a];
                let cc = p1.call_after_check_bet[a];
                bet += reach * (cc * (-2.0 * s) + (1.0 - cc));
                check += reach * (-s);
            }
            br.call_vs_bet[b] = if call >= fold { 1.0 } else { 0.0 };
            br.bet_after_check[b] = if bet >= check { 1.0 } else { 0.0 };
        }
        br
    }

    /// Pure best response of the first actor; ties prefer bet / call.
    pub fn best_response_first(p2: &SecondActor) -> FirstActor {
        let mut br = FirstActor {
            bet: [0.0; 3],
            call_after_check_bet: [0.0; 3],
        };
        for a in 0..3 {
            let (mut call, mut fold) = (0.0, 0.0);
            for b in (0..3).filter(|&b| b != a) {
                call += p2.bet_after_check[b] * 2.0 * sign(a, b);
                fold -= p2.bet_after_check[b];
            }
            let calls = call >= fold;
            br.call_after_check_bet[a] = if calls { 1.0 } else { 0.0 };
            let (mut bet, mut check) = (0.0, 0.0);
            for b in (0..3).filter(|&b| b != a) {
                let s = sign(a, b);
                bet += p2.call_vs_bet[b] * 2.0 * s + (1.0 - p2.call_vs_bet[b]);
                let facing = if calls { 2.0 * s } else { -1.0 };
                check += p2.bet_after_check[b] * facing + (1.0 - p2.bet_after_check[b]) * s;
            }
            br.bet[a] = if bet >= check { 1.0 } else { 0.0 };
        }
        br
    }
}

#[cfg(test)]
mod tests {
    use super::tree::*;
    use super::*;
    use crate::engine::derive_stream;

    #[test]
    fn equilibrium_value_is_minus_one_eighteenth() {
        for alpha in [0.0, 0.1, 1.0 / 6.0, 1.0 / 3.0] {
            let (p1, p2) = equilibrium(alpha);
            let v = expected_value(&p1, &p2);
            assert!((v + 1.0 / 18.0).abs() < 1e-12, "alpha {alpha}: {v}");
            // Neither side can improve: the strategy pair is an equilibrium.
            let br2 = best_response_second(&p1);
            let br1 = best_response_first(&p2);
            assert!((expected_value(&p1, &br2) + 1.0 / 18.0).abs() < 1e-12);
            assert!((expected_value(&br1, &p2) + 1.0 / 18.0).abs() < 1e-12);
        }
    }

    #[test]
    fn king_always_calls_in_best_response() {
        for alpha in [0.0, 1.0 / 3.0] {
            let (p1, p2) = equilibrium(alpha);
            assert_eq!(best_response_second(&p1).call_vs_bet[KING as usize], 1.0);
            assert_eq!(best_response_first(&p2).call_after_check_bet[KING as usize], 1.0);
        }
    }

    #[test]
    fn chips_conserved_over_a_match() {
        let g = Kuhn::new();
        let mut chance = derive_stream(5, "deal").unwrap();
        let mut pick = derive_stream(6, "pick").unwrap();
        let mut s = g.initial_state(&mut chance);
        let mut acts = Vec::new();
        while !s.done {
            assert_eq!(s.chips(), 8);
            acts.clear();
            g.legal_actions(&s, &mut acts);
            let a = acts[pick.below(acts.len() as u64) as usize];
            g.apply(&mut s, a, &mut chance);
        }
        assert_eq!(s.chips(), 8);
        assert_eq!(chance.draw_count() % 2, 0);
        assert!(g.scores(&s).is_some());
    }

    #[test]
    fn redeterminize_resamples_only_the_opponent_card() {
        let g = Kuhn::new();
        let mut chance = derive_stream(1, "deal").unwrap();
        let mut s = g.initial_state(&mut chance);
        s.hole = [KING, JACK];
        let mut rng = derive_stream(2, "redet").unwrap();
        let mut counts = [0u32; 3];
        for _ in 0..1000 {
            let d = g.redeterminize(&s, 0, &mut rng);
            assert_eq!(d.hole[0], KING);
            assert_eq!(d.stacks, s.stacks);
            counts[d.hole[1] as usize] += 1;
        }
        assert_eq!(counts[KING as usize], 0);
        assert!(counts[0] > 400 && counts[1] > 400);
    }

    #[test]
    fn first_actor_alternates_and_folds_pay_the_pot() {
        let g = Kuhn::new();
        let mut chance = derive_stream(3, "deal").unwrap();
        let mut s = g.initial_state(&mut chance);
        assert_eq!(s.seat, 0);
        g.apply(&mut s, BET, &mut chance);
        g.apply(&mut s, FOLD, &mut chance);
        assert_eq!(s.stacks, [4, 2]);
        assert_eq!(s.pot, 2);
        assert_eq!(s.first, 1);
        assert_eq!(s.seat, 1);
    }
}
