//! Love Letter, two players, a single round.
//!
//! Cards are ranks 1..=8: Guard ×5, Priest ×2, Baron ×2, Handmaid ×2,
//! Prince ×2, King, Countess, Princess. Setup draws the face-down burn card
//! uniformly from the `"burn"` stream and shuffles the remaining 15 with the
//! `"deck"` stream; after that no chance is consulted.
//!
//! Action encoding (`rank * 10 + detail`):
//! - `10` Guard against a protected opponent, `12..=18` Guard guessing rank 2..=8
//! - `20` Priest, `30` Baron, `40` Handmaid
//! - `50` Prince on the opponent, `51` Prince on yourself
//! - `60` King, `70` Countess, `80` Princess
//!
//! The round ends when one seat is eliminated or when a turn would start
//! with an empty deck; then the higher hand wins, ties go to the higher
//! discard sum, and remaining ties are draws.

use crate::engine::{Action, Chance, ChanceStream, Game, GameDef, DEFAULT_MAX_ROUNDS};

pub const GUARD: u8 = 1;
pub const PRIEST: u8 = 2;
pub const BARON: u8 = 3;
pub const HANDMAID: u8 = 4;
pub const PRINCE: u8 = 5;
pub const KING: u8 = 6;
pub const COUNTESS: u8 = 7;
pub const PRINCESS: u8 = 8;

pub const BURN_STREAM: usize = 0;
pub const DECK_STREAM: usize = 1;

pub const DECK_SIZE: usize = 16;
/// Copies of each rank, indexed by rank (index 0 unused).
pub const RANK_COUNTS: [u8; 9] = [0, 5, 2, 2, 2, 2, 1, 1, 1];

pub fn sorted_deck() -> [u8; DECK_SIZE] {
    let mut deck = [0u8; DECK_SIZE];
    let mut i = 0;
    for rank in 1..=8u8 {
        for _ in 0..RANK_COUNTS[rank as usize] {
            deck[i] = rank;
            i += 1;
        }
    }
    deck
}

pub fn guard_guess(rank: u8) -> Action {
    10 + rank as Action
}

/// What one seat knows about the other's single hidden card.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Knowledge {
    pub exact: Option<u8>,
    /// Bit `r` set: the opponent does not hold rank `r`.
    pub excluded: u16,
}

impl Knowledge {
    fn forget(&mut self) {
        *self = Knowledge::default();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoveLetterState {
    /// Draw pile; cards `deck[next..15]` remain, drawn from `next` upwards.
    pub deck: [u8; 15],
    pub next: u8,
    pub burn: u8,
    pub burn_used: bool,
    /// Hands; `hands[s][1]` is 0 unless it is seat `s`'s turn.
    pub hands: [[u8; 2]; 2],
    pub discards: [Vec<u8>; 2],
    pub protected: [bool; 2],
    pub eliminated: [bool; 2],
    pub knowledge: [Knowledge; 2],
    pub seat: u8,
    pub finished: bool,
}

impl LoveLetterState {
    pub fn deck_remaining(&self) -> usize {
        15 - self.next as usize
    }

    pub fn hand(&self, seat: usize) -> &[u8] {
        let h = &self.hands[seat];
        if h[1] == 0 {
            &h[..1]
        } else {
            &h[..]
        }
    }

    /// Every card in the game: deck remainder, burn card, hands, discards.
    pub fn all_cards(&self) -> Vec<u8> {
        let mut all: Vec<u8> = self.deck[self.next as usize..].to_vec();
        if !self.burn_used {
            all.push(self.burn);
        }
        for s in 0..2 {
            all.extend(self.hands[s].iter().copied().filter(|&c| c != 0));
            all.extend_from_slice(&self.discards[s]);
        }
        all.sort_unstable();
        all
    }

    fn draw_card(&mut self) -> u8 {
        if (self.next as usize) < 15 {
            let c = self.deck[self.next as usize];
            self.next += 1;
            c
        } else {
            debug_assert!(!self.burn_used);
            self.burn_used = true;
            self.burn
        }
    }

    fn eliminate(&mut self, seat: usize) {
        self.eliminated[seat] = true;
        for slot in 0..2 {
            let c = std::mem::take(&mut self.hands[seat][slot]);
            if c != 0 {
                self.discards[seat].push(c);
            }
        }
        self.finished = true;
    }

    /// Starts the next seat's turn, or ends the round on an empty deck.
    fn begin_turn(&mut self, seat: usize) {
        self.seat = seat as u8;
        if self.deck_remaining() == 0 {
            self.finished = true;
            return;
        }
        self.protected[seat] = false;
        self.hands[seat][1] = self.draw_card();
    }

    fn remove_from_hand(&mut self, seat: usize, card: u8) {
        let h = &mut self.hands[seat];
        if h[1] == card {
            h[1] = 0;
        } else {
            debug_assert_eq!(h[0], card);
            h[0] = h[1];
            h[1] = 0;
        }
    }
}

#[derive(Clone, Debug)]
pub struct LoveLetter {
    def: GameDef,
}

impl LoveLetter {
    pub fn new() -> Self {
        LoveLetter {
            def: GameDef::new("loveletter", 2, &["burn", "deck"], DEFAULT_MAX_ROUNDS).expect("static definition"),
        }
    }

    /// Deals from a burn index into the sorted deck and an already-shuffled
    /// order of the remaining 15 cards.
    pub fn deal(burn: u8, rest: [u8; 15]) -> LoveLetterState {
        let mut s = LoveLetterState {
            deck: rest,
            next: 0,
            burn,
            burn_used: false,
            hands: [[0; 2]; 2],
            discards: [Vec::with_capacity(8), Vec::with_capacity(8)],
            protected: [false; 2],
            eliminated: [false; 2],
            knowledge: [Knowledge::default(); 2],
            seat: 0,
            finished: false,
        };
        s.hands[0][0] = s.draw_card();
        s.hands[1][0] = s.draw_card();
        s.begin_turn(0);
        s
    }
}

impl Default for LoveLetter {
    fn default() -> Self {
        Self::new()
    }
}

impl Game for LoveLetter {
    type State = LoveLetterState;

    fn def(&self) -> &GameDef {
        &self.def
    }

    fn initial_state<C: Chance + ?Sized>(&self, chance: &mut C) -> LoveLetterState {
        let full = sorted_deck();
        let burn_idx = chance.draw(BURN_STREAM, DECK_SIZE as u32) as usize;
        let mut rest = [0u8; 15];
        let mut j = 0;
        for (i, &c) in full.iter().enumerate() {
            if i != burn_idx {
                rest[j] = c;
                j += 1;
            }
        }
        crate::engine::shuffle_with(chance, DECK_STREAM, &mut rest);
        LoveLetter::deal(full[burn_idx], rest)
    }

    fn current_seat(&self, state: &LoveLetterState) -> usize {
        state.seat as usize
    }

    fn is_terminal(&self, state: &LoveLetterState) -> bool {
        state.finished
    }

    fn legal_actions(&self, state: &LoveLetterState, out: &mut Vec<Action>) {
        let seat = state.seat as usize;
        let opp = seat ^ 1;
        let hand = state.hands[seat];
        let holds = |r: u8| hand[0] == r || hand[1] == r;
        if holds(COUNTESS) && (holds(KING) || holds(PRINCE)) {
            out.push(70);
            return;
        }
        let start = out.len();
        let shielded = state.protected[opp];
        for (i, &card) in hand.iter().enumerate() {
            if card == 0 || (i == 1 && hand[0] == card) {
                continue;
            }
            match card {
                GUARD if shielded => out.push(10),
                GUARD => out.extend((PRIEST..=PRINCESS).map(guard_guess)),
                PRINCE if shielded => out.push(51),
                PRINCE => out.extend_from_slice(&[50, 51]),
                r => out.push(r as Action * 10),
            }
        }
        out[start..].sort_unstable();
    }

    fn apply<C: Chance + ?Sized>(&self, state: &mut LoveLetterState, action: Action, _chance: &mut C) {
        let seat = state.seat as usize;
        let opp = seat ^ 1;
        let card = (action / 10) as u8;
        let detail = (action % 10) as u8;
        state.remove_from_hand(seat, card);
        state.discards[seat].push(card);

        // What the opponent knew about our hand survives only if we kept
        // that card; a played copy of it leaves the remaining card unknown.
        let theirs = &mut state.knowledge[opp];
        if theirs.exact == Some(card) {
            theirs.forget();
        }
        theirs.excluded = 0;

        let shielded = state.protected[opp];
        match card {
            GUARD => {
                if detail >= PRIEST && !shielded {
                    if state.hands[opp][0] == detail {
                        state.eliminate(opp);
                    } else if state.knowledge[seat].exact.is_none() {
                        state.knowledge[seat].excluded |= 1 << detail;
                    }
                }
            }
            PRIEST => {
                if !shielded {
                    state.knowledge[seat] = Knowledge {
                        exact: Some(state.hands[opp][0]),
                        excluded: 0,
                    };
                }
            }
            BARON => {
                if !shielded {
                    let mine = state.hands[seat][0];
                    let other = state.hands[opp][0];
                    if mine > other {
                        state.eliminate(opp);
                    } else if other > mine {
                        state.eliminate(seat);
                    } else {
                        state.knowledge[seat] = Knowledge {
                            exact: Some(other),
                            excluded: 0,
                        };
                        state.knowledge[opp] = Knowledge {
                            exact: Some(mine),
                            excluded: 0,
                        };
                    }
                }
            }
            HANDMAID => state.protected[seat] = true,
            PRINCE => {
                let target = if detail == 1 { seat } else { opp };
                let dropped = std::mem::take(&mut state.hands[target][0]);
                state.discards[target].push(dropped);
                if dropped == PRINCESS {
                    state.eliminate(target);
                } else {
                    state.hands[target][0] = state.draw_card();
                    state.knowledge[target ^ 1].forget();
                }
            }
            KING => {
                if !shielded {
                    let mine = state.hands[seat][0];
                    let other = state.hands[opp][0];
                    state.hands[seat][0] = other;
                    state.hands[opp][0] = mine;
                    state.knowledge[seat] = Knowledge {
                        exact: Some(mine),
                        excluded: 0,
                    };
                    state.knowledge[opp] = Knowledge {
                        exact: Some(other),
                        excluded: 0,
                    };
                }
            }
            COUNTESS => {}
            PRINCESS => state.eliminate(seat),
            _ => debug_assert!(false, "unknown card {card}"),
        }
        if !state.finished {
            state.begin_turn(opp);
        }
    }

    fn scores(&self, state: &LoveLetterState) -> Option<Vec<f64>> {
        if !state.finished {
            return None;
        }
        let win = |s: usize| if s == 0 { vec![1.0, 0.0] } else { vec![0.0, 1.0] };
        if state.eliminated[0] {
            return Some(win(1));
        }
        if state.eliminated[1] {
            return Some(win(0));
        }
        let key = |s: usize| {
            let sum: u32 = state.discards[s].iter().map(|&c| c as u32).sum();
            (state.hands[s][0], sum)
        };
        Some(match key(0).cmp(&key(1)) {
            std::cmp::Ordering::Greater => win(0),
            std::cmp::Ordering::Less => win(1),
            std::cmp::Ordering::Equal => vec![0.5, 0.5],
        })
    }

    fn redeterminize(&self, state: &LoveLetterState, observer: usize, rng: &mut ChanceStream) -> LoveLetterState {
        let opp = observer ^ 1;
        // Unseen pool from visible counts only, so the sample cannot depend
        // on how the hidden cards are actually arranged.
        let mut counts = RANK_COUNTS;
        for &c in state.hand(observer) {
            counts[c as usize] -= 1;
        }
        for pile in &state.discards {
            for &c in pile {
                counts[c as usize] -= 1;
            }
        }
        let mut pool: Vec<u8> = Vec::with_capacity(DECK_SIZE);
        for rank in 1..=8u8 {
            for _ in 0..counts[rank as usize] {
                pool.push(rank);
            }
        }

        let mut out = state.clone();
        let opp_cards = state.hand(opp).len();
        let know = state.knowledge[observer];
        let take = |pool: &mut Vec<u8>, rank: u8| {
            let i = pool.iter().position(|&c| c == rank).expect("known card is unseen");
            pool.remove(i)
        };
        let mut opp_hand = [0u8; 2];
        let mut filled = 0;
        if let Some(k) = know.exact {
            opp_hand[0] = take(&mut pool, k);
            filled = 1;
        } else if opp_cards == 1 && know.excluded != 0 {
            let allowed: Vec<usize> = (0..pool.len())
                .filter(|&i| know.excluded & (1 << pool[i]) == 0)
                .collect();
            let i = allowed[rng.below(allowed.len() as u64) as usize];
            opp_hand[0] = pool.remove(i);
            filled = 1;
        }
        rng.shuffle(&mut pool);
        while filled < opp_cards {
            opp_hand[filled] = pool.pop().expect("pool covers hand");
            filled += 1;
        }
        out.hands[opp] = opp_hand;
        let mut rest = pool.into_iter();
        for slot in out.deck[state.next as usize..].iter_mut() {
            *slot = rest.next().expect("pool covers deck");
        }
        if !state.burn_used {
            out.burn = rest.next().expect("pool covers burn");
        }
        debug_assert!(rest.next().is_none());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::derive_stream;

    fn rest_without(burn_idx: usize) -> [u8; 15] {
        let full = sorted_deck();
        let mut rest = [0u8; 15];
        let mut j = 0;
        for (i, &c) in full.iter().enumerate() {
            if i != burn_idx {
                rest[j] = c;
                j += 1;
            }
        }
        rest
    }

    fn rigged(hands: (u8, u8), draw: u8) -> LoveLetterState {
        // Order the deck so seat 0 gets hands.0, seat 1 hands.1, then seat 0 draws `draw`.
        let mut rest = rest_without(0);
        let mut put = |pos: usize, card: u8| {
            let i = (pos..15).find(|&i| rest[i] == card).unwrap();
            rest.swap(pos, i);
        };
        put(0, hands.0);
        put(1, hands.1);
        put(2, draw);
        LoveLetter::deal(GUARD, rest)
    }

    #[test]
    fn guard_hit_eliminates() {
        let g = LoveLetter::new();
        let mut s = rigged((GUARD, BARON), PRIEST);
        let mut rng = derive_stream(0, "x").unwrap();
        g.apply(&mut s, guard_guess(BARON), &mut rng);
        assert!(s.eliminated[1]);
        assert_eq!(g.scores(&s), Some(vec![1.0, 0.0]));
        assert_eq!(s.all_cards(), sorted_deck().to_vec());
    }

    #[test]
    fn guard_miss_excludes_rank() {
        let g = LoveLetter::new();
        let mut s = rigged((GUARD, BARON), PRIEST);
        let mut rng = derive_stream(0, "x").unwrap();
        g.apply(&mut s, guard_guess(KING), &mut rng);
        assert!(!s.finished);
        assert_eq!(s.knowledge[0].excluded, 1 << KING);
        assert_eq!(s.seat, 1);
    }

    #[test]
    fn countess_forced_with_king_or_prince() {
        let g = LoveLetter::new();
        let s = rigged((COUNTESS, GUARD), KING);
        let mut acts = Vec::new();
        g.legal_actions(&s, &mut acts);
        assert_eq!(acts, vec![70]);
    }

    #[test]
    fn legal_actions_are_canonical() {
        let g = LoveLetter::new();
        let s = rigged((PRINCE, GUARD), GUARD);
        let mut acts = Vec::new();
        g.legal_actions(&s, &mut acts);
        assert_eq!(acts, vec![12, 13, 14, 15, 16, 17, 18, 50, 51]);
    }

    #[test]
    fn handmaid_blocks_targeting() {
        let g = LoveLetter::new();
        let mut s = rigged((HANDMAID, GUARD), GUARD);
        let mut rng = derive_stream(0, "x").unwrap();
        g.apply(&mut s, 40, &mut rng);
        let mut acts = Vec::new();
        g.legal_actions(&s, &mut acts);
        assert_eq!(s.seat, 1);
        assert!(acts.contains(&10));
        assert!(!acts.contains(&12));
    }

    #[test]
    fn baron_eliminates_lower_hand() {
        let g = LoveLetter::new();
        let mut s = rigged((KING, PRIEST), BARON);
        let mut rng = derive_stream(0, "x").unwrap();
        g.apply(&mut s, 30, &mut rng);
        assert!(s.eliminated[1]);
        assert_eq!(g.scores(&s), Some(vec![1.0, 0.0]));
    }

    #[test]
    fn princess_discard_loses() {
        let g = LoveLetter::new();
        let mut s = rigged((PRINCESS, GUARD), PRIEST);
        let mut rng = derive_stream(0, "x").unwrap();
        g.apply(&mut s, 80, &mut rng);
        assert!(s.eliminated[0]);
    }

    #[test]
    fn redeterminize_keeps_observer_view() {
        let g = LoveLetter::new();
        let mut chance = derive_stream(11, "setup").unwrap();
        let mut s = g.initial_state(&mut chance);
        let mut rng = derive_stream(3, "x").unwrap();
        let mut acts = Vec::new();
        for _ in 0..4 {
            if s.finished {
                break;
            }
            acts.clear();
            g.legal_actions(&s, &mut acts);
            let a = acts[rng.below(acts.len() as u64) as usize];
            g.apply(&mut s, a, &mut chance);
        }
        if s.finished {
            return;
        }
        let obs = s.seat as usize;
        for _ in 0..200 {
            let d = g.redeterminize(&s, obs, &mut rng);
            assert_eq!(d.hands[obs], s.hands[obs]);
            assert_eq!(d.discards, s.discards);
            assert_eq!(d.next, s.next);
            assert_eq!(d.all_cards(), sorted_deck().to_vec());
            if let Some(k) = s.knowledge[obs].exact {
                assert_eq!(d.hands[obs ^ 1][0], k);
            }
        }
    }

    #[test]
    fn deck_exhaustion_compares_hands() {
        let g = LoveLetter::new();
        let mut s = rigged((GUARD, BARON), PRIEST);
        s.next = 15;
        s.burn_used = true;
        s.hands = [[KING, 0], [BARON, 0]];
        s.finished = true;
        assert_eq!(g.scores(&s), Some(vec![1.0, 0.0]));
        s.hands = [[BARON, 0], [BARON, 0]];
        s.discards = [vec![1, 1], vec![2]];
        assert_eq!(g.scores(&s), Some(vec![0.5, 0.5]));
        s.discards = [vec![1, 4], vec![2]];
        assert_eq!(g.scores(&s), Some(vec![1.0, 0.0]));
    }
}
