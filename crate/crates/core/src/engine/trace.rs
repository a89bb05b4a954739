use serde::{Deserialize, Serialize};

use super::game::Action;
use super::rng::mix64;
use super::seeds::Draw;

const SEED: u64 = 0x243F_6A88_85A3_08D3;

/// Rolling 64-bit digest over the ordered action and chance trace.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TraceHasher(u64);

impl TraceHasher {
    pub(crate) fn new() -> Self {
        TraceHasher(SEED)
    }

    #[inline]
    fn word(&mut self, w: u64) {
        self.0 = mix64(self.0 ^ w).wrapping_add(0x9E37_79B9_7F4A_7C15);
    }

    pub(crate) fn action(&mut self, seat: usize, action: Action) {
        self.word(1);
        self.word(seat as u64);
        self.word(action as u64);
    }

    pub(crate) fn draw(&mut self, stream: usize, bound: u32, value: u32) {
        self.word(2);
        self.word(((stream as u64) << 32) | bound as u64);
        self.word(value as u64);
    }

    pub(crate) fn finish(&self, decisions: usize) -> u64 {
        mix64(self.0 ^ decisions as u64)
    }
}

pub fn digest_hex(digest: u64) -> String {
    format!("{digest:016x}")
}

/// One entry of a replay audit. `seat`/`action` are absent for the setup
/// record that holds the initial chance draws.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub seat: Option<usize>,
    pub action: Option<Action>,
    pub draws: Vec<Draw>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameTrace {
    pub game: String,
    pub trace_digest: String,
    pub scores: Vec<f64>,
    pub forced_draw: bool,
    pub records: Vec<TraceRecord>,
}
