use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::game::GameDef;
use super::rng::{derive_stream, Chance, ChanceStream};
use super::trace::TraceHasher;
use crate::error::{Error, Result};

/// Every seed that goes into one playout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSet {
    pub game_master_seed: u64,
    /// Per-stream seeds that replace the master-derived stream.
    #[serde(default)]
    pub stream_overrides: BTreeMap<String, u64>,
    pub redeterminization_seed: u64,
    pub agent_seeds: Vec<u64>,
}

impl SeedSet {
    pub fn new(game_master_seed: u64, redeterminization_seed: u64, agent_seeds: Vec<u64>) -> Self {
        SeedSet {
            game_master_seed,
            stream_overrides: BTreeMap::new(),
            redeterminization_seed,
            agent_seeds,
        }
    }

    pub fn with_override(mut self, stream: &str, seed: u64) -> Self {
        self.stream_overrides.insert(stream.to_owned(), seed);
        self
    }

    pub fn validate(&self, def: &GameDef) -> Result<()> {
        for name in self.stream_overrides.keys() {
            if def.stream_index(name).is_none() {
                return Err(Error::Config(format!(
                    "stream override {name:?} is not declared by {}; declared streams: {:?}",
                    def.name, def.stream_names
                )));
            }
        }
        if self.agent_seeds.len() != def.seats {
            return Err(Error::InvalidArgument(format!(
                "{} seats but {} agent seeds",
                def.seats,
                self.agent_seeds.len()
            )));
        }
        Ok(())
    }

    /// One stream per declared name: the override seed if present, else the
    /// master seed.
    pub fn game_streams(&self, def: &GameDef) -> Result<Vec<ChanceStream>> {
        def.stream_names
            .iter()
            .map(|name| {
                let seed = self
                    .stream_overrides
                    .get(name)
                    .copied()
                    .unwrap_or(self.game_master_seed);
                derive_stream(seed, name)
            })
            .collect()
    }
}

/// A recorded chance draw.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draw {
    pub stream: String,
    pub bound: u32,
    pub value: u32,
}

/// The game's named streams during a real playout. Every draw is folded into
/// the trace digest and, when recording, kept for the full trace dump.
pub(crate) struct GameStreams<'a> {
    def: &'a GameDef,
    streams: Vec<ChanceStream>,
    pub(crate) hasher: TraceHasher,
    recording: bool,
    pub(crate) pending: Vec<Draw>,
}

impl<'a> GameStreams<'a> {
    pub(crate) fn new(def: &'a GameDef, seeds: &SeedSet, recording: bool) -> Result<Self> {
        Ok(GameStreams {
            def,
            streams: seeds.game_streams(def)?,
            hasher: TraceHasher::new(),
            recording,
            pending: Vec::new(),
        })
    }

    pub(crate) fn total_draws(&self) -> u64 {
        self.streams.iter().map(|s| s.draw_count()).sum()
    }
}

impl Chance for GameStreams<'_> {
    fn draw(&mut self, stream: usize, bound: u32) -> u32 {
        let value = self.streams[stream].draw(stream, bound);
        self.hasher.draw(stream, bound, value);
        if self.recording {
            self.pending.push(Draw {
                stream: self.def.stream_names[stream].clone(),
                bound,
                value,
            });
        }
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn def() -> GameDef {
        GameDef::new("t", 2, &["a", "b"], 10).unwrap()
    }

    #[test]
    fn unknown_override_rejected() {
        let s = SeedSet::new(1, 2, vec![3, 4]).with_override("c", 9);
        assert!(matches!(s.validate(&def()), Err(Error::Config(_))));
    }

    #[test]
    fn agent_seed_count_checked() {
        let s = SeedSet::new(1, 2, vec![3]);
        assert!(s.validate(&def()).is_err());
    }

    #[test]
    fn override_isolates_stream() {
        let d = def();
        let one = SeedSet::new(1, 0, vec![0, 0]).with_override("a", 77);
        let two = SeedSet::new(2, 0, vec![0, 0]).with_override("a", 77);
        let mut s1 = one.game_streams(&d).unwrap();
        let mut s2 = two.game_streams(&d).unwrap();
        let a1: Vec<u64> = (0..32).map(|_| s1[0].next_raw()).collect();
        let a2: Vec<u64> = (0..32).map(|_| s2[0].next_raw()).collect();
        let b1: Vec<u64> = (0..32).map(|_| s1[1].next_raw()).collect();
        let b2: Vec<u64> = (0..32).map(|_| s2[1].next_raw()).collect();
        assert_eq!(a1, a2);
        assert_ne!(b1, b2);
    }
}
