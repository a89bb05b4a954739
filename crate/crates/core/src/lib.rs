//! Seeded Monte-Carlo simulation of small board and card games, and the
//! statistics needed to measure how much a game's built-in randomness
//! decides who wins.

pub mod agents;
pub mod cli;
pub mod engine;
pub mod error;
pub mod games;
pub mod runner;
pub mod stats;

pub use error::{Error, Result};
