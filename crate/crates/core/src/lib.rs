//! Maker–Breaker H-games on graphs: density invariants, exact solving,
//! constructive Breaker strategies, H-core preprocessing, Maker strategies
//! and seeded Monte-Carlo experiments on G(n, p).

pub mod audit;
pub mod breaker;
pub mod copies;
pub mod density;
pub mod error;
pub mod experiment;
pub mod game;
mod flow;
pub mod graph;
pub mod hcore;
pub mod maker;
mod matching;
pub mod rational;
pub mod solver;
pub mod unionfind;

pub use error::{HgameError, Result};
pub use game::{GameResult, GameState, Player, Strategy, WinningSetSystem};
pub use graph::{EdgeId, Graph, SampleSpec, Vertex};
pub use rational::Ratio;
