//! Generators and verifiers for permutation-hiding graphs, Multi-HPH
//! instances and hard bipartite-matching streams.

pub mod blocks;
pub mod cli;
pub mod dist;
pub mod error;
pub mod hiding;
pub mod hph;
pub mod layered;
pub mod matching;
pub mod perm;
pub mod rs;
pub mod sorting;
pub mod stream;

pub use error::{Error, Result};
