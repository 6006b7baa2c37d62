//! Landscape analysis for search-based level generation.
//!
//! `problem` resolves benchmark ids to evaluable instances. Level-generation
//! problems decode latents to tile grids (`level`) and score them with tile
//! measures or agent playthroughs (`fitness`, `sim`). The analysis modules are
//! `walk`, `ela`, `properties` and `similarity`; `corpus` builds the standard
//! feature collections and `cli` drives everything from the command line.

// negated float comparisons are deliberate throughout: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod cli;
pub mod corpus;
pub mod ela;
pub mod error;
pub mod fitness;
pub mod level;
pub mod mario;
pub mod problem;
pub mod properties;
pub mod rng;
pub mod sim;
pub mod similarity;
pub mod walk;

pub use error::{Error, Result};
pub use problem::{resolve, BoxDomain, ProblemId, ProblemInstance, Suite};
