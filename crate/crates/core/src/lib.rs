//! Solver and strategy synthesis for two-player turn-based quantitative
//! reachability games.
//!
//! The pipeline: model a game as a [`game::GameGraph`], compute optimal
//! adversarial/cooperative values by fixed-point iteration ([`values`]),
//! unroll the game into a budget-bounded tree arena ([`arena`]), synthesize
//! the set of all admissible or admissible-winning strategies on the tree
//! ([`synthesis`]), and simulate plays ([`rollout`]). A brute-force
//! dominance oracle ([`oracle`]) and a randomized agreement harness
//! ([`harness`]) validate the solver end to end. Gridworld pursuit games
//! and DFA products are built in [`domains`].

pub mod arena;
pub mod cost;
pub mod domains;
pub mod game;
pub mod generator;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod rng;
pub mod rollout;
pub mod samples;
pub mod synthesis;
pub mod values;

pub use cost::{ExtendedCost, Finite, Infinite};
pub use game::{build_game, payoff_of_play, successors, GameGraph, GameSpec, Owner, StateId};
pub use values::{classify_regions, value_iteration, wcoop_memoryless, ValueMode};
