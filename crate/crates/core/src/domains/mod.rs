//! Concrete game constructions: turn-based pursuit gridworlds and products
//! with deterministic finite automata.

mod dfa;
mod grid;

pub use dfa::{build_dfa, labeling_from_graph, product_with_dfa, Dfa, DfaEdge, DfaSpec};
pub use grid::{build_gridworld, Cell, GridSpec};

use thiserror::Error;

use crate::game::{GameError, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("invalid specification: {reason}")]
    InvalidSpec { reason: String },
    #[error("dfa transition function is not total: state {state} lacks symbol {symbol:?}")]
    NotTotal { state: u32, symbol: String },
    #[error("dfa references unknown state {state}")]
    DanglingDfaState { state: u32 },
    #[error("duplicate dfa state {state}")]
    DuplicateDfaState { state: u32 },
    #[error("duplicate dfa transition from state {state} on {symbol:?}")]
    DuplicateTransition { state: u32, symbol: String },
    #[error("symbol {symbol:?} is not in the dfa alphabet")]
    SymbolOutsideAlphabet { symbol: String },
    #[error("label {symbol:?} of state {state} is outside the dfa alphabet")]
    LabelOutsideAlphabet { state: StateId, symbol: String },
    #[error("state {state} has no label")]
    MissingLabel { state: StateId },
    #[error(transparent)]
    Game(#[from] GameError),
}
