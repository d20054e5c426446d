//! Two-player turn-based quantitative game graphs.
//!
//! A game is played between the Sys player (pays strictly positive action
//! costs) and the Env player (cost-free) on a finite graph with owner
//! alternation and a set of goal states. A play stops the moment it enters a
//! goal state; outgoing edges of goal states are kept in the data model as
//! decoration but are never traversed by any solver, and are therefore exempt
//! from the alternation and cost-sign checks.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{ExtendedCost, Finite, Infinite};

/// Externally visible state identifier.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct StateId(pub u32);

/// Action identifier, dense per state.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ActionId(pub u32);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// Which player owns a state (moves from it).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Sys,
    Env,
}

impl Owner {
    pub fn opponent(self) -> Owner {
        match self {
            Owner::Sys => Owner::Env,
            Owner::Env => Owner::Sys,
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Sys => f.write_str("sys"),
            Owner::Env => f.write_str("env"),
        }
    }
}

/// One labeled transition out of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameAction {
    pub action: ActionId,
    pub to: StateId,
    pub cost: u64,
}

// ---------------------------------------------------------------------------
// Wire format
// ---------------------------------------------------------------------------

/// Declarative game description; doubles as the JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    pub states: Vec<StateSpec>,
    pub initial: StateId,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpec {
    pub id: StateId,
    pub owner: Owner,
    #[serde(default)]
    pub goal: bool,
    /// Optional atomic-proposition label, read by the DFA product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: StateId,
    pub action: ActionId,
    pub to: StateId,
    pub cost: u64,
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("duplicate state id {state}")]
    DuplicateState { state: StateId },
    #[error("duplicate action {action} at state {state}")]
    DuplicateAction { state: StateId, action: ActionId },
    #[error("dangling reference to state {state}{}", action_context(.action))]
    DanglingReference {
        state: StateId,
        action: Option<ActionId>,
    },
    #[error("owner alternation violated by action {action} at state {state}")]
    AlternationViolation { state: StateId, action: ActionId },
    #[error("state {state} has no outgoing action")]
    BlockingState { state: StateId },
    #[error("actions {first} and {second} of state {state} share a successor")]
    InjectivityViolation {
        state: StateId,
        first: ActionId,
        second: ActionId,
    },
    #[error("action {action} at state {state} violates the cost sign rule")]
    CostSignViolation { state: StateId, action: ActionId },
    #[error("unknown state {state}")]
    UnknownState { state: StateId },
    #[error("invalid play: {reason}")]
    InvalidPlay { reason: String },
}

fn action_context(action: &Option<ActionId>) -> String {
    match action {
        Some(a) => format!(" (via action {a})"),
        None => String::new(),
    }
}

// ---------------------------------------------------------------------------
// GameGraph
// ---------------------------------------------------------------------------

/// A validated game graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGraph {
    ids: Vec<StateId>,
    owners: Vec<Owner>,
    goals: Vec<bool>,
    labels: Vec<Option<String>>,
    /// Outgoing actions per state, sorted by action id.
    actions: Vec<Vec<GameAction>>,
    initial: StateId,
    index: HashMap<StateId, usize>,
}

impl GameGraph {
    /// Number of states.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// States in ascending id order.
    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.ids.iter().copied()
    }

    /// Internal dense index of a state (states sorted by id).
    pub fn index_of(&self, state: StateId) -> Option<usize> {
        self.index.get(&state).copied()
    }

    pub fn id_at(&self, idx: usize) -> StateId {
        self.ids[idx]
    }

    pub fn owner(&self, state: StateId) -> Owner {
        self.owners[self.index[&state]]
    }

    pub fn is_goal(&self, state: StateId) -> bool {
        self.goals[self.index[&state]]
    }

    pub fn label(&self, state: StateId) -> Option<&str> {
        self.labels[self.index[&state]].as_deref()
    }

    pub fn goal_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.ids
            .iter()
            .zip(&self.goals)
            .filter(|(_, g)| **g)
            .map(|(id, _)| *id)
    }

    /// Outgoing actions of `state` in ascending action-id order.
    pub fn actions(&self, state: StateId) -> &[GameAction] {
        &self.actions[self.index[&state]]
    }

    pub(crate) fn actions_at(&self, idx: usize) -> &[GameAction] {
        &self.actions[idx]
    }

    pub(crate) fn owner_at(&self, idx: usize) -> Owner {
        self.owners[idx]
    }

    pub(crate) fn goal_at(&self, idx: usize) -> bool {
        self.goals[idx]
    }

    /// The action of `state` leading to `to`, if any (unique by injectivity).
    pub fn action_to(&self, state: StateId, to: StateId) -> Option<GameAction> {
        self.actions(state).iter().copied().find(|a| a.to == to)
    }

    /// Round-trips the graph back into its declarative description.
    pub fn to_spec(&self) -> GameSpec {
        let states = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, id)| StateSpec {
                id: *id,
                owner: self.owners[i],
                goal: self.goals[i],
                label: self.labels[i].clone(),
            })
            .collect();
        let mut edges = Vec::new();
        for (i, id) in self.ids.iter().enumerate() {
            for a in &self.actions[i] {
                edges.push(EdgeSpec {
                    from: *id,
                    action: a.action,
                    to: a.to,
                    cost: a.cost,
                });
            }
        }
        GameSpec {
            states,
            initial: self.initial,
            edges,
        }
    }
}

/// Builds and validates a game graph from its description.
///
/// Edges out of goal states are retained verbatim but skip the alternation
/// and cost-sign checks; plays terminate on goal entry so those edges are
/// never traversed.
pub fn build_game(spec: &GameSpec) -> Result<GameGraph, GameError> {
    let mut states: Vec<&StateSpec> = spec.states.iter().collect();
    states.sort_by_key(|s| s.id);
    for w in states.windows(2) {
        if w[0].id == w[1].id {
            return Err(GameError::DuplicateState { state: w[0].id });
        }
    }

    let ids: Vec<StateId> = states.iter().map(|s| s.id).collect();
    let owners: Vec<Owner> = states.iter().map(|s| s.owner).collect();
    let goals: Vec<bool> = states.iter().map(|s| s.goal).collect();
    let labels: Vec<Option<String>> = states.iter().map(|s| s.label.clone()).collect();
    let index: HashMap<StateId, usize> =
        ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();

    if !index.contains_key(&spec.initial) {
        return Err(GameError::DanglingReference {
            state: spec.initial,
            action: None,
        });
    }

    let mut actions: Vec<Vec<GameAction>> = vec![Vec::new(); ids.len()];
    for e in &spec.edges {
        let Some(&from) = index.get(&e.from) else {
            return Err(GameError::DanglingReference {
                state: e.from,
                action: Some(e.action),
            });
        };
        if !index.contains_key(&e.to) {
            return Err(GameError::DanglingReference {
                state: e.to,
                action: Some(e.action),
            });
        }
        actions[from].push(GameAction {
            action: e.action,
            to: e.to,
            cost: e.cost,
        });
    }

    for (i, acts) in actions.iter_mut().enumerate() {
        let state = ids[i];
        acts.sort_by_key(|a| a.action);
        for w in acts.windows(2) {
            if w[0].action == w[1].action {
                return Err(GameError::DuplicateAction {
                    state,
                    action: w[0].action,
                });
            }
        }
        if acts.is_empty() {
            return Err(GameError::BlockingState { state });
        }
        for (j, a) in acts.iter().enumerate() {
            for b in &acts[j + 1..] {
                if a.to == b.to {
                    return Err(GameError::InjectivityViolation {
                        state,
                        first: a.action,
                        second: b.action,
                    });
                }
            }
        }
        if goals[i] {
            continue; // decorative edges, never traversed
        }
        for a in acts.iter() {
            let succ = index[&a.to];
            if owners[succ] == owners[i] {
                return Err(GameError::AlternationViolation {
                    state,
                    action: a.action,
                });
            }
            let cost_ok = match owners[i] {
                Owner::Sys => a.cost > 0,
                Owner::Env => a.cost == 0,
            };
            if !cost_ok {
                return Err(GameError::CostSignViolation {
                    state,
                    action: a.action,
                });
            }
        }
    }

    Ok(GameGraph {
        ids,
        owners,
        goals,
        labels,
        actions,
        initial: spec.initial,
        index,
    })
}

// ---------------------------------------------------------------------------
// Plays
// ---------------------------------------------------------------------------

/// A recorded play: a state sequence connected by actions. A play marked
/// `non_terminating` stands for an infinite continuation that never reaches
/// a goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Play {
    pub states: Vec<StateId>,
    pub actions: Vec<ActionId>,
    #[serde(default)]
    pub non_terminating: bool,
}

impl Play {
    pub fn new(states: Vec<StateId>, actions: Vec<ActionId>) -> Self {
        Play {
            states,
            actions,
            non_terminating: false,
        }
    }

    pub fn non_terminating(states: Vec<StateId>, actions: Vec<ActionId>) -> Self {
        Play {
            states,
            actions,
            non_terminating: true,
        }
    }
}

/// Total payoff of a play: the sum of its action costs if it terminates in a
/// goal state, `Infinite` if it is marked non-terminating.
pub fn payoff_of_play(g: &GameGraph, p: &Play) -> Result<ExtendedCost, GameError> {
    if p.states.is_empty() {
        return Err(GameError::InvalidPlay {
            reason: "empty state sequence".into(),
        });
    }
    if p.actions.len() + 1 != p.states.len() {
        return Err(GameError::InvalidPlay {
            reason: format!(
                "{} states need {} actions, got {}",
                p.states.len(),
                p.states.len() - 1,
                p.actions.len()
            ),
        });
    }
    let mut total = Finite(0);
    for (i, action) in p.actions.iter().enumerate() {
        let from = p.states[i];
        let to = p.states[i + 1];
        if g.index_of(from).is_none() {
            return Err(GameError::UnknownState { state: from });
        }
        if g.is_goal(from) {
            return Err(GameError::InvalidPlay {
                reason: format!("play continues past goal state {from}"),
            });
        }
        let Some(edge) = g.actions(from).iter().find(|a| a.action == *action) else {
            return Err(GameError::InvalidPlay {
                reason: format!("no action {action} at state {from}"),
            });
        };
        if edge.to != to {
            return Err(GameError::InvalidPlay {
                reason: format!("action {action} at {from} leads to {}, not {to}", edge.to),
            });
        }
        total = total + edge.cost;
    }
    let last = *p.states.last().unwrap();
    if g.index_of(last).is_none() {
        return Err(GameError::UnknownState { state: last });
    }
    if p.non_terminating {
        return Ok(Infinite);
    }
    if !g.is_goal(last) {
        return Err(GameError::InvalidPlay {
            reason: format!("finite play ends at non-goal state {last}"),
        });
    }
    Ok(total)
}

/// Outgoing actions of `v` as `(action, successor, cost)` triples in
/// ascending action-id order.
pub fn successors(
    g: &GameGraph,
    v: StateId,
) -> Result<Vec<(ActionId, StateId, u64)>, GameError> {
    if g.index_of(v).is_none() {
        return Err(GameError::UnknownState { state: v });
    }
    Ok(g.actions(v).iter().map(|a| (a.action, a.to, a.cost)).collect())
}
