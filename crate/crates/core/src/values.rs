//! Fixed-point value iteration on game graphs: optimal adversarial and
//! cooperative values, region classification, bounded-subgame cooperative
//! values, and a memoryless worst-case cooperative-optimal strategy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::game::{ActionId, GameGraph, Owner, StateId};

/// Env resolution mode for the Bellman update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueMode {
    /// Env maximizes (worst case for Sys).
    Adversarial,
    /// Env minimizes alongside Sys.
    Cooperative,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuesError {
    #[error("table mode mismatch: expected {expected:?}, got {got:?}")]
    ModeMismatch { expected: ValueMode, got: ValueMode },
    #[error("inconsistent tables: cooperative value exceeds adversarial at {state}")]
    InconsistentTables { state: StateId },
}

/// Per-state optimal values and witness actions for one [`ValueMode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    mode: ValueMode,
    vals: Vec<ExtendedCost>,
    /// Best action per non-goal state (lowest action id on ties). For Env
    /// states this is the argmax (adversarial) or argmin (cooperative).
    witness: Vec<Option<ActionId>>,
}

impl ValueTable {
    pub fn mode(&self) -> ValueMode {
        self.mode
    }

    pub fn value(&self, g: &GameGraph, state: StateId) -> ExtendedCost {
        self.vals[g.index_of(state).expect("state in graph")]
    }

    pub fn witness(&self, g: &GameGraph, state: StateId) -> Option<ActionId> {
        self.witness[g.index_of(state).expect("state in graph")]
    }
}

/// State classification by enforceability of the reachability objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Win,
    Pending,
    Lose,
}

impl Region {
    /// State value: 1 for Win, 0 for Pending, -1 for Lose.
    pub fn sval(self) -> i8 {
        match self {
            Region::Win => 1,
            Region::Pending => 0,
            Region::Lose => -1,
        }
    }
}

/// Per-state region tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMap {
    regions: Vec<Region>,
}

impl RegionMap {
    pub fn region(&self, g: &GameGraph, state: StateId) -> Region {
        self.regions[g.index_of(state).expect("state in graph")]
    }

    pub fn sval(&self, g: &GameGraph, state: StateId) -> i8 {
        self.region(g, state).sval()
    }
}

/// A positional Sys strategy: one action per Sys state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemorylessStrategy {
    pub choices: BTreeMap<StateId, ActionId>,
}

// ---------------------------------------------------------------------------
// Fixpoint engine
// ---------------------------------------------------------------------------

/// Jacobi-style Bellman iteration with goals pinned to zero and everything
/// else initialized to `Infinite`. `action_ok` filters the usable actions of
/// a state; a Sys state whose actions are all filtered keeps value
/// `Infinite`. Env resolves by max in adversarial mode, min otherwise.
fn fixpoint<F>(g: &GameGraph, mode: ValueMode, action_ok: F) -> Vec<ExtendedCost>
where
    F: Fn(usize, ActionId) -> bool,
{
    let n = g.len();
    let mut vals: Vec<ExtendedCost> = (0..n)
        .map(|i| if g.goal_at(i) { Finite(0) } else { Infinite })
        .collect();
    loop {
        let mut next = vals.clone();
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            if g.goal_at(i) {
                continue;
            }
            let candidates = g
                .actions_at(i)
                .iter()
                .filter(|a| action_ok(i, a.action))
                .map(|a| {
                    let succ = g.index_of(a.to).expect("validated edge");
                    Finite(a.cost) + vals[succ]
                });
            next[i] = match (g.owner_at(i), mode) {
                (Owner::Sys, _) | (Owner::Env, ValueMode::Cooperative) => {
                    candidates.min().unwrap_or(Infinite)
                }
                (Owner::Env, ValueMode::Adversarial) => candidates.max().unwrap_or(Infinite),
            };
        }
        if next == vals {
            return vals;
        }
        vals = next;
    }
}

/// Best action per state w.r.t. a converged value vector; lowest action id
/// wins ties. Goal states get `None`.
fn witnesses<F>(
    g: &GameGraph,
    mode: ValueMode,
    vals: &[ExtendedCost],
    action_ok: F,
) -> Vec<Option<ActionId>>
where
    F: Fn(usize, ActionId) -> bool,
{
    (0..g.len())
        .map(|i| {
            if g.goal_at(i) {
                return None;
            }
            let mut best: Option<(ExtendedCost, ActionId)> = None;
            for a in g.actions_at(i) {
                if !action_ok(i, a.action) {
                    continue;
                }
                let succ = g.index_of(a.to).expect("validated edge");
                let v = Finite(a.cost) + vals[succ];
                let better = match (&best, g.owner_at(i), mode) {
                    (None, _, _) => true,
                    (Some((b, _)), Owner::Env, ValueMode::Adversarial) => v > *b,
                    (Some((b, _)), _, _) => v < *b,
                };
                if better {
                    best = Some((v, a.action));
                }
            }
            // A filtered-out state may have no candidate; fall back to the
            // lowest action id so every non-goal state carries a witness.
            best.map(|(_, a)| a)
                .or_else(|| g.actions_at(i).first().map(|a| a.action))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Optimal values for the requested mode, as the fixpoint of the Bellman
/// update with goals at zero. On trees this coincides with backward
/// induction.
pub fn value_iteration(g: &GameGraph, mode: ValueMode) -> ValueTable {
    let vals = fixpoint(g, mode, |_, _| true);
    let witness = witnesses(g, mode, &vals, |_, _| true);
    ValueTable { mode, vals, witness }
}

/// Splits states into Win / Pending / Lose from the two value tables.
pub fn classify_regions(
    g: &GameGraph,
    adv: &ValueTable,
    coop: &ValueTable,
) -> Result<RegionMap, ValuesError> {
    if adv.mode != ValueMode::Adversarial {
        return Err(ValuesError::ModeMismatch {
            expected: ValueMode::Adversarial,
            got: adv.mode,
        });
    }
    if coop.mode != ValueMode::Cooperative {
        return Err(ValuesError::ModeMismatch {
            expected: ValueMode::Cooperative,
            got: coop.mode,
        });
    }
    let mut regions = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let a = adv.vals[i];
        let c = coop.vals[i];
        if c > a {
            return Err(ValuesError::InconsistentTables { state: g.id_at(i) });
        }
        regions.push(match (a, c) {
            (Finite(_), _) => Region::Win,
            (Infinite, Finite(_)) => Region::Pending,
            (Infinite, Infinite) => Region::Lose,
        });
    }
    Ok(RegionMap { regions })
}

/// Cooperative value of `v` inside the subgame restricted to states whose
/// adversarial value does not exceed `aval(v)` (goal states always qualify).
/// Returns `Infinite` for losing states.
pub fn acval_graph(g: &GameGraph, v: StateId, adv: &ValueTable) -> ExtendedCost {
    assert_eq!(adv.mode, ValueMode::Adversarial, "need adversarial table");
    let bound = adv.value(g, v);
    let retained = |idx: usize| adv.vals[idx] <= bound || g.goal_at(idx);
    let vals = fixpoint(g, ValueMode::Cooperative, |i, action| {
        retained(i) && {
            let a = g.actions_at(i).iter().find(|a| a.action == action).unwrap();
            retained(g.index_of(a.to).unwrap())
        }
    });
    vals[g.index_of(v).expect("state in graph")]
}

/// Worst-case cooperative-optimal memoryless strategy: at every Sys state,
/// the cooperative-optimal witness among the worst-case-optimal actions
/// (those with `cost + aval(successor) = aval(state)`), ties broken by
/// lowest action id. In losing regions every action qualifies and the
/// cooperative tie-break degenerates to the lowest action id.
pub fn wcoop_memoryless(g: &GameGraph) -> MemorylessStrategy {
    let adv = value_iteration(g, ValueMode::Adversarial);
    let wco_ok = |i: usize, action: ActionId| -> bool {
        if g.owner_at(i) == Owner::Env {
            return true;
        }
        let a = g.actions_at(i).iter().find(|a| a.action == action).unwrap();
        let succ = g.index_of(a.to).unwrap();
        Finite(a.cost) + adv.vals[succ] == adv.vals[i]
    };
    let coop = fixpoint(g, ValueMode::Cooperative, wco_ok);
    let wits = witnesses(g, ValueMode::Cooperative, &coop, wco_ok);
    let mut choices = BTreeMap::new();
    for (i, w) in wits.iter().enumerate() {
        if g.owner_at(i) == Owner::Sys && !g.goal_at(i) {
            if let Some(a) = w {
                choices.insert(g.id_at(i), *a);
            }
        }
    }
    MemorylessStrategy { choices }
}
