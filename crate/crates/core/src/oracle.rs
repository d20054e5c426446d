//! Brute-force ground truth on tree arenas: exhaustive strategy enumeration,
//! dominance per the weak-dominance order, maximal (admissible) sets, and
//! the complement check that every strategy is either admissible or weakly
//! dominated, never both.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arena::{NodeId, TreeArena, TreeValueTable};
use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::game::Owner;
use crate::synthesis::{achievable_signatures, SynthesisMode, TreeStrategy};

/// Default cap on the number of enumerated strategy vectors.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} strategy vectors exceed the enumeration cap of {cap}")]
    EnumerationTooLarge { count: u64, cap: u64 },
    #[error("strategy at node {node:?} is both admissible and dominated, or neither")]
    BothOrNeither { node: Option<NodeId> },
}

/// A total assignment of one child to every internal node of one owner
/// (reachable or not), stored as child indices over `decision_nodes`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StrategyVector {
    pub owner: Owner,
    /// Child index per decision node, aligned with the enumeration order.
    pub picks: Vec<usize>,
}

impl StrategyVector {
    pub fn choice_at(&self, t: &TreeArena, nodes: &[NodeId], node: NodeId) -> Option<NodeId> {
        let i = nodes.iter().position(|n| *n == node)?;
        Some(t.children(node)[self.picks[i]].1)
    }
}

/// Internal nodes owned by `owner`, ascending.
pub fn decision_nodes(t: &TreeArena, owner: Owner) -> Vec<NodeId> {
    t.node_ids()
        .filter(|id| !t.is_leaf(*id) && t.node(*id).owner == owner)
        .collect()
}

/// Number of strategy vectors for `owner` (product of branching factors),
/// saturating at `u64::MAX`.
pub fn strategy_count(t: &TreeArena, owner: Owner) -> u64 {
    decision_nodes(t, owner)
        .iter()
        .map(|n| t.children(*n).len() as u64)
        .fold(1u64, |acc, k| acc.saturating_mul(k))
}

/// Lexicographic enumeration of all strategy vectors (by node id, then
/// child/action order).
pub fn enumerate_strategies(
    t: &TreeArena,
    owner: Owner,
) -> Result<Vec<StrategyVector>, OracleError> {
    enumerate_strategies_with_cap(t, owner, DEFAULT_ENUM_CAP)
}

pub fn enumerate_strategies_with_cap(
    t: &TreeArena,
    owner: Owner,
    cap: u64,
) -> Result<Vec<StrategyVector>, OracleError> {
    let nodes = decision_nodes(t, owner);
    let count = strategy_count(t, owner);
    if count > cap {
        return Err(OracleError::EnumerationTooLarge { count, cap });
    }
    let radix: Vec<usize> = nodes.iter().map(|n| t.children(*n).len()).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut odometer = vec![0usize; nodes.len()];
    loop {
        out.push(StrategyVector {
            owner,
            picks: odometer.clone(),
        });
        // Advance the rightmost digit (lexicographic order).
        let mut pos = nodes.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < radix[pos] {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// The unique play induced by a Sys and an Env vector: the leaf reached and
/// its payoff.
pub fn play_of(
    t: &TreeArena,
    sys: &StrategyVector,
    env: &StrategyVector,
) -> (NodeId, ExtendedCost) {
    debug_assert_eq!(sys.owner, Owner::Sys);
    debug_assert_eq!(env.owner, Owner::Env);
    let sys_nodes = decision_nodes(t, Owner::Sys);
    let env_nodes = decision_nodes(t, Owner::Env);
    let mut cur = t.root();
    while !t.is_leaf(cur) {
        cur = match t.node(cur).owner {
            Owner::Sys => sys.choice_at(t, &sys_nodes, cur).expect("total vector"),
            Owner::Env => env.choice_at(t, &env_nodes, cur).expect("total vector"),
        };
    }
    (cur, t.payoff(cur))
}

/// Payoff row of one Sys vector against every Env vector, `u64::MAX`
/// standing in for `Infinite`.
fn payoff_row(
    t: &TreeArena,
    sys_nodes: &[NodeId],
    env_nodes: &[NodeId],
    env_all: &[StrategyVector],
    sys: &StrategyVector,
) -> Vec<u64> {
    env_all
        .iter()
        .map(|env| {
            let mut cur = t.root();
            while !t.is_leaf(cur) {
                cur = match t.node(cur).owner {
                    Owner::Sys => sys.choice_at(t, sys_nodes, cur).unwrap(),
                    Owner::Env => env.choice_at(t, env_nodes, cur).unwrap(),
                };
            }
            match t.payoff(cur) {
                Finite(v) => v,
                Infinite => u64::MAX,
            }
        })
        .collect()
}

/// `first` weakly dominates `second`: never worse against any Env vector and
/// strictly better against at least one.
pub fn weakly_dominates(
    t: &TreeArena,
    first: &StrategyVector,
    second: &StrategyVector,
) -> Result<bool, OracleError> {
    let env_all = enumerate_strategies(t, Owner::Env)?;
    let sys_nodes = decision_nodes(t, Owner::Sys);
    let env_nodes = decision_nodes(t, Owner::Env);
    let a = payoff_row(t, &sys_nodes, &env_nodes, &env_all, first);
    let b = payoff_row(t, &sys_nodes, &env_nodes, &env_all, second);
    Ok(row_dominates(&a, &b))
}

fn row_dominates(a: &[u64], b: &[u64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Rewrites choices at nodes unreachable under the vector to child index 0.
/// Dominance only depends on induced plays, so this canonical form identifies
/// semantically equal vectors.
pub fn canonicalize(t: &TreeArena, sys_nodes: &[NodeId], sys: &StrategyVector) -> StrategyVector {
    let mut reachable = vec![false; t.len()];
    let mut stack = vec![t.root()];
    while let Some(n) = stack.pop() {
        reachable[n.0 as usize] = true;
        if t.is_leaf(n) {
            continue;
        }
        match t.node(n).owner {
            Owner::Sys => {
                let i = sys_nodes.iter().position(|x| *x == n).unwrap();
                stack.push(t.children(n)[sys.picks[i]].1);
            }
            Owner::Env => {
                for (_, c) in t.children(n) {
                    stack.push(*c);
                }
            }
        }
    }
    let picks = sys_nodes
        .iter()
        .zip(&sys.picks)
        .map(|(n, p)| if reachable[n.0 as usize] { *p } else { 0 })
        .collect();
    StrategyVector {
        owner: Owner::Sys,
        picks,
    }
}

/// All canonical maximal (admissible) Sys vectors; in winning mode, those
/// that additionally reach a goal leaf within budget under every Env vector
/// from every reachable node with finite adversarial value.
pub fn brute_force_admissible(
    t: &TreeArena,
    vt: &TreeValueTable,
    mode: SynthesisMode,
) -> Result<Vec<StrategyVector>, OracleError> {
    brute_force_admissible_with_cap(t, vt, mode, DEFAULT_ENUM_CAP)
}

pub fn brute_force_admissible_with_cap(
    t: &TreeArena,
    vt: &TreeValueTable,
    mode: SynthesisMode,
    cap: u64,
) -> Result<Vec<StrategyVector>, OracleError> {
    let sys_nodes = decision_nodes(t, Owner::Sys);
    let env_nodes = decision_nodes(t, Owner::Env);
    let sys_all = enumerate_strategies_with_cap(t, Owner::Sys, cap)?;
    let env_all = enumerate_strategies_with_cap(t, Owner::Env, cap)?;

    // Deduplicate by canonical form.
    let mut canonical: Vec<StrategyVector> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for s in &sys_all {
        let c = canonicalize(t, &sys_nodes, s);
        if seen.insert(c.picks.clone()) {
            canonical.push(c);
        }
    }

    let rows: Vec<Vec<u64>> = canonical
        .iter()
        .map(|s| payoff_row(t, &sys_nodes, &env_nodes, &env_all, s))
        .collect();

    let mut out = Vec::new();
    for (i, s) in canonical.iter().enumerate() {
        let dominated = rows
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && row_dominates(other, &rows[i]));
        if dominated {
            continue;
        }
        if mode == SynthesisMode::AdmissibleWinning && !enforces(t, vt, &sys_nodes, s) {
            continue;
        }
        out.push(s.clone());
    }
    Ok(out)
}

/// Every play under the vector that passes through a node with finite
/// adversarial value must end in a goal leaf (whose payoff is within budget
/// by construction).
fn enforces(
    t: &TreeArena,
    vt: &TreeValueTable,
    sys_nodes: &[NodeId],
    sys: &StrategyVector,
) -> bool {
    let mut stack = vec![(t.root(), false)];
    while let Some((n, touched_win)) = stack.pop() {
        let touched = touched_win || vt.in_win(n);
        if t.is_leaf(n) {
            if touched && t.payoff(n).is_infinite() {
                return false;
            }
            continue;
        }
        match t.node(n).owner {
            Owner::Sys => {
                let i = sys_nodes.iter().position(|x| *x == n).unwrap();
                stack.push((t.children(n)[sys.picks[i]].1, touched));
            }
            Owner::Env => {
                for (_, c) in t.children(n) {
                    stack.push((*c, touched));
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Complement check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementLabel {
    SatisfiesAdmissible,
    SatisfiesDominated,
}

/// Optimal adversarial-cooperative value per Sys node, straight from the
/// achievable-signature sets: the least cooperative value among committed
/// subtrees whose adversarial value stays within the node's optimal one.
pub fn def6_acval(t: &TreeArena, vt: &TreeValueTable) -> Vec<Option<ExtendedCost>> {
    let sigs = achievable_signatures(t);
    t.node_ids()
        .map(|id| {
            if t.node(id).owner != Owner::Sys {
                return None;
            }
            if t.is_leaf(id) {
                return Some(t.payoff(id));
            }
            let bound = vt.aval(id);
            sigs[id.0 as usize]
                .iter()
                .filter(|(_, a)| *a <= bound)
                .map(|(c, _)| *c)
                .min()
        })
        .collect()
}

/// Labels a vector as admissible or dominated by evaluating the two
/// characterizations independently at every reachable Sys history; exactly
/// one must apply.
pub fn check_complement(
    t: &TreeArena,
    vt: &TreeValueTable,
    def6: &[Option<ExtendedCost>],
    sys: &StrategyVector,
) -> Result<ComplementLabel, OracleError> {
    let sys_nodes = decision_nodes(t, Owner::Sys);
    // Committed (coop, adv) per node of the sigma-subtree.
    let mut committed: BTreeMap<NodeId, (ExtendedCost, ExtendedCost)> = BTreeMap::new();
    fn values(
        t: &TreeArena,
        sys_nodes: &[NodeId],
        sys: &StrategyVector,
        n: NodeId,
        memo: &mut BTreeMap<NodeId, (ExtendedCost, ExtendedCost)>,
    ) -> (ExtendedCost, ExtendedCost) {
        if let Some(v) = memo.get(&n) {
            return *v;
        }
        let v = if t.is_leaf(n) {
            let p = t.payoff(n);
            (p, p)
        } else {
            match t.node(n).owner {
                Owner::Sys => {
                    let c = sys.choice_at(t, sys_nodes, n).unwrap();
                    values(t, sys_nodes, sys, c, memo)
                }
                Owner::Env => {
                    let mut coop = Infinite;
                    let mut adv = Finite(0);
                    for (_, c) in t.children(n) {
                        let (cc, ca) = values(t, sys_nodes, sys, *c, memo);
                        coop = coop.min(cc);
                        adv = adv.max(ca);
                    }
                    (coop, adv)
                }
            }
        };
        memo.insert(n, v);
        v
    }

    let mut all_admissible = true;
    let mut any_dominated = false;
    let mut witness = None;

    let mut stack = vec![t.root()];
    while let Some(n) = stack.pop() {
        if t.is_leaf(n) {
            continue;
        }
        match t.node(n).owner {
            Owner::Env => {
                for (_, c) in t.children(n) {
                    stack.push(*c);
                }
            }
            Owner::Sys => {
                let chosen = sys.choice_at(t, &sys_nodes, n).unwrap();
                let (coop, adv) = values(t, &sys_nodes, sys, chosen, &mut committed);
                let aval = vt.aval(n);
                let ac = def6[n.0 as usize].expect("def6 at Sys node");

                let admissible_here =
                    coop < aval || (aval == adv && adv == coop && ac == aval);
                let dominated_here = (coop >= aval && adv > aval)
                    || (aval == adv && adv == coop && ac < aval);

                if !admissible_here {
                    all_admissible = false;
                    witness = Some(n);
                }
                if dominated_here {
                    any_dominated = true;
                    witness = Some(n);
                }
                stack.push(chosen);
            }
        }
    }

    match (all_admissible, any_dominated) {
        (true, false) => Ok(ComplementLabel::SatisfiesAdmissible),
        (false, true) => Ok(ComplementLabel::SatisfiesDominated),
        _ => Err(OracleError::BothOrNeither { node: witness }),
    }
}

/// View a total Sys vector as a tree strategy.
pub fn vector_to_strategy(t: &TreeArena, sys: &StrategyVector) -> TreeStrategy {
    let sys_nodes = decision_nodes(t, Owner::Sys);
    let choices = sys_nodes
        .iter()
        .zip(&sys.picks)
        .map(|(n, p)| (*n, t.children(*n)[*p].1))
        .collect();
    TreeStrategy { choices }
}
