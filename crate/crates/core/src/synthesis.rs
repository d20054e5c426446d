//! Synthesis of the set of all admissible (and admissible-winning)
//! strategies on a tree arena, membership checking, and extraction of
//! concrete strategies.
//!
//! A Sys strategy is admissible iff at every history it either keeps a
//! strictly better cooperative payoff available than the optimal worst case
//! (the strongly-cooperative branch) or is exactly worst-case
//! cooperative-optimal (the worst-case branch). On the tree this is a local
//! condition per reachable Sys node over the pair
//! `(coop, adv) = (cVal(n, sigma), aVal(n, sigma))` of the committed subtree.
//! Admissible-winning strengthens the strongly-cooperative branch with value
//! preservation: from a winning node the play must stay in the winning
//! region.
//!
//! The allowed-successor sets are computed exactly: a child is allowed at a
//! node iff some admissible strategy that reaches the node commits to it.
//! This is decided with a bottom-up pass over achievable admissible
//! signatures `(coop, adv)` per subtree and a top-down pass propagating
//! which signatures the ancestors tolerate, where a sibling branch may
//! discharge an ancestor's requirement.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{AcvalTable, NodeId, TreeArena, TreeValueTable};
use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::game::{GameGraph, Owner};
use crate::rng::SplitMix64;
use crate::values::MemorylessStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthesisMode {
    Admissible,
    AdmissibleWinning,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("strategy lacks a choice at reachable node {node}")]
    IncompleteStrategy { node: NodeId },
    #[error("strategy choice {child} is not a child of node {node}")]
    InvalidChoice { node: NodeId, child: NodeId },
}

/// A deterministic Sys strategy on the tree: one child per reachable Sys
/// node (entries at unreachable nodes are allowed and ignored).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStrategy {
    pub choices: BTreeMap<NodeId, NodeId>,
}

/// The synthesized strategy set: per reachable Sys node, the children some
/// admissible (resp. admissible-winning) strategy commits to. When the
/// budget is below the root cooperative value no goal leaf is reachable and
/// every strategy qualifies (`all_admissible`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySet {
    pub mode: SynthesisMode,
    pub budget: u64,
    pub all_admissible: bool,
    pub allowed: BTreeMap<NodeId, Vec<NodeId>>,
}

/// Committed subtree signature: (cooperative value, adversarial value).
pub type Signature = (ExtendedCost, ExtendedCost);

// ---------------------------------------------------------------------------
// The admissibility condition
// ---------------------------------------------------------------------------

/// Local admissibility test at a Sys node for a committed child whose
/// subtree realizes `sig`.
fn condition_holds(
    mode: SynthesisMode,
    vt: &TreeValueTable,
    acv: &AcvalTable,
    node: NodeId,
    child: NodeId,
    sig: Signature,
) -> bool {
    let (coop, adv) = sig;
    let aval = vt.aval(node);
    let strongly_coop = coop < aval
        && (mode == SynthesisMode::Admissible || !vt.in_win(node) || vt.in_win(child));
    let worst_case_coop = {
        let acval = acv.get(node).expect("acval at Sys node");
        adv == aval && coop == adv && acval == aval
    };
    strongly_coop || worst_case_coop
}

// ---------------------------------------------------------------------------
// Signature computations
// ---------------------------------------------------------------------------

fn combine(a: Signature, b: Signature) -> Signature {
    (a.0.min(b.0), a.1.max(b.1))
}

fn fold_menus(acc: &BTreeSet<Signature>, menu: &BTreeSet<Signature>) -> BTreeSet<Signature> {
    let mut out = BTreeSet::new();
    for x in acc {
        for y in menu {
            out.insert(combine(*x, *y));
        }
    }
    out
}

/// All `(coop, adv)` pairs realizable by some Sys strategy on each subtree.
/// Leaves realize their payoff pair; a Sys node picks one child signature; an
/// Env node aggregates one signature per child (min coop, max adv).
pub fn achievable_signatures(t: &TreeArena) -> Vec<BTreeSet<Signature>> {
    signatures(t, |_, _, _| true)
}

fn signatures<F>(t: &TreeArena, keep: F) -> Vec<BTreeSet<Signature>>
where
    F: Fn(NodeId, NodeId, Signature) -> bool,
{
    let n = t.len();
    let mut sigs: Vec<BTreeSet<Signature>> = vec![BTreeSet::new(); n];
    for i in (0..n).rev() {
        let id = NodeId(i as u32);
        if t.is_leaf(id) {
            let p = t.payoff(id);
            sigs[i].insert((p, p));
            continue;
        }
        match t.node(id).owner {
            Owner::Sys => {
                let mut out = BTreeSet::new();
                for (_, c) in t.children(id) {
                    for sig in &sigs[c.0 as usize] {
                        if keep(id, *c, *sig) {
                            out.insert(*sig);
                        }
                    }
                }
                sigs[i] = out;
            }
            Owner::Env => {
                let mut acc: Option<BTreeSet<Signature>> = None;
                for (_, c) in t.children(id) {
                    let menu = &sigs[c.0 as usize];
                    acc = Some(match acc {
                        None => menu.clone(),
                        Some(prev) => fold_menus(&prev, menu),
                    });
                }
                sigs[i] = acc.unwrap_or_default();
            }
        }
    }
    sigs
}

/// Signatures realizable by strategies that are admissible within the
/// subtree (every Sys node inside satisfies the local condition).
fn admissible_signatures(
    t: &TreeArena,
    vt: &TreeValueTable,
    acv: &AcvalTable,
    mode: SynthesisMode,
) -> Vec<BTreeSet<Signature>> {
    signatures(t, |node, child, sig| {
        condition_holds(mode, vt, acv, node, child, sig)
    })
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

pub fn synthesize_admissible(
    t: &TreeArena,
    vt: &TreeValueTable,
    acv: &AcvalTable,
) -> StrategySet {
    synthesize(t, vt, acv, SynthesisMode::Admissible)
}

pub fn synthesize_admissible_winning(
    t: &TreeArena,
    vt: &TreeValueTable,
    acv: &AcvalTable,
) -> StrategySet {
    synthesize(t, vt, acv, SynthesisMode::AdmissibleWinning)
}

fn synthesize(
    t: &TreeArena,
    vt: &TreeValueTable,
    acv: &AcvalTable,
    mode: SynthesisMode,
) -> StrategySet {
    let root = t.root();
    if Finite(t.budget()) < vt.cval(root) {
        // No play reaches a goal within budget; every strategy is maximal.
        return StrategySet {
            mode,
            budget: t.budget(),
            all_admissible: true,
            allowed: BTreeMap::new(),
        };
    }

    let adm_sigs = admissible_signatures(t, vt, acv, mode);

    // Signature universe for the tolerated-set propagation.
    let payoffs: BTreeSet<ExtendedCost> = t
        .node_ids()
        .filter(|id| t.is_leaf(*id))
        .map(|id| t.payoff(id))
        .collect();
    let mut universe: BTreeSet<Signature> = BTreeSet::new();
    for c in &payoffs {
        for a in &payoffs {
            if c <= a {
                universe.insert((*c, *a));
            }
        }
    }

    // tolerated[n]: signatures a committed subtree at n may realize without
    // violating any ancestor's condition, assuming sibling branches complete
    // as favorably as their admissible signatures permit.
    let mut tolerated: Vec<Option<BTreeSet<Signature>>> = vec![None; t.len()];
    tolerated[root.0 as usize] = Some(universe.clone());

    let mut allowed: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();

    for i in 0..t.len() {
        let id = NodeId(i as u32);
        if t.is_leaf(id) {
            continue;
        }
        let Some(tol) = tolerated[i].take() else {
            continue; // not reachable through allowed choices
        };
        match t.node(id).owner {
            Owner::Sys => {
                let mut kids = Vec::new();
                for (_, c) in t.children(id) {
                    let ok = adm_sigs[c.0 as usize]
                        .iter()
                        .any(|sig| condition_holds(mode, vt, acv, id, *c, *sig) && tol.contains(sig));
                    if ok {
                        kids.push(*c);
                        if !t.is_leaf(*c) {
                            let down: BTreeSet<Signature> = tol
                                .iter()
                                .copied()
                                .filter(|sig| condition_holds(mode, vt, acv, id, *c, *sig))
                                .collect();
                            tolerated[c.0 as usize] = Some(down);
                        }
                    }
                }
                if !kids.is_empty() {
                    allowed.insert(id, kids);
                }
            }
            Owner::Env => {
                let children = t.children(id);
                // Prefix/suffix folds of sibling signature menus.
                let menus: Vec<&BTreeSet<Signature>> = children
                    .iter()
                    .map(|(_, c)| &adm_sigs[c.0 as usize])
                    .collect();
                let mut prefix: Vec<Option<BTreeSet<Signature>>> = vec![None; children.len() + 1];
                for (k, menu) in menus.iter().enumerate() {
                    prefix[k + 1] = Some(match &prefix[k] {
                        None => (*menu).clone(),
                        Some(p) => fold_menus(p, menu),
                    });
                }
                let mut suffix: Vec<Option<BTreeSet<Signature>>> = vec![None; children.len() + 1];
                for k in (0..children.len()).rev() {
                    suffix[k] = Some(match &suffix[k + 1] {
                        None => menus[k].clone(),
                        Some(s) => fold_menus(s, menus[k]),
                    });
                }
                for (k, (_, c)) in children.iter().enumerate() {
                    if t.is_leaf(*c) {
                        continue;
                    }
                    let off = match (&prefix[k], &suffix[k + 1]) {
                        (None, None) => None,
                        (Some(p), None) => Some(p.clone()),
                        (None, Some(s)) => Some(s.clone()),
                        (Some(p), Some(s)) => Some(fold_menus(p, s)),
                    };
                    let down: BTreeSet<Signature> = universe
                        .iter()
                        .copied()
                        .filter(|sig| match &off {
                            None => tol.contains(sig),
                            Some(off) => off.iter().any(|s| tol.contains(&combine(*sig, *s))),
                        })
                        .collect();
                    tolerated[c.0 as usize] = Some(down);
                }
            }
        }
    }

    StrategySet {
        mode,
        budget: t.budget(),
        all_admissible: false,
        allowed,
    }
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

/// Committed `(coop, adv)` values per node of the sigma-subtree rooted at
/// `node`, following `sigma` at Sys nodes and branching over all Env moves.
fn strategy_values(
    t: &TreeArena,
    sigma: &TreeStrategy,
    node: NodeId,
    memo: &mut BTreeMap<NodeId, Signature>,
) -> Result<Signature, SynthesisError> {
    if let Some(sig) = memo.get(&node) {
        return Ok(*sig);
    }
    let sig = if t.is_leaf(node) {
        let p = t.payoff(node);
        (p, p)
    } else {
        match t.node(node).owner {
            Owner::Sys => {
                let child = chosen_child(t, sigma, node)?;
                strategy_values(t, sigma, child, memo)?
            }
            Owner::Env => {
                let mut acc: Option<Signature> = None;
                for (_, c) in t.children(node) {
                    let s = strategy_values(t, sigma, *c, memo)?;
                    acc = Some(match acc {
                        None => s,
                        Some(prev) => combine(prev, s),
                    });
                }
                acc.expect("internal node has children")
            }
        }
    };
    memo.insert(node, sig);
    Ok(sig)
}

fn chosen_child(
    t: &TreeArena,
    sigma: &TreeStrategy,
    node: NodeId,
) -> Result<NodeId, SynthesisError> {
    let child = *sigma
        .choices
        .get(&node)
        .ok_or(SynthesisError::IncompleteStrategy { node })?;
    if !t.children(node).iter().any(|(_, c)| *c == child) {
        return Err(SynthesisError::InvalidChoice { node, child });
    }
    Ok(child)
}

/// True iff `sigma` belongs to the synthesized set: at every Sys node
/// reachable under `sigma` its committed choice satisfies the admissibility
/// condition that the allowed sets realize. Always true when
/// `all_admissible` is set.
pub fn is_member(
    t: &TreeArena,
    vt: &TreeValueTable,
    acv: &AcvalTable,
    set: &StrategySet,
    sigma: &TreeStrategy,
) -> Result<bool, SynthesisError> {
    if set.all_admissible {
        return Ok(true);
    }
    let mut memo = BTreeMap::new();
    let mut stack = vec![t.root()];
    while let Some(n) = stack.pop() {
        if t.is_leaf(n) {
            continue;
        }
        match t.node(n).owner {
            Owner::Sys => {
                let child = chosen_child(t, sigma, n)?;
                let sig = strategy_values(t, sigma, child, &mut memo)?;
                if !condition_holds(set.mode, vt, acv, n, child, sig) {
                    return Ok(false);
                }
                stack.push(child);
            }
            Owner::Env => {
                for (_, c) in t.children(n) {
                    stack.push(*c);
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractPolicy {
    /// Smallest child cooperative value, then lowest action id. In winning
    /// mode the choice is additionally restricted to worst-case-preserving
    /// children at winning nodes, so the extracted strategy attains the
    /// optimal adversarial value.
    MinCvalThenLowestId,
    /// Uniform choice among the candidates, from a seeded SplitMix64 stream;
    /// nodes are visited in ascending id order.
    SeededRandom(u64),
}

/// Deterministically extracts one member of the set.
pub fn extract_strategy(
    t: &TreeArena,
    vt: &TreeValueTable,
    acv: &AcvalTable,
    set: &StrategySet,
    policy: ExtractPolicy,
) -> TreeStrategy {
    if let Some(sigma) = extract_greedy(t, vt, set, policy) {
        if is_member(t, vt, acv, set, &sigma) == Ok(true) {
            return sigma;
        }
    }
    extract_threaded(t, vt, set.mode)
}

fn extract_greedy(
    t: &TreeArena,
    vt: &TreeValueTable,
    set: &StrategySet,
    policy: ExtractPolicy,
) -> Option<TreeStrategy> {
    let mut rng = match policy {
        ExtractPolicy::SeededRandom(seed) => Some(SplitMix64::new(seed)),
        _ => None,
    };
    let mut choices = BTreeMap::new();
    let mut frontier: BTreeSet<NodeId> = BTreeSet::new();
    frontier.insert(t.root());
    while let Some(n) = frontier.pop_first() {
        if t.is_leaf(n) {
            continue;
        }
        match t.node(n).owner {
            Owner::Sys => {
                let mut candidates: Vec<NodeId> = if set.all_admissible {
                    t.children(n).iter().map(|(_, c)| *c).collect()
                } else {
                    set.allowed.get(&n)?.clone()
                };
                if set.mode == SynthesisMode::AdmissibleWinning && vt.in_win(n) {
                    let preserving: Vec<NodeId> = candidates
                        .iter()
                        .copied()
                        .filter(|c| vt.aval(*c) <= vt.aval(n))
                        .collect();
                    if preserving.is_empty() {
                        return None;
                    }
                    candidates = preserving;
                }
                if candidates.is_empty() {
                    return None;
                }
                let pick = match (&mut rng, policy) {
                    (Some(rng), _) => candidates[rng.pick(candidates.len())],
                    (None, _) => *candidates
                        .iter()
                        .min_by_key(|c| (vt.cval(**c), c.0))
                        .unwrap(),
                };
                choices.insert(n, pick);
                frontier.insert(pick);
            }
            Owner::Env => {
                for (_, c) in t.children(n) {
                    frontier.insert(*c);
                }
            }
        }
    }
    Some(TreeStrategy { choices })
}

/// Always-valid construction. Walks top-down with an adversarial budget
/// `bound`; at each Sys node it commits to the child signature minimizing
/// `(coop, adv)` among those whose adversarial component stays within the
/// bound (restricted to winning children from winning nodes in winning
/// mode), and threads the committed adversarial component down.
fn extract_threaded(t: &TreeArena, vt: &TreeValueTable, mode: SynthesisMode) -> TreeStrategy {
    let sigs = achievable_signatures(t);
    let mut choices = BTreeMap::new();
    let root_bound = match mode {
        SynthesisMode::AdmissibleWinning => vt.aval(t.root()),
        SynthesisMode::Admissible => Infinite,
    };
    let mut stack: Vec<(NodeId, ExtendedCost)> = vec![(t.root(), root_bound)];
    while let Some((n, bound)) = stack.pop() {
        if t.is_leaf(n) {
            continue;
        }
        match t.node(n).owner {
            Owner::Env => {
                for (_, c) in t.children(n) {
                    stack.push((*c, bound));
                }
            }
            Owner::Sys => {
                let restrict_win = mode == SynthesisMode::AdmissibleWinning && vt.in_win(n);
                let mut best: Option<(Signature, NodeId)> = None;
                for (_, c) in t.children(n) {
                    if restrict_win && !vt.in_win(*c) {
                        continue;
                    }
                    for sig in &sigs[c.0 as usize] {
                        if sig.1 > bound {
                            continue;
                        }
                        if best.is_none() || (*sig, c.0) < (best.unwrap().0, best.unwrap().1 .0) {
                            best = Some((*sig, *c));
                        }
                    }
                }
                let (sig, child) = best.expect("a within-bound child signature always exists");
                choices.insert(n, child);
                stack.push((child, sig.1));
            }
        }
    }
    TreeStrategy { choices }
}

// ---------------------------------------------------------------------------
// Lifting positional strategies onto the tree
// ---------------------------------------------------------------------------

/// Interprets a positional graph strategy on the unrolled tree. Sys nodes
/// whose game state is missing from the strategy default to the lowest
/// action id (they are unreachable under the lift when the strategy covers
/// its reachable states).
pub fn lift_memoryless(t: &TreeArena, g: &GameGraph, m: &MemorylessStrategy) -> TreeStrategy {
    let mut choices = BTreeMap::new();
    for id in t.node_ids() {
        if t.is_leaf(id) || t.node(id).owner != Owner::Sys {
            continue;
        }
        let kids = t.children(id);
        let pick = m
            .choices
            .get(&t.node(id).state)
            .and_then(|a| kids.iter().find(|(action, _)| action == a))
            .unwrap_or(&kids[0]);
        choices.insert(id, pick.1);
        let _ = g;
    }
    TreeStrategy { choices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{tree_acval, tree_values, unroll, AcvalMethod};
    use crate::game::StateId;
    use crate::samples;
    use crate::values::MemorylessStrategy;
    use std::collections::BTreeMap;

    fn setup(budget: u64) -> (crate::game::GameGraph, TreeArena, TreeValueTable, AcvalTable) {
        let g = samples::commitment_game();
        let t = unroll(&g, budget).unwrap();
        let vt = tree_values(&t);
        let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
        (g, t, vt, acv)
    }

    /// Positional strategy from (state, successor-state) pairs.
    fn positional(g: &crate::game::GameGraph, pairs: &[(u32, u32)]) -> MemorylessStrategy {
        let choices = pairs
            .iter()
            .map(|(from, to)| {
                let a = g
                    .action_to(StateId(*from), StateId(*to))
                    .expect("edge exists");
                (StateId(*from), a.action)
            })
            .collect::<BTreeMap<_, _>>();
        MemorylessStrategy { choices }
    }

    #[test]
    fn membership_of_named_strategies() {
        let (g, t, vt, acv) = setup(12);
        let adm = synthesize_admissible(&t, &vt, &acv);
        let win = synthesize_admissible_winning(&t, &vt, &acv);
        assert!(!adm.all_admissible);

        let risky = lift_memoryless(&t, &g, &positional(&g, &[(0, 1), (4, 5)]));
        let committed = lift_memoryless(&t, &g, &positional(&g, &[(0, 1), (4, 7)]));
        let detour = lift_memoryless(&t, &g, &positional(&g, &[(0, 2), (3, 2)]));

        assert_eq!(is_member(&t, &vt, &acv, &adm, &risky), Ok(false));
        assert_eq!(is_member(&t, &vt, &acv, &win, &risky), Ok(false));

        assert_eq!(is_member(&t, &vt, &acv, &adm, &committed), Ok(true));
        assert_eq!(is_member(&t, &vt, &acv, &win, &committed), Ok(true));

        assert_eq!(is_member(&t, &vt, &acv, &adm, &detour), Ok(true));
        assert_eq!(is_member(&t, &vt, &acv, &win, &detour), Ok(false));
    }

    #[test]
    fn winning_set_rejects_pending_branch_at_root() {
        let (_, t, vt, acv) = setup(12);
        let win = synthesize_admissible_winning(&t, &vt, &acv);
        let root = t.root();
        let allowed = &win.allowed[&root];
        // Only the child toward v1 survives; the v2 detour leaves the
        // winning region.
        assert_eq!(allowed.len(), 1);
        assert_eq!(t.node(allowed[0]).state, StateId(1));

        let adm = synthesize_admissible(&t, &vt, &acv);
        assert_eq!(adm.allowed[&root].len(), 2);
    }

    #[test]
    fn risky_child_rejected_at_v4() {
        let (_, t, vt, acv) = setup(12);
        let adm = synthesize_admissible(&t, &vt, &acv);
        for (node, kids) in &adm.allowed {
            if t.node(*node).state == StateId(4) {
                assert_eq!(kids.len(), 1, "only the v7 child is admissible");
                assert_eq!(t.node(kids[0]).state, StateId(7));
            }
        }
    }

    #[test]
    fn zero_budget_means_all_admissible() {
        let (_, t, vt, acv) = setup(0);
        let adm = synthesize_admissible(&t, &vt, &acv);
        assert!(adm.all_admissible);
        let sigma = TreeStrategy { choices: BTreeMap::new() };
        assert_eq!(is_member(&t, &vt, &acv, &adm, &sigma), Ok(true));
    }

    #[test]
    fn goal_root_yields_empty_choice_map() {
        let mut spec = samples::commitment_game().to_spec();
        for s in &mut spec.states {
            if s.id == StateId(0) {
                s.goal = true;
            }
        }
        let g = crate::game::build_game(&spec).unwrap();
        let t = unroll(&g, 3).unwrap();
        let vt = tree_values(&t);
        let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
        let win = synthesize_admissible_winning(&t, &vt, &acv);
        assert!(!win.all_admissible);
        assert!(win.allowed.is_empty());
        let sigma = TreeStrategy { choices: BTreeMap::new() };
        assert_eq!(is_member(&t, &vt, &acv, &win, &sigma), Ok(true));
    }

    #[test]
    fn asymmetry_between_histories() {
        let (t, nodes) = samples::asymmetry_arena();
        let vt = tree_values(&t);
        let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
        let adm = synthesize_admissible(&t, &vt, &acv);
        let left = &adm.allowed[&nodes.v7_left];
        assert!(!left.contains(&nodes.v9_left));
        assert!(left.contains(&nodes.v8_left));
        let right = &adm.allowed[&nodes.v7_right];
        assert!(right.contains(&nodes.v9_right));
    }

    #[test]
    fn winning_allowed_sets_nested_in_admissible() {
        let (_, t, vt, acv) = setup(12);
        let adm = synthesize_admissible(&t, &vt, &acv);
        let win = synthesize_admissible_winning(&t, &vt, &acv);
        for (node, kids) in &win.allowed {
            let sup = &adm.allowed[node];
            for k in kids {
                assert!(sup.contains(k), "winning choice {k} missing at {node}");
            }
        }
    }

    #[test]
    fn extraction_picks_cheapest_allowed_branch() {
        let (_, t, vt, acv) = setup(12);
        let adm = synthesize_admissible(&t, &vt, &acv);
        let sigma = extract_strategy(&t, &vt, &acv, &adm, ExtractPolicy::MinCvalThenLowestId);
        let root_choice = sigma.choices[&t.root()];
        assert_eq!(t.node(root_choice).state, StateId(2));
        assert_eq!(is_member(&t, &vt, &acv, &adm, &sigma), Ok(true));

        let win = synthesize_admissible_winning(&t, &vt, &acv);
        let sigma = extract_strategy(&t, &vt, &acv, &win, ExtractPolicy::MinCvalThenLowestId);
        assert_eq!(t.node(sigma.choices[&t.root()]).state, StateId(1));
        assert_eq!(is_member(&t, &vt, &acv, &win, &sigma), Ok(true));
    }

    #[test]
    fn seeded_extraction_is_reproducible_and_member() {
        let (_, t, vt, acv) = setup(12);
        let adm = synthesize_admissible(&t, &vt, &acv);
        for seed in 0..8 {
            let a = extract_strategy(&t, &vt, &acv, &adm, ExtractPolicy::SeededRandom(seed));
            let b = extract_strategy(&t, &vt, &acv, &adm, ExtractPolicy::SeededRandom(seed));
            assert_eq!(a, b);
            assert_eq!(is_member(&t, &vt, &acv, &adm, &a), Ok(true));
        }
    }

    #[test]
    fn threaded_construction_is_always_a_member() {
        // The bound-threaded fallback must produce members on its own, in
        // both modes, across random games (including winning islands below
        // pending roots).
        let cfg = crate::generator::RandomGameConfig::default();
        let mut rng = crate::rng::SplitMix64::new(1717);
        let mut checked = 0;
        while checked < 60 {
            let (g, budget) = crate::generator::random_game(&cfg, rng.next_u64());
            let Ok(t) = crate::arena::unroll(&g, budget) else {
                continue;
            };
            let vt = tree_values(&t);
            let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
            for mode in [SynthesisMode::Admissible, SynthesisMode::AdmissibleWinning] {
                let set = synthesize(&t, &vt, &acv, mode);
                let sigma = extract_threaded(&t, &vt, mode);
                assert_eq!(
                    is_member(&t, &vt, &acv, &set, &sigma),
                    Ok(true),
                    "{mode:?} fallback rejected"
                );
            }
            checked += 1;
        }
    }

    #[test]
    fn threaded_construction_preserves_wins_below_pending_roots() {
        // A winning island below a pending root: from the winning state the
        // cooperatively cheaper branch leaves the winning region, so the
        // winning-mode construction must take the enforceable one.
        use crate::game::{build_game, EdgeSpec, GameSpec, Owner, StateSpec};
        let st = |id: u32, owner, goal| StateSpec {
            id: StateId(id),
            owner,
            goal,
            label: None,
        };
        let ed = |from: u32, action: u32, to: u32, cost: u64| EdgeSpec {
            from: StateId(from),
            action: crate::game::ActionId(action),
            to: StateId(to),
            cost,
        };
        // 0: pending root; 1: Env branch point; 2: winning Sys state;
        // 3/4: losing pair; 5: Env before the goal; 6: Env gamble point;
        // 7/8: losing pair behind the gamble; 9: goal.
        let spec = GameSpec {
            states: vec![
                st(0, Owner::Sys, false),
                st(1, Owner::Env, false),
                st(2, Owner::Sys, false),
                st(3, Owner::Sys, false),
                st(4, Owner::Env, false),
                st(5, Owner::Env, false),
                st(6, Owner::Env, false),
                st(7, Owner::Sys, false),
                st(8, Owner::Env, false),
                st(9, Owner::Sys, true),
            ],
            initial: StateId(0),
            edges: vec![
                ed(0, 0, 1, 1),
                ed(1, 0, 2, 0),
                ed(1, 1, 3, 0),
                ed(3, 0, 4, 1),
                ed(4, 0, 3, 0),
                ed(2, 0, 5, 3), // enforceable route
                ed(2, 1, 6, 1), // cheaper gamble
                ed(5, 0, 9, 0),
                ed(6, 0, 9, 0),
                ed(6, 1, 7, 0),
                ed(7, 0, 8, 1),
                ed(8, 0, 7, 0),
                ed(9, 0, 9, 0),
            ],
        };
        let g = build_game(&spec).unwrap();
        let t = crate::arena::unroll(&g, 6).unwrap();
        let vt = tree_values(&t);
        assert!(!vt.in_win(t.root()));
        let win_node = t
            .node_ids()
            .find(|id| t.node(*id).state == StateId(2))
            .unwrap();
        assert!(vt.in_win(win_node));
        let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
        let set = synthesize(&t, &vt, &acv, SynthesisMode::AdmissibleWinning);
        let sigma = extract_threaded(&t, &vt, SynthesisMode::AdmissibleWinning);
        assert_eq!(is_member(&t, &vt, &acv, &set, &sigma), Ok(true));
        // The winning state commits to the enforceable route.
        assert_eq!(t.node(sigma.choices[&win_node]).state, StateId(5));
    }

    #[test]
    fn incomplete_strategy_detected() {
        let (_, t, vt, acv) = setup(12);
        let adm = synthesize_admissible(&t, &vt, &acv);
        let sigma = TreeStrategy { choices: BTreeMap::new() };
        assert!(matches!(
            is_member(&t, &vt, &acv, &adm, &sigma),
            Err(SynthesisError::IncompleteStrategy { .. })
        ));
    }
}
