//! Budget-bounded unrolling of a game graph into a finite tree arena.
//!
//! Each tree node stands for a unique history; leaf payoffs make the payoff
//! function history-independent on the tree. A play that enters a goal state
//! with accumulated cost within the budget ends in a `GoalLeaf` whose payoff
//! is that accumulated cost; a play whose accumulated cost exceeds the budget
//! ends in a `DeadLeaf` with payoff `Infinite`. Positive cycle costs make the
//! unrolling finite.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::game::{ActionId, GameGraph, Owner, StateId};

/// Tree node identifier (depth-first preorder).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Internal,
    /// Goal reached within budget; payoff = accumulated cost.
    GoalLeaf,
    /// Budget exceeded; payoff = Infinite.
    DeadLeaf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub state: StateId,
    pub accumulated: u64,
    pub owner: Owner,
    pub parent: Option<NodeId>,
    pub action_from_parent: Option<ActionId>,
    pub kind: NodeKind,
}

/// Default cap on unrolled nodes before aborting.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("unrolling exceeds the node cap of {cap} nodes; lower the budget or raise the cap")]
    BudgetOverflowGuard { cap: usize },
    #[error("invalid tree construction: {reason}")]
    InvalidTree { reason: String },
}

/// A finite tree arena. Nodes are in depth-first preorder with children
/// expanded in ascending action-id order, so every child id exceeds its
/// parent's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeArena {
    nodes: Vec<TreeNode>,
    children: Vec<Vec<(ActionId, NodeId)>>,
    budget: u64,
}

impl TreeArena {
    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id.0 as usize]
    }

    /// Children in ascending action-id order.
    pub fn children(&self, id: NodeId) -> &[(ActionId, NodeId)] {
        &self.children[id.0 as usize]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.node(id).kind != NodeKind::Internal
    }

    /// Leaf payoff: accumulated cost for goal leaves, `Infinite` for dead
    /// leaves. Panics on internal nodes.
    pub fn payoff(&self, id: NodeId) -> ExtendedCost {
        match self.node(id).kind {
            NodeKind::GoalLeaf => Finite(self.node(id).accumulated),
            NodeKind::DeadLeaf => Infinite,
            NodeKind::Internal => panic!("payoff of internal node {id}"),
        }
    }

    /// History from the root to `id`, inclusive.
    pub fn path_from_root(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.node(cur).parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        let mut max = 0;
        for (i, n) in self.nodes.iter().enumerate().skip(1) {
            depth[i] = depth[n.parent.unwrap().0 as usize] + 1;
            max = max.max(depth[i]);
        }
        max
    }

    pub fn stats(&self) -> ArenaStats {
        let mut s = ArenaStats {
            nodes: self.nodes.len(),
            internal: 0,
            goal_leaves: 0,
            dead_leaves: 0,
            depth: self.depth(),
            budget: self.budget,
        };
        for n in &self.nodes {
            match n.kind {
                NodeKind::Internal => s.internal += 1,
                NodeKind::GoalLeaf => s.goal_leaves += 1,
                NodeKind::DeadLeaf => s.dead_leaves += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArenaStats {
    pub nodes: usize,
    pub internal: usize,
    pub goal_leaves: usize,
    pub dead_leaves: usize,
    pub depth: usize,
    pub budget: u64,
}

// ---------------------------------------------------------------------------
// Unrolling
// ---------------------------------------------------------------------------

pub fn unroll(g: &GameGraph, budget: u64) -> Result<TreeArena, ArenaError> {
    unroll_with_cap(g, budget, DEFAULT_NODE_CAP)
}

/// Exhaustive depth-first expansion. A fresh node is a goal leaf if its game
/// state is a goal and its accumulated cost is within budget, a dead leaf if
/// the accumulated cost exceeds the budget, and internal otherwise. Goal
/// leaves take precedence at equal accumulated cost, and goal states are
/// never expanded.
pub fn unroll_with_cap(
    g: &GameGraph,
    budget: u64,
    cap: usize,
) -> Result<TreeArena, ArenaError> {
    let kind_of = |state: StateId, accumulated: u64| -> NodeKind {
        if g.is_goal(state) && accumulated <= budget {
            NodeKind::GoalLeaf
        } else if accumulated > budget {
            NodeKind::DeadLeaf
        } else {
            NodeKind::Internal
        }
    };

    let mut nodes = vec![TreeNode {
        state: g.initial(),
        accumulated: 0,
        owner: g.owner(g.initial()),
        parent: None,
        action_from_parent: None,
        kind: kind_of(g.initial(), 0),
    }];
    let mut children: Vec<Vec<(ActionId, NodeId)>> = vec![Vec::new()];

    // Explicit stack of (node, next action index); preorder ids.
    let mut stack: Vec<(NodeId, usize)> = Vec::new();
    if nodes[0].kind == NodeKind::Internal {
        stack.push((NodeId(0), 0));
    }
    while let Some((id, action_idx)) = stack.pop() {
        let state = nodes[id.0 as usize].state;
        let accumulated = nodes[id.0 as usize].accumulated;
        let actions = g.actions(state);
        if action_idx >= actions.len() {
            continue;
        }
        stack.push((id, action_idx + 1));
        let a = actions[action_idx];
        if nodes.len() >= cap {
            return Err(ArenaError::BudgetOverflowGuard { cap });
        }
        let child_acc = accumulated + a.cost;
        let child = NodeId(nodes.len() as u32);
        nodes.push(TreeNode {
            state: a.to,
            accumulated: child_acc,
            owner: g.owner(a.to),
            parent: Some(id),
            action_from_parent: Some(a.action),
            kind: kind_of(a.to, child_acc),
        });
        children.push(Vec::new());
        children[id.0 as usize].push((a.action, child));
        if nodes[child.0 as usize].kind == NodeKind::Internal {
            stack.push((child, 0));
        }
    }

    Ok(TreeArena {
        nodes,
        children,
        budget,
    })
}

// ---------------------------------------------------------------------------
// Raw construction (trees that are not graph unrollings)
// ---------------------------------------------------------------------------

/// Builder for hand-made arenas. Leaf payoffs are carried by `accumulated`
/// (goal leaves) or implied `Infinite` (dead leaves); the accumulation law of
/// unrolled arenas is not enforced here.
pub struct TreeArenaBuilder {
    nodes: Vec<TreeNode>,
    children: Vec<Vec<(ActionId, NodeId)>>,
    budget: u64,
}

impl TreeArenaBuilder {
    pub fn new(budget: u64, root_state: StateId, root_owner: Owner) -> Self {
        TreeArenaBuilder {
            nodes: vec![TreeNode {
                state: root_state,
                accumulated: 0,
                owner: root_owner,
                parent: None,
                action_from_parent: None,
                kind: NodeKind::Internal,
            }],
            children: vec![Vec::new()],
            budget,
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn add_internal(
        &mut self,
        parent: NodeId,
        state: StateId,
        owner: Owner,
        accumulated: u64,
    ) -> NodeId {
        self.add_node(parent, state, owner, accumulated, NodeKind::Internal)
    }

    pub fn add_goal_leaf(
        &mut self,
        parent: NodeId,
        state: StateId,
        owner: Owner,
        payoff: u64,
    ) -> NodeId {
        self.add_node(parent, state, owner, payoff, NodeKind::GoalLeaf)
    }

    pub fn add_dead_leaf(&mut self, parent: NodeId, state: StateId, owner: Owner) -> NodeId {
        let acc = self.budget + 1;
        self.add_node(parent, state, owner, acc, NodeKind::DeadLeaf)
    }

    fn add_node(
        &mut self,
        parent: NodeId,
        state: StateId,
        owner: Owner,
        accumulated: u64,
        kind: NodeKind,
    ) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        let action = ActionId(self.children[parent.0 as usize].len() as u32);
        self.nodes.push(TreeNode {
            state,
            accumulated,
            owner,
            parent: Some(parent),
            action_from_parent: Some(action),
            kind,
        });
        self.children.push(Vec::new());
        self.children[parent.0 as usize].push((action, id));
        id
    }

    pub fn finish(self) -> Result<TreeArena, ArenaError> {
        for (i, n) in self.nodes.iter().enumerate() {
            match n.kind {
                NodeKind::Internal => {
                    if self.children[i].is_empty() {
                        return Err(ArenaError::InvalidTree {
                            reason: format!("internal node n{i} has no children"),
                        });
                    }
                }
                NodeKind::GoalLeaf => {
                    if n.accumulated > self.budget {
                        return Err(ArenaError::InvalidTree {
                            reason: format!("goal leaf n{i} exceeds the budget"),
                        });
                    }
                }
                NodeKind::DeadLeaf => {
                    if n.accumulated <= self.budget {
                        return Err(ArenaError::InvalidTree {
                            reason: format!("dead leaf n{i} within budget"),
                        });
                    }
                }
            }
            if n.kind != NodeKind::Internal && !self.children[i].is_empty() {
                return Err(ArenaError::InvalidTree {
                    reason: format!("leaf n{i} has children"),
                });
            }
        }
        Ok(TreeArena {
            nodes: self.nodes,
            children: self.children,
            budget: self.budget,
        })
    }
}

// ---------------------------------------------------------------------------
// Tree values
// ---------------------------------------------------------------------------

/// Per-node adversarial/cooperative values and winning flags on the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeValueTable {
    aval: Vec<ExtendedCost>,
    cval: Vec<ExtendedCost>,
}

impl TreeValueTable {
    pub fn aval(&self, id: NodeId) -> ExtendedCost {
        self.aval[id.0 as usize]
    }

    pub fn cval(&self, id: NodeId) -> ExtendedCost {
        self.cval[id.0 as usize]
    }

    pub fn in_win(&self, id: NodeId) -> bool {
        self.aval[id.0 as usize].is_finite()
    }
}

/// Single backward pass (children precede parents in reverse preorder).
/// Leaves carry their payoff; Sys nodes minimize both values; Env nodes
/// maximize the adversarial and minimize the cooperative value. Tree edges
/// carry no weight.
pub fn tree_values(t: &TreeArena) -> TreeValueTable {
    let n = t.len();
    let mut aval = vec![Infinite; n];
    let mut cval = vec![Infinite; n];
    for i in (0..n).rev() {
        let id = NodeId(i as u32);
        if t.is_leaf(id) {
            let p = t.payoff(id);
            aval[i] = p;
            cval[i] = p;
            continue;
        }
        let kids = t.children(id);
        let a_values = kids.iter().map(|(_, c)| aval[c.0 as usize]);
        let c_values = kids.iter().map(|(_, c)| cval[c.0 as usize]);
        match t.node(id).owner {
            Owner::Sys => {
                aval[i] = a_values.min().unwrap();
                cval[i] = c_values.min().unwrap();
            }
            Owner::Env => {
                aval[i] = a_values.max().unwrap();
                cval[i] = c_values.min().unwrap();
            }
        }
    }
    TreeValueTable { aval, cval }
}

/// How to compute per-node adversarial-cooperative values on the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcvalMethod {
    /// Minimum child cooperative value among children whose adversarial
    /// value does not exceed the node's.
    OneStep,
    /// Cooperative backward pass over the descendants whose adversarial
    /// value does not exceed the node's.
    Subgame,
}

/// Per-Sys-node adversarial-cooperative values; `None` on Env nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcvalTable {
    vals: Vec<Option<ExtendedCost>>,
    pub method: AcvalMethod,
}

impl AcvalTable {
    pub fn get(&self, id: NodeId) -> Option<ExtendedCost> {
        self.vals[id.0 as usize]
    }
}

pub fn tree_acval(t: &TreeArena, vt: &TreeValueTable, method: AcvalMethod) -> AcvalTable {
    let n = t.len();
    let mut vals = vec![None; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        let id = NodeId(i as u32);
        if t.node(id).owner != Owner::Sys {
            continue;
        }
        if t.is_leaf(id) {
            vals[i] = Some(t.payoff(id));
            continue;
        }
        vals[i] = Some(match method {
            AcvalMethod::OneStep => t
                .children(id)
                .iter()
                .filter(|(_, c)| vt.aval(*c) <= vt.aval(id))
                .map(|(_, c)| vt.cval(*c))
                .min()
                .expect("the adversarial witness child always qualifies"),
            AcvalMethod::Subgame => subgame_coop(t, vt, id),
        });
    }
    AcvalTable { vals, method }
}

/// Cooperative value of `top` restricted to descendants with
/// `aval <= aval(top)`. Children of a retained Env node are always retained;
/// only Sys choices can leave the bounded region.
fn subgame_coop(t: &TreeArena, vt: &TreeValueTable, top: NodeId) -> ExtendedCost {
    let bound = vt.aval(top);
    // Post-order evaluation over the subtree, skipping excluded nodes.
    fn eval(
        t: &TreeArena,
        vt: &TreeValueTable,
        bound: ExtendedCost,
        id: NodeId,
    ) -> ExtendedCost {
        if vt.aval(id) > bound {
            return Infinite;
        }
        if t.is_leaf(id) {
            return t.payoff(id);
        }
        t.children(id)
            .iter()
            .map(|(_, c)| eval(t, vt, bound, *c))
            .min()
            .unwrap()
    }
    eval(t, vt, bound, top)
}

/// Nodes where the two acval methods disagree, for diagnostics.
pub fn acval_discrepancies(
    t: &TreeArena,
    one_step: &AcvalTable,
    subgame: &AcvalTable,
) -> Vec<NodeId> {
    t.node_ids()
        .filter(|id| one_step.get(*id) != subgame.get(*id))
        .collect()
}
