//! Wire formats shared with the CLI: DOT rendering and JSON report shapes.
//!
//! Sys states render as circles and Env states as boxes; goal states get a
//! double border; edges are labeled `action:cost`.

use serde::{Deserialize, Serialize};

use crate::arena::{ArenaStats, NodeId, NodeKind, TreeArena};
use crate::cost::ExtendedCost;
use crate::game::{GameGraph, Owner, StateId};
use crate::rollout::Trace;
use crate::synthesis::{StrategySet, SynthesisMode, TreeStrategy};
use crate::values::{Region, ValueTable};

pub fn game_to_dot(g: &GameGraph) -> String {
    let mut out = String::from("digraph game {\n  rankdir=LR;\n");
    for v in g.states() {
        let shape = match g.owner(v) {
            Owner::Sys => "circle",
            Owner::Env => "box",
        };
        let peripheries = if g.is_goal(v) { 2 } else { 1 };
        let mut attrs = format!("shape={shape}, peripheries={peripheries}");
        if v == g.initial() {
            attrs.push_str(", style=bold");
        }
        out.push_str(&format!("  v{} [label=\"v{}\", {attrs}];\n", v.0, v.0));
    }
    for v in g.states() {
        for a in g.actions(v) {
            out.push_str(&format!(
                "  v{} -> v{} [label=\"a{}:{}\"];\n",
                v.0, a.to.0, a.action.0, a.cost
            ));
        }
    }
    out.push_str("}\n");
    out
}

pub fn arena_to_dot(t: &TreeArena) -> String {
    let mut out = String::from("digraph arena {\n");
    for id in t.node_ids() {
        let n = t.node(id);
        let shape = match n.owner {
            Owner::Sys => "circle",
            Owner::Env => "box",
        };
        let (peripheries, extra) = match n.kind {
            NodeKind::GoalLeaf => (2, ", style=filled"),
            NodeKind::DeadLeaf => (1, ", style=dashed"),
            NodeKind::Internal => (1, ""),
        };
        out.push_str(&format!(
            "  n{} [label=\"v{}@{}\", shape={shape}, peripheries={peripheries}{extra}];\n",
            id.0, n.state.0, n.accumulated
        ));
    }
    for id in t.node_ids() {
        for (a, c) in t.children(id) {
            out.push_str(&format!("  n{} -> n{} [label=\"a{}\"];\n", id.0, c.0, a.0));
        }
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// JSON report shapes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateValuesEntry {
    pub id: StateId,
    pub aval: ExtendedCost,
    pub cval: ExtendedCost,
    pub acval: ExtendedCost,
    pub region: Region,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValuesReport {
    pub initial: StateId,
    pub states: Vec<StateValuesEntry>,
}

pub fn values_report(
    g: &GameGraph,
    adv: &ValueTable,
    coop: &ValueTable,
    regions: &crate::values::RegionMap,
) -> ValuesReport {
    ValuesReport {
        initial: g.initial(),
        states: g
            .states()
            .map(|v| StateValuesEntry {
                id: v,
                aval: adv.value(g, v),
                cval: coop.value(g, v),
                acval: crate::values::acval_graph(g, v, adv),
                region: regions.region(g, v),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnrollReport {
    pub stats: ArenaStats,
    pub root_aval: ExtendedCost,
    pub root_cval: ExtendedCost,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArenaNodeDump {
    pub id: NodeId,
    pub state: StateId,
    pub accumulated: u64,
    pub owner: Owner,
    pub parent: Option<NodeId>,
    pub action: Option<u32>,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArenaDump {
    pub budget: u64,
    pub nodes: Vec<ArenaNodeDump>,
}

pub fn arena_dump(t: &TreeArena) -> ArenaDump {
    ArenaDump {
        budget: t.budget(),
        nodes: t
            .node_ids()
            .map(|id| {
                let n = t.node(id);
                ArenaNodeDump {
                    id,
                    state: n.state,
                    accumulated: n.accumulated,
                    owner: n.owner,
                    parent: n.parent,
                    action: n.action_from_parent.map(|a| a.0),
                    kind: n.kind,
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AllowedEntry {
    pub node: NodeId,
    pub state: StateId,
    pub accumulated: u64,
    pub allowed: Vec<NodeId>,
}

/// One transition of the extracted strategy viewed as a transducer whose
/// memory states are tree nodes: in `memory_state`, after the Env action
/// `input` (absent at the root), the strategy outputs `output`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransducerStep {
    pub memory_state: NodeId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<u32>,
    pub output: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub mode: SynthesisMode,
    pub budget: u64,
    pub all_admissible: bool,
    pub nodes: Vec<AllowedEntry>,
    pub extracted: TreeStrategy,
    pub transducer: Vec<TransducerStep>,
}

pub fn synthesis_report(
    t: &TreeArena,
    set: &StrategySet,
    extracted: &TreeStrategy,
) -> SynthesisReport {
    let nodes = set
        .allowed
        .iter()
        .map(|(node, allowed)| AllowedEntry {
            node: *node,
            state: t.node(*node).state,
            accumulated: t.node(*node).accumulated,
            allowed: allowed.clone(),
        })
        .collect();

    // Transducer view of the extracted strategy over its reachable nodes.
    let mut transducer = Vec::new();
    let mut stack = vec![t.root()];
    while let Some(n) = stack.pop() {
        if t.is_leaf(n) {
            continue;
        }
        match t.node(n).owner {
            Owner::Sys => {
                if let Some(child) = extracted.choices.get(&n) {
                    let action = t.node(*child).action_from_parent.unwrap();
                    transducer.push(TransducerStep {
                        memory_state: n,
                        input: t.node(n).action_from_parent.map(|a| a.0),
                        output: action.0,
                    });
                    stack.push(*child);
                }
            }
            Owner::Env => {
                for (_, c) in t.children(n) {
                    stack.push(*c);
                }
            }
        }
    }
    transducer.sort_by_key(|s| s.memory_state);

    SynthesisReport {
        mode: set.mode,
        budget: set.budget,
        all_admissible: set.all_admissible,
        nodes,
        extracted: extracted.clone(),
        transducer,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceReport {
    pub seed: Option<u64>,
    pub trace: Trace,
}

/// Plain-text transcript of a trace.
pub fn transcript(trace: &Trace) -> String {
    let mut out = String::new();
    for s in &trace.steps {
        out.push_str(&format!(
            "{} {} at {} ({}): action {} cost {}\n",
            s.actor, s.state, s.node, s.actor, s.action, s.cost
        ));
    }
    out.push_str(&format!("outcome: {:?}, total {}\n", trace.outcome, trace.total));
    out
}
