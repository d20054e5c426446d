//! Deterministic finite automata over state labels, and the product game
//! whose objective is DFA acceptance.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::DomainError;
use crate::game::{
    build_game, ActionId, EdgeSpec, GameGraph, GameSpec, Owner, StateId, StateSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaEdge {
    pub from: u32,
    pub symbol: String,
    pub to: u32,
}

/// Wire format for a DFA.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaSpec {
    pub states: Vec<u32>,
    pub initial: u32,
    pub accepting: Vec<u32>,
    pub alphabet: Vec<String>,
    pub transitions: Vec<DfaEdge>,
}

/// A validated DFA with a total transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<u32>,
    initial: u32,
    accepting: BTreeSet<u32>,
    alphabet: BTreeSet<String>,
    transitions: BTreeMap<(u32, String), u32>,
}

impl Dfa {
    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting.contains(&q)
    }

    pub fn alphabet(&self) -> impl Iterator<Item = &str> {
        self.alphabet.iter().map(String::as_str)
    }

    pub fn step(&self, q: u32, symbol: &str) -> Option<u32> {
        self.transitions.get(&(q, symbol.to_string())).copied()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

pub fn build_dfa(spec: &DfaSpec) -> Result<Dfa, DomainError> {
    let mut states = spec.states.clone();
    states.sort_unstable();
    for w in states.windows(2) {
        if w[0] == w[1] {
            return Err(DomainError::DuplicateDfaState { state: w[0] });
        }
    }
    let known = |q: u32| states.binary_search(&q).is_ok();
    if !known(spec.initial) {
        return Err(DomainError::DanglingDfaState { state: spec.initial });
    }
    for q in &spec.accepting {
        if !known(*q) {
            return Err(DomainError::DanglingDfaState { state: *q });
        }
    }
    let alphabet: BTreeSet<String> = spec.alphabet.iter().cloned().collect();
    let mut transitions = BTreeMap::new();
    for t in &spec.transitions {
        if !known(t.from) {
            return Err(DomainError::DanglingDfaState { state: t.from });
        }
        if !known(t.to) {
            return Err(DomainError::DanglingDfaState { state: t.to });
        }
        if !alphabet.contains(&t.symbol) {
            return Err(DomainError::SymbolOutsideAlphabet {
                symbol: t.symbol.clone(),
            });
        }
        if transitions
            .insert((t.from, t.symbol.clone()), t.to)
            .is_some()
        {
            return Err(DomainError::DuplicateTransition {
                state: t.from,
                symbol: t.symbol.clone(),
            });
        }
    }
    for q in &states {
        for s in &alphabet {
            if !transitions.contains_key(&(*q, s.clone())) {
                return Err(DomainError::NotTotal {
                    state: *q,
                    symbol: s.clone(),
                });
            }
        }
    }
    Ok(Dfa {
        states,
        initial: spec.initial,
        accepting: spec.accepting.iter().copied().collect(),
        alphabet,
        transitions,
    })
}

/// Reads the per-state labels recorded in the graph.
pub fn labeling_from_graph(g: &GameGraph) -> Result<BTreeMap<StateId, String>, DomainError> {
    g.states()
        .map(|v| {
            g.label(v)
                .map(|l| (v, l.to_string()))
                .ok_or(DomainError::MissingLabel { state: v })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ProductState {
    Game(StateId, u32),
    /// Base play terminated (or got stuck) without DFA acceptance: an
    /// alternating losing sink.
    SinkSys,
    SinkEnv,
}

/// Product of a game with a DFA run over state labels. The automaton reads
/// the label of the destination state of each move (and of the initial state
/// up front); the product's goal states are exactly those whose automaton
/// component accepts — the base game's own goal markings do not carry over.
/// A base-game goal state reached without acceptance ends the play, which
/// the product models as a losing sink. Ownership and costs are inherited,
/// unreachable pairs are pruned, and accepting states get a decorative
/// self-loop.
pub fn product_with_dfa(
    g: &GameGraph,
    d: &Dfa,
    labeling: &BTreeMap<StateId, String>,
) -> Result<GameGraph, DomainError> {
    let label_of = |v: StateId| -> Result<&String, DomainError> {
        labeling.get(&v).ok_or(DomainError::MissingLabel { state: v })
    };
    let step = |q: u32, v: StateId| -> Result<u32, DomainError> {
        let sym = label_of(v)?;
        d.step(q, sym).ok_or_else(|| DomainError::LabelOutsideAlphabet {
            state: v,
            symbol: sym.clone(),
        })
    };

    fn intern(
        s: ProductState,
        ids: &mut HashMap<ProductState, u32>,
        queue: &mut VecDeque<ProductState>,
    ) -> u32 {
        if let Some(id) = ids.get(&s) {
            return *id;
        }
        let id = ids.len() as u32;
        ids.insert(s, id);
        queue.push_back(s);
        id
    }

    let q0 = step(d.initial(), g.initial())?;
    let start = ProductState::Game(g.initial(), q0);
    let mut ids: HashMap<ProductState, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    ids.insert(start, 0);
    queue.push_back(start);

    let mut states_out: Vec<StateSpec> = Vec::new();
    let mut edges_out: Vec<EdgeSpec> = Vec::new();

    while let Some(ps) = queue.pop_front() {
        let from = ids[&ps];
        match ps {
            ProductState::SinkSys => {
                states_out.push(StateSpec {
                    id: StateId(from),
                    owner: Owner::Sys,
                    goal: false,
                    label: Some("sink".into()),
                });
                let to = intern(ProductState::SinkEnv, &mut ids, &mut queue);
                edges_out.push(EdgeSpec {
                    from: StateId(from),
                    action: ActionId(0),
                    to: StateId(to),
                    cost: 1,
                });
            }
            ProductState::SinkEnv => {
                states_out.push(StateSpec {
                    id: StateId(from),
                    owner: Owner::Env,
                    goal: false,
                    label: Some("sink".into()),
                });
                let to = intern(ProductState::SinkSys, &mut ids, &mut queue);
                edges_out.push(EdgeSpec {
                    from: StateId(from),
                    action: ActionId(0),
                    to: StateId(to),
                    cost: 0,
                });
            }
            ProductState::Game(v, q) => {
                let accepting = d.is_accepting(q);
                states_out.push(StateSpec {
                    id: StateId(from),
                    owner: g.owner(v),
                    goal: accepting,
                    label: Some(label_of(v)?.clone()),
                });
                if accepting {
                    edges_out.push(EdgeSpec {
                        from: StateId(from),
                        action: ActionId(0),
                        to: StateId(from),
                        cost: 0,
                    });
                    continue;
                }
                if g.is_goal(v) {
                    // Base play over, objective unmet.
                    let (sink, cost) = match g.owner(v) {
                        Owner::Sys => (ProductState::SinkEnv, 1),
                        Owner::Env => (ProductState::SinkSys, 0),
                    };
                    let to = intern(sink, &mut ids, &mut queue);
                    edges_out.push(EdgeSpec {
                        from: StateId(from),
                        action: ActionId(0),
                        to: StateId(to),
                        cost,
                    });
                    continue;
                }
                for a in g.actions(v) {
                    let q2 = step(q, a.to)?;
                    let to = intern(ProductState::Game(a.to, q2), &mut ids, &mut queue);
                    edges_out.push(EdgeSpec {
                        from: StateId(from),
                        action: a.action,
                        to: StateId(to),
                        cost: a.cost,
                    });
                }
            }
        }
    }

    states_out.sort_by_key(|s| s.id);
    let spec = GameSpec {
        states: states_out,
        initial: StateId(0),
        edges: edges_out,
    };
    build_game(&spec).map_err(DomainError::from)
}
