//! Turn-based pursuit gridworld: Sys races to the goal cell, Env chases,
//! both step in cardinal directions; Sys moves first and pays 1 per move.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::DomainError;
use crate::game::{
    build_game, ActionId, EdgeSpec, GameGraph, GameSpec, Owner, StateId, StateSpec,
};

/// Grid cell as `[x, y]`; x grows eastward, y southward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell(pub u32, pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub width: u32,
    pub height: u32,
    pub sys_start: Cell,
    pub env_start: Cell,
    pub goal: Cell,
    #[serde(default)]
    pub lava: Vec<Cell>,
    /// Whether Sys may stay in place (Env always may, so it is never
    /// blocked).
    #[serde(default)]
    pub allow_stay: bool,
    /// Co-location is a losing capture sink when set (the default).
    #[serde(default = "default_capture")]
    pub capture: bool,
}

fn default_capture() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Turn {
    Sys,
    Env,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum GridState {
    Normal { sys: Cell, env: Cell, turn: Turn },
    Caught { turn: Turn },
}

/// Moves in a fixed order: north, south, west, east, stay. Action ids are
/// re-densified per state over the legal subset.
fn moves_from(c: Cell, width: u32, height: u32) -> Vec<Cell> {
    let mut out = Vec::with_capacity(5);
    if c.1 > 0 {
        out.push(Cell(c.0, c.1 - 1));
    }
    if c.1 + 1 < height {
        out.push(Cell(c.0, c.1 + 1));
    }
    if c.0 > 0 {
        out.push(Cell(c.0 - 1, c.1));
    }
    if c.0 + 1 < width {
        out.push(Cell(c.0 + 1, c.1));
    }
    out
}

/// Builds the alternating-turn pursuit game, exploring only the states
/// reachable from the starting placement. Any state with Sys on the goal
/// cell is a goal state and carries a decorative self-loop; capture
/// collapses into a two-state losing sink.
pub fn build_gridworld(spec: &GridSpec) -> Result<GameGraph, DomainError> {
    validate(spec)?;
    let lava: std::collections::BTreeSet<Cell> = spec.lava.iter().copied().collect();
    let in_play = |c: Cell| !lava.contains(&c);

    let mut ids: HashMap<GridState, u32> = HashMap::new();
    let mut order: Vec<GridState> = Vec::new();
    let mut queue = VecDeque::new();
    let initial = GridState::Normal {
        sys: spec.sys_start,
        env: spec.env_start,
        turn: Turn::Sys,
    };
    ids.insert(initial, 0);
    order.push(initial);
    queue.push_back(initial);

    let intern = |s: GridState,
                      ids: &mut HashMap<GridState, u32>,
                      order: &mut Vec<GridState>,
                      queue: &mut VecDeque<GridState>| {
        *ids.entry(s).or_insert_with(|| {
            let id = order.len() as u32;
            order.push(s);
            queue.push_back(s);
            id
        })
    };

    let mut edges: Vec<EdgeSpec> = Vec::new();
    let mut goal_flags: HashMap<u32, bool> = HashMap::new();

    while let Some(state) = queue.pop_front() {
        let from = ids[&state];
        let is_goal = matches!(state, GridState::Normal { sys, .. } if sys == spec.goal);
        goal_flags.insert(from, is_goal);
        if is_goal {
            edges.push(EdgeSpec {
                from: StateId(from),
                action: ActionId(0),
                to: StateId(from),
                cost: 0,
            });
            continue;
        }
        match state {
            GridState::Caught { turn } => {
                let next = GridState::Caught {
                    turn: if turn == Turn::Sys { Turn::Env } else { Turn::Sys },
                };
                let to = intern(next, &mut ids, &mut order, &mut queue);
                edges.push(EdgeSpec {
                    from: StateId(from),
                    action: ActionId(0),
                    to: StateId(to),
                    cost: if turn == Turn::Sys { 1 } else { 0 },
                });
            }
            GridState::Normal { sys, env, turn: Turn::Sys } => {
                let mut targets: Vec<Cell> =
                    moves_from(sys, spec.width, spec.height)
                        .into_iter()
                        .filter(|c| in_play(*c))
                        .collect();
                if spec.allow_stay || targets.is_empty() {
                    targets.push(sys); // stay, as option or fallback
                }
                for (k, target) in targets.iter().enumerate() {
                    let next = if spec.capture && *target == env {
                        GridState::Caught { turn: Turn::Env }
                    } else {
                        GridState::Normal { sys: *target, env, turn: Turn::Env }
                    };
                    let to = intern(next, &mut ids, &mut order, &mut queue);
                    edges.push(EdgeSpec {
                        from: StateId(from),
                        action: ActionId(k as u32),
                        to: StateId(to),
                        cost: 1,
                    });
                }
            }
            GridState::Normal { sys, env, turn: Turn::Env } => {
                let mut targets: Vec<Cell> =
                    moves_from(env, spec.width, spec.height)
                        .into_iter()
                        .filter(|c| in_play(*c) && *c != spec.goal)
                        .collect();
                targets.push(env); // Env may always stay
                for (k, target) in targets.iter().enumerate() {
                    let next = if spec.capture && *target == sys {
                        GridState::Caught { turn: Turn::Sys }
                    } else {
                        GridState::Normal { sys, env: *target, turn: Turn::Sys }
                    };
                    let to = intern(next, &mut ids, &mut order, &mut queue);
                    edges.push(EdgeSpec {
                        from: StateId(from),
                        action: ActionId(k as u32),
                        to: StateId(to),
                        cost: 0,
                    });
                }
            }
        }
    }

    // Capture collisions can merge targets: dedupe identical successors of a
    // state, keeping the first action id and re-densifying.
    let mut deduped: Vec<EdgeSpec> = Vec::new();
    {
        use std::collections::BTreeSet;
        let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
        let mut next_action: HashMap<u32, u32> = HashMap::new();
        for e in edges {
            if seen.insert((e.from.0, e.to.0)) {
                let a = next_action.entry(e.from.0).or_insert(0);
                deduped.push(EdgeSpec {
                    from: e.from,
                    action: ActionId(*a),
                    to: e.to,
                    cost: e.cost,
                });
                *a += 1;
            }
        }
    }

    let states = order
        .iter()
        .enumerate()
        .map(|(i, s)| StateSpec {
            id: StateId(i as u32),
            owner: match s {
                GridState::Normal { turn: Turn::Sys, .. } => Owner::Sys,
                GridState::Normal { turn: Turn::Env, .. } => Owner::Env,
                GridState::Caught { turn: Turn::Sys } => Owner::Sys,
                GridState::Caught { turn: Turn::Env } => Owner::Env,
            },
            goal: goal_flags[&(i as u32)],
            label: Some(match s {
                GridState::Normal { sys, .. } => format!("c{}_{}", sys.0, sys.1),
                GridState::Caught { .. } => "caught".to_string(),
            }),
        })
        .collect();

    let spec_out = GameSpec {
        states,
        initial: StateId(0),
        edges: deduped,
    };
    build_game(&spec_out).map_err(DomainError::from)
}

fn validate(spec: &GridSpec) -> Result<(), DomainError> {
    let fail = |reason: &str| {
        Err(DomainError::InvalidSpec {
            reason: reason.to_string(),
        })
    };
    if spec.width == 0 || spec.height == 0 {
        return fail("grid dimensions must be positive");
    }
    let in_bounds = |c: Cell| c.0 < spec.width && c.1 < spec.height;
    for (name, c) in [
        ("sys_start", spec.sys_start),
        ("env_start", spec.env_start),
        ("goal", spec.goal),
    ] {
        if !in_bounds(c) {
            return fail(&format!("{name} out of bounds"));
        }
    }
    if spec.lava.iter().any(|c| !in_bounds(*c)) {
        return fail("lava cell out of bounds");
    }
    if spec.sys_start == spec.env_start {
        return fail("players start on the same cell");
    }
    if spec.lava.contains(&spec.goal) {
        return fail("goal on lava");
    }
    if spec.lava.contains(&spec.sys_start) || spec.lava.contains(&spec.env_start) {
        return fail("player starts on lava");
    }
    if spec.env_start == spec.goal {
        return fail("env starts on the goal cell");
    }
    Ok(())
}
