//! Small bundled games and arenas used across tests, docs, and the CLI
//! examples.

use crate::arena::{NodeId, TreeArena, TreeArenaBuilder};
use crate::game::{
    build_game, ActionId, EdgeSpec, GameGraph, GameSpec, Owner, StateId, StateSpec,
};

fn state(id: u32, owner: Owner, goal: bool) -> StateSpec {
    StateSpec {
        id: StateId(id),
        owner,
        goal,
        label: None,
    }
}

fn edge(from: u32, action: u32, to: u32, cost: u64) -> EdgeSpec {
    EdgeSpec {
        from: StateId(from),
        action: ActionId(action),
        to: StateId(to),
        cost,
    }
}

/// A game with no winning region: the goal is reachable only with Env
/// cooperation, and one branch is a dead end. Sys does better to keep trying
/// than to give up.
///
/// States: v0 (Sys, initial), v1/v3 (Env), v2 (Sys, goal), v4 (Sys dead end)
/// with its Env partner v5.
pub fn persistence_game() -> GameGraph {
    let spec = GameSpec {
        states: vec![
            state(0, Owner::Sys, false),
            state(1, Owner::Env, false),
            state(2, Owner::Sys, true),
            state(3, Owner::Env, false),
            state(4, Owner::Sys, false),
            state(5, Owner::Env, false),
        ],
        initial: StateId(0),
        edges: vec![
            edge(0, 0, 1, 1),
            edge(0, 1, 3, 1),
            edge(1, 0, 0, 0),
            edge(1, 1, 2, 0),
            edge(2, 0, 2, 0),
            edge(3, 0, 2, 0),
            edge(3, 1, 4, 0),
            edge(4, 0, 5, 1),
            edge(5, 0, 4, 0),
        ],
    };
    build_game(&spec).expect("sample game is valid")
}

/// The eleven-state game contrasting a cheap detour that needs Env
/// cooperation (through v2/v3) with an enforceable route (through v1) whose
/// worst case is 10, plus the risky/safe split at v4.
pub fn commitment_game() -> GameGraph {
    let spec = GameSpec {
        states: vec![
            state(0, Owner::Sys, false),
            state(1, Owner::Env, false),
            state(2, Owner::Env, false),
            state(3, Owner::Sys, false),
            state(4, Owner::Sys, false),
            state(5, Owner::Env, false),
            state(6, Owner::Sys, true),
            state(7, Owner::Env, false),
            state(8, Owner::Sys, false),
            state(9, Owner::Sys, false),
            state(10, Owner::Env, false),
        ],
        initial: StateId(0),
        edges: vec![
            edge(0, 0, 1, 1),
            edge(0, 1, 2, 1),
            edge(1, 0, 4, 0),
            edge(2, 0, 3, 0),
            edge(2, 1, 6, 0),
            edge(3, 0, 2, 1),
            edge(4, 0, 5, 9),
            edge(4, 1, 7, 1),
            edge(5, 0, 6, 0),
            edge(6, 0, 6, 0),
            edge(7, 0, 8, 0),
            edge(7, 1, 9, 0),
            edge(8, 0, 10, 8),
            edge(9, 0, 10, 1),
            edge(10, 0, 6, 0),
        ],
    };
    build_game(&spec).expect("sample game is valid")
}

/// Notable internal nodes of [`asymmetry_arena`].
#[derive(Debug, Clone, Copy)]
pub struct AsymmetryNodes {
    pub root: NodeId,
    pub v1: NodeId,
    pub v2: NodeId,
    pub v3: NodeId,
    pub v4: NodeId,
    pub v5: NodeId,
    pub v6_left: NodeId,
    pub v6_right: NodeId,
    pub v7_left: NodeId,
    pub v7_right: NodeId,
    pub v8_left: NodeId,
    pub v8_right: NodeId,
    pub v9_left: NodeId,
    pub v9_right: NodeId,
    pub v10: NodeId,
}

/// A hand-built arena whose shared suffix appears under two different
/// histories, so the same game state carries different allowed choices
/// depending on the path taken. Budget 10; leaf payoffs as annotated.
pub fn asymmetry_arena() -> (TreeArena, AsymmetryNodes) {
    let s = StateId;
    let mut b = TreeArenaBuilder::new(10, s(0), Owner::Sys);
    let root = b.root();

    let v1 = b.add_internal(root, s(1), Owner::Env, 0);
    let v3 = b.add_internal(v1, s(3), Owner::Sys, 0);
    let v5 = b.add_internal(v3, s(5), Owner::Env, 0);
    b.add_goal_leaf(v5, s(5), Owner::Sys, 3);
    b.add_goal_leaf(v5, s(5), Owner::Sys, 4);
    let v6_left = b.add_internal(v3, s(6), Owner::Env, 0);
    let v7_left = b.add_internal(v6_left, s(7), Owner::Sys, 0);
    let v8_left = b.add_internal(v7_left, s(8), Owner::Env, 0);
    b.add_goal_leaf(v8_left, s(8), Owner::Sys, 2);
    b.add_goal_leaf(v8_left, s(8), Owner::Sys, 9);
    let v9_left = b.add_internal(v7_left, s(9), Owner::Env, 0);
    b.add_goal_leaf(v9_left, s(9), Owner::Sys, 5);
    b.add_goal_leaf(v9_left, s(9), Owner::Sys, 10);
    b.add_dead_leaf(v1, s(1), Owner::Sys);

    let v2 = b.add_internal(root, s(2), Owner::Env, 0);
    let v4 = b.add_internal(v2, s(4), Owner::Sys, 0);
    let v6_right = b.add_internal(v4, s(6), Owner::Env, 0);
    let v7_right = b.add_internal(v6_right, s(7), Owner::Sys, 0);
    let v8_right = b.add_internal(v7_right, s(8), Owner::Env, 0);
    b.add_goal_leaf(v8_right, s(8), Owner::Sys, 2);
    b.add_goal_leaf(v8_right, s(8), Owner::Sys, 9);
    let v9_right = b.add_internal(v7_right, s(9), Owner::Env, 0);
    b.add_goal_leaf(v9_right, s(9), Owner::Sys, 5);
    b.add_goal_leaf(v9_right, s(9), Owner::Sys, 10);
    b.add_dead_leaf(v2, s(2), Owner::Sys);

    let v10 = b.add_internal(root, s(10), Owner::Env, 0);
    b.add_dead_leaf(v10, s(10), Owner::Sys);

    let arena = b.finish().expect("sample arena is well-formed");
    (
        arena,
        AsymmetryNodes {
            root,
            v1,
            v2,
            v3,
            v4,
            v5,
            v6_left,
            v6_right,
            v7_left,
            v7_right,
            v8_left,
            v8_right,
            v9_left,
            v9_right,
            v10,
        },
    )
}
