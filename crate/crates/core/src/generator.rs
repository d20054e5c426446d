//! Seeded random game generation for oracle testing.

use crate::game::{
    build_game, ActionId, EdgeSpec, GameGraph, GameSpec, Owner, StateId, StateSpec,
};
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct RandomGameConfig {
    pub max_states: usize,
    pub max_cost: u64,
    pub max_budget: u64,
}

impl Default for RandomGameConfig {
    fn default() -> Self {
        RandomGameConfig {
            max_states: 8,
            max_cost: 3,
            max_budget: 8,
        }
    }
}

/// Deterministically draws a small valid game and a budget from a seed.
/// State 0 is the Sys-owned initial state and state 1 is Env-owned, so both
/// owners always have a nonempty successor pool. Goal states get a
/// decorative self-loop.
pub fn random_game(cfg: &RandomGameConfig, seed: u64) -> (GameGraph, u64) {
    let mut rng = SplitMix64::new(seed);
    let n = rng.range(3, cfg.max_states.max(3) as u64) as usize;

    let owners: Vec<Owner> = (0..n)
        .map(|i| match i {
            0 => Owner::Sys,
            1 => Owner::Env,
            _ => {
                if rng.pick(2) == 0 {
                    Owner::Sys
                } else {
                    Owner::Env
                }
            }
        })
        .collect();
    let goals: Vec<bool> = (0..n).map(|i| i >= 2 && rng.pick(3) == 0).collect();

    let states: Vec<StateSpec> = (0..n)
        .map(|i| StateSpec {
            id: StateId(i as u32),
            owner: owners[i],
            goal: goals[i],
            label: None,
        })
        .collect();

    let mut edges = Vec::new();
    for i in 0..n {
        if goals[i] {
            edges.push(EdgeSpec {
                from: StateId(i as u32),
                action: ActionId(0),
                to: StateId(i as u32),
                cost: 0,
            });
            continue;
        }
        let mut pool: Vec<u32> = (0..n)
            .filter(|j| owners[*j] != owners[i])
            .map(|j| j as u32)
            .collect();
        let degree = match rng.pick(6) {
            0..=2 => 1,
            3..=4 => 2,
            _ => 3,
        }
        .min(pool.len());
        for a in 0..degree {
            let k = rng.pick(pool.len());
            let to = pool.swap_remove(k);
            let cost = match owners[i] {
                Owner::Sys => rng.range(1, cfg.max_cost.max(1)),
                Owner::Env => 0,
            };
            edges.push(EdgeSpec {
                from: StateId(i as u32),
                action: ActionId(a as u32),
                to: StateId(to),
                cost,
            });
        }
    }

    let spec = GameSpec {
        states,
        initial: StateId(0),
        edges,
    };
    let g = build_game(&spec).expect("generated game is valid by construction");
    // Bias the budget upward so reachable-goal instances are common.
    let budget = rng
        .range(1, cfg.max_budget.max(1))
        .max(rng.range(1, cfg.max_budget.max(1)));
    (g, budget)
}
