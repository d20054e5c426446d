//! Play simulation: runs a tree strategy against a configurable Env policy
//! and records the trace.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{NodeId, NodeKind, TreeArena, TreeValueTable};
use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::game::{ActionId, Owner, StateId};
use crate::rng::SplitMix64;
use crate::synthesis::{SynthesisError, TreeStrategy};

/// How the Env player resolves its choices. The adversarial and cooperative
/// policies follow the tree-value witnesses (argmax adversarial value,
/// argmin cooperative value; lowest action id on ties).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvPolicy {
    Adversarial,
    Cooperative,
    Random { seed: u64 },
    Scripted { actions: Vec<ActionId> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RolloutError {
    #[error("scripted action list exhausted at node {node}")]
    ScriptExhausted { node: NodeId },
    #[error("scripted action {action} is not available at node {node}")]
    InvalidScriptedAction { node: NodeId, action: ActionId },
    #[error(transparent)]
    Strategy(#[from] SynthesisError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub node: NodeId,
    pub state: StateId,
    pub actor: Owner,
    pub action: ActionId,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    GoalReached { payoff: u64 },
    BudgetExceeded,
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
    pub total: ExtendedCost,
}

/// Walks the arena from the root, following the strategy at Sys nodes and
/// the Env policy otherwise, until a leaf or the step limit. Deterministic
/// given the seed.
pub fn rollout(
    t: &TreeArena,
    vt: &TreeValueTable,
    sigma: &TreeStrategy,
    env: &EnvPolicy,
    max_steps: usize,
) -> Result<Trace, RolloutError> {
    let mut rng = match env {
        EnvPolicy::Random { seed } => Some(SplitMix64::new(*seed)),
        _ => None,
    };
    let mut script = match env {
        EnvPolicy::Scripted { actions } => Some(actions.iter().copied()),
        _ => None,
    };

    let mut steps = Vec::new();
    let mut cur = t.root();
    while steps.len() < max_steps {
        if t.is_leaf(cur) {
            let outcome = match t.node(cur).kind {
                NodeKind::GoalLeaf => Outcome::GoalReached {
                    payoff: t.node(cur).accumulated,
                },
                NodeKind::DeadLeaf => Outcome::BudgetExceeded,
                NodeKind::Internal => unreachable!(),
            };
            let total = match outcome {
                Outcome::GoalReached { payoff } => Finite(payoff),
                _ => Infinite,
            };
            return Ok(Trace {
                steps,
                outcome,
                total,
            });
        }
        let node = t.node(cur);
        let next = match node.owner {
            Owner::Sys => {
                let child = *sigma
                    .choices
                    .get(&cur)
                    .ok_or(SynthesisError::IncompleteStrategy { node: cur })?;
                if !t.children(cur).iter().any(|(_, c)| *c == child) {
                    return Err(SynthesisError::InvalidChoice { node: cur, child }.into());
                }
                child
            }
            Owner::Env => {
                let kids = t.children(cur);
                match env {
                    EnvPolicy::Adversarial => {
                        kids.iter()
                            .max_by(|(a1, c1), (a2, c2)| {
                                vt.aval(*c1)
                                    .cmp(&vt.aval(*c2))
                                    .then(a2.cmp(a1)) // lowest action id wins ties
                            })
                            .unwrap()
                            .1
                    }
                    EnvPolicy::Cooperative => {
                        kids.iter()
                            .min_by(|(a1, c1), (a2, c2)| {
                                vt.cval(*c1).cmp(&vt.cval(*c2)).then(a1.cmp(a2))
                            })
                            .unwrap()
                            .1
                    }
                    EnvPolicy::Random { .. } => {
                        let rng = rng.as_mut().unwrap();
                        kids[rng.pick(kids.len())].1
                    }
                    EnvPolicy::Scripted { .. } => {
                        let action = script
                            .as_mut()
                            .unwrap()
                            .next()
                            .ok_or(RolloutError::ScriptExhausted { node: cur })?;
                        kids.iter()
                            .find(|(a, _)| *a == action)
                            .ok_or(RolloutError::InvalidScriptedAction { node: cur, action })?
                            .1
                    }
                }
            }
        };
        let child = t.node(next);
        steps.push(TraceStep {
            node: cur,
            state: node.state,
            actor: node.owner,
            action: child.action_from_parent.unwrap(),
            cost: child.accumulated.saturating_sub(node.accumulated),
        });
        cur = next;
    }
    let total = Finite(steps.iter().map(|s| s.cost).sum());
    Ok(Trace {
        steps,
        outcome: Outcome::StepLimit,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{tree_acval, tree_values, unroll, AcvalMethod};
    use crate::game::StateId;
    use crate::samples;
    use crate::synthesis::lift_memoryless;
    use crate::values::MemorylessStrategy;
    use std::collections::BTreeMap;

    fn positional(
        g: &crate::game::GameGraph,
        pairs: &[(u32, u32)],
    ) -> MemorylessStrategy {
        let choices = pairs
            .iter()
            .map(|(from, to)| {
                let a = g.action_to(StateId(*from), StateId(*to)).unwrap();
                (StateId(*from), a.action)
            })
            .collect::<BTreeMap<_, _>>();
        MemorylessStrategy { choices }
    }

    #[test]
    fn committed_strategy_outcomes() {
        let g = samples::commitment_game();
        let t = unroll(&g, 12).unwrap();
        let vt = tree_values(&t);
        let sigma = lift_memoryless(&t, &g, &positional(&g, &[(0, 1), (4, 7)]));

        let coop = rollout(&t, &vt, &sigma, &EnvPolicy::Cooperative, 100).unwrap();
        assert_eq!(coop.outcome, Outcome::GoalReached { payoff: 3 });
        assert_eq!(coop.total, Finite(3));
        assert_eq!(
            coop.total,
            Finite(coop.steps.iter().map(|s| s.cost).sum::<u64>())
        );

        let adv = rollout(&t, &vt, &sigma, &EnvPolicy::Adversarial, 100).unwrap();
        assert_eq!(adv.outcome, Outcome::GoalReached { payoff: 10 });
    }

    #[test]
    fn detour_strategy_is_denied_by_adversary() {
        let g = samples::commitment_game();
        let t = unroll(&g, 12).unwrap();
        let vt = tree_values(&t);
        let sigma = lift_memoryless(&t, &g, &positional(&g, &[(0, 2), (3, 2)]));
        let adv = rollout(&t, &vt, &sigma, &EnvPolicy::Adversarial, 100).unwrap();
        assert_eq!(adv.outcome, Outcome::BudgetExceeded);
        assert_eq!(adv.total, Infinite);
        let coop = rollout(&t, &vt, &sigma, &EnvPolicy::Cooperative, 100).unwrap();
        assert!(matches!(coop.outcome, Outcome::GoalReached { .. }));
    }

    #[test]
    fn random_rollouts_reproducible() {
        let g = samples::commitment_game();
        let t = unroll(&g, 12).unwrap();
        let vt = tree_values(&t);
        let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
        let set = crate::synthesis::synthesize_admissible(&t, &vt, &acv);
        let sigma = crate::synthesis::extract_strategy(
            &t,
            &vt,
            &acv,
            &set,
            crate::synthesis::ExtractPolicy::MinCvalThenLowestId,
        );
        for seed in [0u64, 1, 99] {
            let a = rollout(&t, &vt, &sigma, &EnvPolicy::Random { seed }, 100).unwrap();
            let b = rollout(&t, &vt, &sigma, &EnvPolicy::Random { seed }, 100).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn scripted_rollout_and_exhaustion() {
        let g = samples::commitment_game();
        let t = unroll(&g, 12).unwrap();
        let vt = tree_values(&t);
        let sigma = lift_memoryless(&t, &g, &positional(&g, &[(0, 1), (4, 7)]));
        // Env plays v1 -> v4 (only action), then v7 -> v9, then v10 -> v6.
        let env = EnvPolicy::Scripted {
            actions: vec![ActionId(0), ActionId(1), ActionId(0)],
        };
        let tr = rollout(&t, &vt, &sigma, &env, 100).unwrap();
        assert_eq!(tr.outcome, Outcome::GoalReached { payoff: 3 });

        let env = EnvPolicy::Scripted { actions: vec![ActionId(0)] };
        assert!(matches!(
            rollout(&t, &vt, &sigma, &env, 100),
            Err(RolloutError::ScriptExhausted { .. })
        ));
    }

    #[test]
    fn step_limit_reported() {
        let g = samples::commitment_game();
        let t = unroll(&g, 12).unwrap();
        let vt = tree_values(&t);
        let sigma = lift_memoryless(&t, &g, &positional(&g, &[(0, 1), (4, 7)]));
        let tr = rollout(&t, &vt, &sigma, &EnvPolicy::Cooperative, 2).unwrap();
        assert_eq!(tr.outcome, Outcome::StepLimit);
        assert_eq!(tr.steps.len(), 2);
    }
}
