//! Randomized agreement harness: checks the synthesized strategy sets
//! against the brute-force oracle on seeded random games, plus the
//! existence, complement, positional-strategy, and enforcement properties.

use serde::{Deserialize, Serialize};

use crate::arena::{tree_acval, tree_values, unroll_with_cap, AcvalMethod, DEFAULT_NODE_CAP};
use crate::cost::Finite;
use crate::game::Owner;
use crate::generator::{random_game, RandomGameConfig};
use crate::oracle::{
    brute_force_admissible_with_cap, check_complement, decision_nodes, def6_acval,
    enumerate_strategies_with_cap, canonicalize, ComplementLabel,
};
use crate::rng::SplitMix64;
use crate::rollout::{rollout, EnvPolicy, Outcome};
use crate::synthesis::{
    extract_strategy, is_member, lift_memoryless, synthesize_admissible,
    synthesize_admissible_winning, ExtractPolicy, SynthesisMode,
};
use crate::values::wcoop_memoryless;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleCheckConfig {
    pub seed: u64,
    pub games: usize,
    pub max_states: usize,
    pub max_cost: u64,
    pub max_budget: u64,
    /// Cap on enumerated Sys/Env vectors per game; larger draws are skipped.
    pub enum_cap: u64,
    pub node_cap: usize,
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        OracleCheckConfig {
            seed: 0,
            games: 200,
            max_states: 8,
            max_cost: 3,
            max_budget: 8,
            enum_cap: 512,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameReport {
    pub index: usize,
    pub seed: u64,
    pub states: usize,
    pub budget: u64,
    pub tree_nodes: usize,
    pub sys_vectors: u64,
    pub env_vectors: u64,
    pub all_admissible: bool,
    pub admissible_count: usize,
    pub winning_count: usize,
    /// Strategies whose synthesized membership disagrees with the oracle.
    pub membership_mismatches: usize,
    /// Strategies labeled both-or-neither by the complement check.
    pub complement_failures: usize,
    /// Synthesized set empty although the oracle found members.
    pub emptiness_failures: usize,
    /// Positional worst-case-cooperative strategy rejected by the winning
    /// membership test (only checked from winning initial states).
    pub wcoop_lift_failures: usize,
    /// Extracted winning strategies missing the exact optimal adversarial
    /// payoff against the adversarial witness (winning roots only).
    pub enforcement_failures: usize,
}

impl GameReport {
    pub fn clean(&self) -> bool {
        self.membership_mismatches == 0
            && self.complement_failures == 0
            && self.emptiness_failures == 0
            && self.wcoop_lift_failures == 0
            && self.enforcement_failures == 0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleCheckReport {
    pub config: OracleCheckConfig,
    pub games: Vec<GameReport>,
    pub skipped: usize,
    pub mismatch_details: Vec<String>,
}

impl OracleCheckReport {
    pub fn total_mismatches(&self) -> usize {
        self.games
            .iter()
            .map(|g| {
                g.membership_mismatches
                    + g.complement_failures
                    + g.emptiness_failures
                    + g.wcoop_lift_failures
                    + g.enforcement_failures
            })
            .sum()
    }

    pub fn all_clean(&self) -> bool {
        self.games.iter().all(GameReport::clean)
    }
}

/// Runs the full agreement suite. Deterministic in the config.
pub fn run_oracle_check(cfg: &OracleCheckConfig) -> OracleCheckReport {
    let game_cfg = RandomGameConfig {
        max_states: cfg.max_states,
        max_cost: cfg.max_cost,
        max_budget: cfg.max_budget,
    };
    let mut seed_rng = SplitMix64::new(cfg.seed);
    let mut games = Vec::with_capacity(cfg.games);
    let mut skipped = 0usize;
    let mut details = Vec::new();

    let max_attempts = cfg.games.saturating_mul(64);
    let mut attempts = 0usize;
    while games.len() < cfg.games && attempts < max_attempts {
        attempts += 1;
        let game_seed = seed_rng.next_u64();
        let (g, budget) = random_game(&game_cfg, game_seed);
        let Ok(t) = unroll_with_cap(&g, budget, cfg.node_cap) else {
            skipped += 1;
            continue;
        };
        let sys_nodes = decision_nodes(&t, Owner::Sys);
        let Ok(sys_all) = enumerate_strategies_with_cap(&t, Owner::Sys, cfg.enum_cap) else {
            skipped += 1;
            continue;
        };
        let Ok(env_all) = enumerate_strategies_with_cap(&t, Owner::Env, cfg.enum_cap) else {
            skipped += 1;
            continue;
        };

        let vt = tree_values(&t);
        let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
        let adm_set = synthesize_admissible(&t, &vt, &acv);
        let win_set = synthesize_admissible_winning(&t, &vt, &acv);
        let bf_adm = brute_force_admissible_with_cap(&t, &vt, SynthesisMode::Admissible, cfg.enum_cap)
            .expect("within cap");
        let bf_win = brute_force_admissible_with_cap(
            &t,
            &vt,
            SynthesisMode::AdmissibleWinning,
            cfg.enum_cap,
        )
        .expect("within cap");
        let def6 = def6_acval(&t, &vt);

        let mut report = GameReport {
            index: games.len(),
            seed: game_seed,
            states: g.len(),
            budget,
            tree_nodes: t.len(),
            sys_vectors: sys_all.len() as u64,
            env_vectors: env_all.len() as u64,
            all_admissible: adm_set.all_admissible,
            admissible_count: bf_adm.len(),
            winning_count: bf_win.len(),
            membership_mismatches: 0,
            complement_failures: 0,
            emptiness_failures: 0,
            wcoop_lift_failures: 0,
            enforcement_failures: 0,
        };

        // Membership agreement and complement labels, per canonical vector.
        let mut seen = std::collections::BTreeSet::new();
        for s in &sys_all {
            let c = canonicalize(&t, &sys_nodes, s);
            if !seen.insert(c.picks.clone()) {
                continue;
            }
            let sigma = crate::oracle::vector_to_strategy(&t, &c);
            for (set, bf) in [(&adm_set, &bf_adm), (&win_set, &bf_win)] {
                let member = is_member(&t, &vt, &acv, set, &sigma) == Ok(true);
                let oracle_member = bf.contains(&c);
                if member != oracle_member {
                    report.membership_mismatches += 1;
                    if details.len() < 32 {
                        details.push(format!(
                            "game {} (seed {game_seed:#x}, budget {budget}): {:?} membership {member} vs oracle {oracle_member} for {:?}",
                            report.index, set.mode, c.picks
                        ));
                    }
                }
            }
            match check_complement(&t, &vt, &def6, &c) {
                Ok(ComplementLabel::SatisfiesAdmissible) => {
                    if !bf_adm.contains(&c) {
                        report.complement_failures += 1;
                    }
                }
                Ok(ComplementLabel::SatisfiesDominated) => {
                    if bf_adm.contains(&c) {
                        report.complement_failures += 1;
                    }
                }
                Err(_) => report.complement_failures += 1,
            }
        }

        // Existence: the oracle sets must be nonempty, and extraction must
        // produce members (unless everything is admissible already).
        if bf_adm.is_empty() || bf_win.is_empty() {
            report.emptiness_failures += 1;
        }
        for (set, _) in [(&adm_set, 0), (&win_set, 1)] {
            let sigma = extract_strategy(&t, &vt, &acv, set, ExtractPolicy::MinCvalThenLowestId);
            if is_member(&t, &vt, &acv, set, &sigma) != Ok(true) {
                report.emptiness_failures += 1;
            }
        }

        // Positional worst-case cooperative strategy, lifted onto the tree,
        // is admissible winning from winning initial states.
        if vt.in_win(t.root()) {
            let lifted = lift_memoryless(&t, &g, &wcoop_memoryless(&g));
            if is_member(&t, &vt, &acv, &win_set, &lifted) != Ok(true) {
                report.wcoop_lift_failures += 1;
                if details.len() < 32 {
                    details.push(format!(
                        "game {} (seed {game_seed:#x}, budget {budget}): wcoop lift rejected",
                        report.index
                    ));
                }
            }

            // Enforcement: extracted winning strategies hit exactly the root
            // adversarial value against the adversarial witness.
            let root_aval = vt.aval(t.root());
            for policy in [
                ExtractPolicy::MinCvalThenLowestId,
                ExtractPolicy::SeededRandom(game_seed),
                ExtractPolicy::SeededRandom(game_seed ^ 0xFFFF),
            ] {
                let sigma = extract_strategy(&t, &vt, &acv, &win_set, policy);
                let trace = rollout(&t, &vt, &sigma, &EnvPolicy::Adversarial, t.len() + 1)
                    .expect("complete strategy");
                let ok = matches!(trace.outcome, Outcome::GoalReached { payoff }
                    if Finite(payoff) == root_aval && payoff <= budget);
                if !ok {
                    report.enforcement_failures += 1;
                }
            }
        }

        games.push(report);
    }

    OracleCheckReport {
        config: cfg.clone(),
        games,
        skipped,
        mismatch_details: details,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_agreement_run_is_clean() {
        let cfg = OracleCheckConfig {
            seed: 11,
            games: 25,
            enum_cap: 256,
            ..OracleCheckConfig::default()
        };
        let report = run_oracle_check(&cfg);
        assert_eq!(report.games.len(), 25);
        assert!(
            report.all_clean(),
            "mismatches: {:?}",
            report.mismatch_details
        );
    }
}
