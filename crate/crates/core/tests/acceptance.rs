//! Acceptance suite: ten numbered end-to-end checks, one test each, printed
//! as a pass line with the measured evidence. Run with
//! `cargo test -p reachsynth --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use reachsynth::arena::{tree_acval, tree_values, unroll, AcvalMethod, TreeArena};
use reachsynth::cost::{ExtendedCost, Finite, Infinite};
use reachsynth::domains::{build_gridworld, Cell, GridSpec};
use reachsynth::game::{GameGraph, StateId};
use reachsynth::harness::{run_oracle_check, OracleCheckConfig, OracleCheckReport};
use reachsynth::rollout::{rollout, EnvPolicy, Outcome};
use reachsynth::samples;
use reachsynth::synthesis::{
    extract_strategy, is_member, lift_memoryless, synthesize_admissible,
    synthesize_admissible_winning, ExtractPolicy, TreeStrategy,
};
use reachsynth::values::{
    acval_graph, value_iteration, wcoop_memoryless, MemorylessStrategy, ValueMode,
};

fn pass(number: u32, name: &str, evidence: String) {
    println!("acceptance {number:02} {name}: PASS ({evidence})");
}

fn positional(g: &GameGraph, pairs: &[(u32, u32)]) -> MemorylessStrategy {
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

fn corpus() -> &'static OracleCheckReport {
    static REPORT: OnceLock<OracleCheckReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let cfg = OracleCheckConfig {
            seed: 7,
            games: 200,
            max_states: 8,
            max_cost: 3,
            max_budget: 8,
            enum_cap: 512,
            ..OracleCheckConfig::default()
        };
        run_oracle_check(&cfg)
    })
}

#[test]
fn acceptance_01_golden_values() {
    let t0 = Instant::now();
    let g = samples::commitment_game();
    let adv = value_iteration(&g, ValueMode::Adversarial);
    let coop = value_iteration(&g, ValueMode::Cooperative);
    assert_eq!(adv.value(&g, StateId(4)), Finite(9));
    assert_eq!(coop.value(&g, StateId(4)), Finite(2));
    assert_eq!(acval_graph(&g, StateId(4), &adv), Finite(2));
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        1,
        "golden-values",
        format!("aval(v4)=9, cval(v4)=2, acval(v4)=2 in {elapsed:?}"),
    );
}

#[test]
fn acceptance_02_membership_classification() {
    let t0 = Instant::now();
    let g = samples::commitment_game();
    let t = unroll(&g, 12).unwrap();
    let vt = tree_values(&t);
    let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
    let adm = synthesize_admissible(&t, &vt, &acv);
    let win = synthesize_admissible_winning(&t, &vt, &acv);

    let risky = lift_memoryless(&t, &g, &positional(&g, &[(0, 1), (4, 5)]));
    let committed = lift_memoryless(&t, &g, &positional(&g, &[(0, 1), (4, 7)]));
    let detour = lift_memoryless(&t, &g, &positional(&g, &[(0, 2), (3, 2)]));

    assert_eq!(is_member(&t, &vt, &acv, &adm, &risky), Ok(false));
    assert_eq!(is_member(&t, &vt, &acv, &win, &committed), Ok(true));
    assert_eq!(is_member(&t, &vt, &acv, &adm, &detour), Ok(true));
    assert_eq!(is_member(&t, &vt, &acv, &win, &detour), Ok(false));
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        2,
        "membership-classification",
        format!("risky rejected, committed winning, detour admissible-only in {elapsed:?}"),
    );
}

#[test]
fn acceptance_03_annotated_tree_values() {
    let t0 = Instant::now();
    let (t, _) = samples::asymmetry_arena();
    let vt = tree_values(&t);
    let expected: [(u32, ExtendedCost, ExtendedCost); 11] = [
        (0, Finite(2), Infinite),
        (1, Finite(2), Infinite),
        (2, Finite(2), Infinite),
        (3, Finite(2), Finite(4)),
        (4, Finite(2), Finite(9)),
        (5, Finite(3), Finite(4)),
        (6, Finite(2), Finite(9)),
        (7, Finite(2), Finite(9)),
        (8, Finite(2), Finite(9)),
        (9, Finite(5), Finite(10)),
        (10, Infinite, Infinite),
    ];
    let mut checked = 0;
    for (state, cval, aval) in expected {
        for id in t.node_ids() {
            if t.node(id).state == StateId(state) && !t.is_leaf(id) {
                assert_eq!(vt.cval(id), cval, "cval at v{state}");
                assert_eq!(vt.aval(id), aval, "aval at v{state}");
                checked += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        3,
        "annotated-tree-values",
        format!("11 annotated pairs over {checked} node copies in {elapsed:?}"),
    );
}

#[test]
fn acceptance_04_history_dependent_allowance() {
    let t0 = Instant::now();
    let (t, nodes) = samples::asymmetry_arena();
    let vt = tree_values(&t);
    let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
    let adm = synthesize_admissible(&t, &vt, &acv);

    // Same game state, two histories: the risky continuation is allowed
    // only where every ancestor still tolerates its cooperative value.
    let left = &adm.allowed[&nodes.v7_left];
    let right = &adm.allowed[&nodes.v7_right];
    assert!(!left.contains(&nodes.v9_left), "left history must reject v9");
    assert!(right.contains(&nodes.v9_right), "right history must allow v9");
    // Sanity: the two v7 nodes sit on the expected root branches.
    assert_eq!(t.path_from_root(nodes.v7_left)[1], nodes.v1);
    assert_eq!(t.path_from_root(nodes.v7_right)[1], nodes.v2);
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        4,
        "history-dependent-allowance",
        format!("v9 allowed on one history, rejected on the other, in {elapsed:?}"),
    );
}

#[test]
fn acceptance_05_oracle_equivalence() {
    let t0 = Instant::now();
    let report = corpus();
    let mismatches: usize = report.games.iter().map(|g| g.membership_mismatches).sum();
    assert!(report.games.len() >= 200, "only {} games", report.games.len());
    assert_eq!(report.config.max_states, 8);
    assert_eq!(report.config.max_cost, 3);
    assert_eq!(report.config.max_budget, 8);
    assert_eq!(
        mismatches, 0,
        "membership disagreements: {:?}",
        report.mismatch_details
    );
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    pass(
        5,
        "oracle-equivalence",
        format!(
            "{} games, both modes, 0 mismatches in {elapsed:?}",
            report.games.len()
        ),
    );
}

#[test]
fn acceptance_06_existence() {
    let report = corpus();
    let failures: usize = report.games.iter().map(|g| g.emptiness_failures).sum();
    assert_eq!(failures, 0);
    let nontrivial = report.games.iter().filter(|g| !g.all_admissible).count();
    assert!(nontrivial > 0, "corpus never exercised synthesis");
    pass(
        6,
        "existence",
        format!(
            "nonempty admissible and winning sets on all {} games ({nontrivial} nontrivial)",
            report.games.len()
        ),
    );
}

#[test]
fn acceptance_07_complement() {
    let report = corpus();
    let failures: usize = report.games.iter().map(|g| g.complement_failures).sum();
    assert_eq!(failures, 0);
    pass(
        7,
        "complement",
        format!(
            "every enumerated strategy got exactly one label on {} games",
            report.games.len()
        ),
    );
}

#[test]
fn acceptance_08_positional_worst_case_cooperative() {
    let report = corpus();
    let failures: usize = report.games.iter().map(|g| g.wcoop_lift_failures).sum();
    assert_eq!(failures, 0);
    pass(
        8,
        "positional-worst-case-cooperative",
        format!("lifted positional strategy accepted on {} games", report.games.len()),
    );
}

#[test]
fn acceptance_09_enforcement() {
    let report = corpus();
    let failures: usize = report.games.iter().map(|g| g.enforcement_failures).sum();
    assert_eq!(failures, 0);
    pass(
        9,
        "enforcement",
        format!(
            "extracted winning strategies hit the optimal worst case on {} games",
            report.games.len()
        ),
    );
}

/// A 5x5 ring with a central shaft for Env: the direct top run needs Env
/// cooperation, while the long way around the ring is enforceable because
/// Env cannot pass through the goal cell.
fn ring_grid() -> GridSpec {
    GridSpec {
        width: 5,
        height: 5,
        sys_start: Cell(0, 0),
        env_start: Cell(2, 2),
        goal: Cell(4, 0),
        lava: vec![
            Cell(1, 1),
            Cell(3, 1),
            Cell(1, 2),
            Cell(3, 2),
            Cell(1, 3),
            Cell(2, 3),
            Cell(3, 3),
        ],
        allow_stay: false,
        capture: true,
    }
}

#[test]
fn acceptance_10_gridworld_budget_threshold() {
    let t0 = Instant::now();
    let g = build_gridworld(&ring_grid()).unwrap();
    let adv = value_iteration(&g, ValueMode::Adversarial);
    let coop = value_iteration(&g, ValueMode::Cooperative);
    let threshold = adv.value(&g, g.initial());
    let Finite(threshold) = threshold else {
        panic!("layout must admit an enforceable route");
    };
    assert_eq!(coop.value(&g, g.initial()), Finite(4));
    assert_eq!(threshold, 12);

    // Below the threshold the tree root is not winning.
    for budget in [4u64, 5] {
        let t = unroll(&g, budget).unwrap();
        let vt = tree_values(&t);
        assert_eq!(vt.aval(t.root()), Infinite, "budget {budget}");
    }

    // At the threshold an enforceable play exists: the positional
    // worst-case cooperative strategy reaches the goal against the
    // adversarial witness with exactly the threshold cost.
    let sigma = wcoop_memoryless(&g);
    let payoff = simulate_on_graph(&g, &sigma, &adv);
    assert_eq!(payoff, Some(threshold));

    // Below the threshold with a feasible cooperative value: admissible
    // strategies exist and rely on Env cooperation.
    let budget = 5u64;
    let t = unroll(&g, budget).unwrap();
    let vt = tree_values(&t);
    assert!(vt.cval(t.root()) <= Finite(budget));
    let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
    let adm = synthesize_admissible(&t, &vt, &acv);
    assert!(!adm.all_admissible);
    assert!(!adm.allowed.is_empty());
    for policy in [
        ExtractPolicy::MinCvalThenLowestId,
        ExtractPolicy::SeededRandom(1),
        ExtractPolicy::SeededRandom(2),
        ExtractPolicy::SeededRandom(3),
    ] {
        let sigma = extract_strategy(&t, &vt, &acv, &adm, policy);
        assert_eq!(is_member(&t, &vt, &acv, &adm, &sigma), Ok(true));
        let denied = rollout(&t, &vt, &sigma, &EnvPolicy::Adversarial, 1000).unwrap();
        assert_eq!(denied.outcome, Outcome::BudgetExceeded);
        let granted = rollout(&t, &vt, &sigma, &EnvPolicy::Cooperative, 1000).unwrap();
        assert!(matches!(granted.outcome, Outcome::GoalReached { payoff } if payoff <= budget));
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    pass(
        10,
        "gridworld-budget-threshold",
        format!("threshold 12, cooperative 4, budget-5 set cooperation-reliant in {elapsed:?}"),
    );
}

/// Play a positional Sys strategy against the adversarial witness policy on
/// the graph; returns the total cost if a goal is reached.
fn simulate_on_graph(
    g: &GameGraph,
    sigma: &MemorylessStrategy,
    adv: &reachsynth::values::ValueTable,
) -> Option<u64> {
    let mut state = g.initial();
    let mut total = 0u64;
    for _ in 0..100_000 {
        if g.is_goal(state) {
            return Some(total);
        }
        let action = match g.owner(state) {
            reachsynth::game::Owner::Sys => sigma.choices[&state],
            reachsynth::game::Owner::Env => adv.witness(g, state).expect("env witness"),
        };
        let edge = g
            .actions(state)
            .iter()
            .find(|a| a.action == action)
            .copied()
            .expect("witness action exists");
        total += edge.cost;
        state = edge.to;
    }
    None
}

/// The two acval routes stay consistent on the arenas used above.
#[test]
fn acval_routes_agree_on_reference_arenas() {
    for budget in [4u64, 8, 12] {
        let g = samples::commitment_game();
        let t = unroll(&g, budget).unwrap();
        let vt = tree_values(&t);
        let one = tree_acval(&t, &vt, AcvalMethod::OneStep);
        let sub = tree_acval(&t, &vt, AcvalMethod::Subgame);
        let diffs = reachsynth::arena::acval_discrepancies(&t, &one, &sub);
        for id in &diffs {
            let o = one.get(*id).unwrap();
            let s = sub.get(*id).unwrap();
            assert!(o <= s, "one-step exceeds subgame at {id}");
        }
        if !diffs.is_empty() {
            println!(
                "note: acval methods diverge at {} of {} nodes (budget {budget})",
                diffs.len(),
                t.len()
            );
        }
    }
}

#[allow(dead_code)]
fn type_checks(_: &TreeArena, _: &TreeStrategy) {}
