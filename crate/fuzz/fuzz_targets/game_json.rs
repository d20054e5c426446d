//! Fuzzes the game JSON decoder and everything a hostile game file can
//! reach: validation, value iteration, region classification, bounded
//! subgame values, and a small unrolling with synthesis.

#![no_main]

use libfuzzer_sys::fuzz_target;

use reachsynth::arena::{tree_acval, tree_values, unroll_with_cap, AcvalMethod};
use reachsynth::game::{build_game, GameSpec};
use reachsynth::synthesis::{synthesize_admissible, synthesize_admissible_winning};
use reachsynth::values::{acval_graph, classify_regions, value_iteration, ValueMode};

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<GameSpec>(data) else {
        return;
    };
    // Keep solver work proportionate: small graphs, bounded costs.
    // Adversarial value iteration is pseudo-polynomial in the largest
    // cost, so keep hostile inputs small enough to converge quickly.
    if spec.states.len() > 32
        || spec.edges.len() > 128
        || spec.edges.iter().any(|e| e.cost > 50)
    {
        return;
    }
    let Ok(g) = build_game(&spec) else {
        return;
    };
    let adv = value_iteration(&g, ValueMode::Adversarial);
    let coop = value_iteration(&g, ValueMode::Cooperative);
    let regions = classify_regions(&g, &adv, &coop).expect("tables are consistent");
    for v in g.states() {
        let ac = acval_graph(&g, v, &adv);
        assert!(coop.value(&g, v) <= ac && ac <= adv.value(&g, v));
        let _ = regions.region(&g, v);
    }
    if let Ok(t) = unroll_with_cap(&g, 4, 20_000) {
        let vt = tree_values(&t);
        let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
        let _ = synthesize_admissible(&t, &vt, &acv);
        let _ = synthesize_admissible_winning(&t, &vt, &acv);
    }
});
