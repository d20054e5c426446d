//! Fuzzes the DFA decoder and the product construction against a fixed
//! labeled game: any accepted input must yield a valid product game.

#![no_main]

use libfuzzer_sys::fuzz_target;

use reachsynth::domains::{build_dfa, product_with_dfa, DfaSpec};
use reachsynth::samples;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<DfaSpec>(data) else {
        return;
    };
    if spec.states.len() > 16 || spec.alphabet.len() > 8 || spec.transitions.len() > 256 {
        return;
    }
    let Ok(dfa) = build_dfa(&spec) else {
        return;
    };
    let g = samples::commitment_game();
    let labeling = g
        .states()
        .map(|v| {
            let l = if g.is_goal(v) { "goal" } else { "other" };
            (v, l.to_string())
        })
        .collect();
    // Either a clean error (labels outside the alphabet) or a valid game.
    let _ = product_with_dfa(&g, &dfa, &labeling);
});
