//! Fuzzes the gridworld spec decoder and generator: any accepted grid must
//! produce a game that passes full validation.

#![no_main]

use libfuzzer_sys::fuzz_target;

use reachsynth::domains::{build_gridworld, GridSpec};
use reachsynth::values::{value_iteration, ValueMode};

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<GridSpec>(data) else {
        return;
    };
    if spec.width > 8 || spec.height > 8 || spec.lava.len() > 64 {
        return;
    }
    if let Ok(g) = build_gridworld(&spec) {
        // Construction already validated the invariants; values must exist.
        let adv = value_iteration(&g, ValueMode::Adversarial);
        let coop = value_iteration(&g, ValueMode::Cooperative);
        for v in g.states() {
            assert!(coop.value(&g, v) <= adv.value(&g, v));
        }
    }
});
