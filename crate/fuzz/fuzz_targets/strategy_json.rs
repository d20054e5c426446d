//! Fuzzes the strategy-file decoder and the membership/rollout entry points
//! against a fixed arena: hostile strategies must be either cleanly rejected
//! or played without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

use reachsynth::arena::{tree_acval, tree_values, unroll, AcvalMethod};
use reachsynth::rollout::{rollout, EnvPolicy};
use reachsynth::samples;
use reachsynth::synthesis::{is_member, synthesize_admissible, TreeStrategy};

fuzz_target!(|data: &[u8]| {
    let Ok(sigma) = serde_json::from_slice::<TreeStrategy>(data) else {
        return;
    };
    if sigma.choices.len() > 4_096 {
        return;
    }
    let g = samples::commitment_game();
    let t = unroll(&g, 6).unwrap();
    let vt = tree_values(&t);
    let acv = tree_acval(&t, &vt, AcvalMethod::Subgame);
    let set = synthesize_admissible(&t, &vt, &acv);
    let _ = is_member(&t, &vt, &acv, &set, &sigma);
    for policy in [
        EnvPolicy::Adversarial,
        EnvPolicy::Cooperative,
        EnvPolicy::Random { seed: 1 },
    ] {
        let _ = rollout(&t, &vt, &sigma, &policy, 256);
    }
});
