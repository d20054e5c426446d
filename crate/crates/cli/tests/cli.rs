//! End-to-end CLI checks: exit codes, output determinism, and the wiring of
//! the pipeline subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use reachsynth::samples;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reachsynth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn reachsynth")
}

fn write_sample_game(dir: &Path) -> PathBuf {
    let path = dir.join("game.json");
    let spec = samples::commitment_game().to_spec();
    std::fs::write(&path, serde_json::to_string_pretty(&spec).unwrap()).unwrap();
    path
}

#[test]
fn validate_ok_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_sample_game(dir.path());
    let out = run(&["validate", "--game", game.to_str().unwrap()]);
    assert!(out.status.success());

    let out = run(&["validate", "--game", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn invalid_game_rejected_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // A Sys action of cost zero violates the cost-sign rule.
    std::fs::write(
        &path,
        r#"{"states":[{"id":0,"owner":"sys"},{"id":1,"owner":"env"},{"id":2,"owner":"sys","goal":true}],
            "initial":0,
            "edges":[{"from":0,"action":0,"to":1,"cost":0},
                     {"from":1,"action":0,"to":2,"cost":0},
                     {"from":2,"action":0,"to":2,"cost":0}]}"#,
    )
    .unwrap();
    let out = run(&["validate", "--game", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("cost sign"), "stderr: {msg}");
}

#[test]
fn values_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_sample_game(dir.path());
    let a = run(&["values", "--game", game.to_str().unwrap()]);
    let b = run(&["values", "--game", game.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("\"inf\""));
    assert!(text.contains("\"region\": \"pending\""));
}

#[test]
fn synthesize_winning_commits_to_the_enforceable_branch() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_sample_game(dir.path());
    let out_path = dir.path().join("synth.json");
    let out = run(&[
        "synthesize",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "12",
        "--mode",
        "adm-win",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["all_admissible"], serde_json::Value::Bool(false));
    // The root entry allows exactly one successor: the node for state v1.
    let nodes = report["nodes"].as_array().unwrap();
    let root_entry = nodes.iter().find(|n| n["node"] == 0).unwrap();
    let allowed = root_entry["allowed"].as_array().unwrap();
    assert_eq!(allowed.len(), 1);

    // Reruns are byte-identical.
    let out_path2 = dir.path().join("synth2.json");
    run(&[
        "synthesize",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "12",
        "--mode",
        "adm-win",
        "-o",
        out_path2.to_str().unwrap(),
    ]);
    assert_eq!(
        std::fs::read(&out_path).unwrap(),
        std::fs::read(&out_path2).unwrap()
    );
}

#[test]
fn rollout_consumes_synthesis_output() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_sample_game(dir.path());
    let synth = dir.path().join("synth.json");
    assert!(run(&[
        "synthesize",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "12",
        "--mode",
        "adm-win",
        "-o",
        synth.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&[
        "rollout",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "12",
        "--strategy",
        synth.to_str().unwrap(),
        "--env",
        "adversarial",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["trace"]["outcome"]["kind"], "goal_reached");
    assert_eq!(report["trace"]["outcome"]["payoff"], 10);
}

#[test]
fn unroll_reports_statistics_and_honors_cap() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_sample_game(dir.path());
    let out = run(&[
        "unroll",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "6",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["stats"]["nodes"].as_u64().unwrap() > 1);

    let out = run(&[
        "unroll",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "12",
        "--node-cap",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_check_agrees_on_small_corpus() {
    let out = run(&["oracle-check", "--seed", "7", "--games", "50"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verdict: agreement"));
    assert!(text.contains("seed 7"));
}

#[test]
fn gridworld_product_export_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    std::fs::write(
        &grid,
        r#"{"width":3,"height":1,"sys_start":[0,0],"env_start":[2,0],"goal":[1,0],
            "lava":[],"allow_stay":false,"capture":true}"#,
    )
    .unwrap();
    let game = dir.path().join("grid_game.json");
    assert!(run(&[
        "gridworld",
        "gen",
        "--spec",
        grid.to_str().unwrap(),
        "-o",
        game.to_str().unwrap(),
    ])
    .status
    .success());

    let dfa = dir.path().join("dfa.json");
    std::fs::write(
        &dfa,
        r#"{"states":[0,1],"initial":0,"accepting":[1],
            "alphabet":["c0_0","c1_0","c2_0","caught"],
            "transitions":[
              {"from":0,"symbol":"c0_0","to":0},
              {"from":0,"symbol":"c1_0","to":1},
              {"from":0,"symbol":"c2_0","to":0},
              {"from":0,"symbol":"caught","to":0},
              {"from":1,"symbol":"c0_0","to":1},
              {"from":1,"symbol":"c1_0","to":1},
              {"from":1,"symbol":"c2_0","to":1},
              {"from":1,"symbol":"caught","to":1}]}"#,
    )
    .unwrap();
    let product = dir.path().join("product.json");
    assert!(run(&[
        "product",
        "--game",
        game.to_str().unwrap(),
        "--dfa",
        dfa.to_str().unwrap(),
        "-o",
        product.to_str().unwrap(),
    ])
    .status
    .success());
    assert!(run(&["validate", "--game", product.to_str().unwrap()])
        .status
        .success());

    let out = run(&["export-dot", "--game", game.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = String::from_utf8_lossy(&out.stdout);
    assert!(dot.starts_with("digraph game {"));
    assert!(dot.contains("shape=circle"));
    assert!(dot.contains("shape=box"));
}

#[test]
fn scripted_rollout_reports_exhaustion() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_sample_game(dir.path());
    let synth = dir.path().join("synth.json");
    run(&[
        "synthesize",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "12",
        "--mode",
        "adm-win",
        "-o",
        synth.to_str().unwrap(),
    ]);
    let out = run(&[
        "rollout",
        "--game",
        game.to_str().unwrap(),
        "--budget",
        "12",
        "--strategy",
        synth.to_str().unwrap(),
        "--env",
        "scripted",
        "--script",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exhausted"));
}
