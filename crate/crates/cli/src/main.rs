//! Command-line front end: validation, values, unrolling, synthesis, oracle
//! checking, rollouts, and the gridworld/DFA-product constructions. Every
//! subcommand is a thin composition of library calls; identical inputs and
//! seeds produce byte-identical outputs.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use reachsynth::arena::{
    tree_acval, tree_values, unroll_with_cap, AcvalMethod, ArenaError, TreeArena,
    DEFAULT_NODE_CAP,
};
use reachsynth::domains::{build_dfa, build_gridworld, labeling_from_graph, product_with_dfa};
use reachsynth::game::{build_game, GameGraph, GameSpec};
use reachsynth::harness::{run_oracle_check, OracleCheckConfig};
use reachsynth::io;
use reachsynth::rollout::{rollout, EnvPolicy};
use reachsynth::synthesis::{
    extract_strategy, synthesize_admissible, synthesize_admissible_winning, ExtractPolicy,
    TreeStrategy,
};
use reachsynth::values::{classify_regions, value_iteration, ValueMode};

#[derive(Parser)]
#[command(name = "reachsynth", version, about = "Quantitative reachability game solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a game file against the model invariants.
    Validate(GameInput),
    /// Per-state adversarial/cooperative/adversarial-cooperative values and
    /// regions.
    Values {
        #[command(flatten)]
        game: GameInput,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Unroll a game into its budget-bounded tree arena and report
    /// statistics.
    Unroll {
        #[command(flatten)]
        game: GameInput,
        #[arg(long)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
        /// Write a DOT rendering of the arena.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the full node dump as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Synthesize the set of all admissible (or admissible-winning)
    /// strategies.
    Synthesize {
        #[command(flatten)]
        game: GameInput,
        #[arg(long)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Adm)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = AcvalArg::Subgame)]
        acval: AcvalArg,
        /// Extraction policy for the representative strategy.
        #[arg(long, value_enum, default_value_t = PolicyArg::MinCval)]
        policy: PolicyArg,
        /// Seed for the random extraction policy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare synthesis against the brute-force oracle on random games.
    OracleCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        games: usize,
        #[arg(long, default_value_t = 8)]
        max_states: usize,
        #[arg(long, default_value_t = 3)]
        max_cost: u64,
        #[arg(long, default_value_t = 8)]
        max_budget: u64,
        #[arg(long, default_value_t = 512)]
        enum_cap: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Play a synthesized strategy against an Env policy.
    Rollout {
        #[command(flatten)]
        game: GameInput,
        #[arg(long)]
        budget: u64,
        /// Strategy file: either a bare strategy or a synthesis report.
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, value_enum)]
        env: EnvArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated action ids for the scripted policy.
        #[arg(long)]
        script: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Also print a human-readable transcript to stderr.
        #[arg(long)]
        transcript: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Gridworld constructions.
    Gridworld {
        #[command(subcommand)]
        command: GridworldCommand,
    },
    /// Product of a labeled game with a DFA.
    Product {
        #[command(flatten)]
        game: GameInput,
        #[arg(long)]
        dfa: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a game as DOT.
    ExportDot {
        #[command(flatten)]
        game: GameInput,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GridworldCommand {
    /// Build the pursuit game from a grid description.
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GameInput {
    /// Game description in JSON.
    #[arg(long)]
    game: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Adm,
    AdmWin,
}

#[derive(Clone, Copy, ValueEnum)]
enum AcvalArg {
    Subgame,
    OneStep,
}

impl From<AcvalArg> for AcvalMethod {
    fn from(a: AcvalArg) -> Self {
        match a {
            AcvalArg::Subgame => AcvalMethod::Subgame,
            AcvalArg::OneStep => AcvalMethod::OneStep,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    MinCval,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvArg {
    Adversarial,
    Cooperative,
    Random,
    Scripted,
}

// Exit codes: 1 validation/solver error, 2 oracle mismatch, 3 cap breach.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate(input) => {
            let g = load_game(&input.game)?;
            println!(
                "ok: {} states, {} goal(s), initial {}",
                g.len(),
                g.goal_states().count(),
                g.initial()
            );
            Ok(())
        }
        Command::Values { game, output } => {
            let g = load_game(&game.game)?;
            let adv = value_iteration(&g, ValueMode::Adversarial);
            let coop = value_iteration(&g, ValueMode::Cooperative);
            let regions =
                classify_regions(&g, &adv, &coop).map_err(|e| Failure::new(1, e))?;
            emit(&io::values_report(&g, &adv, &coop, &regions), output.as_deref())
        }
        Command::Unroll {
            game,
            budget,
            node_cap,
            dot,
            dump,
            output,
        } => {
            let g = load_game(&game.game)?;
            let t = unroll_or_fail(&g, budget, node_cap)?;
            let vt = tree_values(&t);
            if let Some(path) = dot {
                write_atomic(&path, io::arena_to_dot(&t).as_bytes())?;
            }
            if let Some(path) = dump {
                write_atomic(&path, &render_json(&io::arena_dump(&t))?)?;
            }
            let report = io::UnrollReport {
                stats: t.stats(),
                root_aval: vt.aval(t.root()),
                root_cval: vt.cval(t.root()),
            };
            emit(&report, output.as_deref())
        }
        Command::Synthesize {
            game,
            budget,
            mode,
            acval,
            policy,
            seed,
            node_cap,
            output,
        } => {
            let g = load_game(&game.game)?;
            let t = unroll_or_fail(&g, budget, node_cap)?;
            let vt = tree_values(&t);
            let acv = tree_acval(&t, &vt, acval.into());
            let set = match mode {
                ModeArg::Adm => synthesize_admissible(&t, &vt, &acv),
                ModeArg::AdmWin => synthesize_admissible_winning(&t, &vt, &acv),
            };
            let extract_policy = match policy {
                PolicyArg::MinCval => ExtractPolicy::MinCvalThenLowestId,
                PolicyArg::Random => ExtractPolicy::SeededRandom(seed),
            };
            let sigma = extract_strategy(&t, &vt, &acv, &set, extract_policy);
            emit(&io::synthesis_report(&t, &set, &sigma), output.as_deref())
        }
        Command::OracleCheck {
            seed,
            games,
            max_states,
            max_cost,
            max_budget,
            enum_cap,
            output,
        } => {
            let cfg = OracleCheckConfig {
                seed,
                games,
                max_states,
                max_cost,
                max_budget,
                enum_cap,
                node_cap: DEFAULT_NODE_CAP,
            };
            let report = run_oracle_check(&cfg);
            for g in &report.games {
                println!(
                    "game {:03} seed={:#018x} states={} budget={} vectors={}x{} {}",
                    g.index,
                    g.seed,
                    g.states,
                    g.budget,
                    g.sys_vectors,
                    g.env_vectors,
                    if g.clean() { "ok" } else { "MISMATCH" }
                );
            }
            let clean = report.all_clean();
            println!(
                "verdict: {} ({} games, {} skipped, seed {})",
                if clean { "agreement" } else { "MISMATCH" },
                report.games.len(),
                report.skipped,
                seed,
            );
            if let Some(path) = output {
                write_atomic(&path, &render_json(&report)?)?;
            }
            if clean {
                Ok(())
            } else {
                Err(Failure::new(2, "synthesis disagrees with the brute-force oracle"))
            }
        }
        Command::Rollout {
            game,
            budget,
            strategy,
            env,
            seed,
            script,
            max_steps,
            transcript,
            node_cap,
            output,
        } => {
            let g = load_game(&game.game)?;
            let t = unroll_or_fail(&g, budget, node_cap)?;
            let vt = tree_values(&t);
            let sigma = load_strategy(&strategy)?;
            let policy = match env {
                EnvArg::Adversarial => EnvPolicy::Adversarial,
                EnvArg::Cooperative => EnvPolicy::Cooperative,
                EnvArg::Random => EnvPolicy::Random { seed },
                EnvArg::Scripted => {
                    let raw = script.ok_or_else(|| {
                        Failure::new(1, "--script is required with --env scripted")
                    })?;
                    let actions = raw
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| {
                            s.trim()
                                .parse::<u32>()
                                .map(reachsynth::game::ActionId)
                                .map_err(|e| {
                                    Failure::new(1, format!("bad script entry {s:?}: {e}"))
                                })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    EnvPolicy::Scripted { actions }
                }
            };
            let trace =
                rollout(&t, &vt, &sigma, &policy, max_steps).map_err(|e| Failure::new(1, e))?;
            if transcript {
                eprint!("{}", io::transcript(&trace));
            }
            let report = io::TraceReport {
                seed: matches!(env, EnvArg::Random).then_some(seed),
                trace,
            };
            emit(&report, output.as_deref())
        }
        Command::Gridworld { command } => match command {
            GridworldCommand::Gen { spec, output } => {
                let text = read_file(&spec)?;
                let grid: reachsynth::domains::GridSpec =
                    serde_json::from_str(&text).map_err(|e| Failure::new(1, e))?;
                let g = build_gridworld(&grid).map_err(|e| Failure::new(1, e))?;
                emit(&g.to_spec(), output.as_deref())
            }
        },
        Command::Product { game, dfa, output } => {
            let g = load_game(&game.game)?;
            let text = read_file(&dfa)?;
            let dfa_spec: reachsynth::domains::DfaSpec =
                serde_json::from_str(&text).map_err(|e| Failure::new(1, e))?;
            let d = build_dfa(&dfa_spec).map_err(|e| Failure::new(1, e))?;
            let labeling = labeling_from_graph(&g).map_err(|e| Failure::new(1, e))?;
            let p = product_with_dfa(&g, &d, &labeling).map_err(|e| Failure::new(1, e))?;
            emit(&p.to_spec(), output.as_deref())
        }
        Command::ExportDot { game, output } => {
            let g = load_game(&game.game)?;
            match output {
                Some(path) => write_atomic(&path, io::game_to_dot(&g).as_bytes()),
                None => {
                    print!("{}", io::game_to_dot(&g));
                    Ok(())
                }
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<GameGraph, Failure> {
    let text = read_file(path)?;
    let spec: GameSpec = serde_json::from_str(&text).map_err(|e| Failure::new(1, e))?;
    build_game(&spec).map_err(|e| Failure::new(1, e))
}

fn load_strategy(path: &Path) -> Result<TreeStrategy, Failure> {
    let text = read_file(path)?;
    // Accept either a synthesis report or a bare strategy.
    #[derive(serde::Deserialize)]
    struct ReportView {
        extracted: TreeStrategy,
    }
    if let Ok(report) = serde_json::from_str::<ReportView>(&text) {
        return Ok(report.extracted);
    }
    serde_json::from_str(&text).map_err(|e| Failure::new(1, e))
}

fn unroll_or_fail(g: &GameGraph, budget: u64, cap: usize) -> Result<TreeArena, Failure> {
    unroll_with_cap(g, budget, cap).map_err(|e| match e {
        ArenaError::BudgetOverflowGuard { .. } => Failure::new(3, e),
        other => Failure::new(1, other),
    })
}

fn render_json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::new(1, e))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> Result<(), Failure> {
    let bytes = render_json(value)?;
    match output {
        Some(path) => write_atomic(path, &bytes),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| Failure::new(1, e)),
    }
}

/// Write via a sibling temp file and rename, so partial output never lands
/// at the destination.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let name = path.file_name().unwrap_or_default().to_string_lossy();
    let tmp = match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(d) => d.join(format!(".{name}.tmp")),
        None => PathBuf::from(format!(".{name}.tmp")),
    };
    fs::write(&tmp, bytes).map_err(|e| Failure::new(1, format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}
