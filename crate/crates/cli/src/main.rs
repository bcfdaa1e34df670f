use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cliquegame_core::format::{graph_to_json, parse_graph, parse_witness, witness_to_json};
use cliquegame_core::generate::{
    generate_ktree, generate_partial_ktree, rng_from_seed, sparsify_chordal,
};
use cliquegame_core::harness::{run_suite, ExperimentSpec, Suite};
use cliquegame_core::solver::game_chromatic_number;
use cliquegame_core::strategy::{default_budget, ActivationAlice, AliceSpec, BobSpec, ColorPolicy};
use cliquegame_core::{play_game, GameConfig, LinearOrdering};
use cliquegame_server::ServerConfig;

#[derive(Parser)]
#[command(
    name = "cliquegame",
    version,
    about = "Clique-relaxed graph coloring game: play, solve and verify"
)]
struct Cli {
    /// Master seed (overrides a config file's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Node budget for the solver and minimax Bob.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a random chordal graph (or a partial k-tree witness) as JSON.
    Gen(GenArgs),
    /// Play one game and emit its transcript.
    Play(PlayArgs),
    /// Decide the winner for every color count up to --c-max.
    Solve(SolveArgs),
    /// Run a verification suite and emit its report.
    Verify(VerifyArgs),
    /// Start the HTTP session service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Tree width of the underlying k-tree.
    #[arg(long)]
    width: usize,
    #[arg(long)]
    n: usize,
    /// Drop probability for chordal sparsification.
    #[arg(long, default_value_t = 0.0)]
    sparsify: f64,
    /// Emit a witness {edges, h_edges, k} keeping each edge with this probability.
    #[arg(long)]
    keep: Option<f64>,
}

#[derive(Args)]
struct GraphInput {
    /// Graph JSON file ({"n", "edges"}).
    #[arg(long, conflicts_with = "witness", required_unless_present = "witness")]
    graph: Option<PathBuf>,
    /// Witness JSON file; Alice plans on h, play uses g.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    c: usize,
    /// random, clique-threat or minimax
    #[arg(long, default_value = "clique-threat")]
    bob: String,
    #[arg(long, default_value = "least-index")]
    policy: String,
    /// Alice's ordering as comma-separated vertices.
    #[arg(long, value_delimiter = ',')]
    ordering: Option<Vec<usize>>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long = "c-max")]
    c_max: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; optional when --config names one.
    suite: Option<String>,
    /// TOML file with experiment fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    omega: Option<usize>,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Comma-separated Bob strategies.
    #[arg(long, value_delimiter = ',')]
    bobs: Option<Vec<String>>,
    #[arg(long)]
    policy: Option<String>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "CLIQUEGAME_ADDR", default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Idle seconds before a session expires.
    #[arg(long, default_value_t = 3600)]
    idle_secs: u64,
    /// Allow any origin (local UI development).
    #[arg(long)]
    cors: bool,
}

/// Input problems exit with 2, violations with 1.
enum Failure {
    Input(anyhow::Error),
    Violation,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn json_only(format: Format, what: &str) -> Result<()> {
    if format == Format::Csv {
        bail!("{what} output is JSON only");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Gen(a) => {
            json_only(cli.format, "gen")?;
            let text = match a.keep {
                Some(keep) => witness_to_json(
                    &generate_partial_ktree(a.width, a.n, keep, seed)
                        .map_err(anyhow::Error::from)?,
                ),
                None => {
                    if !(0.0..=1.0).contains(&a.sparsify) {
                        return Err(anyhow::anyhow!("--sparsify must lie in [0, 1]").into());
                    }
                    let h = generate_ktree(a.width, a.n, seed).map_err(anyhow::Error::from)?;
                    graph_to_json(&sparsify_chordal(
                        &h,
                        a.sparsify,
                        &mut rng_from_seed(seed ^ 0x5eed),
                    ))
                }
            };
            emit(out, &text)?;
        }
        Command::Play(a) => {
            json_only(cli.format, "play")?;
            let (play, strategy) = match (&a.input.graph, &a.input.witness) {
                (Some(p), _) => (parse_graph(&read(p)?).context("graph")?, None),
                (None, Some(p)) => {
                    let w = parse_witness(&read(p)?).context("witness")?;
                    w.validate().context("witness")?;
                    (w.g, Some(w.h))
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let config =
                Arc::new(GameConfig::new(a.k, a.c, play, strategy).context("game config")?);
            let policy: ColorPolicy = a.policy.parse().map_err(anyhow::Error::msg)?;
            let mut alice = match a.ordering {
                None => ActivationAlice::new(&config, policy),
                Some(o) => ActivationAlice::with_ordering(
                    &config,
                    LinearOrdering::new(o).context("ordering")?,
                    policy,
                )
                .context("ordering")?,
            };
            let mut bob = bob_spec(&a.bob, cli.budget)?.build(&config);
            let t = play_game(config, &mut alice, bob.as_mut(), seed);
            emit(out, &t.to_json())?;
        }
        Command::Solve(a) => {
            let g = parse_graph(&read(&a.graph)?).context("graph")?;
            let report =
                game_chromatic_number(&g, a.k, a.c_max, cli.budget.unwrap_or_else(default_budget))
                    .map_err(anyhow::Error::from)?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
                Format::Csv => {
                    let mut s = String::from("c,alice_wins,nodes\n");
                    for e in &report.entries {
                        let v = serde_json::to_value(e.alice_wins).expect("verdict serializes");
                        s.push_str(&format!(
                            "{},{},{}\n",
                            e.c,
                            v.as_str().map_or(v.to_string(), str::to_string),
                            e.nodes
                        ));
                    }
                    s
                }
            };
            emit(out, &text)?;
        }
        Command::Verify(a) => {
            let spec = verify_spec(&a, cli.seed, cli.budget)?;
            let report = run_suite(&spec).map_err(anyhow::Error::from)?;
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            let target = out.map(Path::to_path_buf).or_else(|| spec.out.clone());
            emit(target.as_deref(), &text)?;
            let s = &report.summary;
            eprintln!(
                "{}: {} games, {} Alice wins, {} Alice losses, {} violations ({:?})",
                report.suite, s.games, s.alice_wins, s.alice_losses, s.violations, report.verdict
            );
            if report.exit_code() != 0 {
                return Err(Failure::Violation);
            }
        }
        Command::Serve(a) => {
            tracing_subscriber::fmt()
                .with_writer(std::io::stderr)
                .init();
            let config = ServerConfig {
                idle_timeout: Duration::from_secs(a.idle_secs),
                permissive_cors: a.cors,
            };
            let rt = tokio::runtime::Runtime::new().context("starting runtime")?;
            rt.block_on(cliquegame_server::serve(a.addr, config))
                .context("serving")?;
        }
    }
    Ok(())
}

fn bob_spec(name: &str, budget: Option<u64>) -> Result<BobSpec> {
    let spec: BobSpec = name.parse().map_err(anyhow::Error::msg)?;
    Ok(match (spec, budget) {
        (BobSpec::Minimax { .. }, Some(budget)) => BobSpec::Minimax { budget },
        (spec, _) => spec,
    })
}

/// Config file first, then command-line overrides, then validation.
fn verify_spec(a: &VerifyArgs, seed: Option<u64>, budget: Option<u64>) -> Result<ExperimentSpec> {
    let mut spec = match &a.config {
        Some(p) => ExperimentSpec::from_toml(&read(p)?)
            .with_context(|| format!("config {}", p.display()))?,
        None => {
            let Some(name) = &a.suite else {
                bail!("name a suite or pass --config")
            };
            ExperimentSpec::new(name.parse::<Suite>().map_err(anyhow::Error::msg)?)
        }
    };
    if let Some(name) = &a.suite {
        let suite: Suite = name.parse().map_err(anyhow::Error::msg)?;
        if a.config.is_some() && suite != spec.suite {
            bail!("suite {suite} does not match the config's {}", spec.suite);
        }
    }
    macro_rules! set {
        ($field:ident) => {
            if let Some(v) = a.$field {
                spec.$field = v;
            }
        };
        (opt $field:ident) => {
            if a.$field.is_some() {
                spec.$field = a.$field;
            }
        };
    }
    set!(instances);
    set!(n_min);
    set!(n_max);
    set!(opt k);
    set!(opt omega);
    set!(opt lambda);
    set!(opt c);
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(names) = &a.bobs {
        spec.bobs = names
            .iter()
            .map(|n| bob_spec(n, budget))
            .collect::<Result<_>>()?;
    } else if let Some(b) = budget {
        for bob in &mut spec.bobs {
            if let BobSpec::Minimax { budget } = bob {
                *budget = b;
            }
        }
    }
    if let Some(p) = &a.policy {
        spec.alice = AliceSpec::Activation {
            color_policy: p.parse().map_err(anyhow::Error::msg)?,
        };
    }
    spec.resolve().map_err(anyhow::Error::from)?;
    Ok(spec)
}
