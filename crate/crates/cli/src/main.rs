//! `hgame`: command-line front end for Maker-Breaker H-games on graphs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hgame_core::density::density_report;
use hgame_core::experiment::{
    breaker_certificate_experiment, full_game_experiment, hp_threshold_exponent, main_theorem_witness,
    make_strategy, threshold_exponent, Execution, ExperimentConfig, PGrid, ThresholdCurve,
};
use hgame_core::game::{build_h_game, play, GraphGame};
use hgame_core::hcore::{core_components, preprocess};
use hgame_core::maker::hp_construct;
use hgame_core::solver::{solve_with_cap, DEFAULT_CAP};
use hgame_core::graph::gnp_sample;
use hgame_core::{Graph, HgameError, Player, SampleSpec, WinningSetSystem};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hgame", version, about = "Maker-Breaker H-games on graphs")]
struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for experiments; 1 runs sequentially, 0 uses all cores.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum First {
    Maker,
    Breaker,
}

impl From<First> for Player {
    fn from(f: First) -> Player {
        match f {
            First::Maker => Player::Maker,
            First::Breaker => Player::Breaker,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Density report of a graph.
    Density {
        /// Graph file or built-in name.
        graph: String,
    },
    /// Exact outcome of a game given as a winning-set system or a graph with a pattern.
    Solve {
        /// System JSON (`board_size`, `sets`) or a graph.
        input: String,
        /// Pattern whose copies are the winning sets when `input` is a graph.
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, value_enum, default_value_t = First::Maker)]
        first: First,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Plays one game between named strategies.
    Play {
        graph: String,
        pattern: String,
        #[arg(long, default_value = "random")]
        maker: String,
        #[arg(long, default_value = "random")]
        breaker: String,
        #[arg(long, value_enum, default_value_t = First::Maker)]
        first: First,
        /// Play the game on the extended pattern `H_P`.
        #[arg(long)]
        hp: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// H-core preprocessing summary.
    Hcore { graph: String, pattern: String },
    /// Breaker certificates on random graphs.
    Certify(SweepArgs),
    /// Full games between named strategies on random graphs.
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value = "random")]
        maker: String,
        #[arg(long, default_value = "composite")]
        breaker: String,
        #[arg(long, value_enum, default_value_t = First::Maker)]
        first: First,
        #[arg(long)]
        hp: bool,
    },
    /// Threshold exponent of a pattern.
    Threshold {
        pattern: String,
        /// Exponent for the extended pattern `H_P`.
        #[arg(long)]
        hp: bool,
    },
    /// Samples `G(n, p)`.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Args)]
struct SweepArgs {
    pattern: String,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Multipliers `c` in `p = c n^(-1/m2)`.
    #[arg(long, value_delimiter = ',', conflicts_with = "p")]
    c: Vec<f64>,
    /// Explicit edge probabilities.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Random Makers replayed against each certified Breaker.
    #[arg(long, default_value_t = 10)]
    audit: usize,
    /// Drop wall-clock fields so output is reproducible.
    #[arg(long)]
    no_timing: bool,
}

/// Reads a graph from a file, or builds a named one: `K<n>`, `C<n>`, `P<n>`,
/// `S<n>` (star with n leaves) or `K5-`.
fn load_graph(arg: &str) -> anyhow::Result<Graph> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Graph::parse_any(&text).with_context(|| format!("parsing {arg}"));
    }
    if arg == "K5-" {
        return Ok(Graph::k5_minus());
    }
    let (kind, rest) = arg.split_at(arg.len().min(1));
    let k: usize = rest
        .parse()
        .map_err(|_| anyhow::anyhow!("{arg} is neither a file nor a known graph name"))?;
    Ok(match kind {
        "K" => Graph::complete(k),
        "C" if k >= 3 => Graph::cycle(k),
        "P" => Graph::path(k),
        "S" => Graph::star(k),
        _ => bail!("{arg} is neither a file nor a known graph name"),
    })
}

fn execution(jobs: usize) -> Execution {
    if jobs == 1 {
        Execution::Sequential
    } else {
        Execution::Parallel { jobs }
    }
}

fn config(args: &SweepArgs, seed: u64, hp: bool) -> anyhow::Result<ExperimentConfig> {
    let pattern = load_graph(&args.pattern)?;
    let exponent = if hp {
        hp_threshold_exponent(&pattern)?
    } else {
        threshold_exponent(&pattern)?
    };
    let mut cfg = ExperimentConfig::certificate(pattern, args.n.clone(), args.trials, seed)?;
    cfg.grid = if !args.p.is_empty() {
        PGrid::Explicit(args.p.clone())
    } else if !args.c.is_empty() {
        PGrid::Scaled {
            exponent,
            multipliers: args.c.clone(),
        }
    } else {
        PGrid::Scaled {
            exponent,
            multipliers: vec![0.1],
        }
    };
    cfg.cap = args.cap;
    cfg.audit_games = args.audit;
    cfg.hp_game = hp;
    Ok(cfg)
}

fn render_curve(curve: ThresholdCurve, no_timing: bool, format: Format) -> anyhow::Result<String> {
    let curve = if no_timing { curve.without_timing() } else { curve };
    Ok(match format {
        Format::Csv => curve.to_csv()?,
        Format::Json => curve.to_json()?,
    })
}

fn pretty(value: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    match &cli.command {
        Command::Density { graph } => pretty(&density_report(&load_graph(graph)?)?),
        Command::Solve {
            input,
            pattern,
            first,
            cap,
        } => {
            let system = match pattern {
                Some(p) => build_h_game(&load_graph(input)?, &load_graph(p)?),
                None => {
                    let text = std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
                    serde_json::from_str::<WinningSetSystem>(&text)
                        .with_context(|| format!("{input} is not a winning-set system; pass --pattern for graphs"))?
                }
            };
            pretty(&solve_with_cap(&system, (*first).into(), *cap)?)
        }
        Command::Play {
            graph,
            pattern,
            maker,
            breaker,
            first,
            hp,
            cap,
        } => {
            let g = load_graph(graph)?;
            let h = load_graph(pattern)?;
            let game_pattern = if *hp { hp_construct(&h, 0)? } else { h.clone() };
            let for_name = |name: &str| if name == "hp-phase" { &h } else { &game_pattern };
            let mut m = make_strategy(maker, Player::Maker, &g, for_name(maker), cli.seed, *cap)?;
            let mut b = make_strategy(breaker, Player::Breaker, &g, for_name(breaker), cli.seed ^ 1, *cap)?;
            let game = GraphGame { g, h: game_pattern };
            pretty(&play(&game, &mut m, &mut b, (*first).into()))
        }
        Command::Hcore { graph, pattern } => {
            let g = load_graph(graph)?;
            let h = load_graph(pattern)?;
            let pre = preprocess(&g, &h, cli.seed);
            let components = core_components(&g, &pre.core_edges, &h)?;
            let mut histogram = BTreeMap::new();
            for c in &components {
                *histogram.entry(c.edges.len()).or_insert(0usize) += 1;
            }
            pretty(&json!({
                "edges": g.edge_count(),
                "copies": pre.copies_total,
                "core_size": pre.core_edges.len(),
                "k": pre.k(),
                "removed_open": pre.removed_open.len(),
                "removed_free": pre.removed_free.len(),
                "components": components.len(),
                "component_histogram": histogram,
                "core_edges": pre.core_edges,
                "pairs": pre.pairs,
            }))
        }
        Command::Certify(args) => {
            let cfg = config(args, cli.seed, false)?;
            let curve = breaker_certificate_experiment(&cfg, execution(cli.jobs))?;
            render_curve(curve, args.no_timing, cli.format)
        }
        Command::Sweep {
            sweep,
            maker,
            breaker,
            first,
            hp,
        } => {
            let mut cfg = config(sweep, cli.seed, *hp)?;
            cfg.maker = maker.clone();
            cfg.breaker = breaker.clone();
            cfg.first = (*first).into();
            let curve = full_game_experiment(&cfg, execution(cli.jobs))?;
            render_curve(curve, sweep.no_timing, cli.format)
        }
        Command::Threshold { pattern, hp } => {
            let h = load_graph(pattern)?;
            let exponent = if *hp {
                hp_threshold_exponent(&h)?
            } else {
                threshold_exponent(&h)?
            };
            let mut out = json!({
                "exponent": exponent.to_string(),
                "exponent_f64": *exponent.numer() as f64 / *exponent.denom() as f64,
                "hp": hp,
            });
            if *hp {
                out["witness_edges"] = json!(main_theorem_witness(&h)?);
            }
            pretty(&out)
        }
        Command::Sample { n, p } => {
            let g = gnp_sample(&SampleSpec::new(*n, *p, cli.seed)?);
            match cli.format {
                Format::Csv => Ok(g.to_edge_list()),
                Format::Json => pretty(&g),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let text = if text.ends_with('\n') { text } else { text + "\n" };
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let refusal = e.chain().any(|c| c.downcast_ref::<HgameError>().is_some_and(HgameError::is_refusal));
            if refusal {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
