use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use coop_lms::config::ExperimentConfig;
use coop_lms::edgelist;
use coop_lms::output::write_outputs;
use coop_lms::presets::{preset, PRESET_NAMES};
use coop_lms::runner::run_experiment;
use coop_lms::HarnessError;
use coop_lms_core::graph::{named_graph, NamedGraph};

#[derive(Parser)]
#[command(name = "coop-lms", version, about = "Cooperative LMS experiments over agent networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a preset or a JSON config file
    Run {
        /// Preset name (see `list-presets`)
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Path to a JSON experiment config
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the master seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trial count
        #[arg(long)]
        trials: Option<usize>,
        /// Override the iteration count
        #[arg(long)]
        iters: Option<usize>,
        /// Override the output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the available experiment presets
    ListPresets,
    /// Inspect a catalog graph or export its edge list
    Graph {
        /// Catalog graph name
        #[arg(long)]
        name: String,
        /// Print the edge-list text format instead of a summary
        #[arg(long)]
        emit_edgelist: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> coop_lms::Result<()> {
    match cli.command {
        Command::Run { preset: preset_name, config, seed, trials, iters, out } => {
            let mut cfg: ExperimentConfig = match (preset_name, config) {
                (Some(name), None) => preset(&name)?,
                (None, Some(path)) => ExperimentConfig::from_file(&path)?,
                _ => {
                    return Err(HarnessError::Usage(
                        "pass exactly one of --preset or --config".into(),
                    ))
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(l) = iters {
                cfg.iterations = l;
            }
            if let Some(dir) = out {
                cfg.out_dir = dir;
            }
            cfg.validate()?;

            let started = Instant::now();
            let output = run_experiment(&cfg)?;
            let files = write_outputs(&cfg, &output, started.elapsed())?;
            println!(
                "{}: {} trials, {} iterations, seed {}",
                cfg.name, cfg.trials, cfg.iterations, cfg.seed
            );
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Command::ListPresets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Graph { name, emit_edgelist } => {
            let parsed: NamedGraph = name
                .parse()
                .map_err(|e: coop_lms_core::Error| HarnessError::Usage(e.to_string()))?;
            let g = named_graph(parsed);
            if emit_edgelist {
                print!("{}", edgelist::to_edge_list(&g));
            } else {
                println!(
                    "{}: {} nodes, {} edges, max degree {}",
                    parsed.name(),
                    g.node_count(),
                    g.edge_count(),
                    g.max_degree()
                );
            }
            Ok(())
        }
    }
}
