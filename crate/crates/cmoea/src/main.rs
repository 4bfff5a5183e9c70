//! Command-line driver: single runs, seed batches, comparison tables, and
//! reference-front cache maintenance.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmoea::error::{Error, Result};
use cmoea::harness::{
    collect_summaries, compare_table, emit_traces, parse_config_file, run_batch, run_single,
    write_run_files, FileConfig, RunConfig, Variant,
};
use cmoea::problems::{builtin, builtin_names, load_or_generate_front};

#[derive(Parser)]
#[command(
    name = "cmoea",
    about = "Constrained multi-objective evolutionary optimization with a learned operator portfolio"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and write its trace, population, and summary files.
    Run {
        /// Problem name (see `cmoea fronts --problem all` for the list).
        #[arg(long)]
        problem: String,
        /// aop | ga-only | de-rand-only | de-best-only | fixed-portfolio:p1,p2,p3
        #[arg(long)]
        variant: String,
        /// Population size (even, >= 4).
        #[arg(long)]
        pop: Option<usize>,
        /// Evaluation budget.
        #[arg(long)]
        fe: Option<u64>,
        /// Per-run seed index.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for run files.
        #[arg(long)]
        out: PathBuf,
        /// Optional key = value config file supplying defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Reference-front cache directory.
        #[arg(long)]
        fronts: Option<PathBuf>,
    },
    /// Run a problems x variants x seeds grid in parallel.
    Batch {
        /// key = value config file describing the grid.
        #[arg(long)]
        config: PathBuf,
        /// Seed count (overrides the file).
        #[arg(long)]
        seeds: Option<u64>,
        /// Worker count (overrides the file).
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory (overrides the file).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reference-front cache directory (overrides the file).
        #[arg(long)]
        fronts: Option<PathBuf>,
    },
    /// Build the comparison table from finished run summaries.
    Compare {
        /// Directory holding `*_summary.txt` files.
        #[arg(long = "in")]
        input: PathBuf,
        /// Variant every other variant is tested against.
        #[arg(long)]
        baseline: String,
    },
    /// Regenerate reference-front caches.
    Fronts {
        /// Problem name, or `all` for every built-in.
        #[arg(long)]
        problem: String,
        /// Points per front.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Cache directory.
        #[arg(long, default_value = "fronts")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run {
            problem,
            variant,
            pop,
            fe,
            seed,
            out,
            config,
            fronts,
        } => {
            let base = match config {
                Some(path) => parse_config_file(&path)?,
                None => FileConfig::default(),
            };
            let mut rc = RunConfig::new(problem, Variant::parse(&variant)?);
            rc.pop_size = pop.unwrap_or(base.pop);
            rc.fe_max = fe.unwrap_or(base.fe);
            rc.seed = seed.unwrap_or(0);
            rc.global_seed = base.global_seed;
            rc.agent = base.agent;
            rc.dispersion = base.dispersion;
            rc.front_size = base.front_size;
            rc.fronts_dir = fronts.unwrap_or(base.fronts_dir);
            rc.out_dir = Some(out.clone());

            let result = run_single(&rc)?;
            write_run_files(&result, &out)?;
            println!(
                "problem={} variant={} seed={} generations={} fe={} igd={} hv={} feasible={}",
                result.problem,
                result.variant,
                result.seed,
                result.trace.len(),
                result.consumed_fe,
                result.final_igd,
                result.final_hv,
                result.feasible_ratio
            );
            Ok(())
        }
        Command::Batch {
            config,
            seeds,
            jobs,
            out,
            fronts,
        } => {
            let mut file = parse_config_file(&config)?;
            if let Some(s) = seeds {
                file.seeds = s;
            }
            if let Some(j) = jobs {
                file.jobs = j;
            }
            if let Some(o) = out {
                file.out = Some(o);
            }
            if let Some(f) = fronts {
                file.fronts_dir = f;
            }
            let out_dir = file
                .out
                .clone()
                .ok_or_else(|| Error::Config("batch needs an output directory (`out`)".into()))?;

            let templates = file.run_templates();
            let outcome = run_batch(&templates, file.seeds, file.jobs)?;
            for (key, result) in &outcome.results {
                write_run_files(result, &out_dir)?;
                println!(
                    "done problem={} variant={} seed={} igd={}",
                    key.0, key.1, key.2, result.final_igd
                );
            }
            emit_traces(&outcome, &out_dir)?;
            let mut log = String::new();
            for ((problem, variant, seed), message) in &outcome.failures {
                let line =
                    format!("failed problem={problem} variant={variant} seed={seed}: {message}");
                eprintln!("{line}");
                log.push_str(&line);
                log.push('\n');
            }
            std::fs::write(
                out_dir.join("batch_report.txt"),
                format!(
                    "runs = {}\nfailures = {}\n{log}",
                    outcome.results.len(),
                    outcome.failures.len()
                ),
            )?;
            println!(
                "batch finished: {} runs, {} failures",
                outcome.results.len(),
                outcome.failures.len()
            );
            Ok(())
        }
        Command::Compare { input, baseline } => {
            let samples = collect_summaries(&input)?;
            let table = compare_table(&samples, &baseline)?;
            print!("{}", table.text);
            std::fs::write(input.join("comparison.txt"), &table.text)?;
            std::fs::write(input.join("comparison.csv"), &table.csv)?;
            Ok(())
        }
        Command::Fronts { problem, n, dir } => {
            let names: Vec<&str> = if problem == "all" {
                builtin_names().to_vec()
            } else {
                vec![problem.as_str()]
            };
            for name in names {
                let handle = builtin(name)
                    .ok_or_else(|| Error::Config(format!("unknown problem `{name}`")))?;
                let front = load_or_generate_front(&dir, handle.as_ref(), n, true)?;
                println!(
                    "{name}: cached {} front points under {}",
                    front.len(),
                    dir.display()
                );
            }
            Ok(())
        }
    }
}
