//! A small ablation: the learned portfolio against each single operator on
//! two problems, summarized in a comparison table.
//!
//! Run with: cargo run --release -p cmoea --example ablation

use cmoea::harness::{compare_table, run_batch, RunConfig, Variant};

fn main() {
    let variants = [
        Variant::Aop,
        Variant::GaOnly,
        Variant::DeRandOnly,
        Variant::DeBestOnly,
    ];
    let mut templates = Vec::new();
    for problem in ["bnh", "tnk"] {
        for variant in &variants {
            let mut rc = RunConfig::new(problem, variant.clone());
            rc.pop_size = 60;
            rc.fe_max = 6_000;
            rc.fronts_dir = "fronts".into();
            templates.push(rc);
        }
    }

    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    println!("running {} cells x 5 seeds on {jobs} workers...", templates.len());
    let outcome = run_batch(&templates, 5, jobs).unwrap();
    for ((problem, variant, seed), result) in &outcome.results {
        if *seed == 0 {
            println!(
                "  {problem}/{variant}: igd {:.5} ({} generations)",
                result.final_igd,
                result.trace.len()
            );
        }
    }

    let table = compare_table(&outcome.igd_samples(), "aop").unwrap();
    println!("\n{}", table.text);
}
