//! One full optimization run with the learned portfolio, printing a
//! compact view of the trace.
//!
//! Run with: cargo run --release -p cmoea --example single_run [problem]

use cmoea::harness::{run_single, RunConfig, Variant};

fn main() {
    let problem = std::env::args().nth(1).unwrap_or_else(|| "tnk".to_string());
    let mut config = RunConfig::new(problem, Variant::Aop);
    config.pop_size = 100;
    config.fe_max = 10_000;
    config.seed = 0;
    config.fronts_dir = "fronts".into();

    let result = run_single(&config).unwrap();
    println!(
        "{} / aop / seed {}: {} generations, {} evaluations, {:?}",
        result.problem,
        result.seed,
        result.trace.len(),
        result.consumed_fe,
        result.wall_clock
    );
    println!("gen    fe      hv        igd       feasible  portfolio (sbx, de-rand, de-best)");
    for row in result.trace.iter().step_by(10.max(result.trace.len() / 12)) {
        println!(
            "{:>4} {:>6}  {:.4}  {:.6}  {:>5.2}     ({:.2}, {:.2}, {:.2})",
            row.gen,
            row.fe,
            row.hv,
            row.igd,
            row.feasible_ratio,
            row.action[0],
            row.action[1],
            row.action[2]
        );
    }
    println!(
        "final: igd {:.6}, hv {:.4}, feasible ratio {:.2}",
        result.final_igd, result.final_hv, result.feasible_ratio
    );
}
