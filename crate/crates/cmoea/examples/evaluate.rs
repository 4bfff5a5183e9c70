//! List the built-in problems and evaluate a few decision vectors.
//!
//! Run with: cargo run -p cmoea --example evaluate

use cmoea::problems::{builtin, builtin_problems, evaluate};

fn main() {
    println!("built-in problems:");
    for d in builtin_problems() {
        println!(
            "  {:<9} M={} D={:>2} p={} bounds[0]=[{}, {}] hv_reference={:?}",
            d.name, d.objectives, d.variables, d.inequalities, d.lower[0], d.upper[0],
            d.hv_reference
        );
    }

    println!("\nsample evaluations:");
    let cases: &[(&str, Vec<f64>)] = &[
        ("bnh", vec![0.0, 0.0]),
        ("constr", vec![1.0, 0.0]),
        ("tnk", vec![1.0, 0.3]),
        ("synth-mm", vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ];
    for (name, x) in cases {
        let problem = builtin(name).unwrap();
        let eval = evaluate(problem.as_ref(), x).unwrap();
        println!(
            "  {:<9} x={:?} -> f={:?} cv={} ({})",
            name,
            x,
            eval.objectives,
            eval.cv,
            if eval.is_feasible() { "feasible" } else { "infeasible" }
        );
    }
}
