//! Quality indicators on small hand-made sets: hypervolume, IGD, and the
//! rank-sum test.
//!
//! Run with: cargo run -p cmoea --example indicators

use cmoea::metrics::{hypervolume, igd, wilcoxon_rank_sum, IndicatorConfig};

fn main() {
    let config = IndicatorConfig::new(vec![0.0, 0.0], vec![3.0, 3.0]).unwrap();
    let points = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
    let fraction = hypervolume(&points, &config);
    println!(
        "hypervolume of {points:?} against reference (3,3): fraction {fraction:.4} \
         (raw volume {})",
        fraction * config.box_volume()
    );

    let front = vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]];
    let attained = vec![vec![0.1, 1.0], vec![1.0, 0.1]];
    println!("igd(front, attained) = {:.5}", igd(&front, &attained));
    println!("igd(front, front)    = {:.5}", igd(&front, &front));

    let a = [0.011, 0.012, 0.010, 0.013, 0.009];
    let b = [0.018, 0.021, 0.017, 0.016, 0.020];
    let (p, verdict) = wilcoxon_rank_sum(&a, &b, 0.05);
    println!(
        "rank-sum: sample a (median lower) vs sample b -> p = {p:.4}, verdict `{}`",
        verdict.symbol()
    );
}
