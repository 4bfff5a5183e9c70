//! The three variation operators and the portfolio allocator on a toy
//! population.
//!
//! Run with: cargo run -p cmoea --example operators_demo

use cmoea::evo::{decorate, Solution};
use cmoea::operators::{
    allocate_counts, de_rand_1, generate_offspring, polynomial_mutation, sbx_pair,
    OperatorParams, PortfolioAction,
};
use cmoea::problems::Evaluation;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() {
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let params = OperatorParams::for_dimension(2);
    let lower = [0.0, 0.0];
    let upper = [1.0, 1.0];

    let action = PortfolioAction::new([0.5, 0.3, 0.2]).unwrap();
    println!("portfolio {:?} over 10 offspring -> counts {:?}", action.proportions(),
        allocate_counts(&action, 10));

    let (c1, c2) = sbx_pair(&[0.2, 0.8], &[0.6, 0.4], &params, &lower, &upper, &mut rng);
    println!("sbx children of (0.2,0.8) x (0.6,0.4): {c1:?} {c2:?}");

    let mutated = polynomial_mutation(&[0.5, 0.5], &params, &lower, &upper, &mut rng);
    println!("polynomial mutation of (0.5,0.5): {mutated:?}");

    let trial = de_rand_1(
        &[0.1, 0.1],
        &[0.9, 0.5],
        &[0.3, 0.3],
        &[0.5, 0.5],
        &params,
        &lower,
        &upper,
        &mut rng,
    )
    .unwrap();
    println!("de/rand/1 trial from base (0.1,0.1): {trial:?}");

    // A decorated population drives tournament and best-member selection.
    let mut pop: Vec<Solution> = (0..8)
        .map(|i| {
            let t = i as f64 / 7.0;
            Solution::new(
                vec![t, 1.0 - t],
                Evaluation {
                    objectives: vec![t, 1.0 - t],
                    g_values: vec![],
                    h_values: vec![],
                    cv: 0.0,
                },
            )
        })
        .collect();
    decorate(&mut pop, true);
    let kids = generate_offspring(&pop, &action, 6, &params, &lower, &upper, &mut rng).unwrap();
    println!("6 portfolio offspring:");
    for kid in kids {
        println!("  {kid:?}");
    }
}
