//! Train the agent on an analytic single-step environment where the true
//! value of a portfolio is a fixed dot product, then checkpoint it and
//! reload. The deterministic policy should concentrate on the operator
//! with the largest weight.
//!
//! Run with: cargo run -p cmoea --example ddpg_stub

use cmoea::agent::{
    checkpoint_load, checkpoint_save, AgentConfig, DdpgAgent, EvolutionState, Transition,
};
use cmoea::operators::PortfolioAction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_state(rng: &mut impl Rng) -> EvolutionState {
    EvolutionState {
        con: vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
        div: vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)],
        fea: rng.gen_range(0.0..1.0),
        lambda: rng.gen_range(0.0..1.0),
        normalized: true,
    }
}

fn main() {
    let truth = [0.2, 0.7, 0.1];
    println!("true operator values: {truth:?} (best = operator 1, DE/rand/1)");

    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let config = AgentConfig {
        actor_lr: 1e-2,
        critic_lr: 1e-2,
        hidden_width: 16,
        ..AgentConfig::default()
    };
    let mut agent = DdpgAgent::new(6, config, &mut rng).unwrap();

    // Single-step episodes: reward is exactly the portfolio's value.
    for _ in 0..512 {
        let state = random_state(&mut rng);
        let action = agent.select_action(&state, true, &mut rng).unwrap();
        let reward: f64 = action
            .proportions()
            .iter()
            .zip(&truth)
            .map(|(a, w)| a * w)
            .sum();
        agent.store_transition(Transition {
            state: state.clone(),
            action,
            reward,
            next_state: state,
            terminal: true,
        });
    }

    let probe = random_state(&mut rng);
    for step in 0..=2000 {
        if step % 500 == 0 {
            let a = agent.select_action(&probe, false, &mut rng).unwrap();
            println!("step {step:>4}: deterministic portfolio {:?}", a.proportions());
        }
        if step < 2000 {
            agent.train_step(&mut rng).unwrap();
        }
    }

    let mut bytes = Vec::new();
    checkpoint_save(&agent, &mut bytes);
    let restored = checkpoint_load(&bytes).unwrap();
    let a = agent.select_action(&probe, false, &mut rng).unwrap();
    let b = restored.select_action(&probe, false, &mut rng).unwrap();
    assert_eq!(a.proportions(), b.proportions());
    println!(
        "checkpoint round-trip: {} bytes, restored policy identical ({:?})",
        bytes.len(),
        PortfolioAction::new(b.proportions()).unwrap().proportions()
    );
}
