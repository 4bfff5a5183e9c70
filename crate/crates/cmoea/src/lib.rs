//! Constrained multi-objective evolutionary optimization with a learned
//! operator portfolio.
//!
//! A dual-population evolutionary algorithm minimizes several objectives
//! under inequality/equality constraints while a DDPG agent watches
//! population features each generation and recommends what fraction of the
//! offspring each variation operator should produce (SBX pipeline,
//! DE/rand/1, DE/best/1). The agent's reward is the hypervolume
//! improvement of the constrained population.
//!
//! - [`problems`]: the problem abstraction, built-in benchmarks, and
//!   reference-front generation.
//! - [`evo`]: dominance machinery, environmental selection, and the
//!   dual-population host.
//! - [`operators`]: the three operators and the portfolio allocator.
//! - [`agent`]: state extraction, networks with exact backprop, replay,
//!   training, and checkpoints.
//! - [`metrics`]: hypervolume, IGD, and the rank-sum test.
//! - [`harness`]: run configuration, seeded execution, batches, and
//!   comparison tables.
//!
//! Runs are deterministic: a run's RNG stream derives from
//! (global seed, problem, variant, seed index) and nothing else.

pub mod agent;
pub mod error;
pub mod evo;
pub mod harness;
pub mod metrics;
pub mod operators;
pub mod problems;
