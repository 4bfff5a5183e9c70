//! Population machinery: solutions, dominance relations, environmental
//! selection, and the dual-population host the agent steers.

mod dominance;
mod host;
mod selection;

pub use dominance::{
    constrained_compare, crowding_distance, nondominated_sort, pareto_compare, Dominance,
};
pub use host::{initialize_population, HostState};
pub use selection::{binary_tournament, decorate, environmental_selection};

use crate::problems::Evaluation;

/// A candidate solution with its evaluation and transient selection state.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<f64>,
    pub eval: Evaluation,
    /// Nondomination rank set during selection (0 = first front).
    pub rank: usize,
    /// Crowding estimate set during selection; `f64::INFINITY` marks
    /// per-objective boundary solutions.
    pub crowding: f64,
}

impl Solution {
    pub fn new(x: Vec<f64>, eval: Evaluation) -> Self {
        Self {
            x,
            eval,
            rank: 0,
            crowding: 0.0,
        }
    }

    pub fn objectives(&self) -> &[f64] {
        &self.eval.objectives
    }

    pub fn cv(&self) -> f64 {
        self.eval.cv
    }

    pub fn is_feasible(&self) -> bool {
        self.eval.is_feasible()
    }
}
