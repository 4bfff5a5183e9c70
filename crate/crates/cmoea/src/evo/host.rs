//! The dual-population host: one population selects under constrained
//! dominance, a helper population under plain dominance, and both trade
//! offspring every generation (weak cooperation).

use rand::Rng;

use super::selection::{decorate, environmental_selection};
use super::Solution;
use crate::error::{Error, Result};
use crate::operators::{generate_offspring, OperatorParams, PortfolioAction};
use crate::problems::{evaluate, ProblemHandle};

/// Draws `n` solutions uniformly at random within the bounds and evaluates
/// them. Charges `n` evaluation units to whichever budget the caller keeps.
pub fn initialize_population(
    problem: &ProblemHandle,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Solution>> {
    if n < 2 {
        return Err(Error::InvalidInput("population size must be >= 2".into()));
    }
    let (lower, upper) = (problem.lower(), problem.upper());
    let mut pop = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = lower
            .iter()
            .zip(upper)
            .map(|(&lo, &hi)| lo + rng.gen::<f64>() * (hi - lo))
            .collect();
        let eval = evaluate(problem.as_ref(), &x)?;
        pop.push(Solution::new(x, eval));
    }
    Ok(pop)
}

/// Run state for one optimization: two populations, the evaluation budget,
/// and the operator parameters. Confined to a single run; distinct runs
/// share nothing mutable.
pub struct HostState {
    problem: ProblemHandle,
    constrained: Vec<Solution>,
    helper: Vec<Solution>,
    capacity: usize,
    consumed: u64,
    budget: u64,
    params: OperatorParams,
}

impl HostState {
    /// Initializes both populations from one shared random sample so
    /// initialization charges exactly `n` evaluations.
    pub fn new(
        problem: ProblemHandle,
        n: usize,
        budget: u64,
        params: OperatorParams,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "population size must be even and >= 4".into(),
            ));
        }
        params.validate()?;
        let sample = initialize_population(&problem, n, rng)?;
        let mut constrained = sample.clone();
        let mut helper = sample;
        decorate(&mut constrained, true);
        decorate(&mut helper, false);
        Ok(Self {
            problem,
            constrained,
            helper,
            capacity: n,
            consumed: n as u64,
            budget,
            params,
        })
    }

    /// The population selecting under constrained dominance.
    pub fn constrained_population(&self) -> &[Solution] {
        &self.constrained
    }

    /// The helper population solving the unconstrained relaxation.
    pub fn helper_population(&self) -> &[Solution] {
        &self.helper
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn problem(&self) -> &ProblemHandle {
        &self.problem
    }

    pub fn params(&self) -> &OperatorParams {
        &self.params
    }

    /// Whether one more generation fits in the remaining budget.
    pub fn can_step(&self) -> bool {
        self.consumed + self.capacity as u64 <= self.budget
    }

    /// Runs one generation under the given portfolio: each population
    /// breeds capacity/2 offspring with the same action, every offspring
    /// joins both selection pools, and each population truncates back to
    /// capacity under its own comparator. Charges `capacity` evaluations.
    pub fn step_generation(
        &mut self,
        action: &PortfolioAction,
        rng: &mut impl Rng,
    ) -> Result<usize> {
        if !self.can_step() {
            return Err(Error::InvalidInput(format!(
                "budget exhausted: {} consumed of {}, generation needs {}",
                self.consumed, self.budget, self.capacity
            )));
        }
        let half = self.capacity / 2;
        let (lower, upper) = (self.problem.lower().to_vec(), self.problem.upper().to_vec());

        let mut offspring_x = generate_offspring(
            &self.constrained,
            action,
            half,
            &self.params,
            &lower,
            &upper,
            rng,
        )?;
        offspring_x.extend(generate_offspring(
            &self.helper,
            action,
            half,
            &self.params,
            &lower,
            &upper,
            rng,
        )?);

        let mut offspring = Vec::with_capacity(offspring_x.len());
        for x in offspring_x {
            let eval = evaluate(self.problem.as_ref(), &x)?;
            offspring.push(Solution::new(x, eval));
        }
        self.consumed += offspring.len() as u64;
        let produced = offspring.len();

        let mut pool1 = std::mem::take(&mut self.constrained);
        pool1.extend(offspring.iter().cloned());
        self.constrained = environmental_selection(pool1, self.capacity, true)?;

        let mut pool2 = std::mem::take(&mut self.helper);
        pool2.extend(offspring);
        self.helper = environmental_selection(pool2, self.capacity, false)?;

        Ok(produced)
    }
}
