//! Variation operators and the portfolio allocator.
//!
//! An action is a point on the 3-simplex giving the share of offspring each
//! operator produces in one generation: the SBX pipeline, DE/rand/1, and
//! DE/best/1. Polynomial mutation runs after every operator.

use rand::Rng;

use crate::error::{Error, Result};
use crate::evo::{binary_tournament, Solution};

/// Index of the SBX pipeline inside a portfolio.
pub const OP_SBX: usize = 0;
/// Index of DE/rand/1 inside a portfolio.
pub const OP_DE_RAND: usize = 1;
/// Index of DE/best/1 inside a portfolio.
pub const OP_DE_BEST: usize = 2;

const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Usage proportions for the three operators; nonnegative and summing to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioAction {
    p: [f64; 3],
}

impl PortfolioAction {
    pub fn new(p: [f64; 3]) -> Result<Self> {
        if p.iter().any(|v| !v.is_finite() || *v < -SIMPLEX_TOLERANCE) {
            return Err(Error::InvalidInput(format!(
                "portfolio proportions must be nonnegative, got {p:?}"
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "portfolio proportions must sum to 1, got {sum}"
            )));
        }
        let mut p = p;
        for v in p.iter_mut() {
            *v = v.max(0.0);
        }
        Ok(Self { p })
    }

    /// The degenerate portfolio putting all mass on one operator.
    pub fn vertex(operator: usize) -> Self {
        let mut p = [0.0; 3];
        p[operator] = 1.0;
        Self { p }
    }

    pub fn uniform() -> Self {
        Self {
            p: [1.0 / 3.0; 3],
        }
    }

    pub fn proportions(&self) -> [f64; 3] {
        self.p
    }
}

/// Operator parameters; defaults follow common practice for real-coded
/// variation: pc=1, eta=20 for both SBX and mutation, pm=1/D, F=0.5, CR=1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    /// Per-variable crossover probability.
    pub pc: f64,
    /// SBX distribution index.
    pub eta_c: f64,
    /// Per-variable mutation probability.
    pub pm: f64,
    /// Mutation distribution index.
    pub eta_m: f64,
    /// DE difference scale.
    pub de_f: f64,
    /// DE binomial crossover rate.
    pub cr: f64,
}

impl OperatorParams {
    pub fn for_dimension(d: usize) -> Self {
        Self {
            pc: 1.0,
            eta_c: 20.0,
            pm: 1.0 / d as f64,
            eta_m: 20.0,
            de_f: 0.5,
            cr: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.pc) || !unit(self.pm) || !unit(self.cr) {
            return Err(Error::InvalidInput(
                "pc, pm, CR must lie in [0, 1]".into(),
            ));
        }
        if self.eta_c <= 0.0 || self.eta_m <= 0.0 || self.de_f < 0.0 {
            return Err(Error::InvalidInput(
                "distribution indices must be positive and F nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Splits `n_offspring` among the three operators by largest-remainder
/// apportionment; remainder ties go to the lowest operator index.
pub fn allocate_counts(action: &PortfolioAction, n_offspring: usize) -> [usize; 3] {
    let p = action.proportions();
    let mut counts = [0usize; 3];
    let mut remainders = [(0.0f64, 0usize); 3];
    let mut assigned = 0;
    for k in 0..3 {
        let exact = p[k] * n_offspring as f64;
        counts[k] = exact.floor() as usize;
        remainders[k] = (exact - exact.floor(), k);
        assigned += counts[k];
    }
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    for &(_, k) in remainders.iter().take(n_offspring - assigned) {
        counts[k] += 1;
    }
    counts
}

/// SBX spread factor for a uniform draw `u` and distribution index `eta`.
pub(crate) fn sbx_spread(u: f64, eta: f64) -> f64 {
    let e = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(e)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(e)
    }
}

/// Unclipped SBX children of a parent pair for a given spread factor.
pub(crate) fn sbx_children(p1: f64, p2: f64, beta: f64) -> (f64, f64) {
    (
        0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2),
        0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2),
    )
}

/// Simulated binary crossover applied per variable with probability `pc`,
/// children clipped to the bounds.
pub fn sbx_pair(
    parent1: &[f64],
    parent2: &[f64],
    params: &OperatorParams,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(parent1.len(), parent2.len());
    let mut c1 = Vec::with_capacity(parent1.len());
    let mut c2 = Vec::with_capacity(parent2.len());
    for j in 0..parent1.len() {
        let (mut a, mut b) = (parent1[j], parent2[j]);
        if rng.gen::<f64>() <= params.pc {
            let beta = sbx_spread(rng.gen(), params.eta_c);
            let (x, y) = sbx_children(a, b, beta);
            a = x;
            b = y;
        }
        c1.push(a.clamp(lower[j], upper[j]));
        c2.push(b.clamp(lower[j], upper[j]));
    }
    (c1, c2)
}

/// Polynomial-mutation offset for one variable at a uniform draw `u`.
pub(crate) fn pm_value(v: f64, lo: f64, hi: f64, eta: f64, u: f64) -> f64 {
    let span = hi - lo;
    if span <= 0.0 {
        return v;
    }
    let d1 = (v - lo) / span;
    let d2 = (hi - v) / span;
    let exp = 1.0 / (eta + 1.0);
    let dq = if u < 0.5 {
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0)).powf(exp) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u) + (2.0 * u - 1.0) * (1.0 - d2).powf(eta + 1.0)).powf(exp)
    };
    (v + dq * span).clamp(lo, hi)
}

/// Polynomial mutation: each variable perturbed with probability `pm`.
pub fn polynomial_mutation(
    x: &[f64],
    params: &OperatorParams,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(j, &v)| {
            if rng.gen::<f64>() < params.pm {
                pm_value(v, lower[j], upper[j], params.eta_m, rng.gen())
            } else {
                v
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn de_trial(
    base: &[f64],
    r2: &[f64],
    r3: &[f64],
    target: &[f64],
    params: &OperatorParams,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    let d = base.len();
    if r2.len() != d || r3.len() != d || target.len() != d {
        return Err(Error::InvalidInput(
            "DE parents and target must share one dimension".into(),
        ));
    }
    let j_rand = rng.gen_range(0..d);
    Ok((0..d)
        .map(|j| {
            let from_mutant = j == j_rand || rng.gen::<f64>() < params.cr;
            let v = if from_mutant {
                base[j] + params.de_f * (r2[j] - r3[j])
            } else {
                target[j]
            };
            v.clamp(lower[j], upper[j])
        })
        .collect())
}

/// DE/rand/1: mutant `r1 + F * (r2 - r3)` crossed binomially into `target`
/// with one guaranteed mutant coordinate, clipped to the bounds.
#[allow(clippy::too_many_arguments)]
pub fn de_rand_1(
    r1: &[f64],
    r2: &[f64],
    r3: &[f64],
    target: &[f64],
    params: &OperatorParams,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    de_trial(r1, r2, r3, target, params, lower, upper, rng)
}

/// DE/best/1: like DE/rand/1 with a first-front member as the base vector.
#[allow(clippy::too_many_arguments)]
pub fn de_best_1(
    best: &[f64],
    r2: &[f64],
    r3: &[f64],
    target: &[f64],
    params: &OperatorParams,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    de_trial(best, r2, r3, target, params, lower, upper, rng)
}

fn distinct_indices<const K: usize>(
    len: usize,
    exclude: Option<usize>,
    rng: &mut impl Rng,
) -> Result<[usize; K]> {
    let available = len - exclude.map_or(0, |_| 1);
    if available < K {
        return Err(Error::InvalidInput(format!(
            "need {K} distinct candidates, population offers {available}"
        )));
    }
    let mut out = [0usize; K];
    let mut taken: Vec<usize> = exclude.into_iter().collect();
    for slot in out.iter_mut() {
        let mut idx = rng.gen_range(0..len - taken.len());
        let mut sorted = taken.clone();
        sorted.sort_unstable();
        for &t in &sorted {
            if idx >= t {
                idx += 1;
            }
        }
        *slot = idx;
        taken.push(idx);
    }
    Ok(out)
}

/// Produces exactly `n_offspring` decision vectors from a decorated
/// population: the portfolio splits the count, SBX parents come from
/// binary tournaments, DE bases from random distinct members (or a random
/// first-front member for DE/best/1), and every child passes through
/// polynomial mutation.
pub fn generate_offspring(
    pop: &[Solution],
    action: &PortfolioAction,
    n_offspring: usize,
    params: &OperatorParams,
    lower: &[f64],
    upper: &[f64],
    rng: &mut impl Rng,
) -> Result<Vec<Vec<f64>>> {
    if n_offspring == 0 {
        return Err(Error::InvalidInput("offspring count must be >= 1".into()));
    }
    if pop.len() < 2 {
        return Err(Error::InvalidInput(
            "offspring generation needs at least two parents".into(),
        ));
    }
    let [n_sbx, n_rand, n_best] = allocate_counts(action, n_offspring);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n_offspring);

    let mut produced = 0;
    while produced < n_sbx {
        let p1 = binary_tournament(pop, rng);
        let p2 = binary_tournament(pop, rng);
        let (c1, c2) = sbx_pair(&pop[p1].x, &pop[p2].x, params, lower, upper, rng);
        out.push(polynomial_mutation(&c1, params, lower, upper, rng));
        produced += 1;
        if produced < n_sbx {
            out.push(polynomial_mutation(&c2, params, lower, upper, rng));
            produced += 1;
        }
    }

    for i in 0..n_rand {
        let [r1, r2, r3] = distinct_indices::<3>(pop.len(), None, rng)?;
        let target = &pop[i % pop.len()].x;
        let trial = de_rand_1(
            &pop[r1].x, &pop[r2].x, &pop[r3].x, target, params, lower, upper, rng,
        )?;
        out.push(polynomial_mutation(&trial, params, lower, upper, rng));
    }

    if n_best > 0 {
        // First front under the population's own decoration.
        let min_rank = pop.iter().map(|s| s.rank).min().unwrap();
        let front: Vec<usize> = (0..pop.len()).filter(|&i| pop[i].rank == min_rank).collect();
        for i in 0..n_best {
            let best = front[rng.gen_range(0..front.len())];
            let [r2, r3] = distinct_indices::<2>(pop.len(), Some(best), rng)?;
            let target = &pop[i % pop.len()].x;
            let trial = de_best_1(
                &pop[best].x, &pop[r2].x, &pop[r3].x, target, params, lower, upper, rng,
            )?;
            out.push(polynomial_mutation(&trial, params, lower, upper, rng));
        }
    }

    debug_assert_eq!(out.len(), n_offspring);
    Ok(out)
}
