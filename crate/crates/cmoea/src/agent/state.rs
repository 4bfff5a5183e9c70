//! The agent's observation of a population: per-objective means and
//! dispersions, mean constraint violation, and the consumed-budget
//! fraction. Dimension is 2M + 2.

use crate::evo::Solution;

/// How per-objective dispersion is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DispersionMode {
    /// Population variance: sum((f_i(x) - mean_i)^2) / N.
    #[default]
    Variance,
    /// Compatibility switch: (sum(f_i(x)) - mean_i)^2 / N, the squared
    /// centered total rather than a spread measure. Kept selectable for
    /// audits; not the default.
    LiteralSquaredSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    /// Mean objective values over the population (length M).
    pub con: Vec<f64>,
    /// Per-objective dispersion (length M).
    pub div: Vec<f64>,
    /// Mean constraint violation.
    pub fea: f64,
    /// Consumed-budget fraction in [0, 1].
    pub lambda: f64,
    /// Whether the run normalizer has rescaled this state.
    pub normalized: bool,
}

impl EvolutionState {
    pub fn dimension(&self) -> usize {
        2 * self.con.len() + 2
    }

    /// Flat network input: con, div, fea, lambda.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dimension());
        v.extend_from_slice(&self.con);
        v.extend_from_slice(&self.div);
        v.push(self.fea);
        v.push(self.lambda);
        v
    }
}

/// Extracts the raw (unnormalized) observation from a population.
pub fn extract_state(
    pop: &[Solution],
    consumed: u64,
    budget: u64,
    mode: DispersionMode,
) -> EvolutionState {
    assert!(!pop.is_empty(), "state extraction needs a population");
    assert!(consumed <= budget && budget > 0);
    let n = pop.len() as f64;
    let m = pop[0].objectives().len();

    let mut con = vec![0.0; m];
    for s in pop {
        for (c, &f) in con.iter_mut().zip(s.objectives()) {
            *c += f;
        }
    }
    for c in con.iter_mut() {
        *c /= n;
    }

    let mut div = vec![0.0; m];
    match mode {
        DispersionMode::Variance => {
            for s in pop {
                for k in 0..m {
                    let d = s.objectives()[k] - con[k];
                    div[k] += d * d;
                }
            }
            for d in div.iter_mut() {
                *d /= n;
            }
        }
        DispersionMode::LiteralSquaredSum => {
            for k in 0..m {
                let total: f64 = pop.iter().map(|s| s.objectives()[k]).sum();
                div[k] = (total - con[k]).powi(2) / n;
            }
        }
    }

    let fea = pop.iter().map(|s| s.cv()).sum::<f64>() / n;
    EvolutionState {
        con,
        div,
        fea,
        lambda: consumed as f64 / budget as f64,
        normalized: false,
    }
}

/// Clip range for normalized state components.
pub const STATE_CLIP: f64 = 10.0;

/// Rescales raw states by the first observation of the run so inputs are
/// comparable across problems with different objective magnitudes.
/// Components whose baseline is zero divide by one; everything except
/// lambda is clipped to ±[`STATE_CLIP`].
#[derive(Debug, Clone, Default)]
pub struct StateNormalizer {
    baseline: Option<Vec<f64>>,
}

impl StateNormalizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normalizes `raw`, adopting it as the baseline if none is set yet.
    pub fn normalize(&mut self, raw: &EvolutionState) -> EvolutionState {
        debug_assert!(!raw.normalized);
        let mut scaled = raw.to_vector();
        // lambda (the final component) passes through unscaled.
        let feature_len = scaled.len() - 1;
        let baseline = self
            .baseline
            .get_or_insert_with(|| scaled[..feature_len].to_vec());
        for (v, &b) in scaled[..feature_len].iter_mut().zip(baseline.iter()) {
            let denom = if b == 0.0 { 1.0 } else { b };
            *v = (*v / denom).clamp(-STATE_CLIP, STATE_CLIP);
        }
        let m = raw.con.len();
        EvolutionState {
            con: scaled[..m].to_vec(),
            div: scaled[m..2 * m].to_vec(),
            fea: scaled[2 * m],
            lambda: raw.lambda,
            normalized: true,
        }
    }

    pub fn baseline(&self) -> Option<&[f64]> {
        self.baseline.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Evaluation;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn sol(objectives: Vec<f64>, cv: f64) -> Solution {
        Solution::new(
            vec![0.0],
            Evaluation {
                objectives,
                g_values: vec![],
                h_values: vec![],
                cv,
            },
        )
    }

    #[test]
    fn single_member_statistics() {
        let pop = vec![sol(vec![1.0, 2.0], 0.0)];
        let s = extract_state(&pop, 500, 1000, DispersionMode::Variance);
        assert_eq!(s.con, vec![1.0, 2.0]);
        assert_eq!(s.div, vec![0.0, 0.0]);
        assert_eq!(s.fea, 0.0);
        assert_eq!(s.lambda, 0.5);
        assert_eq!(s.dimension(), 6);
        assert!(!s.normalized);
    }

    #[test]
    fn two_point_variance() {
        let pop = vec![sol(vec![1.0, 0.0], 0.0), sol(vec![3.0, 0.0], 0.0)];
        let s = extract_state(&pop, 0, 1, DispersionMode::Variance);
        assert_eq!(s.con[0], 2.0);
        assert_eq!(s.div[0], 1.0);
    }

    #[test]
    fn all_feasible_population_has_zero_fea() {
        let pop = vec![sol(vec![1.0, 1.0], 0.0), sol(vec![2.0, 0.5], 0.0)];
        let s = extract_state(&pop, 1, 4, DispersionMode::Variance);
        assert_eq!(s.fea, 0.0);
    }

    #[test]
    fn literal_mode_squares_the_centered_total() {
        let pop = vec![sol(vec![1.0, 0.0], 0.0), sol(vec![3.0, 0.0], 0.0)];
        let s = extract_state(&pop, 0, 1, DispersionMode::LiteralSquaredSum);
        // Total 4, mean 2: (4 - 2)^2 / 2 = 2.
        assert_eq!(s.div[0], 2.0);
    }

    #[test]
    fn permutation_invariant_within_tolerance() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let mut pop: Vec<Solution> = (0..50)
            .map(|_| sol(vec![rng.gen::<f64>() * 10.0, rng.gen::<f64>()], rng.gen()))
            .collect();
        let a = extract_state(&pop, 3, 10, DispersionMode::Variance);
        pop.shuffle(&mut rng);
        let b = extract_state(&pop, 3, 10, DispersionMode::Variance);
        for (x, y) in a.to_vector().iter().zip(b.to_vector()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn normalizer_keeps_first_state_as_baseline() {
        let mut norm = StateNormalizer::new();
        let pop = vec![sol(vec![4.0, 8.0], 2.0)];
        let raw = extract_state(&pop, 100, 1000, DispersionMode::Variance);
        let first = norm.normalize(&raw);
        // Nonzero components normalize to 1; zero baselines divide by one.
        assert_eq!(first.con, vec![1.0, 1.0]);
        assert_eq!(first.div, vec![0.0, 0.0]);
        assert_eq!(first.fea, 1.0);
        assert_eq!(first.lambda, 0.1);
        assert!(first.normalized);

        let pop2 = vec![sol(vec![2.0, 4.0], 0.0)];
        let raw2 = extract_state(&pop2, 200, 1000, DispersionMode::Variance);
        let second = norm.normalize(&raw2);
        assert_eq!(second.con, vec![0.5, 0.5]);
        assert_eq!(second.fea, 0.0);
        assert_eq!(second.lambda, 0.2);
    }

    #[test]
    fn normalizer_clips_to_range() {
        let mut norm = StateNormalizer::new();
        let raw = extract_state(
            &[sol(vec![0.001, 1.0], 0.0)],
            0,
            10,
            DispersionMode::Variance,
        );
        norm.normalize(&raw);
        let huge = extract_state(
            &[sol(vec![100.0, -1e6], 0.0)],
            5,
            10,
            DispersionMode::Variance,
        );
        let scaled = norm.normalize(&huge);
        assert_eq!(scaled.con[0], STATE_CLIP);
        assert_eq!(scaled.con[1], -STATE_CLIP);
    }
}
