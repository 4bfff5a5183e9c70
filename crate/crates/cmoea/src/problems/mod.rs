//! Constrained multi-objective problem definitions.
//!
//! A problem minimizes `M` objectives over a box-bounded decision space
//! subject to `p` inequality constraints (`g_i(x) <= 0`) and `q` equality
//! constraints (`h_j(x) = 0`, relaxed by `delta`). Violations aggregate into
//! a single nonnegative `cv`; `cv == 0` is the feasibility criterion.

mod builtin;
mod front;

pub use builtin::{builtin, builtin_names, builtin_problems, hv_reference_from_front};
pub use front::{
    generate_front, ideal_point, load_front, load_or_generate_front, nadir_point,
    nondominated_filter, sample_reference_front, save_front, FrontPoint,
};

use std::sync::Arc;

use crate::error::{Error, Result};

/// Default equality-constraint relaxation.
pub const DEFAULT_DELTA: f64 = 1e-4;

/// Static description of a problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDescriptor {
    pub name: String,
    /// Objective count M (>= 2).
    pub objectives: usize,
    /// Decision-variable count D (>= 1).
    pub variables: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Inequality-constraint count p.
    pub inequalities: usize,
    /// Equality-constraint count q.
    pub equalities: usize,
    /// Hypervolume reference point (length M); no point of the known
    /// feasible front exceeds it in any component.
    pub hv_reference: Vec<f64>,
    /// Equality relaxation (> 0).
    pub delta: f64,
}

impl ProblemDescriptor {
    /// Checks the descriptor's own invariants.
    pub fn validate(&self) -> Result<()> {
        if self.objectives < 2 {
            return Err(Error::InvalidInput(format!(
                "{}: objective count must be >= 2",
                self.name
            )));
        }
        if self.variables == 0 {
            return Err(Error::InvalidInput(format!(
                "{}: decision-variable count must be >= 1",
                self.name
            )));
        }
        if self.lower.len() != self.variables || self.upper.len() != self.variables {
            return Err(Error::InvalidInput(format!(
                "{}: bound vectors must have length {}",
                self.name, self.variables
            )));
        }
        if self.lower.iter().zip(&self.upper).any(|(l, u)| l >= u) {
            return Err(Error::InvalidInput(format!(
                "{}: every bound pair must satisfy lower < upper",
                self.name
            )));
        }
        if self.hv_reference.len() != self.objectives {
            return Err(Error::InvalidInput(format!(
                "{}: hv_reference must have length {}",
                self.name, self.objectives
            )));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
        if !(self.delta > 0.0) {
            return Err(Error::InvalidInput(format!(
                "{}: delta must be positive",
                self.name
            )));
        }
        Ok(())
    }
}

/// One evaluation of a decision vector: objectives, raw constraint values,
/// and the aggregated violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    /// Raw inequality values g_i(x) (feasible when <= 0).
    pub g_values: Vec<f64>,
    /// Raw equality values h_j(x) (feasible when |h_j| <= delta).
    pub h_values: Vec<f64>,
    /// Aggregated constraint violation; zero iff feasible.
    pub cv: f64,
}

impl Evaluation {
    pub fn is_feasible(&self) -> bool {
        self.cv == 0.0
    }
}

/// A constrained multi-objective problem. Implementations are immutable
/// after construction and safe to evaluate concurrently.
pub trait Cmop: Send + Sync {
    fn name(&self) -> &str;
    /// Objective count M.
    fn objectives(&self) -> usize;
    /// Decision-variable count D.
    fn variables(&self) -> usize;
    fn lower(&self) -> &[f64];
    fn upper(&self) -> &[f64];
    /// Inequality-constraint count p.
    fn inequalities(&self) -> usize;
    /// Equality-constraint count q.
    fn equalities(&self) -> usize;
    fn delta(&self) -> f64 {
        DEFAULT_DELTA
    }

    /// Raw objective and constraint computation. `f`, `g`, `h` are sized
    /// M, p, q by the caller.
    fn evaluate_raw(&self, x: &[f64], f: &mut [f64], g: &mut [f64], h: &mut [f64]);

    /// Decision vectors whose images densely cover the constrained Pareto
    /// front region; `None` when the problem ships no front generator.
    /// The shared pipeline evaluates them, keeps the feasible ones, and
    /// filters to the nondominated set.
    fn front_candidates(&self) -> Option<Vec<Vec<f64>>> {
        None
    }
}

/// Aggregates raw constraint values into a scalar violation:
/// sum of `max(0, g_i)` plus sum of `max(0, |h_j| - delta)`.
pub fn cv_aggregate(g_values: &[f64], h_values: &[f64], delta: f64) -> Result<f64> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
    if !(delta > 0.0) {
        return Err(Error::InvalidInput("delta must be positive".into()));
    }
    if g_values.iter().chain(h_values).any(|v| !v.is_finite()) {
        return Err(Error::NumericalDomain {
            problem: "<cv_aggregate>".into(),
            detail: "non-finite constraint value".into(),
        });
    }
    let ineq: f64 = g_values.iter().map(|&g| g.max(0.0)).sum();
    let eq: f64 = h_values.iter().map(|&h| (h.abs() - delta).max(0.0)).sum();
    Ok(ineq + eq)
}

/// Evaluates `x` under `problem`, returning objectives, raw constraint
/// values, and the aggregated violation. Pure: identical inputs produce
/// bit-identical output. Callers account one evaluation unit per call.
pub fn evaluate(problem: &dyn Cmop, x: &[f64]) -> Result<Evaluation> {
    if x.len() != problem.variables() {
        return Err(Error::InvalidInput(format!(
            "{}: expected {} decision variables, got {}",
            problem.name(),
            problem.variables(),
            x.len()
        )));
    }
    let mut objectives = vec![0.0; problem.objectives()];
    let mut g_values = vec![0.0; problem.inequalities()];
    let mut h_values = vec![0.0; problem.equalities()];
    problem.evaluate_raw(x, &mut objectives, &mut g_values, &mut h_values);

    if objectives.iter().any(|v| !v.is_finite())
        || g_values.iter().any(|v| !v.is_finite())
        || h_values.iter().any(|v| !v.is_finite())
    {
        return Err(Error::NumericalDomain {
            problem: problem.name().to_string(),
            detail: format!("non-finite evaluator output at x = {x:?}"),
        });
    }
    let cv = cv_aggregate(&g_values, &h_values, problem.delta())?;
    Ok(Evaluation {
        objectives,
        g_values,
        h_values,
        cv,
    })
}

/// Shared handle to a problem instance.
pub type ProblemHandle = Arc<dyn Cmop>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cv_aggregate_clips_satisfied_terms() {
        let cv = cv_aggregate(&[-1.0, 0.5], &[], 1e-4).unwrap();
        assert_eq!(cv, 0.5);
    }

    #[test]
    fn cv_aggregate_relaxes_equalities() {
        let cv = cv_aggregate(&[], &[0.3], 1e-4).unwrap();
        assert!((cv - 0.2999).abs() < 1e-12);
    }

    #[test]
    fn cv_aggregate_zero_when_all_satisfied() {
        let cv = cv_aggregate(&[-2.0, -3.0], &[0.00005], 1e-4).unwrap();
        assert_eq!(cv, 0.0);
    }

    #[test]
    fn cv_aggregate_rejects_non_finite() {
        assert!(cv_aggregate(&[f64::NAN], &[], 1e-4).is_err());
        assert!(cv_aggregate(&[], &[f64::INFINITY], 1e-4).is_err());
    }

    #[test]
    fn cv_aggregate_monotone_in_violations() {
        let lo = cv_aggregate(&[0.1, -1.0], &[0.2], 1e-4).unwrap();
        let hi = cv_aggregate(&[0.2, -1.0], &[0.2], 1e-4).unwrap();
        assert!(hi >= lo);
        let hi_eq = cv_aggregate(&[0.1, -1.0], &[-0.4], 1e-4).unwrap();
        assert!(hi_eq >= lo);
    }

    struct BadProblem;

    impl Cmop for BadProblem {
        fn name(&self) -> &str {
            "bad"
        }
        fn objectives(&self) -> usize {
            2
        }
        fn variables(&self) -> usize {
            1
        }
        fn lower(&self) -> &[f64] {
            &[0.0]
        }
        fn upper(&self) -> &[f64] {
            &[1.0]
        }
        fn inequalities(&self) -> usize {
            0
        }
        fn equalities(&self) -> usize {
            0
        }
        fn evaluate_raw(&self, x: &[f64], f: &mut [f64], _g: &mut [f64], _h: &mut [f64]) {
            f[0] = 1.0 / x[0];
            f[1] = x[0];
        }
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        let p = BadProblem;
        let err = evaluate(&p, &[0.1, 0.2]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn evaluate_rejects_non_finite_output() {
        let p = BadProblem;
        let err = evaluate(&p, &[0.0]).unwrap_err();
        match err {
            Error::NumericalDomain { problem, .. } => assert_eq!(problem, "bad"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
