//! Dominance relations, fast nondominated sorting, and crowding distances.

use super::Solution;

/// Outcome of comparing two solutions under a (partial) preference order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// The first solution precedes (is preferred to) the second.
    Precedes,
    /// The second solution precedes the first.
    Succeeds,
    Incomparable,
}

/// Plain Pareto dominance on objective vectors (minimization). Equal
/// vectors are incomparable.
pub fn pareto_compare(a: &[f64], b: &[f64]) -> Dominance {
    debug_assert_eq!(a.len(), b.len());
    let mut a_better = false;
    let mut b_better = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            a_better = true;
        } else if y < x {
            b_better = true;
        }
        if a_better && b_better {
            return Dominance::Incomparable;
        }
    }
    match (a_better, b_better) {
        (true, false) => Dominance::Precedes,
        (false, true) => Dominance::Succeeds,
        _ => Dominance::Incomparable,
    }
}

/// Feasibility-first comparison: feasible beats infeasible, lower violation
/// beats higher violation, and feasible pairs fall back to Pareto
/// dominance. Infeasible pairs with equal violation are incomparable.
pub fn constrained_compare(a: &Solution, b: &Solution) -> Dominance {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => Dominance::Precedes,
        (false, true) => Dominance::Succeeds,
        (false, false) => {
            if a.cv() < b.cv() {
                Dominance::Precedes
            } else if b.cv() < a.cv() {
                Dominance::Succeeds
            } else {
                Dominance::Incomparable
            }
        }
        (true, true) => pareto_compare(a.objectives(), b.objectives()),
    }
}

fn compare(a: &Solution, b: &Solution, use_constraints: bool) -> Dominance {
    if use_constraints {
        constrained_compare(a, b)
    } else {
        pareto_compare(a.objectives(), b.objectives())
    }
}

/// Fast nondominated sort: partitions indices into fronts F1, F2, ... under
/// the chosen comparator. No member of a front is preceded by a member of
/// the same or a later front.
pub fn nondominated_sort(pop: &[Solution], use_constraints: bool) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by: Vec<usize> = vec![0; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            match compare(&pop[i], &pop[j], use_constraints) {
                Dominance::Precedes => {
                    dominates[i].push(j);
                    dominated_by[j] += 1;
                }
                Dominance::Succeeds => {
                    dominates[j].push(i);
                    dominated_by[i] += 1;
                }
                Dominance::Incomparable => {}
            }
        }
    }
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Assigns crowding values to `front` members in place.
///
/// Per objective, boundary solutions receive the infinity marker; interior
/// solutions accumulate the normalized gap between their neighbors,
/// `(next - prev) / (2 * range)`. Ties in objective values sort by member
/// index, and degenerate ranges contribute nothing.
pub fn crowding_distance(pop: &mut [Solution], front: &[usize]) {
    for &i in front {
        pop[i].crowding = 0.0;
    }
    if front.len() <= 2 {
        for &i in front {
            pop[i].crowding = f64::INFINITY;
        }
        return;
    }
    let m = pop[front[0]].objectives().len();
    for k in 0..m {
        let mut order: Vec<usize> = front.to_vec();
        order.sort_by(|&a, &b| {
            pop[a].objectives()[k]
                .partial_cmp(&pop[b].objectives()[k])
                .unwrap()
                .then(a.cmp(&b))
        });
        let lo = pop[order[0]].objectives()[k];
        let hi = pop[*order.last().unwrap()].objectives()[k];
        pop[order[0]].crowding = f64::INFINITY;
        pop[*order.last().unwrap()].crowding = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in order.windows(3) {
            let gap = pop[w[2]].objectives()[k] - pop[w[0]].objectives()[k];
            pop[w[1]].crowding += gap / (2.0 * range);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Evaluation;
    use rand::{Rng, SeedableRng};
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
    fn feasible_precedes_infeasible() {
        let a = sol(vec![5.0, 5.0], 0.0);
        let b = sol(vec![1.0, 1.0], 0.3);
        assert_eq!(constrained_compare(&a, &b), Dominance::Precedes);
    }

    #[test]
    fn lower_violation_precedes() {
        let a = sol(vec![5.0, 5.0], 0.2);
        let b = sol(vec![1.0, 1.0], 0.5);
        assert_eq!(constrained_compare(&a, &b), Dominance::Precedes);
    }

    #[test]
    fn feasible_pair_falls_back_to_dominance() {
        let a = sol(vec![1.0, 1.0], 0.0);
        let b = sol(vec![2.0, 2.0], 0.0);
        assert_eq!(constrained_compare(&a, &b), Dominance::Precedes);
        assert_eq!(constrained_compare(&b, &a), Dominance::Succeeds);
        let c = sol(vec![2.0, 0.5], 0.0);
        assert_eq!(constrained_compare(&a, &c), Dominance::Incomparable);
    }

    #[test]
    fn equal_vectors_are_incomparable() {
        let a = sol(vec![1.0, 2.0], 0.0);
        let b = sol(vec![1.0, 2.0], 0.0);
        assert_eq!(constrained_compare(&a, &b), Dominance::Incomparable);
        assert_eq!(pareto_compare(&[1.0], &[1.0]), Dominance::Incomparable);
    }

    #[test]
    fn mutually_nondominated_set_is_one_front() {
        let pop = vec![
            sol(vec![0.0, 3.0], 0.0),
            sol(vec![1.0, 2.0], 0.0),
            sol(vec![2.0, 1.0], 0.0),
            sol(vec![3.0, 0.0], 0.0),
        ];
        let fronts = nondominated_sort(&pop, true);
        assert_eq!(fronts, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn dominance_chain_yields_singleton_fronts() {
        let pop = vec![
            sol(vec![3.0, 3.0], 0.0),
            sol(vec![2.0, 2.0], 0.0),
            sol(vec![1.0, 1.0], 0.0),
        ];
        let fronts = nondominated_sort(&pop, false);
        assert_eq!(fronts, vec![vec![2], vec![1], vec![0]]);
    }

    /// Exhaustive pairwise reference: peel off, round by round, the
    /// solutions preceded by no remaining solution.
    fn brute_force_fronts(pop: &[Solution], use_constraints: bool) -> Vec<Vec<usize>> {
        let rel = |j: usize, i: usize| {
            if use_constraints {
                constrained_compare(&pop[j], &pop[i])
            } else {
                pareto_compare(pop[j].objectives(), pop[i].objectives())
            }
        };
        let mut remaining: Vec<usize> = (0..pop.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining
                        .iter()
                        .any(|&j| j != i && rel(j, i) == Dominance::Precedes)
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn random_set_matches_brute_force_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..20 {
            let pop: Vec<Solution> = (0..20)
                .map(|_| {
                    let cv = if rng.gen::<f64>() < 0.4 {
                        rng.gen::<f64>()
                    } else {
                        0.0
                    };
                    sol(vec![rng.gen::<f64>(), rng.gen::<f64>()], cv)
                })
                .collect();
            for &constrained in &[true, false] {
                assert_eq!(
                    nondominated_sort(&pop, constrained),
                    brute_force_fronts(&pop, constrained)
                );
            }
        }
    }

    #[test]
    fn tiny_fronts_get_boundary_marker() {
        let mut pop = vec![sol(vec![0.0, 1.0], 0.0), sol(vec![1.0, 0.0], 0.0)];
        crowding_distance(&mut pop, &[0, 1]);
        assert!(pop[0].crowding.is_infinite());
        assert!(pop[1].crowding.is_infinite());
    }

    #[test]
    fn evenly_spaced_middle_point_scores_one() {
        let mut pop = vec![
            sol(vec![0.0, 1.0], 0.0),
            sol(vec![0.5, 0.5], 0.0),
            sol(vec![1.0, 0.0], 0.0),
        ];
        crowding_distance(&mut pop, &[0, 1, 2]);
        assert_eq!(pop[1].crowding, 1.0);
        assert!(pop[0].crowding.is_infinite());
        assert!(pop[2].crowding.is_infinite());
    }

    #[test]
    fn duplicated_objectives_stay_finite() {
        let mut pop = vec![
            sol(vec![1.0, 1.0], 0.0),
            sol(vec![1.0, 1.0], 0.0),
            sol(vec![1.0, 1.0], 0.0),
            sol(vec![1.0, 1.0], 0.0),
        ];
        crowding_distance(&mut pop, &[0, 1, 2, 3]);
        // Boundary slots still get the marker; interior values are finite.
        assert!(pop[1].crowding.is_finite());
        assert!(pop[2].crowding.is_finite());
    }
}
