//! Environmental selection and mating selection.

use rand::Rng;

use super::dominance::{crowding_distance, nondominated_sort};
use super::Solution;
use crate::error::{Error, Result};

/// Assigns nondomination ranks and crowding values under the chosen
/// comparator without truncating.
pub fn decorate(pop: &mut [Solution], use_constraints: bool) {
    let fronts = nondominated_sort(pop, use_constraints);
    for (rank, front) in fronts.iter().enumerate() {
        for &i in front {
            pop[i].rank = rank;
        }
        crowding_distance(pop, front);
    }
}

/// Truncates `pool` to exactly `n` survivors: fill whole fronts in order,
/// then cut the splitting front by descending crowding (ties by index).
/// Survivors come back decorated with their rank and crowding.
pub fn environmental_selection(
    mut pool: Vec<Solution>,
    n: usize,
    use_constraints: bool,
) -> Result<Vec<Solution>> {
    if pool.len() < n {
        return Err(Error::InvalidInput(format!(
            "selection pool holds {} solutions, need at least {n}",
            pool.len()
        )));
    }
    let fronts = nondominated_sort(&pool, use_constraints);
    for (rank, front) in fronts.iter().enumerate() {
        for &i in front {
            pool[i].rank = rank;
        }
        crowding_distance(&mut pool, front);
    }

    let mut keep: Vec<usize> = Vec::with_capacity(n);
    for front in &fronts {
        if keep.len() + front.len() <= n {
            keep.extend_from_slice(front);
            if keep.len() == n {
                break;
            }
        } else {
            let mut split = front.clone();
            split.sort_by(|&a, &b| {
                pool[b]
                    .crowding
                    .partial_cmp(&pool[a].crowding)
                    .unwrap()
                    .then(a.cmp(&b))
            });
            keep.extend(split.into_iter().take(n - keep.len()));
            break;
        }
    }

    let mut picked = vec![false; pool.len()];
    for &i in &keep {
        picked[i] = true;
    }
    let mut survivors = Vec::with_capacity(n);
    let mut it = picked.iter();
    pool.retain(|_| *it.next().unwrap());
    survivors.append(&mut pool);
    Ok(survivors)
}

/// Binary tournament over a decorated population: lower rank wins, then
/// higher crowding, then lower index.
pub fn binary_tournament(pop: &[Solution], rng: &mut impl Rng) -> usize {
    debug_assert!(pop.len() >= 2);
    let a = rng.gen_range(0..pop.len());
    let mut b = rng.gen_range(0..pop.len() - 1);
    if b >= a {
        b += 1;
    }
    let better = |i: usize, j: usize| {
        if pop[i].rank != pop[j].rank {
            return pop[i].rank < pop[j].rank;
        }
        if pop[i].crowding != pop[j].crowding {
            return pop[i].crowding > pop[j].crowding;
        }
        i < j
    };
    if better(a, b) {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Evaluation;
    use rand::SeedableRng;
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

    fn trade_off_front(n: usize, offset: f64) -> Vec<Solution> {
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                sol(vec![t + offset, 1.0 - t + offset], 0.0)
            })
            .collect()
    }

    #[test]
    fn nondominated_half_survives() {
        let n = 10;
        let mut pool = trade_off_front(n, 0.0);
        pool.extend(trade_off_front(n, 0.5));
        let survivors = environmental_selection(pool, n, false).unwrap();
        assert_eq!(survivors.len(), n);
        for s in &survivors {
            assert_eq!(s.rank, 0);
            assert!(s.objectives()[0] + s.objectives()[1] <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn exact_capacity_is_identity() {
        let pool = trade_off_front(8, 0.0);
        let before: Vec<Vec<f64>> = pool.iter().map(|s| s.objectives().to_vec()).collect();
        let survivors = environmental_selection(pool, 8, true).unwrap();
        let mut after: Vec<Vec<f64>> = survivors.iter().map(|s| s.objectives().to_vec()).collect();
        let mut expected = before;
        let key = |p: &Vec<f64>| (p[0] * 1e9) as i64;
        after.sort_by_key(key);
        expected.sort_by_key(key);
        assert_eq!(after, expected);
    }

    #[test]
    fn feasible_always_preferred_under_constraints() {
        let mut pool = trade_off_front(6, 0.0);
        for i in 0..6 {
            pool.push(sol(vec![-10.0 + i as f64, -10.0 - i as f64], 0.01));
        }
        let survivors = environmental_selection(pool, 6, true).unwrap();
        assert!(survivors.iter().all(|s| s.is_feasible()));
    }

    #[test]
    fn first_front_is_feasible_when_any_feasible_exists() {
        let mut pool = vec![sol(vec![9.0, 9.0], 0.0)];
        for i in 0..5 {
            pool.push(sol(vec![i as f64, -(i as f64)], 0.5));
        }
        decorate(&mut pool, true);
        for s in &pool {
            if s.rank == 0 {
                assert!(s.is_feasible());
            }
        }
    }

    #[test]
    fn never_discards_a_dominator_of_a_survivor() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        use rand::Rng;
        for _ in 0..30 {
            let pool: Vec<Solution> = (0..20)
                .map(|_| sol(vec![rng.gen::<f64>(), rng.gen::<f64>()], 0.0))
                .collect();
            let survivors = environmental_selection(pool.clone(), 8, false).unwrap();
            for dropped in pool.iter().filter(|p| {
                !survivors
                    .iter()
                    .any(|s| s.objectives() == p.objectives())
            }) {
                for kept in &survivors {
                    assert_ne!(
                        crate::evo::pareto_compare(dropped.objectives(), kept.objectives()),
                        crate::evo::Dominance::Precedes,
                        "discarded a solution that dominates a kept one"
                    );
                }
            }
        }
    }

    #[test]
    fn undersized_pool_is_rejected() {
        let pool = trade_off_front(4, 0.0);
        assert!(environmental_selection(pool, 5, false).is_err());
    }

    #[test]
    fn tournament_prefers_lower_rank() {
        let mut pop = trade_off_front(4, 0.0);
        pop.extend(trade_off_front(4, 1.0));
        decorate(&mut pop, false);
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..100 {
            let w = binary_tournament(&pop, &mut rng);
            // Winners are never from the dominated copy when facing front 0.
            assert!(pop[w].rank == 0 || pop[w].rank == 1);
        }
    }
}
