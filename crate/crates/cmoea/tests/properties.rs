//! Property tests over randomized inputs.

use proptest::prelude::*;

use cmoea::agent::{softmax, ReplayPool, Transition};
use cmoea::agent::EvolutionState;
use cmoea::evo::{constrained_compare, Dominance, Solution};
use cmoea::operators::{allocate_counts, PortfolioAction};
use cmoea::problems::Evaluation;

fn solution(objectives: Vec<f64>, cv: f64) -> Solution {
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

fn solution_strategy() -> impl Strategy<Value = Solution> {
    (
        prop::collection::vec(-10.0..10.0f64, 2),
        prop_oneof![Just(0.0), 0.0..2.0f64],
    )
        .prop_map(|(objectives, cv)| solution(objectives, cv))
}

fn simplex_strategy() -> impl Strategy<Value = PortfolioAction> {
    prop::collection::vec(1e-9..1.0f64, 3).prop_map(|raw| {
        let sum: f64 = raw.iter().sum();
        PortfolioAction::new([raw[0] / sum, raw[1] / sum, raw[2] / sum]).unwrap()
    })
}

proptest! {
    /// Strict partial order on comparable pairs: irreflexive, asymmetric,
    /// and transitive over random triples.
    #[test]
    fn constrained_compare_is_a_strict_partial_order(
        a in solution_strategy(),
        b in solution_strategy(),
        c in solution_strategy(),
    ) {
        prop_assert_eq!(constrained_compare(&a, &a), Dominance::Incomparable);

        let ab = constrained_compare(&a, &b);
        let ba = constrained_compare(&b, &a);
        match ab {
            Dominance::Precedes => prop_assert_eq!(ba, Dominance::Succeeds),
            Dominance::Succeeds => prop_assert_eq!(ba, Dominance::Precedes),
            Dominance::Incomparable => prop_assert_eq!(ba, Dominance::Incomparable),
        }

        let bc = constrained_compare(&b, &c);
        if ab == Dominance::Precedes && bc == Dominance::Precedes {
            prop_assert_eq!(constrained_compare(&a, &c), Dominance::Precedes);
        }
    }

    /// Largest-remainder apportionment: counts sum to n and every count is
    /// within one unit of its exact share.
    #[test]
    fn allocation_is_exact_within_one(action in simplex_strategy(), n in 1usize..500) {
        let counts = allocate_counts(&action, n);
        prop_assert_eq!(counts.iter().sum::<usize>(), n);
        for (count, share) in counts.iter().zip(action.proportions()) {
            prop_assert!((*count as f64 - share * n as f64).abs() < 1.0);
        }
    }

    /// Softmax maps any finite logits onto the open simplex.
    #[test]
    fn softmax_outputs_simplex_points(logits in prop::collection::vec(-50.0..50.0f64, 3)) {
        let probs = softmax(&logits);
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(probs.iter().all(|&p| p > 0.0));
    }

    /// FIFO order and the capacity bound hold under arbitrary inserts.
    #[test]
    fn replay_pool_is_a_bounded_fifo(
        capacity in 1usize..32,
        rewards in prop::collection::vec(-1.0..1.0f64, 0..200),
    ) {
        let mut pool = ReplayPool::new(capacity);
        let state = EvolutionState {
            con: vec![0.0, 0.0],
            div: vec![0.0, 0.0],
            fea: 0.0,
            lambda: 0.0,
            normalized: true,
        };
        for &reward in &rewards {
            pool.push(Transition {
                state: state.clone(),
                action: PortfolioAction::uniform(),
                reward,
                next_state: state.clone(),
                terminal: false,
            });
            prop_assert!(pool.len() <= capacity);
        }
        let expected: Vec<f64> = rewards
            .iter()
            .copied()
            .skip(rewards.len().saturating_sub(capacity))
            .collect();
        let held: Vec<f64> = pool.iter().map(|t| t.reward).collect();
        prop_assert_eq!(held, expected);
    }
}
