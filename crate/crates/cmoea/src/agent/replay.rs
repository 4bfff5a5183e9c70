//! Bounded FIFO experience pool.

use std::collections::VecDeque;

use super::state::EvolutionState;
use crate::operators::PortfolioAction;

/// One interaction record: (state, action, reward, next state, terminal).
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: EvolutionState,
    pub action: PortfolioAction,
    pub reward: f64,
    pub next_state: EvolutionState,
    pub terminal: bool,
}

/// Bounded FIFO of transitions; eviction is strictly oldest-first.
#[derive(Debug, Clone)]
pub struct ReplayPool {
    records: VecDeque<Transition>,
    capacity: usize,
}

impl ReplayPool {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            records: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn push(&mut self, transition: Transition) {
        debug_assert_eq!(
            transition.state.dimension(),
            transition.next_state.dimension()
        );
        if self.records.len() == self.capacity {
            self.records.pop_front();
        }
        self.records.push_back(transition);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn get(&self, index: usize) -> &Transition {
        &self.records[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.records.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::state::EvolutionState;

    fn transition(tag: f64) -> Transition {
        let state = EvolutionState {
            con: vec![tag, tag],
            div: vec![0.0, 0.0],
            fea: 0.0,
            lambda: 0.0,
            normalized: true,
        };
        Transition {
            state: state.clone(),
            action: PortfolioAction::uniform(),
            reward: tag,
            next_state: state,
            terminal: false,
        }
    }

    #[test]
    fn overflow_evicts_oldest_first() {
        let mut pool = ReplayPool::new(3);
        for i in 0..4 {
            pool.push(transition(i as f64));
        }
        assert_eq!(pool.len(), 3);
        let rewards: Vec<f64> = pool.iter().map(|t| t.reward).collect();
        assert_eq!(rewards, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn capacity_bound_holds_under_many_inserts() {
        let mut pool = ReplayPool::new(16);
        for i in 0..10_000 {
            pool.push(transition(i as f64));
            assert!(pool.len() <= 16);
        }
        assert_eq!(pool.len(), 16);
        assert_eq!(pool.get(0).reward, 9984.0);
    }

    #[test]
    fn stored_record_is_bit_identical() {
        let mut pool = ReplayPool::new(4);
        let t = transition(0.25);
        pool.push(t.clone());
        assert_eq!(pool.get(0), &t);
    }
}
