//! The deterministic-policy-gradient agent: an actor mapping states to
//! operator portfolios, a critic valuing (state, action) pairs, target
//! copies of both, and a replay pool feeding minibatch updates.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::net::{Activation, Mlp};
use super::replay::{ReplayPool, Transition};
use super::state::EvolutionState;
use crate::error::{Error, Result};
use crate::operators::PortfolioAction;

/// Agent hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentConfig {
    /// Discount factor in [0, 1).
    pub gamma: f64,
    /// Soft target-update rate in (0, 1].
    pub tau: f64,
    pub batch_size: usize,
    pub replay_capacity: usize,
    pub actor_lr: f64,
    pub critic_lr: f64,
    /// Width of the two hidden layers in both networks.
    pub hidden_width: usize,
    /// Exploration noise scale at the start and end of a run; the level
    /// interpolates linearly over the consumed-budget fraction.
    pub sigma_start: f64,
    pub sigma_end: f64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            gamma: 0.98,
            tau: 0.005,
            batch_size: 32,
            replay_capacity: 2048,
            actor_lr: 1e-4,
            critic_lr: 1e-3,
            hidden_width: 64,
            sigma_start: 0.5,
            sigma_end: 0.05,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::InvalidInput("gamma must lie in [0, 1)".into()));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidInput("tau must lie in (0, 1]".into()));
        }
        if self.batch_size == 0 || self.replay_capacity < self.batch_size {
            return Err(Error::InvalidInput(
                "replay capacity must cover at least one batch".into(),
            ));
        }
        if self.actor_lr <= 0.0 || self.critic_lr <= 0.0 || self.hidden_width == 0 {
            return Err(Error::InvalidInput(
                "learning rates and hidden width must be positive".into(),
            ));
        }
        if self.sigma_start < 0.0 || self.sigma_end < 0.0 {
            return Err(Error::InvalidInput(
                "exploration sigma must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Diagnostics of one training step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainDiagnostics {
    /// Mean squared critic error over the minibatch before the update.
    pub critic_loss: f64,
    /// Mean critic value of the actor's actions over the minibatch.
    pub mean_q: f64,
}

/// Hypervolume-improvement reward.
pub fn compute_reward(prev_hv: f64, new_hv: f64) -> f64 {
    new_hv - prev_hv
}

/// Bellman target for the critic; terminal transitions truncate the
/// bootstrap term.
pub fn critic_target(reward: f64, gamma: f64, q_next: f64, terminal: bool) -> f64 {
    if terminal {
        reward
    } else {
        reward + gamma * q_next
    }
}

#[derive(Debug)]
pub struct DdpgAgent {
    pub(crate) actor: Mlp,
    pub(crate) critic: Mlp,
    pub(crate) target_actor: Mlp,
    pub(crate) target_critic: Mlp,
    pub(crate) pool: ReplayPool,
    pub(crate) config: AgentConfig,
    pub(crate) state_dim: usize,
}

impl DdpgAgent {
    /// Builds actor/critic pairs for observations of `state_dim` features.
    /// Targets start as exact copies of their sources.
    pub fn new(state_dim: usize, config: AgentConfig, rng: &mut impl Rng) -> Result<Self> {
        config.validate()?;
        if state_dim < 4 {
            return Err(Error::InvalidInput(
                "state dimension must be at least 4 (2M + 2 with M >= 1)".into(),
            ));
        }
        let w = config.hidden_width;
        let actor = Mlp::new(
            &[state_dim, w, w, 3],
            &[Activation::Tanh, Activation::Tanh, Activation::Softmax],
            rng,
        )?;
        let critic = Mlp::new(
            &[state_dim + 3, w, w, 1],
            &[Activation::Tanh, Activation::Tanh, Activation::Linear],
            rng,
        )?;
        let target_actor = actor.clone();
        let target_critic = critic.clone();
        Ok(Self {
            actor,
            critic,
            target_actor,
            target_critic,
            pool: ReplayPool::new(config.replay_capacity),
            config,
            state_dim,
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn pool(&self) -> &ReplayPool {
        &self.pool
    }

    pub fn actor(&self) -> &Mlp {
        &self.actor
    }

    pub fn critic(&self) -> &Mlp {
        &self.critic
    }

    /// Exploration noise level at a consumed-budget fraction.
    pub fn sigma_at(&self, lambda: f64) -> f64 {
        let l = lambda.clamp(0.0, 1.0);
        self.config.sigma_start + (self.config.sigma_end - self.config.sigma_start) * l
    }

    /// Recommends a portfolio for a state.
    ///
    /// Deterministic mode returns softmax(actor logits). Exploration mode
    /// perturbs the logits with zero-mean Gaussian noise at the scheduled
    /// sigma, except while the pool is still smaller than one batch, where
    /// actions are uniform Dirichlet draws on the simplex (warm-up).
    pub fn select_action(
        &self,
        state: &EvolutionState,
        explore: bool,
        rng: &mut impl Rng,
    ) -> Result<PortfolioAction> {
        if explore && self.pool.len() < self.config.batch_size {
            return Ok(dirichlet_uniform(rng));
        }
        let (output, cache) = self.actor.forward(&state.to_vector())?;
        if !explore {
            return PortfolioAction::new([output[0], output[1], output[2]]);
        }
        let sigma = self.sigma_at(state.lambda);
        let mut logits = cache.final_logits().to_vec();
        for z in logits.iter_mut() {
            let noise: f64 = StandardNormal.sample(rng);
            *z += sigma * noise;
        }
        let probs = super::net::softmax(&logits);
        PortfolioAction::new([probs[0], probs[1], probs[2]])
    }

    /// Appends a transition; oldest records fall out at capacity.
    pub fn store_transition(&mut self, transition: Transition) {
        self.pool.push(transition);
    }

    /// One minibatch update: regress the critic to the Bellman targets,
    /// ascend the actor along the critic's action gradient, then soft-update
    /// both targets. Returns `None` while the pool is smaller than a batch.
    pub fn train_step(&mut self, rng: &mut impl Rng) -> Result<Option<TrainDiagnostics>> {
        let bs = self.config.batch_size;
        if self.pool.len() < bs {
            return Ok(None);
        }
        let indices = rand::seq::index::sample(rng, self.pool.len(), bs);
        let batch: Vec<Transition> = indices.iter().map(|i| self.pool.get(i).clone()).collect();

        // Critic: minimize the mean squared Bellman error.
        let mut critic_grads = super::net::MlpGradients::zeros_like(&self.critic);
        let mut loss = 0.0;
        for t in &batch {
            let next_vec = t.next_state.to_vector();
            let (next_action, _) = self.target_actor.forward(&next_vec)?;
            let (q_next, _) = self
                .target_critic
                .forward(&concat(&next_vec, &next_action))?;
            let y = critic_target(t.reward, self.config.gamma, q_next[0], t.terminal);

            let input = concat(&t.state.to_vector(), &t.action.proportions());
            let (q, cache) = self.critic.forward(&input)?;
            let err = q[0] - y;
            loss += err * err;
            let (grads, _) = self.critic.backward(&cache, &[2.0 * err / bs as f64]);
            critic_grads.accumulate(&grads);
        }
        loss /= bs as f64;
        if !loss.is_finite() {
            return Err(Error::Divergence(format!(
                "critic loss became non-finite after {} pool inserts (batch {bs})",
                self.pool.len()
            )));
        }
        self.critic.adam_step(&critic_grads, self.config.critic_lr);

        // Actor: ascend the batch-mean critic value of its own actions.
        // The action gradient comes out of the critic's input gradient.
        let mut actor_grads = super::net::MlpGradients::zeros_like(&self.actor);
        let mut mean_q = 0.0;
        for t in &batch {
            let state_vec = t.state.to_vector();
            let (action, actor_cache) = self.actor.forward(&state_vec)?;
            let (q, critic_cache) = self.critic.forward(&concat(&state_vec, &action))?;
            mean_q += q[0];
            let (_, input_grad) = self.critic.backward(&critic_cache, &[1.0 / bs as f64]);
            let action_grad = &input_grad[self.state_dim..];
            let (grads, _) = self.actor.backward(&actor_cache, action_grad);
            actor_grads.accumulate(&grads);
        }
        mean_q /= bs as f64;
        if !mean_q.is_finite() {
            return Err(Error::Divergence("actor objective became non-finite".into()));
        }
        actor_grads.scale(-1.0);
        self.actor.adam_step(&actor_grads, self.config.actor_lr);

        self.target_critic
            .soft_update_from(&self.critic, self.config.tau);
        self.target_actor
            .soft_update_from(&self.actor, self.config.tau);

        Ok(Some(TrainDiagnostics {
            critic_loss: loss,
            mean_q,
        }))
    }
}

fn concat(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

/// Uniform draw on the 3-simplex: normalized unit exponentials.
fn dirichlet_uniform(rng: &mut impl Rng) -> PortfolioAction {
    let mut e = [0.0; 3];
    for v in e.iter_mut() {
        *v = -(1.0 - rng.gen::<f64>()).ln();
    }
    let sum: f64 = e.iter().sum();
    PortfolioAction::new([e[0] / sum, e[1] / sum, e[2] / sum])
        .expect("normalized exponentials lie on the simplex")
}
