//! The reinforcement-learning agent: state extraction, reward, actor and
//! critic networks with exact backprop, the replay pool, training, and
//! checkpointing.

mod checkpoint;
mod ddpg;
mod net;
mod replay;
mod state;

pub use checkpoint::{checkpoint_load, checkpoint_save, load_from_path, save_to_path};
pub use ddpg::{compute_reward, critic_target, AgentConfig, DdpgAgent, TrainDiagnostics};
pub use net::{softmax, Activation, ForwardCache, Mlp, MlpGradients};
pub use replay::{ReplayPool, Transition};
pub use state::{extract_state, DispersionMode, EvolutionState, StateNormalizer, STATE_CLIP};
