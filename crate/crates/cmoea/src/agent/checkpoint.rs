//! Versioned binary agent checkpoints.
//!
//! Layout: the magic `AOPCKPT1`, the state dimension and hyperparameters,
//! then the four networks (actor, critic, target actor, target critic) each
//! as a self-describing shape table followed by little-endian f64 weights,
//! biases, and optimizer moments, and finally the serialized replay pool.
//! Round-trips are bit-exact.

use std::fs;
use std::path::Path;

use super::ddpg::{AgentConfig, DdpgAgent};
use super::net::{Activation, DenseLayer, LayerMoments, Mlp};
use super::replay::{ReplayPool, Transition};
use super::state::EvolutionState;
use crate::error::{Error, Result};
use crate::operators::PortfolioAction;

const MAGIC: &[u8; 8] = b"AOPCKPT1";

/// Serializes the full agent (weights, moments, schedules, pool).
pub fn checkpoint_save(agent: &DdpgAgent, sink: &mut Vec<u8>) {
    sink.extend_from_slice(MAGIC);
    write_u32(sink, agent.state_dim as u32);

    let c = &agent.config;
    write_f64(sink, c.gamma);
    write_f64(sink, c.tau);
    write_u32(sink, c.batch_size as u32);
    write_u32(sink, c.replay_capacity as u32);
    write_f64(sink, c.actor_lr);
    write_f64(sink, c.critic_lr);
    write_u32(sink, c.hidden_width as u32);
    write_f64(sink, c.sigma_start);
    write_f64(sink, c.sigma_end);

    for net in [
        &agent.actor,
        &agent.critic,
        &agent.target_actor,
        &agent.target_critic,
    ] {
        write_net(sink, net);
    }

    write_u32(sink, agent.pool.capacity() as u32);
    write_u32(sink, agent.pool.len() as u32);
    for t in agent.pool.iter() {
        write_transition(sink, t);
    }
}

/// Writes a checkpoint file.
pub fn save_to_path(agent: &DdpgAgent, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    checkpoint_save(agent, &mut buf);
    fs::write(path, buf)?;
    Ok(())
}

/// Reconstructs an agent from checkpoint bytes, validating the magic, the
/// shape tables, and cross-network consistency.
pub fn checkpoint_load(source: &[u8]) -> Result<DdpgAgent> {
    let mut r = Reader {
        buf: source,
        pos: 0,
    };
    let magic = r.take(8)?;
    if magic != MAGIC {
        return Err(Error::Checkpoint(
            "bad magic; not an agent checkpoint or unsupported version".into(),
        ));
    }
    let state_dim = r.read_u32()? as usize;
    let config = AgentConfig {
        gamma: r.read_f64()?,
        tau: r.read_f64()?,
        batch_size: r.read_u32()? as usize,
        replay_capacity: r.read_u32()? as usize,
        actor_lr: r.read_f64()?,
        critic_lr: r.read_f64()?,
        hidden_width: r.read_u32()? as usize,
        sigma_start: r.read_f64()?,
        sigma_end: r.read_f64()?,
    };
    config
        .validate()
        .map_err(|e| Error::Checkpoint(format!("invalid stored config: {e}")))?;

    let actor = read_net(&mut r)?;
    let critic = read_net(&mut r)?;
    let target_actor = read_net(&mut r)?;
    let target_critic = read_net(&mut r)?;

    if actor.input_dim() != state_dim || actor.output_dim() != 3 {
        return Err(Error::Checkpoint(format!(
            "actor shape {:?} disagrees with state dimension {state_dim} and 3 operators",
            actor.layer_dims()
        )));
    }
    if critic.input_dim() != state_dim + 3 || critic.output_dim() != 1 {
        return Err(Error::Checkpoint(format!(
            "critic shape {:?} disagrees with state+action input {} and scalar output",
            critic.layer_dims(),
            state_dim + 3
        )));
    }
    if !target_actor.same_shape(&actor) || !target_critic.same_shape(&critic) {
        return Err(Error::Checkpoint(
            "target network shapes differ from their sources".into(),
        ));
    }

    let capacity = r.read_u32()? as usize;
    let len = r.read_u32()? as usize;
    if capacity != config.replay_capacity || len > capacity {
        return Err(Error::Checkpoint("replay pool header is inconsistent".into()));
    }
    let m = (state_dim - 2) / 2;
    let mut pool = ReplayPool::new(capacity);
    for _ in 0..len {
        pool.push(read_transition(&mut r, m)?);
    }
    if r.pos != source.len() {
        return Err(Error::Checkpoint(format!(
            "{} trailing bytes after checkpoint payload",
            source.len() - r.pos
        )));
    }

    Ok(DdpgAgent {
        actor,
        critic,
        target_actor,
        target_critic,
        pool,
        config,
        state_dim,
    })
}

/// Reads a checkpoint file.
pub fn load_from_path(path: &Path) -> Result<DdpgAgent> {
    let bytes = fs::read(path)?;
    checkpoint_load(&bytes)
}

fn write_net(sink: &mut Vec<u8>, net: &Mlp) {
    write_u32(sink, net.layers.len() as u32);
    for layer in &net.layers {
        write_u32(sink, layer.input_dim as u32);
        write_u32(sink, layer.output_dim as u32);
        sink.push(layer.activation.tag());
    }
    for (layer, m) in net.layers.iter().zip(&net.moments) {
        for series in [&layer.weights, &layer.biases, &m.m_w, &m.v_w, &m.m_b, &m.v_b] {
            for &v in series.iter() {
                write_f64(sink, v);
            }
        }
    }
    write_u64(sink, net.step);
}

fn read_net(r: &mut Reader) -> Result<Mlp> {
    let layer_count = r.read_u32()? as usize;
    if layer_count == 0 || layer_count > 64 {
        return Err(Error::Checkpoint(format!(
            "implausible layer count {layer_count}"
        )));
    }
    let mut shapes = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        let input_dim = r.read_u32()? as usize;
        let output_dim = r.read_u32()? as usize;
        let activation = Activation::from_tag(r.read_u8()?)
            .ok_or_else(|| Error::Checkpoint("unknown activation tag".into()))?;
        shapes.push((input_dim, output_dim, activation));
    }
    let mut layers = Vec::with_capacity(layer_count);
    let mut moments = Vec::with_capacity(layer_count);
    for &(input_dim, output_dim, activation) in &shapes {
        let wn = input_dim * output_dim;
        let weights = r.read_f64_vec(wn)?;
        let biases = r.read_f64_vec(output_dim)?;
        let m_w = r.read_f64_vec(wn)?;
        let v_w = r.read_f64_vec(wn)?;
        let m_b = r.read_f64_vec(output_dim)?;
        let v_b = r.read_f64_vec(output_dim)?;
        layers.push(DenseLayer {
            input_dim,
            output_dim,
            weights,
            biases,
            activation,
        });
        moments.push(LayerMoments { m_w, v_w, m_b, v_b });
    }
    let step = r.read_u64()?;
    let net = Mlp {
        layers,
        moments,
        step,
    };
    net.validate()?;
    Ok(net)
}

fn write_state(sink: &mut Vec<u8>, s: &EvolutionState) {
    write_u32(sink, s.con.len() as u32);
    for &v in s.con.iter().chain(&s.div) {
        write_f64(sink, v);
    }
    write_f64(sink, s.fea);
    write_f64(sink, s.lambda);
    sink.push(s.normalized as u8);
}

fn read_state(r: &mut Reader, expect_m: usize) -> Result<EvolutionState> {
    let m = r.read_u32()? as usize;
    if m != expect_m {
        return Err(Error::Checkpoint(format!(
            "stored state has {m} objectives, agent expects {expect_m}"
        )));
    }
    let con = r.read_f64_vec(m)?;
    let div = r.read_f64_vec(m)?;
    let fea = r.read_f64()?;
    let lambda = r.read_f64()?;
    let normalized = r.read_u8()? != 0;
    Ok(EvolutionState {
        con,
        div,
        fea,
        lambda,
        normalized,
    })
}

fn write_transition(sink: &mut Vec<u8>, t: &Transition) {
    write_state(sink, &t.state);
    for &v in &t.action.proportions() {
        write_f64(sink, v);
    }
    write_f64(sink, t.reward);
    write_state(sink, &t.next_state);
    sink.push(t.terminal as u8);
}

fn read_transition(r: &mut Reader, m: usize) -> Result<Transition> {
    let state = read_state(r, m)?;
    let p = [r.read_f64()?, r.read_f64()?, r.read_f64()?];
    let action = PortfolioAction::new(p)
        .map_err(|e| Error::Checkpoint(format!("stored action invalid: {e}")))?;
    let reward = r.read_f64()?;
    let next_state = read_state(r, m)?;
    let terminal = r.read_u8()? != 0;
    Ok(Transition {
        state,
        action,
        reward,
        next_state,
        terminal,
    })
}

fn write_u32(sink: &mut Vec<u8>, v: u32) {
    sink.extend_from_slice(&v.to_le_bytes());
}

fn write_u64(sink: &mut Vec<u8>, v: u64) {
    sink.extend_from_slice(&v.to_le_bytes());
}

fn write_f64(sink: &mut Vec<u8>, v: f64) {
    sink.extend_from_slice(&v.to_le_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Checkpoint(format!(
                "truncated checkpoint: wanted {n} bytes at offset {}, have {}",
                self.pos,
                self.buf.len() - self.pos
            )));
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn read_u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn read_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn read_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn read_f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn read_f64_vec(&mut self, n: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.read_f64()?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn trained_agent(seed: u64) -> DdpgAgent {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let config = AgentConfig {
            batch_size: 4,
            replay_capacity: 16,
            hidden_width: 8,
            ..AgentConfig::default()
        };
        let mut agent = DdpgAgent::new(6, config, &mut rng).unwrap();
        for i in 0..10 {
            let s = EvolutionState {
                con: vec![rng.gen(), rng.gen()],
                div: vec![rng.gen(), rng.gen()],
                fea: rng.gen(),
                lambda: i as f64 / 10.0,
                normalized: true,
            };
            let action = agent.select_action(&s, true, &mut rng).unwrap();
            agent.store_transition(Transition {
                state: s.clone(),
                action,
                reward: rng.gen::<f64>() - 0.5,
                next_state: s,
                terminal: i == 9,
            });
            agent.train_step(&mut rng).unwrap();
        }
        agent
    }

    fn random_state(rng: &mut ChaCha12Rng) -> EvolutionState {
        EvolutionState {
            con: vec![rng.gen(), rng.gen()],
            div: vec![rng.gen(), rng.gen()],
            fea: rng.gen(),
            lambda: rng.gen(),
            normalized: true,
        }
    }

    #[test]
    fn round_trip_preserves_policy_and_internals() {
        let agent = trained_agent(1);
        let mut buf = Vec::new();
        checkpoint_save(&agent, &mut buf);
        let restored = checkpoint_load(&buf).unwrap();

        assert_eq!(agent.actor.flatten(), restored.actor.flatten());
        assert_eq!(agent.critic.flatten(), restored.critic.flatten());
        assert_eq!(agent.target_actor.flatten(), restored.target_actor.flatten());
        assert_eq!(agent.pool.len(), restored.pool.len());
        for i in 0..agent.pool.len() {
            assert_eq!(agent.pool.get(i), restored.pool.get(i));
        }

        let mut rng = ChaCha12Rng::seed_from_u64(2);
        for _ in 0..100 {
            let s = random_state(&mut rng);
            let mut r1 = ChaCha12Rng::seed_from_u64(0);
            let mut r2 = ChaCha12Rng::seed_from_u64(0);
            let a = agent.select_action(&s, false, &mut r1).unwrap();
            let b = restored.select_action(&s, false, &mut r2).unwrap();
            assert_eq!(a.proportions(), b.proportions());
        }
    }

    #[test]
    fn truncated_stream_is_rejected() {
        let agent = trained_agent(3);
        let mut buf = Vec::new();
        checkpoint_save(&agent, &mut buf);
        for cut in [7, 20, buf.len() / 2, buf.len() - 3] {
            let err = checkpoint_load(&buf[..cut]).unwrap_err();
            assert!(matches!(err, Error::Checkpoint(_)), "cut at {cut}: {err}");
        }
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let agent = trained_agent(4);
        let mut buf = Vec::new();
        checkpoint_save(&agent, &mut buf);
        buf[7] = b'9';
        assert!(matches!(
            checkpoint_load(&buf).unwrap_err(),
            Error::Checkpoint(_)
        ));
    }

    #[test]
    fn shape_mismatch_is_named() {
        let agent = trained_agent(5);
        let mut buf = Vec::new();
        checkpoint_save(&agent, &mut buf);
        // Corrupt the actor's first layer input dim in the shape table:
        // magic(8) + state_dim(4) + config(9 fields: 6 f64 + 3 u32 = 60) +
        // layer_count(4) -> first u32 of the shape entry.
        let offset = 8 + 4 + 60 + 4;
        buf[offset..offset + 4].copy_from_slice(&99u32.to_le_bytes());
        let err = checkpoint_load(&buf).unwrap_err();
        match err {
            Error::Checkpoint(msg) => assert!(
                msg.contains("99") || msg.contains("shape") || msg.contains("truncated"),
                "unhelpful message: {msg}"
            ),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("agent.ckpt");
        let agent = trained_agent(6);
        save_to_path(&agent, &path).unwrap();
        let restored = load_from_path(&path).unwrap();
        assert_eq!(agent.actor.flatten(), restored.actor.flatten());
    }
}
