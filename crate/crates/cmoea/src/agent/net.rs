//! Dense multilayer perceptrons with hand-derived reverse-mode gradients
//! and an adaptive-moment optimizer. Nothing here is approximate: backward
//! passes are exact, which the finite-difference oracles in the tests and
//! acceptance suite verify.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Linear,
    Softmax,
}

impl Activation {
    pub(crate) fn tag(self) -> u8 {
        match self {
            Activation::Tanh => 0,
            Activation::Linear => 1,
            Activation::Softmax => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Activation::Tanh),
            1 => Some(Activation::Linear),
            2 => Some(Activation::Softmax),
            _ => None,
        }
    }
}

/// One dense layer: row-major weights (`output_dim` rows of `input_dim`)
/// plus biases and the activation applied to the affine output.
#[derive(Debug, Clone)]
pub struct DenseLayer {
    pub input_dim: usize,
    pub output_dim: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

/// Adam accumulators for one layer, shaped like its parameters.
#[derive(Debug, Clone)]
pub(crate) struct LayerMoments {
    pub m_w: Vec<f64>,
    pub v_w: Vec<f64>,
    pub m_b: Vec<f64>,
    pub v_b: Vec<f64>,
}

impl LayerMoments {
    fn zeros(layer: &DenseLayer) -> Self {
        Self {
            m_w: vec![0.0; layer.weights.len()],
            v_w: vec![0.0; layer.weights.len()],
            m_b: vec![0.0; layer.biases.len()],
            v_b: vec![0.0; layer.biases.len()],
        }
    }
}

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

/// A dense network together with its optimizer state.
#[derive(Debug, Clone)]
pub struct Mlp {
    pub(crate) layers: Vec<DenseLayer>,
    pub(crate) moments: Vec<LayerMoments>,
    pub(crate) step: u64,
}

/// Per-parameter gradients mirroring an [`Mlp`]'s layer layout.
#[derive(Debug, Clone)]
pub struct MlpGradients {
    pub d_weights: Vec<Vec<f64>>,
    pub d_biases: Vec<Vec<f64>>,
}

impl MlpGradients {
    pub fn zeros_like(net: &Mlp) -> Self {
        Self {
            d_weights: net.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            d_biases: net.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
        }
    }

    pub fn accumulate(&mut self, other: &MlpGradients) {
        for (acc, g) in self.d_weights.iter_mut().zip(&other.d_weights) {
            for (a, b) in acc.iter_mut().zip(g) {
                *a += b;
            }
        }
        for (acc, g) in self.d_biases.iter_mut().zip(&other.d_biases) {
            for (a, b) in acc.iter_mut().zip(g) {
                *a += b;
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for layer in self.d_weights.iter_mut().chain(self.d_biases.iter_mut()) {
            for v in layer.iter_mut() {
                *v *= factor;
            }
        }
    }

    /// Flat view matching [`Mlp::flatten`]'s parameter order.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (dw, db) in self.d_weights.iter().zip(&self.d_biases) {
            out.extend_from_slice(dw);
            out.extend_from_slice(db);
        }
        out
    }
}

/// Intermediate values of one forward pass, retained for exact backprop.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// Input to each layer.
    inputs: Vec<Vec<f64>>,
    /// Affine output (pre-activation) of each layer.
    pre_activations: Vec<Vec<f64>>,
    /// Post-activation output of each layer.
    outputs: Vec<Vec<f64>>,
}

impl ForwardCache {
    /// Pre-activation of the final layer (the actor's logits).
    pub fn final_logits(&self) -> &[f64] {
        self.pre_activations.last().unwrap()
    }
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

impl Mlp {
    /// Builds a network from consecutive layer sizes and one activation per
    /// layer. Weights start uniform in ±1/sqrt(fan_in); biases start at 0.
    pub fn new(dims: &[usize], activations: &[Activation], rng: &mut impl Rng) -> Result<Self> {
        if dims.len() < 2 || activations.len() != dims.len() - 1 {
            return Err(Error::InvalidInput(
                "network needs >= 2 dims and one activation per layer".into(),
            ));
        }
        let mut layers = Vec::with_capacity(activations.len());
        for (w, &activation) in dims.windows(2).zip(activations) {
            let (input_dim, output_dim) = (w[0], w[1]);
            let bound = 1.0 / (input_dim as f64).sqrt();
            let weights = (0..input_dim * output_dim)
                .map(|_| rng.gen_range(-bound..bound))
                .collect();
            layers.push(DenseLayer {
                input_dim,
                output_dim,
                weights,
                biases: vec![0.0; output_dim],
                activation,
            });
        }
        let moments = layers.iter().map(LayerMoments::zeros).collect();
        Ok(Self {
            layers,
            moments,
            step: 0,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().output_dim
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.input_dim()];
        dims.extend(self.layers.iter().map(|l| l.output_dim));
        dims
    }

    pub fn same_shape(&self, other: &Mlp) -> bool {
        self.layer_dims() == other.layer_dims()
            && self
                .layers
                .iter()
                .zip(&other.layers)
                .all(|(a, b)| a.activation == b.activation)
    }

    /// Checks layers chain correctly and moments mirror parameter shapes.
    pub(crate) fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::Checkpoint("network has no layers".into()));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.weights.len() != layer.input_dim * layer.output_dim
                || layer.biases.len() != layer.output_dim
            {
                return Err(Error::Checkpoint(format!(
                    "layer {i}: parameter lengths disagree with dims {}x{}",
                    layer.input_dim, layer.output_dim
                )));
            }
            if i + 1 < self.layers.len() && layer.output_dim != self.layers[i + 1].input_dim {
                return Err(Error::Checkpoint(format!(
                    "layer {i} output dim {} does not chain into layer {} input dim {}",
                    layer.output_dim,
                    i + 1,
                    self.layers[i + 1].input_dim
                )));
            }
        }
        if self.moments.len() != self.layers.len() {
            return Err(Error::Checkpoint("moment table length mismatch".into()));
        }
        for (i, (layer, m)) in self.layers.iter().zip(&self.moments).enumerate() {
            if m.m_w.len() != layer.weights.len()
                || m.v_w.len() != layer.weights.len()
                || m.m_b.len() != layer.biases.len()
                || m.v_b.len() != layer.biases.len()
            {
                return Err(Error::Checkpoint(format!(
                    "layer {i}: moment shapes disagree with parameters"
                )));
            }
        }
        Ok(())
    }

    /// Forward pass returning the output and a cache for backward.
    #[allow(clippy::needless_range_loop)]
    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, ForwardCache)> {
        if input.len() != self.input_dim() {
            return Err(Error::InvalidInput(format!(
                "network expects input of length {}, got {}",
                self.input_dim(),
                input.len()
            )));
        }
        let mut cache = ForwardCache {
            inputs: Vec::with_capacity(self.layers.len()),
            pre_activations: Vec::with_capacity(self.layers.len()),
            outputs: Vec::with_capacity(self.layers.len()),
        };
        let mut x = input.to_vec();
        for layer in &self.layers {
            let mut z = vec![0.0; layer.output_dim];
            for o in 0..layer.output_dim {
                let row = &layer.weights[o * layer.input_dim..(o + 1) * layer.input_dim];
                z[o] = layer.biases[o]
                    + row.iter().zip(&x).map(|(w, xi)| w * xi).sum::<f64>();
            }
            let y = match layer.activation {
                Activation::Linear => z.clone(),
                Activation::Tanh => z.iter().map(|v| v.tanh()).collect(),
                Activation::Softmax => softmax(&z),
            };
            cache.inputs.push(x);
            cache.pre_activations.push(z);
            cache.outputs.push(y.clone());
            x = y;
        }
        Ok((x, cache))
    }

    /// Exact reverse-mode gradients of `output . output_gradient` with
    /// respect to every parameter and to the input vector. The input
    /// gradient is how the action gradient flows out of a critic.
    #[allow(clippy::needless_range_loop)]
    pub fn backward(&self, cache: &ForwardCache, output_gradient: &[f64]) -> (MlpGradients, Vec<f64>) {
        debug_assert_eq!(output_gradient.len(), self.output_dim());
        let mut grads = MlpGradients::zeros_like(self);
        let mut dy = output_gradient.to_vec();
        for (l, layer) in self.layers.iter().enumerate().rev() {
            let y = &cache.outputs[l];
            let dz: Vec<f64> = match layer.activation {
                Activation::Linear => dy.clone(),
                Activation::Tanh => dy
                    .iter()
                    .zip(y)
                    .map(|(g, yi)| g * (1.0 - yi * yi))
                    .collect(),
                Activation::Softmax => {
                    let dot: f64 = dy.iter().zip(y).map(|(g, yi)| g * yi).sum();
                    dy.iter().zip(y).map(|(g, yi)| yi * (g - dot)).collect()
                }
            };
            let x = &cache.inputs[l];
            let dw = &mut grads.d_weights[l];
            for o in 0..layer.output_dim {
                let row = &mut dw[o * layer.input_dim..(o + 1) * layer.input_dim];
                for (i, xi) in x.iter().enumerate() {
                    row[i] = dz[o] * xi;
                }
                grads.d_biases[l][o] = dz[o];
            }
            let mut dx = vec![0.0; layer.input_dim];
            for o in 0..layer.output_dim {
                let row = &layer.weights[o * layer.input_dim..(o + 1) * layer.input_dim];
                for (i, w) in row.iter().enumerate() {
                    dx[i] += w * dz[o];
                }
            }
            dy = dx;
        }
        (grads, dy)
    }

    /// One adaptive-moment descent step along `grads`. Callers negate the
    /// gradients to ascend.
    pub fn adam_step(&mut self, grads: &MlpGradients, lr: f64) {
        self.step += 1;
        let t = self.step as i32;
        let bias1 = 1.0 - ADAM_BETA1.powi(t);
        let bias2 = 1.0 - ADAM_BETA2.powi(t);
        for (l, layer) in self.layers.iter_mut().enumerate() {
            let moments = &mut self.moments[l];
            update_params(
                &mut layer.weights,
                &grads.d_weights[l],
                &mut moments.m_w,
                &mut moments.v_w,
                lr,
                bias1,
                bias2,
            );
            update_params(
                &mut layer.biases,
                &grads.d_biases[l],
                &mut moments.m_b,
                &mut moments.v_b,
                lr,
                bias1,
                bias2,
            );
        }
    }

    /// Soft target update: every parameter moves to
    /// `tau * source + (1 - tau) * self`. Optimizer moments stay put.
    pub fn soft_update_from(&mut self, source: &Mlp, tau: f64) {
        debug_assert!(self.same_shape(source));
        for (dst, src) in self.layers.iter_mut().zip(&source.layers) {
            for (d, s) in dst.weights.iter_mut().zip(&src.weights) {
                *d = tau * s + (1.0 - tau) * *d;
            }
            for (d, s) in dst.biases.iter_mut().zip(&src.biases) {
                *d = tau * s + (1.0 - tau) * *d;
            }
        }
    }

    /// All parameters as one flat vector (weights then biases, per layer).
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in &self.layers {
            out.extend_from_slice(&layer.weights);
            out.extend_from_slice(&layer.biases);
        }
        out
    }

    /// Overwrites all parameters from a flat vector in [`flatten`] order.
    pub fn assign(&mut self, flat: &[f64]) {
        let mut pos = 0;
        for layer in &mut self.layers {
            let wn = layer.weights.len();
            layer.weights.copy_from_slice(&flat[pos..pos + wn]);
            pos += wn;
            let bn = layer.biases.len();
            layer.biases.copy_from_slice(&flat[pos..pos + bn]);
            pos += bn;
        }
        debug_assert_eq!(pos, flat.len());
    }

    /// Zeroes every weight and bias; handy for fixed-point tests.
    pub fn zero_parameters(&mut self) {
        for layer in &mut self.layers {
            layer.weights.iter_mut().for_each(|w| *w = 0.0);
            layer.biases.iter_mut().for_each(|b| *b = 0.0);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn update_params(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    bias1: f64,
    bias2: f64,
) {
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g;
        v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g * g;
        let m_hat = m[i] / bias1;
        let v_hat = v[i] / bias2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
    }
}
