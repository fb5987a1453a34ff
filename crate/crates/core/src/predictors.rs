//! Prediction models mapping features to cost estimates, with explicit
//! forward and backward passes.
//!
//! Two kinds: a linear map and a one-hidden-layer network. Both support a
//! per-slot mode where a single `1 x input_dim` map is applied to every row
//! of a feature matrix (energy problems predict one scalar per half-hour
//! from that slot's 8 features; matching predicts one likelihood per edge).

use crate::numerics::{sample_gaussian, Matrix, RngStream};
use crate::problems::Features;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("checkpoint format error: {0}")]
    Checkpoint(String),
}

/// Final nonlinearity on the model output.
///
/// `SigmoidNegated` emits `-sigmoid(a)`: likelihood-style outputs for
/// maximization problems expressed in the canonical minimization form, where
/// predicted costs live in `(-1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputActivation {
    Identity,
    Sigmoid,
    SigmoidNegated,
}

impl OutputActivation {
    fn apply(&self, a: f64) -> f64 {
        match self {
            OutputActivation::Identity => a,
            OutputActivation::Sigmoid => sigmoid(a),
            OutputActivation::SigmoidNegated => -sigmoid(a),
        }
    }

    fn derivative(&self, a: f64) -> f64 {
        match self {
            OutputActivation::Identity => 1.0,
            OutputActivation::Sigmoid => {
                let s = sigmoid(a);
                s * (1.0 - s)
            }
            OutputActivation::SigmoidNegated => {
                let s = sigmoid(a);
                -s * (1.0 - s)
            }
        }
    }
}

fn sigmoid(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + (-a).exp())
    } else {
        let e = a.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Model {
    Linear(LinearModel),
    Mlp(MlpModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub output: OutputActivation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub hidden_weights: Matrix,
    pub hidden_bias: Vec<f64>,
    pub output_weights: Matrix,
    pub output_bias: Vec<f64>,
    pub output: OutputActivation,
}

/// Per-parameter gradients, shapes mirroring the model's parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GradientBundle {
    Linear { weights: Matrix, bias: Vec<f64> },
    Mlp { hidden_weights: Matrix, hidden_bias: Vec<f64>, output_weights: Matrix, output_bias: Vec<f64> },
}

impl GradientBundle {
    pub fn zeros_like(model: &Model) -> Self {
        match model {
            Model::Linear(m) => GradientBundle::Linear {
                weights: Matrix::zeros(m.weights.rows(), m.weights.cols()),
                bias: vec![0.0; m.bias.len()],
            },
            Model::Mlp(m) => GradientBundle::Mlp {
                hidden_weights: Matrix::zeros(m.hidden_weights.rows(), m.hidden_weights.cols()),
                hidden_bias: vec![0.0; m.hidden_bias.len()],
                output_weights: Matrix::zeros(m.output_weights.rows(), m.output_weights.cols()),
                output_bias: vec![0.0; m.output_bias.len()],
            },
        }
    }

    /// Flatten into parameter-order slices for the optimizer.
    pub fn flat(&self) -> Vec<f64> {
        match self {
            GradientBundle::Linear { weights, bias } => {
                let mut v = weights.data().to_vec();
                v.extend_from_slice(bias);
                v
            }
            GradientBundle::Mlp { hidden_weights, hidden_bias, output_weights, output_bias } => {
                let mut v = hidden_weights.data().to_vec();
                v.extend_from_slice(hidden_bias);
                v.extend_from_slice(output_weights.data());
                v.extend_from_slice(output_bias);
                v
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Linear,
    Mlp,
}

/// Shape request for [`init_model`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub input_dim: usize,
    pub output_dim: usize,
    pub hidden_width: usize,
    pub output_activation: OutputActivation,
}

impl ModelSpec {
    pub fn linear(input_dim: usize, output_dim: usize) -> Self {
        ModelSpec {
            kind: ModelKind::Linear,
            input_dim,
            output_dim,
            hidden_width: 0,
            output_activation: OutputActivation::Identity,
        }
    }

    pub fn mlp(input_dim: usize, output_dim: usize, hidden_width: usize) -> Self {
        ModelSpec {
            kind: ModelKind::Mlp,
            input_dim,
            output_dim,
            hidden_width,
            output_activation: OutputActivation::Identity,
        }
    }

    pub fn with_output(mut self, act: OutputActivation) -> Self {
        self.output_activation = act;
        self
    }
}

/// Seeded init: weights `N(0, 1/input_dim)`, biases zero. Variance scaling
/// keeps the initial predictions near, but not exactly at, zero; an exactly
/// zero cost vector would make every feasible solution optimal.
pub fn init_model(spec: &ModelSpec, rng: &mut RngStream) -> Result<Model, ModelError> {
    if spec.input_dim == 0 || spec.output_dim == 0 {
        return Err(ModelError::InvalidParam("zero model dimension".into()));
    }
    let std = (1.0 / spec.input_dim as f64).sqrt();
    let gauss_matrix = |rows: usize, cols: usize, rng: &mut RngStream| {
        Matrix::from_vec(rows, cols, sample_gaussian(rng, rows * cols).iter().map(|g| g * std).collect())
    };
    match spec.kind {
        ModelKind::Linear => Ok(Model::Linear(LinearModel {
            weights: gauss_matrix(spec.output_dim, spec.input_dim, rng),
            bias: vec![0.0; spec.output_dim],
            output: spec.output_activation,
        })),
        ModelKind::Mlp => {
            if spec.hidden_width == 0 {
                return Err(ModelError::InvalidParam("mlp needs hidden_width >= 1".into()));
            }
            let hidden_weights = gauss_matrix(spec.hidden_width, spec.input_dim, rng);
            let out_std = (1.0 / spec.hidden_width as f64).sqrt();
            let output_weights = Matrix::from_vec(
                spec.output_dim,
                spec.hidden_width,
                sample_gaussian(rng, spec.output_dim * spec.hidden_width)
                    .iter()
                    .map(|g| g * out_std)
                    .collect(),
            );
            Ok(Model::Mlp(MlpModel {
                hidden_weights,
                hidden_bias: vec![0.0; spec.hidden_width],
                output_weights,
                output_bias: vec![0.0; spec.output_dim],
                output: spec.output_activation,
            }))
        }
    }
}

impl Model {
    pub fn output_dim(&self) -> usize {
        match self {
            Model::Linear(m) => m.weights.rows(),
            Model::Mlp(m) => m.output_weights.rows(),
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            Model::Linear(m) => m.weights.cols(),
            Model::Mlp(m) => m.hidden_weights.cols(),
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            Model::Linear(m) => m.weights.rows() * m.weights.cols() + m.bias.len(),
            Model::Mlp(m) => {
                m.hidden_weights.rows() * m.hidden_weights.cols()
                    + m.hidden_bias.len()
                    + m.output_weights.rows() * m.output_weights.cols()
                    + m.output_bias.len()
            }
        }
    }

    pub fn params_flat(&self) -> Vec<f64> {
        match self {
            Model::Linear(m) => {
                let mut v = m.weights.data().to_vec();
                v.extend_from_slice(&m.bias);
                v
            }
            Model::Mlp(m) => {
                let mut v = m.hidden_weights.data().to_vec();
                v.extend_from_slice(&m.hidden_bias);
                v.extend_from_slice(m.output_weights.data());
                v.extend_from_slice(&m.output_bias);
                v
            }
        }
    }

    pub fn set_params_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.param_count(), "parameter count mismatch");
        match self {
            Model::Linear(m) => {
                let nw = m.weights.rows() * m.weights.cols();
                m.weights.data_mut().copy_from_slice(&flat[..nw]);
                m.bias.copy_from_slice(&flat[nw..]);
            }
            Model::Mlp(m) => {
                let mut at = 0;
                let nh = m.hidden_weights.rows() * m.hidden_weights.cols();
                m.hidden_weights.data_mut().copy_from_slice(&flat[at..at + nh]);
                at += nh;
                m.hidden_bias.copy_from_slice(&flat[at..at + m.hidden_bias.len()]);
                at += m.hidden_bias.len();
                let no = m.output_weights.rows() * m.output_weights.cols();
                m.output_weights.data_mut().copy_from_slice(&flat[at..at + no]);
                at += no;
                m.output_bias.copy_from_slice(&flat[at..]);
            }
        }
    }

    /// How many per-slot rows `features` contributes, or an error when the
    /// shapes do not line up with this model.
    fn check_features(&self, features: &Features) -> Result<usize, ModelError> {
        match features {
            Features::Vector(z) => {
                if z.len() != self.input_dim() {
                    return Err(ModelError::DimMismatch(format!(
                        "feature vector of length {} vs model input {}",
                        z.len(),
                        self.input_dim()
                    )));
                }
                Ok(0)
            }
            Features::Matrix(m) => {
                if m.cols() != self.input_dim() || self.output_dim() != 1 {
                    return Err(ModelError::DimMismatch(format!(
                        "per-slot mode needs feature cols {} == input {} and scalar output, got output {}",
                        m.cols(),
                        self.input_dim(),
                        self.output_dim()
                    )));
                }
                Ok(m.rows())
            }
        }
    }

    /// Predict the cost estimate for one instance. Feature matrices run the
    /// same scalar-output model over every row (weight sharing across slots).
    pub fn forward(&self, features: &Features) -> Result<Vec<f64>, ModelError> {
        let slots = self.check_features(features)?;
        match features {
            Features::Vector(z) => Ok(self.forward_vec(z)),
            Features::Matrix(m) => {
                Ok((0..slots).map(|r| self.forward_vec(m.row(r))[0]).collect())
            }
        }
    }

    fn forward_vec(&self, z: &[f64]) -> Vec<f64> {
        match self {
            Model::Linear(m) => {
                let mut out = m.weights.matvec(z);
                for (o, b) in out.iter_mut().zip(&m.bias) {
                    *o = m.output.apply(*o + b);
                }
                out
            }
            Model::Mlp(m) => {
                let mut hidden = m.hidden_weights.matvec(z);
                for (h, b) in hidden.iter_mut().zip(&m.hidden_bias) {
                    *h = (*h + b).max(0.0); // ReLU
                }
                let mut out = m.output_weights.matvec(&hidden);
                for (o, b) in out.iter_mut().zip(&m.output_bias) {
                    *o = m.output.apply(*o + b);
                }
                out
            }
        }
    }

    /// Exact gradients of `upstream . c_hat` with respect to every parameter.
    pub fn backward(
        &self,
        features: &Features,
        upstream: &[f64],
    ) -> Result<GradientBundle, ModelError> {
        let slots = self.check_features(features)?;
        let expected = if slots == 0 { self.output_dim() } else { slots };
        if upstream.len() != expected {
            return Err(ModelError::DimMismatch(format!(
                "upstream length {} vs prediction length {expected}",
                upstream.len()
            )));
        }
        let mut grad = GradientBundle::zeros_like(&Model::clone_shallow(self));
        match features {
            Features::Vector(z) => self.accumulate_vec(z, upstream, &mut grad),
            Features::Matrix(m) => {
                // Per-slot sharing: total gradient is the sum over slots.
                for r in 0..slots {
                    self.accumulate_vec(m.row(r), &upstream[r..r + 1], &mut grad);
                }
            }
        }
        Ok(grad)
    }

    fn clone_shallow(model: &Model) -> Model {
        model.clone()
    }

    fn accumulate_vec(&self, z: &[f64], upstream: &[f64], grad: &mut GradientBundle) {
        match (self, grad) {
            (Model::Linear(m), GradientBundle::Linear { weights, bias }) => {
                let pre: Vec<f64> = m
                    .weights
                    .matvec(z)
                    .into_iter()
                    .zip(&m.bias)
                    .map(|(a, b)| a + b)
                    .collect();
                for i in 0..m.weights.rows() {
                    let d = upstream[i] * m.output.derivative(pre[i]);
                    bias[i] += d;
                    for (j, &zj) in z.iter().enumerate() {
                        weights.add_to(i, j, d * zj);
                    }
                }
            }
            (
                Model::Mlp(m),
                GradientBundle::Mlp { hidden_weights, hidden_bias, output_weights, output_bias },
            ) => {
                let hidden_pre: Vec<f64> = m
                    .hidden_weights
                    .matvec(z)
                    .into_iter()
                    .zip(&m.hidden_bias)
                    .map(|(a, b)| a + b)
                    .collect();
                let hidden: Vec<f64> = hidden_pre.iter().map(|&a| a.max(0.0)).collect();
                let out_pre: Vec<f64> = m
                    .output_weights
                    .matvec(&hidden)
                    .into_iter()
                    .zip(&m.output_bias)
                    .map(|(a, b)| a + b)
                    .collect();
                let mut d_hidden = vec![0.0; hidden.len()];
                for i in 0..m.output_weights.rows() {
                    let d = upstream[i] * m.output.derivative(out_pre[i]);
                    output_bias[i] += d;
                    for (h, &hv) in hidden.iter().enumerate() {
                        output_weights.add_to(i, h, d * hv);
                        d_hidden[h] += d * m.output_weights.get(i, h);
                    }
                }
                for h in 0..hidden.len() {
                    if hidden_pre[h] > 0.0 {
                        hidden_bias[h] += d_hidden[h];
                        for (j, &zj) in z.iter().enumerate() {
                            hidden_weights.add_to(h, j, d_hidden[h] * zj);
                        }
                    }
                }
            }
            _ => unreachable!("gradient bundle kind matches model kind"),
        }
    }

    /// Text checkpoint: shapes in the header, parameters as hex-encoded IEEE
    /// bits so the round trip is exact.
    pub fn save_checkpoint(&self) -> String {
        let header = match self {
            Model::Linear(m) => format!(
                "model-checkpoint v1 linear {} {} {}",
                m.weights.rows(),
                m.weights.cols(),
                activation_tag(m.output)
            ),
            Model::Mlp(m) => format!(
                "model-checkpoint v1 mlp {} {} {} {}",
                m.hidden_weights.rows(),
                m.hidden_weights.cols(),
                m.output_weights.rows(),
                activation_tag(m.output)
            ),
        };
        let mut out = header;
        out.push('\n');
        for p in self.params_flat() {
            out.push_str(&format!("{:016x}\n", p.to_bits()));
        }
        out
    }

    pub fn load_checkpoint(text: &str) -> Result<Model, ModelError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| ModelError::Checkpoint("empty".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() < 3 || parts[0] != "model-checkpoint" || parts[1] != "v1" {
            return Err(ModelError::Checkpoint(format!("bad header: {header}")));
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| ModelError::Checkpoint(format!("bad shape: {e}")))
        };
        let mut model = match parts[2] {
            "linear" if parts.len() == 6 => {
                let rows = parse(parts[3])?;
                let cols = parse(parts[4])?;
                Model::Linear(LinearModel {
                    weights: Matrix::zeros(rows, cols),
                    bias: vec![0.0; rows],
                    output: activation_from_tag(parts[5])?,
                })
            }
            "mlp" if parts.len() == 7 => {
                let hidden = parse(parts[3])?;
                let input = parse(parts[4])?;
                let output = parse(parts[5])?;
                Model::Mlp(MlpModel {
                    hidden_weights: Matrix::zeros(hidden, input),
                    hidden_bias: vec![0.0; hidden],
                    output_weights: Matrix::zeros(output, hidden),
                    output_bias: vec![0.0; output],
                    output: activation_from_tag(parts[6])?,
                })
            }
            other => return Err(ModelError::Checkpoint(format!("unknown kind: {other}"))),
        };
        let mut flat = Vec::with_capacity(model.param_count());
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bits = u64::from_str_radix(line, 16)
                .map_err(|e| ModelError::Checkpoint(format!("bad value: {e}")))?;
            flat.push(f64::from_bits(bits));
        }
        if flat.len() != model.param_count() {
            return Err(ModelError::Checkpoint(format!(
                "expected {} parameters, found {}",
                model.param_count(),
                flat.len()
            )));
        }
        model.set_params_flat(&flat);
        Ok(model)
    }
}

fn activation_tag(a: OutputActivation) -> &'static str {
    match a {
        OutputActivation::Identity => "identity",
        OutputActivation::Sigmoid => "sigmoid",
        OutputActivation::SigmoidNegated => "sigmoid_negated",
    }
}

fn activation_from_tag(s: &str) -> Result<OutputActivation, ModelError> {
    match s {
        "identity" => Ok(OutputActivation::Identity),
        "sigmoid" => Ok(OutputActivation::Sigmoid),
        "sigmoid_negated" => Ok(OutputActivation::SigmoidNegated),
        other => Err(ModelError::Checkpoint(format!("unknown activation: {other}"))),
    }
}
