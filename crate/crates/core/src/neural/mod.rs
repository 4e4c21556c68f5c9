//! Desk-scale seizure detectors with from-scratch forward and backward
//! passes: a six-block 1-D CNN and a dual-branch CNN + Transformer encoder
//! with two-head attention and rotary position embeddings.
//!
//! Everything runs in `f64` on the CPU. Training is single-threaded and
//! bit-deterministic given the seed; all parameter tensors are named so
//! models can be checkpointed and inspected.

pub mod adam;
pub mod attention;
pub mod checkpoint;
pub mod cnn6;
pub mod cnn_transformer;
pub mod gradcheck;
pub mod layers;
pub mod loss;
pub mod tensor;
pub mod train;

pub use adam::{adam_update, AdamState};
pub use attention::rope_rotate;
pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointError};
pub use cnn6::{Cnn6, Cnn6Config};
pub use cnn_transformer::{CnnTransformer, CnnTransformerConfig};
pub use gradcheck::{check_gradients, GradCheckReport};
pub use loss::{bce_loss, bce_softmax_grad};
pub use tensor::Tensor;
pub use train::{train, EpochLog, TrainConfig, TrainReport};

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Which detector architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Cnn6,
    CnnTransformer,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelKind::Cnn6 => write!(f, "cnn6"),
            ModelKind::CnnTransformer => write!(f, "cnn-transformer"),
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cnn6" => Ok(ModelKind::Cnn6),
            "cnn-transformer" | "cnn_transformer" => Ok(ModelKind::CnnTransformer),
            other => Err(format!("unknown model kind `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("rotary embedding needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("non-finite gradient in tensor `{0}`")]
    NonFiniteGradient(String),
    #[error("training set contains a single class")]
    SingleClassDataset,
    #[error("training window without a label")]
    UnlabeledWindow,
}

/// A detector with named parameters, a training-mode forward/backward pair
/// and an inference path.
///
/// `forward_train` caches activations for the following `backward` call,
/// which accumulates parameter gradients and expects the gradient of the
/// loss with respect to the pre-softmax logits.
pub trait Model {
    fn kind(&self) -> ModelKind;
    /// Window length (samples) the model accepts.
    fn input_len(&self) -> usize;
    /// Training-mode forward: batch `[N, L]` → class probabilities `[N, 2]`.
    fn forward_train(&mut self, batch: &Tensor, rng: &mut ChaCha8Rng)
        -> Result<Tensor, NeuralError>;
    /// Inference forward (running batch-norm stats, no dropout).
    fn infer(&self, batch: &Tensor) -> Result<Tensor, NeuralError>;
    /// Backprop from `d loss / d logits`; must follow `forward_train`.
    fn backward(&mut self, dlogits: &Tensor);
    fn zero_grads(&mut self);
    fn for_each_param(&self, f: &mut dyn FnMut(&str, &Tensor));
    fn for_each_param_mut(&mut self, f: &mut dyn FnMut(&str, &mut Tensor, &mut Tensor));
    /// Architecture configuration, serialized for checkpoints.
    fn config_json(&self) -> serde_json::Value;
}

/// Snapshot of a model's named parameter tensors.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub tensors: Vec<(String, Tensor)>,
}

impl ModelParams {
    pub fn from_model(model: &dyn Model) -> Self {
        let mut tensors = Vec::new();
        model.for_each_param(&mut |name, t| tensors.push((name.to_string(), t.clone())));
        Self { tensors }
    }

    pub fn total_count(&self) -> usize {
        self.tensors.iter().map(|(_, t)| t.len()).sum()
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.tensors.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn all_finite(&self) -> bool {
        self.tensors
            .iter()
            .all(|(_, t)| t.data().iter().all(|v| v.is_finite()))
    }
}

/// Build a fresh model of the given kind for windows of `input_len` samples.
pub fn build_model(kind: ModelKind, input_len: usize, seed: u64) -> Box<dyn Model> {
    match kind {
        ModelKind::Cnn6 => Box::new(Cnn6::new(Cnn6Config::for_window(input_len), seed)),
        ModelKind::CnnTransformer => Box::new(CnnTransformer::new(
            CnnTransformerConfig::for_window(input_len),
            seed,
        )),
    }
}
