//! Adam optimizer with bias correction.

use super::{Model, NeuralError};
use super::train::TrainConfig;

/// One Adam update on a flat parameter slice.
///
/// `step` is 1-based; `m` and `v` are the first/second moment buffers.
pub fn adam_update(
    param: &mut [f64],
    grad: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    step: u64,
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
) {
    debug_assert!(step >= 1);
    let bc1 = 1.0 - beta1.powi(step as i32);
    let bc2 = 1.0 - beta2.powi(step as i32);
    for i in 0..param.len() {
        let g = grad[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        param[i] -= lr * m_hat / (v_hat.sqrt() + eps);
    }
}

/// Moment buffers for every parameter tensor of a model, keyed by the
/// deterministic parameter visit order.
pub struct AdamState {
    step: u64,
    slots: Vec<(String, Vec<f64>, Vec<f64>)>,
}

impl AdamState {
    pub fn new() -> Self {
        Self {
            step: 0,
            slots: Vec::new(),
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Apply one Adam step using the gradients currently stored in the
    /// model. Rejects non-finite gradients.
    pub fn step(&mut self, model: &mut dyn Model, cfg: &TrainConfig) -> Result<(), NeuralError> {
        if self.slots.is_empty() {
            model.for_each_param(&mut |name, t| {
                self.slots
                    .push((name.to_string(), vec![0.0; t.len()], vec![0.0; t.len()]));
            });
        }
        // Validate before mutating anything.
        let mut bad: Option<String> = None;
        model.for_each_param_mut(&mut |name, _, grad| {
            if bad.is_none() && grad.data().iter().any(|g| !g.is_finite()) {
                bad = Some(name.to_string());
            }
        });
        if let Some(name) = bad {
            return Err(NeuralError::NonFiniteGradient(name));
        }

        self.step += 1;
        let step = self.step;
        let mut idx = 0usize;
        let slots = &mut self.slots;
        model.for_each_param_mut(&mut |name, value, grad| {
            let (slot_name, m, v) = &mut slots[idx];
            debug_assert_eq!(slot_name, name, "parameter visit order changed");
            adam_update(
                value.data_mut(),
                grad.data(),
                m,
                v,
                step,
                cfg.learning_rate,
                cfg.beta1,
                cfg.beta2,
                cfg.eps,
            );
            idx += 1;
        });
        Ok(())
    }
}

impl Default for AdamState {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut p = vec![0.7, -1.3];
        let mut m = vec![0.0; 2];
        let mut v = vec![0.0; 2];
        adam_update(&mut p, &[0.0, 0.0], &mut m, &mut v, 1, 1e-3, 0.9, 0.999, 1e-8);
        assert_eq!(p, vec![0.7, -1.3]);
    }

    #[test]
    fn first_step_matches_hand_evaluation() {
        // g = 1, lr = 1e-3: m̂ = 1, v̂ = 1 → Δ = −lr / (1 + eps).
        let mut p = vec![0.0];
        let mut m = vec![0.0];
        let mut v = vec![0.0];
        let (lr, eps) = (1e-3, 1e-8);
        adam_update(&mut p, &[1.0], &mut m, &mut v, 1, lr, 0.9, 0.999, eps);
        let expect = -lr / (1.0 + eps);
        assert!((p[0] - expect).abs() < 1e-15, "{} vs {expect}", p[0]);
    }

    /// Independently coded scalar Adam, straight from the update equations.
    fn scalar_adam_oracle(grads: &[f64], lr: f64, b1: f64, b2: f64, eps: f64) -> f64 {
        let mut theta = 0.0;
        let mut m = 0.0;
        let mut v = 0.0;
        for (t, &g) in grads.iter().enumerate() {
            let t = (t + 1) as i32;
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            let m_hat = m / (1.0 - b1.powi(t));
            let v_hat = v / (1.0 - b2.powi(t));
            theta -= lr * m_hat / (v_hat.sqrt() + eps);
        }
        theta
    }

    #[test]
    fn ten_random_steps_match_scalar_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        let grads: Vec<f64> = (0..10).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let (lr, b1, b2, eps) = (1e-2, 0.9, 0.999, 1e-8);

        let mut p = vec![0.0];
        let mut m = vec![0.0];
        let mut v = vec![0.0];
        for (t, &g) in grads.iter().enumerate() {
            adam_update(&mut p, &[g], &mut m, &mut v, (t + 1) as u64, lr, b1, b2, eps);
        }
        let oracle = scalar_adam_oracle(&grads, lr, b1, b2, eps);
        assert!((p[0] - oracle).abs() < 1e-12, "{} vs {oracle}", p[0]);
    }
}
