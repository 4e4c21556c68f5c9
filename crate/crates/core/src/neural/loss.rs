//! Binary cross-entropy over two-class softmax outputs.

use super::{NeuralError, Tensor};

const CLAMP: f64 = 1e-7;

/// Mean `−log p(true class)` with probabilities clamped to `[1e-7, 1−1e-7]`.
///
/// `probs` is `[N, 2]` with rows summing to one; `labels[i]` is the class
/// index (0 = background, 1 = seizure).
pub fn bce_loss(probs: &Tensor, labels: &[usize]) -> Result<f64, NeuralError> {
    let n = check_shapes(probs, labels)?;
    let mut total = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        let p = probs.data()[2 * i + y].clamp(CLAMP, 1.0 - CLAMP);
        total -= p.ln();
    }
    Ok(total / n as f64)
}

/// Gradient of [`bce_loss`] with respect to the pre-softmax logits:
/// `(p − onehot(y)) / N` per row.
pub fn bce_softmax_grad(probs: &Tensor, labels: &[usize]) -> Result<Tensor, NeuralError> {
    let n = check_shapes(probs, labels)?;
    let inv_n = 1.0 / n as f64;
    let mut grad = probs.clone();
    for (i, &y) in labels.iter().enumerate() {
        grad.data_mut()[2 * i + y] -= 1.0;
    }
    grad.data_mut().iter_mut().for_each(|g| *g *= inv_n);
    Ok(grad)
}

fn check_shapes(probs: &Tensor, labels: &[usize]) -> Result<usize, NeuralError> {
    let shape = probs.shape();
    if shape.len() != 2 || shape[1] != 2 || shape[0] != labels.len() || labels.is_empty() {
        return Err(NeuralError::ShapeMismatch {
            expected: format!("[{}, 2] probabilities", labels.len()),
            got: format!("{shape:?}"),
        });
    }
    if let Some(&y) = labels.iter().find(|&&y| y > 1) {
        return Err(NeuralError::ShapeMismatch {
            expected: "labels in {0, 1}".into(),
            got: format!("label {y}"),
        });
    }
    Ok(labels.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_flip_costs_ln_two() {
        let probs = Tensor::from_vec(&[1, 2], vec![0.5, 0.5]).unwrap();
        let loss = bce_loss(&probs, &[1]).unwrap();
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn certainty_costs_nothing() {
        let probs = Tensor::from_vec(&[2, 2], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let loss = bce_loss(&probs, &[1, 0]).unwrap();
        assert!(loss <= 1e-6);
    }

    #[test]
    fn grad_matches_finite_differences_through_softmax() {
        // Loss as a function of logits z: softmax then BCE; compare the
        // fused (p − y)/N gradient against central differences.
        let logits = [0.3f64, -0.8, 1.2, 0.1, -0.4, 0.9];
        let labels = [1usize, 0, 1];
        let softmax = |z: &[f64]| -> Vec<f64> {
            z.chunks(2)
                .flat_map(|r| {
                    let m = r[0].max(r[1]);
                    let e0 = (r[0] - m).exp();
                    let e1 = (r[1] - m).exp();
                    vec![e0 / (e0 + e1), e1 / (e0 + e1)]
                })
                .collect()
        };
        let loss_of = |z: &[f64]| -> f64 {
            let p = Tensor::from_vec(&[3, 2], softmax(z)).unwrap();
            bce_loss(&p, &labels).unwrap()
        };
        let probs = Tensor::from_vec(&[3, 2], softmax(&logits)).unwrap();
        let grad = bce_softmax_grad(&probs, &labels).unwrap();
        let h = 1e-3;
        for i in 0..logits.len() {
            let mut zp = logits.to_vec();
            let mut zm = logits.to_vec();
            zp[i] += h;
            zm[i] -= h;
            let numeric = (loss_of(&zp) - loss_of(&zm)) / (2.0 * h);
            let analytic = grad.data()[i];
            let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
            assert!(rel < 1e-4, "component {i}: {analytic} vs {numeric}");
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let probs = Tensor::from_vec(&[1, 2], vec![0.5, 0.5]).unwrap();
        assert!(bce_loss(&probs, &[0, 1]).is_err());
        assert!(bce_loss(&probs, &[2]).is_err());
    }
}
