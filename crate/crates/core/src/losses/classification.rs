use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalConfig<T> {
    pub alpha: T,
    pub gamma: T,
}

impl<T: Scalar> Default for FocalConfig<T> {
    fn default() -> Self {
        Self { alpha: T::lit(0.25), gamma: T::lit(2.0) }
    }
}

fn clamp_prob<T: Scalar>(p: T) -> T {
    let lo = T::lit(1e-12);
    p.max(lo).min(T::one() - lo)
}

/// Binary focal loss summed over samples and divided by `n_pos`.
///
/// `labels[i] > 0` marks a positive (p is the probability of the object
/// class), `0` is background. Probabilities are clamped to
/// `[1e-12, 1 - 1e-12]`; `n_pos` of zero is treated as one.
pub fn focal_loss<T: Scalar>(p: &[T], labels: &[u32], cfg: &FocalConfig<T>, n_pos: usize) -> Result<T> {
    if p.len() != labels.len() {
        return Err(Error::LengthMismatch(p.len(), labels.len()));
    }
    let terms: Vec<T> = p
        .iter()
        .zip(labels)
        .map(|(&pi, &c)| {
            let pi = clamp_prob(pi);
            if c > 0 {
                -cfg.alpha * (T::one() - pi).powf(cfg.gamma) * pi.ln()
            } else {
                -(T::one() - cfg.alpha) * pi.powf(cfg.gamma) * (T::one() - pi).ln()
            }
        })
        .collect();
    Ok(pairwise_sum(&terms) / T::from_usize(n_pos.max(1)).unwrap())
}

/// Mean negative log-likelihood of the labelled class (label 0 is
/// background and indexes column 0).
pub fn ce_loss<T: Scalar>(probs: &[Vec<T>], labels: &[usize]) -> Result<T> {
    if probs.len() != labels.len() {
        return Err(Error::LengthMismatch(probs.len(), labels.len()));
    }
    if probs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let tol = T::lit(1e-6);
    let mut terms = Vec::with_capacity(probs.len());
    for (i, (row, &label)) in probs.iter().zip(labels).enumerate() {
        let total: T = row.iter().copied().sum();
        let valid = label < row.len() && (total - T::one()).abs() <= tol && row.iter().all(|&v| v >= T::zero());
        if !valid {
            return Err(Error::InvalidDistribution(i));
        }
        terms.push(-row[label].max(T::lit(1e-12)).ln());
    }
    Ok(pairwise_sum(&terms) / T::from_usize(terms.len()).unwrap())
}
