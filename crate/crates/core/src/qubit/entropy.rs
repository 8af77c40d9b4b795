use super::BlochVector;
use crate::{Error, Result};

/// `−q log₂ q − (1 − q) log₂(1 − q)` with `0·log 0 = 0`.
pub fn binary_entropy(q: f64) -> f64 {
    h2_unchecked(q)
}

pub(crate) fn h2_unchecked(q: f64) -> f64 {
    plogp(q) + plogp(1.0 - q)
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
        return Err(Error::Domain(format!("negative or NaN probability {p}")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
    }
    Ok(entropy_unchecked(probs))
}

/// Entropy without validation; tiny negative entries from rounding count as 0.
pub(crate) fn entropy_unchecked(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| plogp(p)).sum()
}

/// Von Neumann entropy in bits of `½(I + r·σ)`: eigenvalues are `(1 ± |r|)/2`.
pub fn von_neumann_entropy(state: &BlochVector) -> f64 {
    h2_unchecked((1.0 + state.norm().min(1.0)) / 2.0)
}
