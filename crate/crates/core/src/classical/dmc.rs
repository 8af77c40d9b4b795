use std::ops::RangeInclusive;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Row-stochastic transition matrix `W(y|x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteChannel {
    transition: Vec<Vec<f64>>,
}

impl DiscreteChannel {
    pub fn new(transition: Vec<Vec<f64>>) -> Result<Self> {
        let width = transition.first().map_or(0, Vec::len);
        if width == 0 {
            return Err(Error::Validation("channel needs at least one input and output".into()));
        }
        for (x, row) in transition.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Validation(format!("row {x} has {} entries, expected {width}", row.len())));
            }
            if row.iter().any(|w| !(*w >= 0.0)) {
                return Err(Error::Validation(format!("row {x} has a negative entry")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::Validation(format!("row {x} sums to {total}")));
            }
        }
        Ok(DiscreteChannel { transition })
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn bsc(flip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&flip) {
            return Err(Error::Parameter(format!("flip probability {flip} not in [0, 1]")));
        }
        Self::new(vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]])
    }

    /// Binary erasure channel; the third output symbol is the erasure.
    pub fn bec(erasure: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&erasure) {
            return Err(Error::Parameter(format!("erasure probability {erasure} not in [0, 1]")));
        }
        Self::new(vec![vec![1.0 - erasure, 0.0, erasure], vec![0.0, 1.0 - erasure, erasure]])
    }

    pub fn noiseless(n: usize) -> Result<Self> {
        Self::new((0..n).map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect()).collect())
    }

    pub fn input_size(&self) -> usize {
        self.transition.len()
    }

    pub fn output_size(&self) -> usize {
        self.transition[0].len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }
}

/// Channel with `|X|` and `|Y|` drawn from the given ranges and each row drawn
/// uniformly from the probability simplex.
pub fn random_dmc(
    rng: &mut impl Rng,
    inputs: RangeInclusive<usize>,
    outputs: RangeInclusive<usize>,
) -> DiscreteChannel {
    let nx = rng.gen_range(inputs);
    let ny = rng.gen_range(outputs);
    let rows = (0..nx)
        .map(|_| {
            let raw: Vec<f64> = (0..ny).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|w| w / total).collect()
        })
        .collect();
    DiscreteChannel::new(rows).expect("normalized rows")
}

/// `I(X;Y)` in bits for input distribution `input`.
pub fn mutual_information(channel: &DiscreteChannel, input: &[f64]) -> f64 {
    let q = output_distribution(channel, input);
    channel.transition.iter().zip(input).map(|(row, px)| px * divergence(row, &q)).sum()
}

fn output_distribution(channel: &DiscreteChannel, input: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; channel.output_size()];
    for (row, px) in channel.transition.iter().zip(input) {
        for (qy, w) in q.iter_mut().zip(row) {
            *qy += px * w;
        }
    }
    q
}

/// `D(W(·|x) ‖ q)` in bits.
fn divergence(row: &[f64], q: &[f64]) -> f64 {
    row.iter().zip(q).filter(|(w, _)| **w > 0.0).map(|(w, qy)| w * (w / qy).log2()).sum()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlahutArimoto {
    /// Midpoint of the final bracket.
    pub capacity: f64,
    pub lower: f64,
    pub upper: f64,
    pub input: Vec<f64>,
    pub iterations: usize,
}

/// Blahut–Arimoto iteration with the bracket
/// `log₂ Σₓ r(x) 2^{D(x)} ≤ C ≤ maxₓ D(x)`, `D(x) = D(W(·|x) ‖ q)`.
pub fn blahut_arimoto(channel: &DiscreteChannel, tol: f64, max_iterations: usize) -> BlahutArimoto {
    let nx = channel.input_size();
    let mut r = vec![1.0 / nx as f64; nx];
    let mut lower = 0.0;
    let mut upper = f64::INFINITY;
    let mut iterations = 0;
    let mut d = vec![0.0; nx];
    while iterations < max_iterations {
        iterations += 1;
        let q = output_distribution(channel, &r);
        for (dx, row) in d.iter_mut().zip(&channel.transition) {
            *dx = divergence(row, &q);
        }
        let weights: Vec<f64> = r.iter().zip(&d).map(|(rx, dx)| rx * dx.exp2()).collect();
        let total: f64 = weights.iter().sum();
        lower = total.log2();
        upper = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if upper - lower < tol {
            break;
        }
        r = weights.iter().map(|w| w / total).collect();
    }
    BlahutArimoto { capacity: 0.5 * (lower + upper), lower, upper, input: r, iterations }
}

/// Capacity in bits, to within `tol` (bracket width).
pub fn dmc_capacity(channel: &DiscreteChannel, tol: f64) -> f64 {
    blahut_arimoto(channel, tol, 10_000_000).capacity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::restart_rng;
    use crate::qubit::binary_entropy;
    use approx::assert_abs_diff_eq;

    #[test]
    fn validation() {
        assert!(DiscreteChannel::new(vec![vec![0.5, 0.4]]).is_err());
        assert!(DiscreteChannel::new(vec![vec![1.2, -0.2]]).is_err());
        assert!(DiscreteChannel::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
        assert!(DiscreteChannel::new(vec![]).is_err());
        assert!(DiscreteChannel::bsc(1.5).is_err());
    }

    #[test]
    fn textbook_capacities() {
        assert_abs_diff_eq!(dmc_capacity(&DiscreteChannel::noiseless(2).unwrap(), 1e-9), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(dmc_capacity(&DiscreteChannel::bsc(0.5).unwrap(), 1e-9), 0.0, epsilon = 1e-9);
        let c = dmc_capacity(&DiscreteChannel::bsc(0.2).unwrap(), 1e-9);
        assert_abs_diff_eq!(c, 1.0 - binary_entropy(0.2), epsilon = 1e-9);
        assert_abs_diff_eq!(c, 0.278072, epsilon = 1e-6);
        assert_abs_diff_eq!(dmc_capacity(&DiscreteChannel::bec(0.3).unwrap(), 1e-10), 0.7, epsilon = 1e-9);
    }

    #[test]
    fn bracket_contains_reported_value() {
        let mut rng = restart_rng(17, 0);
        for _ in 0..100 {
            let ch = random_dmc(&mut rng, 2..=5, 2..=5);
            let ba = blahut_arimoto(&ch, 1e-9, 10_000_000);
            assert!(ba.lower <= ba.capacity && ba.capacity <= ba.upper);
            assert!(ba.upper - ba.lower < 1e-9);
            // The achieving input is a valid witness of the lower bound.
            assert!(mutual_information(&ch, &ba.input) >= ba.lower - 1e-9);
        }
    }
}
