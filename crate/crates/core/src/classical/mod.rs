//! Classical baseline: discrete memoryless channels and Hamming
//! rate-distortion.
//!
//! Through a classical channel, a rate up to the capacity `C` can be sent
//! reliably, and the least achievable distortion of a source compressed at
//! rate `R` is `D(R)`, which is non-increasing. Evaluating `D` at `R = C`
//! therefore orders channels exactly as their capacities do, which is what
//! [`no_reversal_check`] confirms numerically. For the guessing game the
//! source symbol is the box index and the reproduction symbol is the guessed
//! box, so the average Hamming distortion is the probability of losing.

mod dmc;
mod rd;

pub use dmc::{blahut_arimoto, dmc_capacity, mutual_information, random_dmc, BlahutArimoto, DiscreteChannel};
pub use rd::{blahut_arimoto_rd, distortion_rate, hamming_distortion, rate_distortion_uniform_hamming, RdPoint};

use serde::{Deserialize, Serialize};

use crate::Result;

/// Default Blahut–Arimoto bracket width.
pub const CAPACITY_TOL: f64 = 1e-9;

/// Outcome of comparing two channels by capacity and by distortion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub capacity_1: f64,
    pub capacity_2: f64,
    pub distortion_1: f64,
    pub distortion_2: f64,
    /// The strictly higher-capacity channel has strictly higher distortion.
    pub reversal: bool,
}

impl OrderingReport {
    pub fn verdict(&self) -> &'static str {
        if self.reversal {
            "reversal"
        } else {
            "no reversal"
        }
    }
}

/// Compares two channels used to play the three-box game at rate `R = C`.
pub fn no_reversal_check(ch1: &DiscreteChannel, ch2: &DiscreteChannel) -> Result<OrderingReport> {
    no_reversal_check_with(ch1, ch2, 3, CAPACITY_TOL)
}

/// Differences up to `tol` (capacities) or `10·tol` (distortions) count as
/// ties.
pub fn no_reversal_check_with(
    ch1: &DiscreteChannel,
    ch2: &DiscreteChannel,
    n_symbols: usize,
    tol: f64,
) -> Result<OrderingReport> {
    let capacity_1 = dmc_capacity(ch1, tol);
    let capacity_2 = dmc_capacity(ch2, tol);
    let distortion_1 = distortion_rate(n_symbols, capacity_1)?;
    let distortion_2 = distortion_rate(n_symbols, capacity_2)?;
    let sign = |d: f64, t: f64| {
        if d > t {
            1
        } else if d < -t {
            -1
        } else {
            0
        }
    };
    let dc = sign(capacity_1 - capacity_2, tol);
    let dd = sign(distortion_1 - distortion_2, 10.0 * tol);
    Ok(OrderingReport { capacity_1, capacity_2, distortion_1, distortion_2, reversal: dc != 0 && dc == dd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::restart_rng;
    use crate::qubit::binary_entropy;
    use approx::assert_abs_diff_eq;

    #[test]
    fn better_bsc_has_lower_distortion() {
        let r = no_reversal_check(&DiscreteChannel::bsc(0.1).unwrap(), &DiscreteChannel::bsc(0.3).unwrap()).unwrap();
        assert_abs_diff_eq!(r.capacity_1, 1.0 - binary_entropy(0.1), epsilon = 1e-9);
        assert_abs_diff_eq!(r.capacity_2, 1.0 - binary_entropy(0.3), epsilon = 1e-9);
        assert!(r.capacity_1 > r.capacity_2 && r.distortion_1 < r.distortion_2);
        assert!(!r.reversal);
        assert_eq!(r.verdict(), "no reversal");
    }

    #[test]
    fn identical_channels_tie() {
        let ch = DiscreteChannel::bsc(0.2).unwrap();
        let r = no_reversal_check(&ch, &ch).unwrap();
        assert_eq!(r.capacity_1, r.capacity_2);
        assert_eq!(r.distortion_1, r.distortion_2);
        assert!(!r.reversal);
    }

    #[test]
    fn equal_capacity_erasure_channel_ties() {
        // Erasure channel capacity 1 − ε, matched to BSC(0.2) by bisection on ε.
        let bsc = DiscreteChannel::bsc(0.2).unwrap();
        let target = dmc_capacity(&bsc, 1e-12);
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if dmc_capacity(&DiscreteChannel::bec(mid).unwrap(), 1e-12) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let bec = DiscreteChannel::bec(0.5 * (lo + hi)).unwrap();
        assert_eq!(bec.output_size(), 3);
        let r = no_reversal_check_with(&bsc, &bec, 3, 1e-12).unwrap();
        assert!((r.capacity_1 - r.capacity_2).abs() < 1e-10);
        assert!((r.distortion_1 - r.distortion_2).abs() < 1e-9);
        assert!(!r.reversal);
    }

    #[test]
    fn random_pairs_never_reverse() {
        let mut rng = restart_rng(2024, 0);
        for _ in 0..200 {
            let a = random_dmc(&mut rng, 2..=4, 2..=4);
            let b = random_dmc(&mut rng, 2..=4, 2..=4);
            assert!(!no_reversal_check(&a, &b).unwrap().reversal);
        }
    }
}
