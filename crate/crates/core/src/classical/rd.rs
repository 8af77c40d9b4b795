use serde::{Deserialize, Serialize};

use crate::qubit::h2_unchecked;
use crate::{Error, Result};

/// A point `(R, D)` on a rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RdPoint {
    /// Bits per source symbol.
    pub rate: f64,
    /// Expected Hamming distortion.
    pub distortion: f64,
}

/// 0 when the reproduction equals the source symbol, 1 otherwise.
pub fn hamming_distortion(x: usize, x_hat: usize) -> u8 {
    u8::from(x != x_hat)
}

fn check_alphabet(n_symbols: usize) -> Result<()> {
    if n_symbols < 2 {
        return Err(Error::Parameter(format!("alphabet needs at least 2 symbols, got {n_symbols}")));
    }
    Ok(())
}

/// `R(D) = log₂ N − H_b(D) − D·log₂(N − 1)` for a uniform source on `N`
/// symbols under Hamming distortion; zero from `D = (N − 1)/N` on.
pub fn rate_distortion_uniform_hamming(n_symbols: usize, distortion: f64) -> Result<f64> {
    check_alphabet(n_symbols)?;
    if !(0.0..=1.0).contains(&distortion) {
        return Err(Error::Domain(format!("distortion {distortion} not in [0, 1]")));
    }
    let n = n_symbols as f64;
    if distortion >= (n - 1.0) / n {
        return Ok(0.0);
    }
    let r = n.log2() - h2_unchecked(distortion) - distortion * (n - 1.0).log2();
    Ok(r.max(0.0))
}

/// Inverse of [`rate_distortion_uniform_hamming`] on `[0, (N − 1)/N]`, by
/// bisection.
pub fn distortion_rate(n_symbols: usize, rate: f64) -> Result<f64> {
    check_alphabet(n_symbols)?;
    if rate.is_nan() {
        return Err(Error::Domain("rate is NaN".into()));
    }
    let n = n_symbols as f64;
    let d_max = (n - 1.0) / n;
    if rate <= 0.0 {
        return Ok(d_max);
    }
    if rate >= n.log2() {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, d_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rate_distortion_uniform_hamming(n_symbols, mid)? > rate {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Blahut–Arimoto for the rate-distortion function of a general source and
/// distortion matrix at slope parameter `slope ≥ 0` (natural units, larger
/// slopes trade rate for lower distortion).
pub fn blahut_arimoto_rd(source: &[f64], distortion: &[Vec<f64>], slope: f64, tol: f64) -> RdPoint {
    let n_hat = distortion[0].len();
    let mut q = vec![1.0 / n_hat as f64; n_hat];
    let mut cond = vec![vec![0.0; n_hat]; source.len()];
    for _ in 0..100_000 {
        for (row, d) in cond.iter_mut().zip(distortion) {
            let mut total = 0.0;
            for ((c, qy), dy) in row.iter_mut().zip(&q).zip(d) {
                *c = qy * (-slope * dy).exp();
                total += *c;
            }
            row.iter_mut().for_each(|c| *c /= total);
        }
        let mut next = vec![0.0; n_hat];
        for (row, px) in cond.iter().zip(source) {
            for (n, c) in next.iter_mut().zip(row) {
                *n += px * c;
            }
        }
        let change = next.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        q = next;
        if change < tol {
            break;
        }
    }
    let mut rate = 0.0;
    let mut dist = 0.0;
    for ((row, px), d) in cond.iter().zip(source).zip(distortion) {
        for ((c, qy), dy) in row.iter().zip(&q).zip(d) {
            if *c > 0.0 {
                rate += px * c * (c / qy).log2();
            }
            dist += px * c * dy;
        }
    }
    RdPoint { rate, distortion: dist }
}
