use serde::{Deserialize, Serialize};

use super::{ChannelSpec, PairEvaluator, Quantity};
use crate::optim::OptimizerConfig;
use crate::{Error, Result};

/// Default bracket width for [`find_crossover`].
pub const CROSSOVER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    pub quantity: Quantity,
    pub labels: [String; 2],
    pub p_star: f64,
    pub bracket_width: f64,
    pub values_at_p_star: [f64; 2],
    /// False if any optimizer run during the search failed to converge.
    pub converged: bool,
}

/// Root of `value₁(p) − value₂(p)` on `[p_lo, p_hi]` by bisection to bracket
/// width `tol`.
pub fn find_crossover(
    quantity: Quantity,
    channels: [ChannelSpec; 2],
    p_lo: f64,
    p_hi: f64,
    tol: f64,
    config: &OptimizerConfig,
) -> Result<CrossoverResult> {
    if !(0.0 <= p_lo && p_lo < p_hi && p_hi <= 1.0) {
        return Err(Error::Usage(format!("need 0 <= p_lo < p_hi <= 1, got [{p_lo}, {p_hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance {tol} must be positive")));
    }
    let eval = PairEvaluator::new(quantity, channels, config)?;
    crossover_with(&eval, p_lo, p_hi, tol)
}

pub(crate) fn crossover_with(eval: &PairEvaluator, p_lo: f64, p_hi: f64, tol: f64) -> Result<CrossoverResult> {
    let mut converged = eval.fixed.iter().flatten().all(|v| v.converged);
    let mut diff = |p: f64| -> Result<f64> {
        let [a, b] = eval.at(p)?;
        converged &= a.converged && b.converged;
        Ok(a.value - b.value)
    };

    let (mut lo, mut hi) = (p_lo, p_hi);
    let f_lo = diff(lo)?;
    let f_hi = diff(hi)?;
    if f_lo == 0.0 {
        hi = lo;
    } else if f_hi == 0.0 {
        lo = hi;
    } else if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracketing { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = diff(mid)?;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
        } else if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p_star = 0.5 * (lo + hi);
    let [a, b] = eval.at(p_star)?;
    Ok(CrossoverResult {
        quantity: eval.quantity,
        labels: [eval.channels[0].label(), eval.channels[1].label()],
        p_star,
        bracket_width: hi - lo,
        values_at_p_star: [a.value, b.value],
        converged: converged && a.converged && b.converged,
    })
}

/// Capacity and payout of `D_p` against a fixed channel at one `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReversalCheck {
    pub p: f64,
    pub capacity_quantity: Quantity,
    /// `[D_p, fixed]`.
    pub capacity: [f64; 2],
    /// `[D_p, fixed]`, three-box game.
    pub payout: [f64; 2],
    /// Strictly lower capacity together with strictly higher payout.
    pub reversal: bool,
}

pub fn reversal_at(
    p: f64,
    fixed: ChannelSpec,
    capacity_quantity: Quantity,
    config: &OptimizerConfig,
) -> Result<ReversalCheck> {
    if !capacity_quantity.is_capacity() {
        return Err(Error::Usage("reversal needs a capacity quantity (shannon or holevo)".into()));
    }
    let pair = [ChannelSpec::Depolarizing { p: None }, fixed];
    let capacity = PairEvaluator::new(capacity_quantity, pair, config)?;
    let payout = PairEvaluator::new(Quantity::Payout, pair, config)?;
    reversal_with(p, &capacity, &payout)
}

/// Both evaluators must hold `[D_p, fixed]`.
pub(crate) fn reversal_with(p: f64, capacity: &PairEvaluator, payout: &PairEvaluator) -> Result<ReversalCheck> {
    let capacity_quantity = capacity.quantity;
    let [c0, c1] = capacity.at(p)?;
    let [t0, t1] = payout.at(p)?;
    let (dc, dt) = (c0.value - c1.value, t0.value - t1.value);
    Ok(ReversalCheck {
        p,
        capacity_quantity,
        capacity: [c0.value, c1.value],
        payout: [t0.value, t1.value],
        reversal: dc * dt < 0.0,
    })
}
