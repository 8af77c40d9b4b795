//! Expected payout of the N-box dollar-bill game over a noisy qubit channel.
//!
//! A referee hides a dollar uniformly in one of N boxes. Alice knows the box
//! `i`, sends the qubit `ρᵢ` through the channel, and Bob opens the box named
//! by the outcome of an N-outcome POVM. The payout of a strategy is
//! `(1/N) Σᵢ Tr[Eᵢ N(ρᵢ)]`; [`expected_payout`] maximizes it by see-saw:
//! the optimal measurement for fixed encodings is a minimum-error
//! discrimination problem, and the optimal encoding for a fixed effect is the
//! pure state along `N†(E)`.

mod discrimination;

pub use discrimination::{
    enclosing_ball_povm, helstrom_success, optimal_povm_for_encodings, Discrimination, DISTINCT_TOL, GAP_TOL,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::Povm;
use crate::optim::{random_pure_state, restart_rng, OptimizerConfig};
use crate::qubit::{BlochVector, Effect, QubitChannel};
use crate::{Error, Result};

/// Encodings `ρᵢ` (pure) and decoding POVM `{Eᵢ}`, one of each per box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameStrategy {
    encodings: Vec<BlochVector>,
    povm: Povm,
}

impl GameStrategy {
    pub fn new(encodings: Vec<BlochVector>, povm: Povm) -> Result<Self> {
        if encodings.len() != povm.len() {
            return Err(Error::Validation(format!("{} encodings but {} effects", encodings.len(), povm.len())));
        }
        if let Some(r) = encodings.iter().find(|r| !r.is_pure()) {
            return Err(Error::Validation(format!("encoding {r} is not pure")));
        }
        Ok(GameStrategy { encodings, povm })
    }

    /// Three-box strategy using two antipodal signals along `axis`:
    /// `ρ₁ = ρ₂ = ½(I + n·σ)`, `ρ₃ = ½(I − n·σ)`, decoded by
    /// `{½(I + n·σ), 0, ½(I − n·σ)}`.
    pub fn two_state(axis: &BlochVector) -> Result<Self> {
        let n = axis.normalized().ok_or_else(|| Error::Validation("two-state strategy needs a nonzero axis".into()))?;
        let povm = Povm::new(vec![Effect::projector(&n), Effect::ZERO, Effect::projector(&n.antipode())])?;
        Self::new(vec![n, n, n.antipode()], povm)
    }

    pub fn n_boxes(&self) -> usize {
        self.encodings.len()
    }

    pub fn encodings(&self) -> &[BlochVector] {
        &self.encodings
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PayoutEstimate {
    /// Expected winnings in dollars; a lower bound on the optimum.
    pub value: f64,
    pub witness: GameStrategy,
    pub converged: bool,
    /// See-saw rounds used by the winning restart.
    pub iterations: usize,
    /// Duality gap of the last measurement step of the winning restart.
    pub duality_gap: f64,
    /// Smallest change of the payout over any half-step of any restart.
    /// Non-negative (up to rounding) when the see-saw is monotone.
    pub worst_step: f64,
    pub restart_values: Vec<f64>,
}

/// `(1/N) Σᵢ Tr[Eᵢ N(ρᵢ)]`.
pub fn strategy_payout(channel: &QubitChannel, strategy: &GameStrategy) -> f64 {
    let n = strategy.n_boxes() as f64;
    strategy.encodings.iter().zip(strategy.povm.effects()).map(|(r, e)| e.expectation(&channel.apply(r))).sum::<f64>()
        / n
}

/// Pure state maximizing `Tr[E·N(ρ)] = Tr[N†(E)·ρ]`: the direction of the
/// vector part of `N†(E)`, or `|0⟩` when that vanishes and every state ties.
pub fn best_encoding_for_effect(channel: &QubitChannel, effect: &Effect) -> BlochVector {
    let dual = channel.adjoint_apply(effect);
    if dual.e.norm() > 1e-12 {
        BlochVector::from_vector(dual.e / dual.e.norm())
    } else {
        BlochVector::NORTH
    }
}

/// Payout in the three-box game of the best two-signal strategy with
/// Helstrom decoding: `(1/3)(1 + σ_max(M))`.
pub fn two_state_payout(channel: &QubitChannel) -> f64 {
    (1.0 + channel.image_diameter() / 2.0) / 3.0
}

/// Three-box strategy attaining [`two_state_payout`]: signals along the top
/// right singular vector of `M`.
pub fn two_state_strategy(channel: &QubitChannel) -> GameStrategy {
    let svd = channel.matrix().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let top = svd
        .singular_values
        .iter()
        .enumerate()
        .fold(0, |best, (i, s)| if *s > svd.singular_values[best] { i } else { best });
    let axis = BlochVector::from_vector(v_t.row(top).transpose());
    GameStrategy::two_state(&axis).expect("singular vectors are unit length")
}

struct Restart {
    value: f64,
    strategy: GameStrategy,
    converged: bool,
    iterations: usize,
    duality_gap: f64,
    worst_step: f64,
}

/// Optimal expected payout of the `n_boxes` game by multistart see-saw.
pub fn expected_payout(channel: &QubitChannel, n_boxes: usize, config: &OptimizerConfig) -> Result<PayoutEstimate> {
    config.validate()?;
    if n_boxes < 2 {
        return Err(Error::Parameter(format!("the game needs at least 2 boxes, got {n_boxes}")));
    }
    let runs: Vec<Restart> =
        (0..config.restarts).into_par_iter().map(|r| see_saw(channel, n_boxes, config, r)).collect::<Result<_>>()?;

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    let worst_step = runs.iter().map(|r| r.worst_step).fold(f64::INFINITY, f64::min);
    let winner = &runs[best];
    Ok(PayoutEstimate {
        value: winner.value,
        witness: winner.strategy.clone(),
        converged: winner.converged,
        iterations: winner.iterations,
        duality_gap: winner.duality_gap,
        worst_step,
        restart_values: runs.iter().map(|r| r.value).collect(),
    })
}

fn see_saw(channel: &QubitChannel, n: usize, config: &OptimizerConfig, restart: usize) -> Result<Restart> {
    let mut rng = restart_rng(config.rng_seed, restart);
    let priors = vec![1.0 / n as f64; n];
    let mut encodings: Vec<BlochVector> = (0..n).map(|_| random_pure_state(&mut rng)).collect();

    let measure = |encodings: &[BlochVector]| {
        let outputs: Vec<BlochVector> = encodings.iter().map(|r| channel.apply(r)).collect();
        optimal_povm_for_encodings(&outputs, &priors)
    };

    let mut disc = measure(&encodings)?;
    let mut value = disc.success;
    let mut worst_step = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let start = value;

        let next: Vec<BlochVector> = disc.povm.effects().iter().map(|e| best_encoding_for_effect(channel, e)).collect();
        let after_encode = GameStrategy { encodings: next.clone(), povm: disc.povm.clone() };
        let encoded_value = strategy_payout(channel, &after_encode);
        worst_step = worst_step.min(encoded_value - value);
        encodings = next;

        disc = measure(&encodings)?;
        worst_step = worst_step.min(disc.success - encoded_value);
        value = disc.success;

        if value - start < config.tolerance {
            converged = disc.converged;
            break;
        }
    }
    let strategy = GameStrategy::new(encodings, disc.povm.clone())?;
    Ok(Restart {
        value: strategy_payout(channel, &strategy),
        strategy,
        converged,
        iterations,
        duality_gap: disc.duality_gap,
        worst_step,
    })
}
