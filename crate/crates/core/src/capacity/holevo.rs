use rayon::prelude::*;

use super::params::{compact_ensemble, decode_ensemble, encode_ensemble, random_ensemble, reduce_support, Support};
use super::{CapacityEstimate, SignalEnsemble, MAX_ELEMENTS};
use crate::optim::{restart_rng, NelderMead, OptimizerConfig};
use crate::qubit::{von_neumann_entropy, BlochVector, QubitChannel};
use crate::Result;

/// Holevo quantity `S[N(σ)] − Σᵢ pᵢ S[N(σᵢ)]` with `σ = Σᵢ pᵢ σᵢ`.
pub fn holevo_chi(channel: &QubitChannel, ensemble: &SignalEnsemble) -> f64 {
    chi_raw(channel, &ensemble.probabilities(), &ensemble.states())
}

pub(crate) fn chi_raw(channel: &QubitChannel, probs: &[f64], states: &[BlochVector]) -> f64 {
    let mut mean = nalgebra::Vector3::zeros();
    let mut conditional = 0.0;
    for (p, s) in probs.iter().zip(states) {
        let out = channel.apply(s);
        mean += out.to_vector() * *p;
        conditional += p * von_neumann_entropy(&out);
    }
    von_neumann_entropy(&BlochVector::from_vector(mean)) - conditional
}

pub fn holevo_capacity(channel: &QubitChannel, config: &OptimizerConfig) -> Result<CapacityEstimate> {
    holevo_capacity_with(channel, config, MAX_ELEMENTS)
}

struct Restart {
    value: f64,
    ensemble: SignalEnsemble,
    converged: bool,
}

/// Multistart local ascent over ensembles of at most `max_signals` pure states.
pub fn holevo_capacity_with(
    channel: &QubitChannel,
    config: &OptimizerConfig,
    max_signals: usize,
) -> Result<CapacityEstimate> {
    config.validate()?;
    let k = max_signals.max(1);
    let runs: Vec<Restart> = (0..config.restarts).into_par_iter().map(|r| run_restart(channel, config, k, r)).collect();

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    let ensemble = minimal_witness(channel, &runs[best].ensemble, runs[best].value);
    Ok(CapacityEstimate {
        value: holevo_chi(channel, &ensemble),
        witness_ensemble: ensemble,
        witness_povm: None,
        converged: runs[best].converged,
        restarts_used: runs.len(),
        restart_values: runs.iter().map(|r| r.value).collect(),
    })
}

fn objective(channel: &QubitChannel, x: &[f64]) -> f64 {
    let (p, s) = decode_ensemble(x);
    -chi_raw(channel, &p, &s)
}

fn minimal_witness(channel: &QubitChannel, ensemble: &SignalEnsemble, value: f64) -> SignalEnsemble {
    let nm = NelderMead { max_evals: 6000 * ensemble.len(), ..Default::default() };
    let support = Support { probs: ensemble.probabilities(), states: ensemble.states(), tail: Vec::new(), value };
    let reduced = reduce_support(support, |x| objective(channel, x), &nm, 1e-10);
    SignalEnsemble::new(reduced.probs.into_iter().zip(reduced.states).collect())
        .expect("decoded ensembles are normalized and pure")
}

fn run_restart(channel: &QubitChannel, config: &OptimizerConfig, k: usize, restart: usize) -> Restart {
    let mut rng = restart_rng(config.rng_seed, restart);
    let nm = NelderMead { max_evals: 6000 * k, ..Default::default() };
    let objective = |x: &[f64]| objective(channel, x);

    let mut x = random_ensemble(&mut rng, k);
    let mut value = -objective(&x);
    let mut converged = false;
    let mut step = 0.5;
    for _ in 0..config.max_iterations {
        let m = nm.minimize(objective, &x, step);
        let gain = -m.f - value;
        if -m.f > value {
            x = m.x;
            value = -m.f;
        }
        step = (step * 0.3).max(1e-4);
        if gain < config.tolerance {
            converged = m.converged || gain <= 0.0;
            break;
        }
    }

    let (p, s) = decode_ensemble(&x);
    let (p, s) = compact_ensemble(&p, &s, 1e-7, 1e-3);
    let reduced = encode_ensemble(&p, &s);
    let polished = nm.polish(objective, &reduced, 1e-3, 1e-15, 4);
    let (p, s) = decode_ensemble(&polished.x);
    let (p, s) = compact_ensemble(&p, &s, 1e-12, 1e-9);
    let ensemble =
        SignalEnsemble::new(p.into_iter().zip(s).collect()).expect("decoded ensembles are normalized and pure");
    Restart { value: holevo_chi(channel, &ensemble), ensemble, converged }
}
