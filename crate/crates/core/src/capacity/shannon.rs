use rayon::prelude::*;

use super::params::{
    compact_ensemble, decode_ensemble, decode_povm, encode_ensemble, encode_povm, random_ensemble, random_povm,
    reduce_support, Support,
};
use super::{CapacityEstimate, Povm, SignalEnsemble, MAX_ELEMENTS};
use crate::optim::{restart_rng, NelderMead, OptimizerConfig};
use crate::qubit::{entropy_unchecked, BlochVector, Effect, QubitChannel};
use crate::Result;

/// Mutual information between the signal index and the measurement outcome:
/// `H(q) − Σᵢ pᵢ H(qᵢ)` with `qᵢ_b = Tr[N(σᵢ) E_b]` and `q = Σᵢ pᵢ qᵢ`.
pub fn mutual_information(channel: &QubitChannel, ensemble: &SignalEnsemble, povm: &Povm) -> f64 {
    mi_raw(channel, &ensemble.probabilities(), &ensemble.states(), povm.effects())
}

pub(crate) fn mi_raw(channel: &QubitChannel, probs: &[f64], states: &[BlochVector], effects: &[Effect]) -> f64 {
    let mut marginal = vec![0.0; effects.len()];
    let mut row = vec![0.0; effects.len()];
    let mut conditional = 0.0;
    for (p, s) in probs.iter().zip(states) {
        let out = channel.apply(s);
        for (slot, e) in row.iter_mut().zip(effects) {
            *slot = e.expectation(&out);
        }
        for (acc, q) in marginal.iter_mut().zip(&row) {
            *acc += p * q;
        }
        conditional += p * entropy_unchecked(&row);
    }
    entropy_unchecked(&marginal) - conditional
}

pub fn shannon_capacity(channel: &QubitChannel, config: &OptimizerConfig) -> Result<CapacityEstimate> {
    shannon_capacity_with(channel, config, MAX_ELEMENTS, MAX_ELEMENTS)
}

struct Restart {
    value: f64,
    ensemble: SignalEnsemble,
    povm: Povm,
    converged: bool,
}

/// Alternating ascent over ensembles of at most `max_signals` pure states
/// and rank-one POVMs of at most `max_outcomes` effects.
pub fn shannon_capacity_with(
    channel: &QubitChannel,
    config: &OptimizerConfig,
    max_signals: usize,
    max_outcomes: usize,
) -> Result<CapacityEstimate> {
    config.validate()?;
    let (k, m) = (max_signals.max(1), max_outcomes.max(2));
    let runs: Vec<Restart> =
        (0..config.restarts).into_par_iter().map(|r| run_restart(channel, config, k, m, r)).collect();

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = i;
        }
    }
    let (ensemble, povm) = minimal_witness(channel, &runs[best]);
    Ok(CapacityEstimate {
        value: mutual_information(channel, &ensemble, &povm),
        witness_ensemble: ensemble,
        witness_povm: Some(povm),
        converged: runs[best].converged,
        restarts_used: runs.len(),
        restart_values: runs.iter().map(|r| r.value).collect(),
    })
}

fn objective(channel: &QubitChannel, ens: &[f64], povm: &[f64]) -> f64 {
    match decode_povm(povm) {
        Some(effects) => {
            let (p, s) = decode_ensemble(ens);
            -mi_raw(channel, &p, &s, &effects)
        }
        None => f64::INFINITY,
    }
}

fn minimal_witness(channel: &QubitChannel, run: &Restart) -> (SignalEnsemble, Povm) {
    let tail = encode_povm(run.povm.effects());
    let tail_len = tail.len();
    let nm = NelderMead { max_evals: 3000 * (run.ensemble.len() + run.povm.len()), ..Default::default() };
    let support =
        Support { probs: run.ensemble.probabilities(), states: run.ensemble.states(), tail, value: run.value };
    let joint = |z: &[f64]| {
        let split = z.len() - tail_len;
        objective(channel, &z[..split], &z[split..])
    };
    let reduced = reduce_support(support, joint, &nm, 1e-10);
    let ensemble = SignalEnsemble::new(reduced.probs.into_iter().zip(reduced.states).collect())
        .expect("decoded ensembles are normalized and pure");
    let effects = decode_povm(&reduced.tail).expect("finite objective implies a regular POVM");
    (ensemble, Povm::new(effects).expect("congruence-normalized effects form a POVM"))
}

fn run_restart(channel: &QubitChannel, config: &OptimizerConfig, k: usize, m: usize, restart: usize) -> Restart {
    let mut rng = restart_rng(config.rng_seed, restart);
    let nm = NelderMead { max_evals: 3000 * (k + m), ..Default::default() };
    let mut ens = random_ensemble(&mut rng, k);
    let mut pov = random_povm(&mut rng, m);
    let mut value = -objective(channel, &ens, &pov);
    if !value.is_finite() {
        value = 0.0;
    }

    // Block ascent: ensemble with the measurement fixed, then the reverse,
    // then both together to follow the coupled directions.
    let split = ens.len();
    let joint = |z: &[f64]| objective(channel, &z[..split], &z[split..]);
    let mut converged = false;
    let mut step = 0.5;
    for _ in 0..config.max_iterations {
        let before = value;
        let e = nm.minimize(|x| objective(channel, x, &pov), &ens, step);
        if -e.f > value {
            ens = e.x;
            value = -e.f;
        }
        let p = nm.minimize(|y| objective(channel, &ens, y), &pov, step);
        if -p.f > value {
            pov = p.x;
            value = -p.f;
        }
        let start: Vec<f64> = ens.iter().chain(&pov).copied().collect();
        let j = nm.minimize(joint, &start, step * 0.2);
        if -j.f > value {
            ens = j.x[..split].to_vec();
            pov = j.x[split..].to_vec();
            value = -j.f;
        }
        step = (step * 0.5).max(1e-3);
        if value - before < config.tolerance {
            converged = true;
            break;
        }
    }

    // Joint refinement, then drop idle signals and refine once more.
    let start: Vec<f64> = ens.iter().chain(&pov).copied().collect();
    let j = nm.polish(joint, &start, 0.05, 1e-15, 4);
    let effects = decode_povm(&j.x[split..]).expect("finite objective implies a regular POVM");
    let (p, s) = decode_ensemble(&j.x[..split]);
    let (p, s) = compact_ensemble(&p, &s, 1e-7, 1e-3);

    let split = 3 * p.len();
    let joint = |z: &[f64]| objective(channel, &z[..split], &z[split..]);
    let start: Vec<f64> = encode_ensemble(&p, &s).into_iter().chain(encode_povm(&effects)).collect();
    let j = nm.polish(joint, &start, 1e-3, 1e-15, 4);

    let (p, s) = decode_ensemble(&j.x[..split]);
    let (p, s) = compact_ensemble(&p, &s, 1e-12, 1e-9);
    let ensemble =
        SignalEnsemble::new(p.into_iter().zip(s).collect()).expect("decoded ensembles are normalized and pure");
    let effects = decode_povm(&j.x[split..]).expect("finite objective implies a regular POVM");
    let povm = Povm::new(effects).expect("congruence-normalized effects form a POVM");
    Restart { value: mutual_information(channel, &ensemble, &povm), ensemble, povm, converged }
}
