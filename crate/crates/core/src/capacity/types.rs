use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use rand::Rng;

use super::params::{decode_ensemble, decode_povm, random_ensemble, random_povm};
use crate::qubit::{BlochVector, Effect, PSD_TOL, STATE_TOL};
use crate::{Error, Result};

/// Input ensemble `{pᵢ, σᵢ}` of pure qubit states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalEnsemble {
    entries: Vec<(f64, BlochVector)>,
}

impl SignalEnsemble {
    pub fn new(entries: Vec<(f64, BlochVector)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Validation("empty signal ensemble".into()));
        }
        if let Some((p, _)) = entries.iter().find(|(p, _)| !(*p >= 0.0)) {
            return Err(Error::Validation(format!("negative probability {p}")));
        }
        let total: f64 = entries.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::Validation(format!("probabilities sum to {total}")));
        }
        if let Some((_, s)) = entries.iter().find(|(_, s)| !s.is_pure()) {
            return Err(Error::Validation(format!("signal {s} is not pure")));
        }
        Ok(SignalEnsemble { entries })
    }

    /// Equal mixture of the given pure states.
    pub fn uniform(states: &[BlochVector]) -> Result<Self> {
        let p = 1.0 / states.len().max(1) as f64;
        Self::new(states.iter().map(|s| (p, *s)).collect())
    }

    /// `k` uniformly distributed pure states with random weights.
    pub fn random(rng: &mut impl Rng, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("ensemble needs at least one state".into()));
        }
        let (probs, states) = decode_ensemble(&random_ensemble(rng, k));
        Self::new(probs.into_iter().zip(states).collect())
    }

    pub fn entries(&self) -> &[(f64, BlochVector)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|(p, _)| *p).collect()
    }

    pub fn states(&self) -> Vec<BlochVector> {
        self.entries.iter().map(|(_, s)| *s).collect()
    }

    /// True when the ensemble is two equiprobable-or-not antipodal states,
    /// i.e. orthogonal signals, within `tol` in Bloch distance.
    pub fn is_antipodal_pair(&self, tol: f64) -> bool {
        self.entries.len() == 2 && self.entries[0].1.distance(&self.entries[1].1.antipode()) <= tol
    }
}

/// Qubit POVM: positive effects summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    effects: Vec<Effect>,
}

impl Povm {
    /// Validates positivity of each effect and completeness
    /// (`Σ e0 = 1`, `Σ e = 0`) within [`PSD_TOL`].
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Validation("POVM has no effects".into()));
        }
        for (i, e) in effects.iter().enumerate() {
            e.validate().map_err(|err| Error::Validation(format!("effect {i}: {err}")))?;
        }
        let (s0, s) = completeness(&effects);
        if (s0 - 1.0).abs() > PSD_TOL || s.norm() > PSD_TOL {
            return Err(Error::Validation(format!(
                "effects sum to ({s0}, [{}, {}, {}]), not the identity",
                s[0], s[1], s[2]
            )));
        }
        Ok(Povm { effects })
    }

    /// Projective measurement along the unit vector `n`: `{½(I ± n·σ)}`.
    pub fn projective(n: &BlochVector) -> Result<Self> {
        let n = n.normalized().ok_or_else(|| Error::Validation("projective POVM needs a nonzero axis".into()))?;
        Self::new(vec![Effect::projector(&n), Effect::projector(&n.antipode())])
    }

    /// Random complete measurement with `m ≥ 2` rank-one effects.
    pub fn random(rng: &mut impl Rng, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Parameter(format!("a random POVM needs at least 2 outcomes, got {m}")));
        }
        loop {
            if let Some(effects) = decode_povm(&random_povm(rng, m)) {
                return Self::new(effects);
            }
        }
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// `(Σ e0ᵢ, Σ eᵢ)`.
    pub fn completeness(&self) -> (f64, Vector3<f64>) {
        completeness(&self.effects)
    }

    /// Outcome distribution `Tr[E_b ρ]` for the state `r`.
    pub fn distribution(&self, r: &BlochVector) -> Vec<f64> {
        self.effects.iter().map(|e| e.expectation(r)).collect()
    }
}

fn completeness(effects: &[Effect]) -> (f64, Vector3<f64>) {
    effects.iter().fold((0.0, Vector3::zeros()), |(s0, s), e| (s0 + e.e0, s + e.e))
}

/// Result of a capacity optimization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityEstimate {
    /// Bits per channel use; a lower bound on the true supremum.
    pub value: f64,
    pub witness_ensemble: SignalEnsemble,
    /// The measurement attaining `value`; absent for the Holevo quantity.
    pub witness_povm: Option<Povm>,
    pub converged: bool,
    pub restarts_used: usize,
    /// Local optimum reached by each restart, in restart order.
    pub restart_values: Vec<f64>,
}
