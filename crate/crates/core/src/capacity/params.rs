//! Unconstrained parametrizations of ensembles and POVMs for the local search.

use nalgebra::Vector3;
use rand::Rng;

use crate::optim::{angles_of, project_simplex, random_pure_state, NelderMead};
use crate::qubit::{BlochVector, Effect};

/// `k` pure states as `(α, β)` pairs followed by `k` raw weights that are
/// projected onto the simplex.
pub(crate) fn decode_ensemble(x: &[f64]) -> (Vec<f64>, Vec<BlochVector>) {
    let k = x.len() / 3;
    let states = (0..k).map(|i| BlochVector::from_angles(x[2 * i], x[2 * i + 1])).collect();
    (project_simplex(&x[2 * k..3 * k]), states)
}

pub(crate) fn encode_ensemble(probs: &[f64], states: &[BlochVector]) -> Vec<f64> {
    let mut x = Vec::with_capacity(3 * states.len());
    for s in states {
        let (a, b) = angles_of(s);
        x.extend([a, b]);
    }
    x.extend_from_slice(probs);
    x
}

pub(crate) fn random_ensemble(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let states: Vec<BlochVector> = (0..k).map(|_| random_pure_state(rng)).collect();
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|w| w / total).collect();
    encode_ensemble(&probs, &states)
}

/// `m` rank-one operators `wⱼ²·½(I + nⱼ·σ)` given as `(wⱼ, αⱼ, βⱼ)` triples,
/// made complete by the congruence `Eⱼ = S^{-1/2} Aⱼ S^{-1/2}` with
/// `S = Σ Aⱼ`. The result sums to `I` exactly (up to rounding) and stays rank
/// one. `None` when `S` is numerically singular.
pub(crate) fn decode_povm(y: &[f64]) -> Option<Vec<Effect>> {
    let m = y.len() / 3;
    let mut raw = Vec::with_capacity(m);
    let (mut s0, mut s) = (0.0, Vector3::zeros());
    for j in 0..m {
        let w = y[3 * j] * y[3 * j];
        let n = BlochVector::from_angles(y[3 * j + 1], y[3 * j + 2]);
        let a = Effect { e0: 0.5 * w, e: n.to_vector() * (0.5 * w) };
        s0 += a.e0;
        s += a.e;
        raw.push(a);
    }
    let s_norm = s.norm();
    let (hi, lo) = (s0 + s_norm, s0 - s_norm);
    if !(lo > 1e-12 * hi.max(1e-300)) {
        return None;
    }
    let (ih, il) = (hi.powf(-0.5), lo.powf(-0.5));
    let x0 = 0.5 * (ih + il);
    let x = if s_norm > 0.0 { s * (0.5 * (ih - il) / s_norm) } else { Vector3::zeros() };
    Some(raw.iter().map(|a| a.sandwich(x0, &x)).collect())
}

pub(crate) fn random_povm(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let mut y = Vec::with_capacity(3 * m);
    for _ in 0..m {
        let (a, b) = angles_of(&random_pure_state(rng));
        y.extend([rng.gen_range(0.5..1.5), a, b]);
    }
    y
}

/// Parameters reproducing rank-one effects `Eⱼ = (cⱼ, cⱼ·nⱼ)`: with
/// `wⱼ² = 2cⱼ` the congruence is the identity whenever `Σ Eⱼ = I`.
pub(crate) fn encode_povm(effects: &[Effect]) -> Vec<f64> {
    let mut y = Vec::with_capacity(3 * effects.len());
    for e in effects {
        let n = BlochVector::from_vector(e.e);
        let (a, b) = angles_of(&n);
        y.extend([(2.0 * e.e0).max(0.0).sqrt(), a, b]);
    }
    y
}

/// Drops signals with probability below `prob_tol` and merges signals closer
/// than `merge_tol`, keeping the more likely state of each merged group.
pub(crate) fn compact_ensemble(
    probs: &[f64],
    states: &[BlochVector],
    prob_tol: f64,
    merge_tol: f64,
) -> (Vec<f64>, Vec<BlochVector>) {
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[b].partial_cmp(&probs[a]).unwrap().then(a.cmp(&b)));
    let mut kept_p: Vec<f64> = Vec::new();
    let mut kept_s: Vec<BlochVector> = Vec::new();
    for i in order {
        if probs[i] < prob_tol {
            continue;
        }
        match kept_s.iter().position(|s| s.distance(&states[i]) < merge_tol) {
            Some(j) => kept_p[j] += probs[i],
            None => {
                kept_p.push(probs[i]);
                kept_s.push(states[i]);
            }
        }
    }
    let total: f64 = kept_p.iter().sum();
    kept_p.iter_mut().for_each(|p| *p /= total);
    (kept_p, kept_s)
}

/// A locally optimal ensemble together with any extra parameters (the POVM
/// block for the accessible information) and its objective value.
pub(crate) struct Support {
    pub probs: Vec<f64>,
    pub states: Vec<BlochVector>,
    pub tail: Vec<f64>,
    pub value: f64,
}

/// Removes signals one at a time while a re-polished smaller ensemble stays
/// within `tol` of the incumbent. Optimal ensembles of symmetric channels
/// come in continuous families, and local search tends to return a
/// representative with more signals than needed.
///
/// `objective` is minimized over `encode_ensemble(..) ++ tail` and returns the
/// negated value.
pub(crate) fn reduce_support<F: Fn(&[f64]) -> f64>(
    mut best: Support,
    objective: F,
    nm: &NelderMead,
    tol: f64,
) -> Support {
    'outer: while best.states.len() > 1 {
        let mut order: Vec<usize> = (0..best.probs.len()).collect();
        order.sort_by(|&a, &b| best.probs[a].partial_cmp(&best.probs[b]).unwrap().then(a.cmp(&b)));
        for drop in order {
            let mut probs = best.probs.clone();
            let mut states = best.states.clone();
            probs.remove(drop);
            states.remove(drop);
            let total: f64 = probs.iter().sum();
            if total <= 0.0 {
                continue;
            }
            probs.iter_mut().for_each(|p| *p /= total);
            let split = 3 * probs.len();
            let start: Vec<f64> =
                encode_ensemble(&probs, &states).into_iter().chain(best.tail.iter().copied()).collect();
            let m = nm.polish(&objective, &start, 0.05, 1e-15, 4);
            if -m.f >= best.value - tol {
                let (p, s) = decode_ensemble(&m.x[..split]);
                let (p, s) = compact_ensemble(&p, &s, 1e-12, 1e-9);
                if p.len() < best.states.len() {
                    let tail = m.x[split..].to_vec();
                    best = Support { probs: p, states: s, tail, value: -m.f };
                    continue 'outer;
                }
            }
        }
        break;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::restart_rng;

    #[test]
    fn decoded_povm_is_complete_and_rank_one() {
        let mut rng = restart_rng(4, 0);
        for m in 2..=4 {
            for _ in 0..50 {
                let effects = decode_povm(&random_povm(&mut rng, m)).unwrap();
                let (s0, s) = effects.iter().fold((0.0, Vector3::zeros()), |(a, b), e| (a + e.e0, b + e.e));
                assert!((s0 - 1.0).abs() < 1e-12 && s.norm() < 1e-12);
                for e in &effects {
                    assert!((e.e0 - e.e.norm()).abs() < 1e-12);
                    assert!(e.validate().is_ok());
                }
            }
        }
    }

    #[test]
    fn povm_encoding_round_trips() {
        let mut rng = restart_rng(9, 0);
        let effects = decode_povm(&random_povm(&mut rng, 3)).unwrap();
        let again = decode_povm(&encode_povm(&effects)).unwrap();
        for (a, b) in effects.iter().zip(&again) {
            assert!((a.e0 - b.e0).abs() < 1e-12 && (a.e - b.e).norm() < 1e-12);
        }
    }

    #[test]
    fn collinear_povm_is_singular() {
        assert!(decode_povm(&[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]).is_none());
    }

    #[test]
    fn compaction_merges_and_drops() {
        let n = BlochVector::NORTH;
        let near = BlochVector::from_angles(0.0, 1e-5);
        let s = n.antipode();
        let (p, st) = compact_ensemble(&[0.3, 0.2, 0.5 - 1e-9, 1e-9], &[n, near, s, s], 1e-7, 1e-3);
        assert_eq!(st.len(), 2);
        assert!((p[0] - 0.5).abs() < 1e-8 && (p[1] - 0.5).abs() < 1e-8);
    }
}
