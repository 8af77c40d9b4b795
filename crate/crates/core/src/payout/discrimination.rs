//! Minimum-error discrimination of qubit states.
//!
//! With `cᵢ = pᵢ rᵢ`, the dual of `max Σᵢ pᵢ Tr[Eᵢ ρᵢ]` is
//! `min_z maxᵢ (pᵢ + |z − cᵢ|)`: the radius of the smallest ball enclosing the
//! balls `B(cᵢ, pᵢ)`. The optimum is attained by a support of at most four
//! balls whose centers are affinely independent, so small instances are
//! solved exactly by enumerating supports. Given the center `z` and radius
//! `T`, the measurement `Eᵢ = μᵢ (I + uᵢ·σ)`, `uᵢ = (cᵢ − z)/|cᵢ − z|`, attains
//! `T`, where `μ` are the barycentric weights balancing the `uᵢ`.

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::capacity::Povm;
use crate::qubit::{BlochVector, Effect};
use crate::{Error, Result};

/// Bloch distance below which two outputs count as the same state.
pub const DISTINCT_TOL: f64 = 1e-9;
/// Duality gaps above this flag the solution as unconverged.
pub const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Discrimination {
    pub povm: Povm,
    /// `Σᵢ pᵢ Tr[Eᵢ ρᵢ]` of `povm`.
    pub success: f64,
    /// `Tr Y` for a dual-feasible `Y ⪰ pᵢρᵢ` built from `povm`.
    pub dual_bound: f64,
    pub duality_gap: f64,
    pub converged: bool,
}

/// Measurement maximizing `Σᵢ priorᵢ·Tr[Eᵢ ρᵢ]` for the states `outputs`.
///
/// Up to two distinct states use the Helstrom measurement; more use the
/// enclosing-ball solution. Identical states share one effect, assigned to
/// the most likely index of the group.
pub fn optimal_povm_for_encodings(outputs: &[BlochVector], priors: &[f64]) -> Result<Discrimination> {
    validate(outputs, priors)?;
    let groups = group_identical(outputs, priors);
    let effects = if groups.len() <= 2 {
        helstrom_effects(outputs, priors, &groups)
    } else {
        enclosing_ball_effects(outputs, priors)
    };
    certify(outputs, priors, effects)
}

/// `½(Σq + ‖q_a ρ_a − q_b ρ_b‖₁)`: Helstrom success for two states with
/// (possibly subnormalized) weights.
pub fn helstrom_success(a: &BlochVector, b: &BlochVector, q_a: f64, q_b: f64) -> f64 {
    let (g0, g) = difference_operator(a, b, q_a, q_b);
    let n = g.norm();
    0.5 * (q_a + q_b + (g0 + n).abs() + (g0 - n).abs())
}

/// Always uses the enclosing-ball route, whatever the number of distinct
/// states. Exposed so the two routes can be compared.
pub fn enclosing_ball_povm(outputs: &[BlochVector], priors: &[f64]) -> Result<Discrimination> {
    validate(outputs, priors)?;
    certify(outputs, priors, enclosing_ball_effects(outputs, priors))
}

fn validate(outputs: &[BlochVector], priors: &[f64]) -> Result<()> {
    if outputs.is_empty() || outputs.len() != priors.len() {
        return Err(Error::Validation(format!("{} outputs but {} priors", outputs.len(), priors.len())));
    }
    if priors.iter().any(|p| !(*p >= 0.0)) || (priors.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Validation(format!("priors {priors:?} are not on the simplex")));
    }
    if let Some(r) = outputs.iter().find(|r| !r.is_valid()) {
        return Err(Error::Validation(format!("output {r} is outside the Bloch ball")));
    }
    Ok(())
}

/// Groups of indices with identical outputs; each group lists its most likely
/// member first.
fn group_identical(outputs: &[BlochVector], priors: &[f64]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, r) in outputs.iter().enumerate() {
        match groups.iter_mut().find(|g| outputs[g[0]].distance(r) <= DISTINCT_TOL) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    for g in &mut groups {
        let lead = (0..g.len()).fold(0, |best, j| if priors[g[j]] > priors[g[best]] { j } else { best });
        g.swap(0, lead);
    }
    groups
}

/// `q_a ρ_a − q_b ρ_b` as `g0·I + g·σ`.
fn difference_operator(a: &BlochVector, b: &BlochVector, q_a: f64, q_b: f64) -> (f64, Vector3<f64>) {
    (0.5 * (q_a - q_b), (a.to_vector() * q_a - b.to_vector() * q_b) * 0.5)
}

fn helstrom_effects(outputs: &[BlochVector], priors: &[f64], groups: &[Vec<usize>]) -> Vec<Effect> {
    let mut effects = vec![Effect::ZERO; outputs.len()];
    if groups.len() == 1 {
        effects[groups[0][0]] = Effect::IDENTITY;
        return effects;
    }
    let (ia, ib) = (groups[0][0], groups[1][0]);
    let (g0, g) = difference_operator(&outputs[ia], &outputs[ib], priors[ia], priors[ib]);
    let n = g.norm();
    if g0 - n >= 0.0 {
        effects[ia] = Effect::IDENTITY;
    } else if g0 + n <= 0.0 {
        effects[ib] = Effect::IDENTITY;
    } else {
        let axis = g / n;
        effects[ia] = Effect { e0: 0.5, e: axis * 0.5 };
        effects[ib] = Effect { e0: 0.5, e: -axis * 0.5 };
    }
    effects
}

struct Candidate {
    support: Vec<usize>,
    center: Vector3<f64>,
    radius: f64,
    weights: Vec<f64>,
}

fn enclosing_ball_effects(outputs: &[BlochVector], priors: &[f64]) -> Vec<Effect> {
    let centers: Vec<Vector3<f64>> = outputs.iter().zip(priors).map(|(r, p)| r.to_vector() * *p).collect();
    let n = centers.len();
    let dual = |z: &Vector3<f64>| {
        centers.iter().zip(priors).map(|(c, p)| p + (z - c).norm()).fold(f64::NEG_INFINITY, f64::max)
    };

    let mut best: Option<(f64, Candidate)> = None;
    let mut subset = Vec::with_capacity(4);
    for mask in 1u64..(1u64 << n.min(63)) {
        if mask.count_ones() > 4 {
            continue;
        }
        subset.clear();
        subset.extend((0..n).filter(|i| mask & (1 << i) != 0));
        for cand in tangent_balls(&subset, &centers, priors) {
            let value = dual(&cand.center);
            // Feasible candidates have value == radius; keep the smallest
            // dual value, preferring earlier (smaller) supports on ties.
            let feasible = value <= cand.radius + 1e-12;
            if !feasible {
                continue;
            }
            if best.as_ref().is_none_or(|(v, _)| value < *v - 1e-15) {
                best = Some((value, cand));
            }
        }
    }
    let (_, cand) = best.expect("the largest single ball always encloses a feasible set or a support exists");

    let mut effects = vec![Effect::ZERO; n];
    for (&i, &mu) in cand.support.iter().zip(&cand.weights) {
        let d = centers[i] - cand.center;
        let dist = d.norm();
        effects[i] =
            if dist > 1e-14 { Effect { e0: mu, e: d * (mu / dist) } } else { Effect { e0: mu, e: Vector3::zeros() } };
    }
    effects
}

/// Balls of radius `T` internally tangent to `B(cᵢ, pᵢ)` for all `i` in
/// `support`, centered in the affine hull of the support centers and inside
/// their convex hull.
fn tangent_balls(support: &[usize], centers: &[Vector3<f64>], priors: &[f64]) -> Vec<Candidate> {
    let c0 = centers[support[0]];
    let p0 = priors[support[0]];
    if support.len() == 1 {
        return vec![Candidate { support: support.to_vec(), center: c0, radius: p0, weights: vec![1.0] }];
    }
    let s = support.len() - 1;
    let dirs: Vec<Vector3<f64>> = support[1..].iter().map(|&i| centers[i] - c0).collect();
    let gram = DMatrix::from_fn(s, s, |a, b| dirs[a].dot(&dirs[b]));
    let a = DVector::from_fn(s, |j, _| {
        let pj = priors[support[j + 1]];
        0.5 * (dirs[j].norm_squared() - pj * pj + p0 * p0)
    });
    let b = DVector::from_fn(s, |j, _| priors[support[j + 1]] - p0);
    let scale = gram.diagonal().max().max(1e-300);
    let Some(inv) = gram.clone().try_inverse() else {
        return Vec::new();
    };
    // Reject nearly dependent supports; a better-conditioned one covers them.
    if gram.determinant().abs() < 1e-18 * scale.powi(s as i32) {
        return Vec::new();
    }
    let la = &inv * &a;
    let lb = &inv * &b;
    let va: Vector3<f64> = dirs.iter().zip(la.iter()).map(|(d, l)| d * *l).sum();
    let vb: Vector3<f64> = dirs.iter().zip(lb.iter()).map(|(d, l)| d * *l).sum();

    // |va + T·vb|² = (T − p0)²
    let qa = vb.norm_squared() - 1.0;
    let qb = 2.0 * (va.dot(&vb) + p0);
    let qc = va.norm_squared() - p0 * p0;
    let roots: Vec<f64> = if qa.abs() < 1e-14 {
        if qb.abs() < 1e-300 {
            Vec::new()
        } else {
            vec![-qc / qb]
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            Vec::new()
        } else {
            let sq = disc.sqrt();
            vec![(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)]
        }
    };

    let p_max = support.iter().map(|&i| priors[i]).fold(0.0, f64::max);
    let mut out = Vec::new();
    for t in roots {
        if !(t >= p_max - 1e-14) {
            continue;
        }
        let lambda: Vec<f64> = la.iter().zip(lb.iter()).map(|(x, y)| x + t * y).collect();
        let mut bary = Vec::with_capacity(s + 1);
        bary.push(1.0 - lambda.iter().sum::<f64>());
        bary.extend(&lambda);
        if bary.iter().any(|v| *v < -1e-10) {
            continue;
        }
        let center = c0 + dirs.iter().zip(&lambda).map(|(d, l)| d * *l).sum::<Vector3<f64>>();
        let mut weights: Vec<f64> =
            support.iter().zip(&bary).map(|(&i, nu)| nu.max(0.0) * (t - priors[i]).max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            continue;
        }
        weights.iter_mut().for_each(|w| *w /= total);
        out.push(Candidate { support: support.to_vec(), center, radius: t, weights });
    }
    out
}

/// Builds the POVM, evaluates the primal value, and bounds it from above
/// with `Y = Σᵢ pᵢ (ρᵢ∘Eᵢ)` (Jordan product) shifted by the smallest multiple
/// of `I` that makes `Y − pᵢρᵢ ⪰ 0` for every `i`.
fn certify(outputs: &[BlochVector], priors: &[f64], effects: Vec<Effect>) -> Result<Discrimination> {
    let success: f64 = effects.iter().zip(outputs).zip(priors).map(|((e, r), p)| p * e.expectation(r)).sum();
    let (mut y0, mut y) = (0.0, Vector3::zeros());
    for ((e, r), p) in effects.iter().zip(outputs).zip(priors) {
        // ρ = ½(I + r·σ); ρ∘E = ½[(e0 + r·e) I + (e + e0 r)·σ]
        let rv = r.to_vector();
        y0 += p * 0.5 * (e.e0 + rv.dot(&e.e));
        y += (e.e + rv * e.e0) * (0.5 * p);
    }
    let mut shift: f64 = 0.0;
    for (r, p) in outputs.iter().zip(priors) {
        let d0 = y0 - 0.5 * p;
        let d = y - r.to_vector() * (0.5 * p);
        shift = shift.max(d.norm() - d0);
    }
    let dual_bound = 2.0 * (y0 + shift);
    let duality_gap = dual_bound - success;
    let povm = Povm::new(effects)?;
    Ok(Discrimination { povm, success, dual_bound, duality_gap, converged: duality_gap <= GAP_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::{random_pure_state, restart_rng};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    /// Best projective measurement on a 1° grid of axes, both labelings.
    fn grid_oracle(outputs: &[BlochVector; 2], priors: [f64; 2]) -> f64 {
        let mut best = priors[0].max(priors[1]);
        for ia in 0..=180 {
            for ib in 0..360 {
                let n = BlochVector::from_angles((ib as f64).to_radians(), (ia as f64).to_radians());
                let e = Effect::projector(&n);
                let v = priors[0] * e.expectation(&outputs[0]) + priors[1] * e.complement().expectation(&outputs[1]);
                best = best.max(v);
            }
        }
        best
    }

    #[test]
    fn antipodal_pure_states_are_perfectly_distinguishable() {
        let d = optimal_povm_for_encodings(&[BlochVector::NORTH, BlochVector::NORTH.antipode()], &[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(d.success, 1.0, epsilon = 1e-15);
        assert!(d.converged);
    }

    #[test]
    fn identical_states_give_max_prior() {
        let r = BlochVector::new(0.1, 0.2, 0.3).unwrap();
        let d = optimal_povm_for_encodings(&[r, r, r], &[0.2, 0.5, 0.3]).unwrap();
        assert_abs_diff_eq!(d.success, 0.5, epsilon = 1e-15);
        assert_eq!(d.povm.effects()[1], Effect::IDENTITY);
    }

    #[test]
    fn helstrom_against_grid() {
        let outputs = [BlochVector::new(0.0, 0.0, 0.6).unwrap(), BlochVector::new(0.0, 0.0, -0.6).unwrap()];
        let priors = [2.0 / 3.0, 1.0 / 3.0];
        let d = optimal_povm_for_encodings(&outputs, &priors).unwrap();
        // ‖(2/3)ρ_a − (1/3)ρ_b‖₁ = |1/6 + 0.3| + |1/6 − 0.3| = 0.6
        assert_abs_diff_eq!(d.success, 0.8, epsilon = 1e-12);
        let grid = grid_oracle(&outputs, priors);
        assert_abs_diff_eq!(d.success, grid, epsilon = 1e-9);
        assert!(d.converged);
    }

    #[test]
    fn helstrom_against_grid_oblique() {
        let outputs = [BlochVector::new(0.3, -0.2, 0.5).unwrap(), BlochVector::new(-0.4, 0.1, 0.2).unwrap()];
        let priors = [0.45, 0.55];
        let d = optimal_povm_for_encodings(&outputs, &priors).unwrap();
        let grid = grid_oracle(&outputs, priors);
        assert!(d.success >= grid - 1e-12);
        assert!(d.success - grid < 1e-3);
        assert_abs_diff_eq!(
            d.success,
            helstrom_success(&outputs[0], &outputs[1], priors[0], priors[1]),
            epsilon = 1e-14
        );
    }

    #[test]
    fn routes_agree_on_two_states() {
        let mut rng = restart_rng(21, 0);
        for _ in 0..200 {
            let a = random_pure_state(&mut rng);
            let b = random_pure_state(&mut rng);
            let (sa, sb): (f64, f64) = (rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0));
            let outputs = [BlochVector::from_vector(a.to_vector() * sa), BlochVector::from_vector(b.to_vector() * sb)];
            let pa: f64 = rng.gen_range(0.05..0.95);
            let priors = [pa, 1.0 - pa];
            let h = optimal_povm_for_encodings(&outputs, &priors).unwrap();
            let ball = enclosing_ball_povm(&outputs, &priors).unwrap();
            assert_abs_diff_eq!(h.success, ball.success, epsilon = 1e-10);
            assert!(ball.converged, "gap {}", ball.duality_gap);
        }
    }

    #[test]
    fn equal_priors_reduce_to_enclosing_ball_of_points() {
        // Acute triangle in a plane: circumradius.
        let pts = [
            BlochVector::new(0.5, 0.0, 0.0).unwrap(),
            BlochVector::new(-0.25, 0.4, 0.0).unwrap(),
            BlochVector::new(-0.25, -0.4, 0.0).unwrap(),
        ];
        let d = optimal_povm_for_encodings(&pts, &[1.0 / 3.0; 3]).unwrap();
        // Circumcenter at (x, 0, 0): (0.5 − x)² = (0.25 + x)² + 0.16
        let x = (0.25 - 0.0625 - 0.16) / 1.5;
        let radius = 0.5 - x;
        assert_abs_diff_eq!(d.success, (1.0 + radius) / 3.0, epsilon = 1e-12);
        assert!(d.converged);
    }

    #[test]
    fn random_instances_close_the_duality_gap() {
        let mut rng = restart_rng(8, 0);
        for n in 3..=6 {
            for _ in 0..100 {
                let outputs: Vec<BlochVector> = (0..n)
                    .map(|_| {
                        BlochVector::from_vector(random_pure_state(&mut rng).to_vector() * rng.gen_range(0.0..1.0))
                    })
                    .collect();
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let priors: Vec<f64> = raw.iter().map(|p| p / total).collect();
                let d = optimal_povm_for_encodings(&outputs, &priors).unwrap();
                assert!(d.duality_gap.abs() < 1e-10, "n = {n}: gap {}", d.duality_gap);
            }
        }
    }

    #[test]
    fn rejects_bad_priors() {
        let r = [BlochVector::NORTH, BlochVector::ORIGIN];
        assert!(optimal_povm_for_encodings(&r, &[0.7, 0.7]).is_err());
        assert!(optimal_povm_for_encodings(&r, &[1.0]).is_err());
        assert!(optimal_povm_for_encodings(&r, &[1.2, -0.2]).is_err());
    }
}
