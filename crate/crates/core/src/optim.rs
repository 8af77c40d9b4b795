//! Derivative-free local search and small helpers shared by the optimizers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::qubit::BlochVector;
use crate::{Error, Result};

/// Settings shared by the multistart optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Independent random initializations.
    pub restarts: usize,
    /// Cap on outer iterations (alternation rounds / see-saw steps) per restart.
    pub max_iterations: usize,
    /// Stop once the objective gain of one outer iteration falls below this.
    pub tolerance: f64,
    pub rng_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { restarts: 64, max_iterations: 2000, tolerance: 1e-8, rng_seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::Parameter("restarts and max_iterations must be positive".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Parameter(format!("tolerance {} must be positive", self.tolerance)));
        }
        Ok(())
    }

    pub fn with_restarts(self, restarts: usize) -> Self {
        OptimizerConfig { restarts, ..self }
    }

    pub fn with_seed(self, rng_seed: u64) -> Self {
        OptimizerConfig { rng_seed, ..self }
    }
}

/// Generator for one restart: the seed picks the key, the restart index the
/// ChaCha stream, so restarts are independent of scheduling order.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Area-uniform point on the unit sphere.
pub fn random_pure_state(rng: &mut impl Rng) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    BlochVector { x: s * phi.cos(), y: s * phi.sin(), z }
}

/// Spherical angles `(α, β)` of a nonzero vector, inverse of
/// [`BlochVector::from_angles`].
pub fn angles_of(r: &BlochVector) -> (f64, f64) {
    let n = r.norm().max(1e-300);
    (r.y.atan2(r.x), (r.z / n).clamp(-1.0, 1.0).acos())
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (i as f64 + 1.0);
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Spread of function values across the simplex.
    pub f_tol: f64,
    /// Largest vertex distance from the best vertex.
    pub x_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead { max_evals: 20_000, f_tol: 1e-14, x_tol: 1e-10 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    /// Minimizes `f` from `x0` with an axis-aligned initial simplex of size
    /// `step`. Uses dimension-adapted coefficients (Gao–Han), which behave
    /// better than the textbook ones past a handful of dimensions.
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64], step: f64) -> Minimum {
        let n = x0.len();
        let nf = n as f64;
        let (alpha, gamma) = (1.0, 1.0 + 2.0 / nf);
        let rho = 0.75 - 1.0 / (2.0 * nf);
        let sigma = 1.0 - 1.0 / nf;

        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut evals = 0;
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let f0 = eval(x0, &mut evals);
        simplex.push((x0.to_vec(), f0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }

        let mut converged = false;
        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let f_best = simplex[0].1;
            let f_worst = simplex[n].1;
            let spread = simplex[1..].iter().map(|(x, _)| dist_inf(x, &simplex[0].0)).fold(0.0, f64::max);
            if (f_worst - f_best).abs() <= self.f_tol && spread <= self.x_tol {
                converged = true;
                break;
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let worst = simplex[n].0.clone();
            let towards = |coef: f64, out: &mut Vec<f64>| {
                for ((o, c), w) in out.iter_mut().zip(&centroid).zip(&worst) {
                    *o = c + coef * (c - w);
                }
            };

            towards(alpha, &mut trial);
            let f_r = eval(&trial, &mut evals);
            if f_r < f_best {
                let reflected = trial.clone();
                towards(alpha * gamma, &mut trial);
                let f_e = eval(&trial, &mut evals);
                simplex[n] = if f_e < f_r { (trial.clone(), f_e) } else { (reflected, f_r) };
                continue;
            }
            if f_r < simplex[n - 1].1 {
                simplex[n] = (trial.clone(), f_r);
                continue;
            }
            let outside = f_r < f_worst;
            towards(if outside { alpha * rho } else { -rho }, &mut trial);
            let f_c = eval(&trial, &mut evals);
            if f_c < f_r.min(f_worst) {
                simplex[n] = (trial.clone(), f_c);
                continue;
            }
            let best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                for (xi, bi) in vertex.0.iter_mut().zip(&best) {
                    *xi = bi + sigma * (*xi - bi);
                }
                vertex.1 = eval(&vertex.0, &mut evals);
            }
        }
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let (x, f) = simplex.swap_remove(0);
        Minimum { x, f, evals, converged }
    }

    /// Repeated [`NelderMead::minimize`] from the incumbent with a shrinking
    /// fresh simplex until a round improves by less than `gain_tol`.
    pub fn polish<F: FnMut(&[f64]) -> f64>(
        &self,
        mut f: F,
        x0: &[f64],
        step: f64,
        gain_tol: f64,
        rounds: usize,
    ) -> Minimum {
        let mut best = self.minimize(&mut f, x0, step);
        let mut evals = best.evals;
        let mut step = step;
        for _ in 1..rounds {
            step = (step * 0.3).max(1e-6);
            let next = self.minimize(&mut f, &best.x, step);
            evals += next.evals;
            let gain = best.f - next.f;
            if next.f < best.f {
                best = next;
            }
            if gain < gain_tol {
                break;
            }
        }
        best.evals = evals;
        best
    }
}

fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
