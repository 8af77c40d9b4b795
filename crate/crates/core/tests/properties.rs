use nalgebra::{Complex, Matrix2};
use proptest::prelude::*;
use rand::Rng;

use channel_payout::capacity::{
    holevo_capacity, holevo_chi, mutual_information, shannon_capacity_with, Povm, SignalEnsemble,
};
use channel_payout::optim::{restart_rng, OptimizerConfig};
use channel_payout::payout::{expected_payout, strategy_payout, GameStrategy};
use channel_payout::qubit::{BlochVector, Effect, QubitChannel, PSD_TOL};

type C = Complex<f64>;

fn density(r: &BlochVector) -> Matrix2<C> {
    let h = |v: f64| C::new(0.5 * v, 0.0);
    Matrix2::new(h(1.0 + r.z), C::new(0.5 * r.x, -0.5 * r.y), C::new(0.5 * r.x, 0.5 * r.y), h(1.0 - r.z))
}

/// Trace norm of a Hermitian 2×2 matrix from its eigenvalues.
fn trace_norm(m: &Matrix2<C>) -> f64 {
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    (0.5 * tr + disc).abs() + (0.5 * tr - disc).abs()
}

/// 62 points: both poles and a 6 × 10 latitude-longitude grid.
fn lattice() -> Vec<BlochVector> {
    let mut pts = vec![BlochVector::NORTH, BlochVector::NORTH.antipode()];
    for i in 1..=6 {
        let beta = std::f64::consts::PI * i as f64 / 7.0;
        for j in 0..10 {
            pts.push(BlochVector::from_angles(std::f64::consts::TAU * j as f64 / 10.0, beta));
        }
    }
    pts
}

/// Best three-box payout over lattice pairs `(a, b)` with the third box
/// never guessed: `(1 + ½‖N(a) − N(b)‖₁)/3`.
fn lattice_pair_payout(ch: &QubitChannel) -> f64 {
    let pts = lattice();
    let mut best: f64 = 0.0;
    for a in &pts {
        for b in &pts {
            let d = density(&ch.apply(a)) - density(&ch.apply(b));
            best = best.max((1.0 + 0.5 * trace_norm(&d)) / 3.0);
        }
    }
    best
}

fn random_channel(rng: &mut impl Rng) -> QubitChannel {
    match rng.gen_range(0..3) {
        0 => QubitChannel::depolarizing(rng.gen_range(0.0..=1.0)).unwrap(),
        1 => QubitChannel::splaying(),
        _ => {
            let mu: f64 = rng.gen_range(0.0..=1.0);
            QubitChannel::knr(mu, rng.gen_range(mu..=mu.sqrt())).unwrap()
        }
    }
}

#[test]
fn lattice_oracle_brackets_payout() {
    assert_eq!(lattice().len(), 62);
    let config = OptimizerConfig::default().with_restarts(16);
    for ch in [
        QubitChannel::depolarizing(0.3).unwrap(),
        QubitChannel::splaying(),
        QubitChannel::knr(0.5, 0.6).unwrap(),
        QubitChannel::knr(0.2, 0.3).unwrap(),
    ] {
        let theta = expected_payout(&ch, 3, &config).unwrap().value;
        let brute = lattice_pair_payout(&ch);
        assert!(theta >= brute - 1e-9, "{ch}: {theta} < lattice {brute}");
        assert!(theta - brute < 0.02, "{ch}: {theta} far above lattice {brute}");
    }
}

#[test]
fn random_strategies_never_beat_the_optimum() {
    let mut rng = restart_rng(99, 0);
    let config = OptimizerConfig::default().with_restarts(16);
    for _ in 0..5 {
        let ch = random_channel(&mut rng);
        let theta = expected_payout(&ch, 3, &config).unwrap().value;
        for _ in 0..2000 {
            let enc = SignalEnsemble::random(&mut rng, 3).unwrap().states();
            let povm = Povm::random(&mut rng, 3).unwrap();
            let s = GameStrategy::new(enc, povm).unwrap();
            assert!(strategy_payout(&ch, &s) <= theta + 1e-9);
        }
    }
}

#[test]
fn more_restarts_never_hurt() {
    let ch = QubitChannel::knr(0.3, 0.4).unwrap();
    let base = OptimizerConfig::default().with_seed(5);
    let few = expected_payout(&ch, 3, &base.with_restarts(4)).unwrap();
    let many = expected_payout(&ch, 3, &base.with_restarts(12)).unwrap();
    assert!(many.value >= few.value);
    assert_eq!(&many.restart_values[..4], &few.restart_values[..]);
    let few = holevo_capacity(&ch, &base.with_restarts(4)).unwrap();
    let many = holevo_capacity(&ch, &base.with_restarts(12)).unwrap();
    assert!(many.value >= few.value - 1e-12);
}

#[test]
fn same_seed_same_estimate() {
    let ch = QubitChannel::splaying();
    let config = OptimizerConfig::default().with_restarts(8).with_seed(3);
    let a = serde_json::to_string(&expected_payout(&ch, 3, &config).unwrap()).unwrap();
    let b = serde_json::to_string(&expected_payout(&ch, 3, &config).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn depolarizing_holevo_capacity_decreases_with_noise() {
    let config = OptimizerConfig::default().with_restarts(8);
    let values: Vec<f64> = (0..=10)
        .map(|i| holevo_capacity(&QubitChannel::depolarizing(i as f64 / 10.0).unwrap(), &config).unwrap().value)
        .collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{values:?}");
    }
    assert!(values[10].abs() < 1e-9);
}

#[test]
fn shannon_witness_povms_are_complete() {
    let mut rng = restart_rng(7, 0);
    let config = OptimizerConfig::default().with_restarts(4);
    for _ in 0..3 {
        let ch = random_channel(&mut rng);
        let est = shannon_capacity_with(&ch, &config, 3, 3).unwrap();
        let povm = est.witness_povm.expect("shannon estimates carry a POVM");
        let (s0, s) = povm.completeness();
        assert!((s0 - 1.0).abs() <= PSD_TOL && s.amax() <= PSD_TOL);
        for e in povm.effects() {
            let (lo, hi) = e.eigenvalues();
            assert!(lo >= -PSD_TOL && hi <= 1.0 + PSD_TOL);
        }
        let replay = mutual_information(&ch, &est.witness_ensemble, &povm);
        assert!((replay - est.value).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn holevo_bound(seed in any::<u64>(), k in 1usize..=4, m in 2usize..=4) {
        let mut rng = restart_rng(seed, 0);
        let ch = random_channel(&mut rng);
        let ens = SignalEnsemble::random(&mut rng, k).unwrap();
        let povm = Povm::random(&mut rng, m).unwrap();
        prop_assert!(mutual_information(&ch, &ens, &povm) <= holevo_chi(&ch, &ens) + 1e-12);
    }

    #[test]
    fn adjoint_trace_identity(seed in any::<u64>(), len in 0.0f64..=1.0, weight in 0.0f64..=1.0) {
        let mut rng = restart_rng(seed, 1);
        let ch = random_channel(&mut rng);
        let dir = SignalEnsemble::random(&mut rng, 2).unwrap().states();
        let r = BlochVector::new(dir[0].x * len, dir[0].y * len, dir[0].z * len).unwrap();
        let e = Effect::projector(&dir[1]) * weight;
        let lhs = e.expectation(&ch.apply(&r));
        let rhs = ch.adjoint_apply(&e).expectation(&r);
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn knr_valid_region_is_cptp(mu in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let s = mu + t * (mu.sqrt() - mu);
        let ch = QubitChannel::knr(mu, s).unwrap();
        prop_assert!(ch.is_cptp(PSD_TOL));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn payout_within_bounds(seed in any::<u64>()) {
        let mut rng = restart_rng(seed, 2);
        let ch = random_channel(&mut rng);
        let est = expected_payout(&ch, 3, &OptimizerConfig::default().with_restarts(4).with_seed(seed)).unwrap();
        prop_assert!(est.value >= 1.0 / 3.0 - 1e-12 && est.value <= 2.0 / 3.0 + 1e-12);
        prop_assert!(est.worst_step >= -1e-12);
    }
}
