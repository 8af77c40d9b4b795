//! The acceptance report behind the `verify` subcommand.
//!
//! [`run`] evaluates seven criteria and returns a [`VerifyReport`]. The JSON
//! form omits runtimes so that two runs with the same configuration produce
//! identical bytes; runtimes appear only in the human-readable table.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{
    depolarizing_capacity, holevo_capacity, holevo_chi, mutual_information, shannon_capacity, CapacityEstimate, Povm,
    SignalEnsemble,
};
use crate::classical::{distortion_rate, dmc_capacity, no_reversal_check, random_dmc, DiscreteChannel, CAPACITY_TOL};
use crate::optim::{random_pure_state, restart_rng, OptimizerConfig};
use crate::payout::{expected_payout, PayoutEstimate};
use crate::qubit::{h2_unchecked, BlochVector, Effect, QubitChannel, PSD_TOL};
use crate::sweep::{
    crossover_with, format_sig, reversal_with, run_sweep, ChannelSpec, PairEvaluator, Quantity, SweepSpec,
    CROSSOVER_TOL,
};
use crate::Result;

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn value(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            computed,
            expected: Some(expected),
            tolerance: Some(tolerance),
            pass: (computed - expected).abs() <= tolerance,
        }
    }

    /// A pass/fail condition with a diagnostic number.
    pub fn predicate(name: impl Into<String>, computed: f64, pass: bool) -> Self {
        Check { name: name.into(), computed, expected: None, tolerance: None, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: usize,
    pub title: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub runtime: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: OptimizerConfig,
    pub criteria: Vec<CriterionReport>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<4} {:<46} {:>14} {:>14} {:>9}  result", "id", "check", "computed", "expected", "tol");
        for c in &self.criteria {
            let _ = writeln!(out, "[{}] {} ({:.2?})", c.id, c.title, c.runtime);
            for k in &c.checks {
                let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format_sig(v, 9));
                let tol = k.tolerance.map_or(format!("{:>9}", "-"), |t| format!("{t:>9.0e}"));
                let _ = writeln!(
                    out,
                    "     {:<46} {:>14} {:>14} {}  {}",
                    k.name,
                    format_sig(k.computed, 9),
                    opt(k.expected),
                    tol,
                    if k.pass { "PASS" } else { "FAIL" }
                );
            }
        }
        let _ = writeln!(out, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// Payouts checked by criterion 1, with their exact values.
pub fn payout_targets() -> Vec<(ChannelSpec, f64)> {
    let mut v: Vec<(ChannelSpec, f64)> = [0.2, 0.358169, 0.4, 0.42265]
        .iter()
        .map(|&p| (ChannelSpec::Depolarizing { p: Some(p) }, (2.0 - p) / 3.0))
        .collect();
    v.push((ChannelSpec::Splaying, (3.0 + 3f64.sqrt()) / 9.0));
    v.push((ChannelSpec::KNR_DEFAULT, 8.0 / 15.0));
    v
}

struct Timer(Instant);

impl Timer {
    fn finish(self, id: usize, title: &str, checks: Vec<Check>) -> CriterionReport {
        CriterionReport {
            id,
            title: title.into(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            runtime: self.0.elapsed(),
        }
    }
}

fn timer() -> Timer {
    Timer(Instant::now())
}

/// Runs all criteria with `config` (restarts, seed, tolerances).
pub fn run(config: &OptimizerConfig) -> Result<VerifyReport> {
    config.validate()?;
    let mut criteria = Vec::new();

    let t = timer();
    let mut payouts: Vec<PayoutEstimate> = Vec::new();
    let mut checks = Vec::new();
    for (spec, exact) in payout_targets() {
        let est = expected_payout(&spec.build_fixed()?, 3, config)?;
        checks.push(Check::value(format!("payout {}", spec.label()), est.value, exact, 1e-6));
        payouts.push(est);
    }
    criteria.push(t.finish(1, "three-box payouts", checks));

    let t = timer();
    let mut checks = Vec::new();
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let est = shannon_capacity(&QubitChannel::depolarizing(p)?, config)?;
        checks.push(Check::value(format!("shannon depolarizing(p={p})"), est.value, depolarizing_capacity(p)?, 1e-5));
    }
    criteria.push(t.finish(2, "depolarizing closed form", checks));

    let t = timer();
    let splaying = QubitChannel::splaying();
    let knr = QubitChannel::knr(0.5, 0.6)?;
    let shan_s = shannon_capacity(&splaying, config)?;
    let hol_s = holevo_capacity(&splaying, config)?;
    let shan_k = shannon_capacity(&knr, config)?;
    let hol_k = holevo_capacity(&knr, config)?;
    let min_overlap = min_pair_overlap(&hol_s.witness_ensemble);
    let checks = vec![
        Check::value("shannon splaying", shan_s.value, 0.255992, 1e-4),
        Check::value("holevo splaying", hol_s.value, 0.268932, 1e-4),
        Check::predicate(
            "holevo splaying witness not antipodal",
            min_overlap,
            !hol_s.witness_ensemble.is_antipodal_pair(1e-3),
        ),
        Check::value("shannon knr(0.5,0.6)", shan_k.value, 0.321928, 1e-4),
        Check::value("holevo knr(0.5,0.6)", hol_k.value, 0.32499, 1e-4),
        Check::value("holevo knr(0.5,0.6) witness size", hol_k.witness_ensemble.len() as f64, 3.0, 0.0),
    ];
    let capacities = [shan_s, hol_s, shan_k, hol_k];
    criteria.push(t.finish(3, "reference capacities", checks));

    let t = timer();
    criteria.push(t.finish(4, "crossovers", crossover_checks(config)?));

    let t = timer();
    criteria.push(t.finish(5, "properties", property_checks(config, &payouts, &capacities)?));

    let t = timer();
    criteria.push(t.finish(6, "classical no-reversal", classical_checks(config)?));

    let t = timer();
    criteria.push(t.finish(7, "determinism", determinism_checks(config)?));

    let pass = criteria.iter().all(|c| c.pass);
    Ok(VerifyReport { config: *config, criteria, pass })
}

fn min_pair_overlap(ensemble: &SignalEnsemble) -> f64 {
    let s = ensemble.states();
    let mut m = f64::INFINITY;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            m = m.min(s[i].dot(&s[j]));
        }
    }
    m
}

fn crossover_checks(config: &OptimizerConfig) -> Result<Vec<Check>> {
    let d = ChannelSpec::Depolarizing { p: None };
    let s = ChannelSpec::Splaying;
    let k = ChannelSpec::KNR_DEFAULT;
    let holevo_s = PairEvaluator::new(Quantity::Holevo, [d, s], config)?;
    let holevo_k = PairEvaluator::new(Quantity::Holevo, [d, k], config)?;
    let shannon_k = PairEvaluator::new(Quantity::Shannon, [d, k], config)?;
    let payout_s = PairEvaluator::new(Quantity::Payout, [d, s], config)?;
    let payout_k = PairEvaluator::new(Quantity::Payout, [d, k], config)?;

    let mut checks = Vec::new();
    let cases: [(&PairEvaluator, &str, f64, f64); 5] = [
        (&holevo_s, "holevo depolarizing = splaying", 0.409235, 1e-4),
        (&payout_s, "payout depolarizing = splaying", 1.0 - 1.0 / 3f64.sqrt(), 1e-6),
        (&shannon_k, "shannon depolarizing = knr", 0.358169, 1e-4),
        (&holevo_k, "holevo depolarizing = knr", 0.355391, 1e-4),
        (&payout_k, "payout depolarizing = knr", 0.4, 1e-6),
    ];
    for (eval, name, expected, tol) in cases {
        let r = crossover_with(eval, 0.3, 0.5, CROSSOVER_TOL)?;
        checks.push(Check::value(format!("p* {name}"), r.p_star, expected, tol));
    }
    for (p, cap, pay, name) in [(0.415, &holevo_s, &payout_s, "holevo"), (0.38, &shannon_k, &payout_k, "shannon")] {
        let r = reversal_with(p, cap, pay)?;
        let fixed = cap.channels[1].label();
        let dc = r.capacity[0] - r.capacity[1];
        let dt = r.payout[0] - r.payout[1];
        checks.push(Check::predicate(format!("p={p} {name} depolarizing - {fixed}"), dc, dc < 0.0));
        checks.push(Check::predicate(format!("p={p} payout depolarizing - {fixed}"), dt, dt > 0.0));
    }
    Ok(checks)
}

/// Built-in channels and random members of their families.
fn random_channel(rng: &mut impl Rng) -> Result<QubitChannel> {
    Ok(match rng.gen_range(0..4) {
        0 => QubitChannel::depolarizing(rng.gen_range(0.0..=1.0))?,
        1 => QubitChannel::splaying(),
        2 => {
            let mu: f64 = rng.gen_range(0.0..=1.0);
            QubitChannel::knr(mu, rng.gen_range(mu..=mu.sqrt()))?
        }
        _ => QubitChannel::identity(),
    })
}

fn povm_defect(povm: &Povm) -> f64 {
    let (s0, s) = povm.completeness();
    (s0 - 1.0).abs().max(s.amax())
}

fn property_checks(
    config: &OptimizerConfig,
    payouts: &[PayoutEstimate],
    capacities: &[CapacityEstimate],
) -> Result<Vec<Check>> {
    let mut rng = restart_rng(config.rng_seed, 1 << 32);
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let channel = random_channel(&mut rng)?;
        let (k, m) = (rng.gen_range(1..=4), rng.gen_range(2..=4));
        let ensemble = SignalEnsemble::random(&mut rng, k)?;
        let povm = Povm::random(&mut rng, m)?;
        worst_gap = worst_gap.max(mutual_information(&channel, &ensemble, &povm) - holevo_chi(&channel, &ensemble));
    }

    let worst_step = payouts.iter().map(|p| p.worst_step).fold(f64::INFINITY, f64::min);

    let mut builtins = vec![QubitChannel::identity(), QubitChannel::splaying(), QubitChannel::knr(0.5, 0.6)?];
    for i in 0..=10 {
        builtins.push(QubitChannel::depolarizing(i as f64 / 10.0)?);
    }
    let min_choi = builtins.iter().map(|c| c.choi_eigenvalues()[0]).fold(f64::INFINITY, f64::min);
    let all_cptp = builtins.iter().all(|c| c.is_cptp(PSD_TOL));

    let defect = payouts
        .iter()
        .map(|p| povm_defect(p.witness.povm()))
        .chain(capacities.iter().filter_map(|c| c.witness_povm.as_ref()).map(povm_defect))
        .fold(0.0, f64::max);

    let mut extra = Vec::new();
    for i in 0..8 {
        let channel = random_channel(&mut rng)?;
        extra.push(expected_payout(&channel, 3, &config.with_restarts(8).with_seed(config.rng_seed + i))?.value);
    }
    let values: Vec<f64> = payouts.iter().map(|p| p.value).chain(extra).collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut adjoint_err: f64 = 0.0;
    for _ in 0..1000 {
        let channel = random_channel(&mut rng)?;
        let r = BlochVector::from_vector(random_pure_state(&mut rng).to_vector() * rng.gen_range(0.0..=1.0));
        let e = Effect::projector(&random_pure_state(&mut rng)) * rng.gen_range(0.0..=1.0);
        let lhs = e.expectation(&channel.apply(&r));
        let rhs = channel.adjoint_apply(&e).expectation(&r);
        adjoint_err = adjoint_err.max((lhs - rhs).abs());
    }

    Ok(vec![
        Check::predicate("max I - chi over 1000 random triples", worst_gap, worst_gap <= 1e-12),
        Check::predicate("worst see-saw half-step", worst_step, worst_step >= -1e-12),
        Check::predicate("min Choi eigenvalue of built-ins", min_choi, all_cptp),
        Check::predicate("max POVM completeness defect", defect, defect <= PSD_TOL),
        Check::predicate("min payout", lo, lo >= 1.0 / 3.0 - 1e-12),
        Check::predicate("max payout", hi, hi <= 2.0 / 3.0 + 1e-12),
        Check::predicate("max adjoint trace error", adjoint_err, adjoint_err <= 1e-12),
    ])
}

fn classical_checks(config: &OptimizerConfig) -> Result<Vec<Check>> {
    let mut rng = restart_rng(config.rng_seed, 2 << 32);
    let mut reversals = 0;
    for _ in 0..1000 {
        let a = random_dmc(&mut rng, 2..=4, 2..=4);
        let b = random_dmc(&mut rng, 2..=4, 2..=4);
        reversals += usize::from(no_reversal_check(&a, &b)?.reversal);
    }

    let rates: Vec<f64> = (0..50).map(|i| i as f64 * 3f64.log2() / 49.0).collect();
    let ds = rates.iter().map(|r| distortion_rate(3, *r)).collect::<Result<Vec<_>>>()?;
    let worst_rise = ds.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);

    let mut checks = vec![
        Check::value("reversals over 1000 random pairs", reversals as f64, 0.0, 0.0),
        Check::predicate("largest D(R) increase on 50-point grid", worst_rise, worst_rise <= 0.0),
    ];
    for flip in [0.1, 0.2, 0.3] {
        let c = dmc_capacity(&DiscreteChannel::bsc(flip)?, CAPACITY_TOL);
        checks.push(Check::value(format!("bsc({flip}) capacity"), c, 1.0 - h2_unchecked(flip), 1e-6));
    }
    Ok(checks)
}

fn determinism_checks(config: &OptimizerConfig) -> Result<Vec<Check>> {
    let spec = SweepSpec {
        channels: [ChannelSpec::Depolarizing { p: None }, ChannelSpec::Splaying],
        quantity: Quantity::Payout,
        p_min: 0.3,
        p_max: 0.5,
        steps: 5,
        optimizer: config.with_restarts(8),
    };
    let a = run_sweep(&spec)?.to_csv();
    let b = run_sweep(&spec)?.to_csv();
    let payout = |c: &OptimizerConfig| -> Result<String> {
        Ok(serde_json::to_string(&expected_payout(&QubitChannel::splaying(), 3, c)?).expect("serializes"))
    };
    let small = config.with_restarts(8);
    let same_payout = payout(&small)? == payout(&small)?;
    Ok(vec![
        Check::predicate("repeated sweep CSV identical", a.len() as f64, a == b),
        Check::predicate("repeated payout estimate identical", 1.0, same_payout),
    ])
}
