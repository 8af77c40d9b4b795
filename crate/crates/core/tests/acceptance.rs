//! Acceptance criteria 1-7, checked against the JSON report of two separate
//! `verify` runs. Every expected value below is computed here, not taken from
//! the report.

use std::process::{Command, ExitCode};
use std::time::Instant;

use serde_json::Value;

fn h2(x: f64) -> f64 {
    let t = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    t(x) + t(1.0 - x)
}

struct Report(Value);

impl Report {
    fn check(&self, id: u64, name: &str) -> &Value {
        let criterion = self.0["criteria"]
            .as_array()
            .expect("criteria array")
            .iter()
            .find(|c| c["id"].as_u64() == Some(id))
            .unwrap_or_else(|| panic!("criterion {id} missing"));
        criterion["checks"]
            .as_array()
            .expect("checks array")
            .iter()
            .find(|c| c["name"] == name)
            .unwrap_or_else(|| panic!("criterion {id}: check '{name}' missing"))
    }

    fn computed(&self, id: u64, name: &str) -> f64 {
        self.check(id, name)["computed"].as_f64().expect("numeric computed value")
    }

    fn passed(&self, id: u64, name: &str) -> bool {
        self.check(id, name)["pass"].as_bool() == Some(true)
    }
}

/// Collects `(description, ok)` pairs for one criterion.
#[derive(Default)]
struct Outcome(Vec<(String, bool)>);

impl Outcome {
    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.0.push((format!("{what}: {got:.9} vs {want:.9} (tol {tol:.0e})"), ok));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.0.push((what.to_string(), ok));
    }

    fn ok(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }
}

fn verify_json() -> (String, bool, f64) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_channel-payout"))
        .args(["verify", "--json", "--seed", "0"])
        .env_remove("CHANNEL_PAYOUT_SEED")
        .output()
        .expect("run verify");
    (String::from_utf8(out.stdout).expect("utf-8 report"), out.status.code() == Some(0), t.elapsed().as_secs_f64())
}

fn criterion_1(r: &Report) -> Outcome {
    let mut o = Outcome::default();
    for p in [0.2, 0.358169, 0.4, 0.42265] {
        o.near(&format!("payout D_{p}"), r.computed(1, &format!("payout depolarizing(p={p})")), (2.0 - p) / 3.0, 1e-6);
    }
    o.near("payout S", r.computed(1, "payout splaying"), (3.0 + 3f64.sqrt()) / 9.0, 1e-6);
    o.near("payout K", r.computed(1, "payout knr(mu=0.5 s=0.6)"), 8.0 / 15.0, 1e-6);
    o
}

fn criterion_2(r: &Report) -> Outcome {
    let mut o = Outcome::default();
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let got = r.computed(2, &format!("shannon depolarizing(p={p})"));
        o.near(&format!("C_Shan(D_{p})"), got, 1.0 - h2(p / 2.0), 1e-5);
    }
    o
}

fn criterion_3(r: &Report) -> Outcome {
    let mut o = Outcome::default();
    o.near("C_Shan(S)", r.computed(3, "shannon splaying"), 0.255992, 1e-4);
    o.near("C_Hol(S)", r.computed(3, "holevo splaying"), 0.268932, 1e-4);
    let overlap = r.computed(3, "holevo splaying witness not antipodal");
    o.holds(
        &format!("C_Hol(S) witness not antipodal (min overlap {overlap:.6})"),
        r.passed(3, "holevo splaying witness not antipodal") && overlap > -1.0 + 1e-3,
    );
    o.near("C_Shan(K)", r.computed(3, "shannon knr(0.5,0.6)"), 0.321928, 1e-4);
    o.near("C_Hol(K)", r.computed(3, "holevo knr(0.5,0.6)"), 0.32499, 1e-4);
    o.near("C_Hol(K) witness size", r.computed(3, "holevo knr(0.5,0.6) witness size"), 3.0, 0.0);
    o
}

fn criterion_4(r: &Report) -> Outcome {
    let mut o = Outcome::default();
    o.near("p* Holevo D/S", r.computed(4, "p* holevo depolarizing = splaying"), 0.409235, 1e-4);
    o.near("p* payout D/S", r.computed(4, "p* payout depolarizing = splaying"), 1.0 - 1.0 / 3f64.sqrt(), 1e-6);
    o.near("p* Shannon D/K", r.computed(4, "p* shannon depolarizing = knr"), 0.358169, 1e-4);
    o.near("p* Holevo D/K", r.computed(4, "p* holevo depolarizing = knr"), 0.355391, 1e-4);
    o.near("p* payout D/K", r.computed(4, "p* payout depolarizing = knr"), 0.4, 1e-6);
    let dc = r.computed(4, "p=0.415 holevo depolarizing - splaying");
    let dt = r.computed(4, "p=0.415 payout depolarizing - splaying");
    o.holds(&format!("p=0.415: dC_Hol = {dc:.6} < 0, dtheta = {dt:.6} > 0"), dc < 0.0 && dt > 0.0);
    // The payout difference is linear in p on the depolarizing side.
    o.near("p=0.415 payout difference", dt, (2.0 - 0.415) / 3.0 - (3.0 + 3f64.sqrt()) / 9.0, 1e-6);
    let dc = r.computed(4, "p=0.38 shannon depolarizing - knr(mu=0.5 s=0.6)");
    let dt = r.computed(4, "p=0.38 payout depolarizing - knr(mu=0.5 s=0.6)");
    o.holds(&format!("p=0.38: dC_Shan = {dc:.6} < 0, dtheta = {dt:.6} > 0"), dc < 0.0 && dt > 0.0);
    o.near("p=0.38 payout difference", dt, (2.0 - 0.38) / 3.0 - 8.0 / 15.0, 1e-6);
    o
}

fn criterion_5(r: &Report) -> Outcome {
    let mut o = Outcome::default();
    let gap = r.computed(5, "max I - chi over 1000 random triples");
    o.holds(&format!("I <= chi on 1000 triples (max I - chi = {gap:.2e})"), gap <= 1e-12);
    let step = r.computed(5, "worst see-saw half-step");
    o.holds(&format!("see-saw monotone (worst half-step {step:.2e})"), step >= -1e-12);
    let choi = r.computed(5, "min Choi eigenvalue of built-ins");
    o.holds(
        &format!("built-ins CPTP (min Choi eigenvalue {choi:.2e})"),
        choi >= -1e-10 && r.passed(5, "min Choi eigenvalue of built-ins"),
    );
    let defect = r.computed(5, "max POVM completeness defect");
    o.holds(&format!("witness POVMs complete (defect {defect:.2e})"), defect <= 1e-10);
    let lo = r.computed(5, "min payout");
    let hi = r.computed(5, "max payout");
    o.holds(
        &format!("payouts in [1/3, 2/3] (range {lo:.6}..{hi:.6})"),
        lo >= 1.0 / 3.0 - 1e-12 && hi <= 2.0 / 3.0 + 1e-12,
    );
    let adj = r.computed(5, "max adjoint trace error");
    o.holds(&format!("adjoint trace identity (max error {adj:.2e})"), adj <= 1e-12);
    o
}

fn criterion_6(r: &Report) -> Outcome {
    let mut o = Outcome::default();
    o.near("reversals among 1000 pairs", r.computed(6, "reversals over 1000 random pairs"), 0.0, 0.0);
    let rise = r.computed(6, "largest D(R) increase on 50-point grid");
    o.holds(&format!("D(R) non-increasing (largest step {rise:.2e})"), rise <= 0.0);
    for flip in [0.1, 0.2, 0.3] {
        o.near(&format!("BA BSC({flip})"), r.computed(6, &format!("bsc({flip}) capacity")), 1.0 - h2(flip), 1e-6);
    }
    o
}

fn main() -> ExitCode {
    let (first, exit_ok, t1) = verify_json();
    let (second, _, t2) = verify_json();
    println!("verify runs: {t1:.1}s, {t2:.1}s");
    let report = Report(serde_json::from_str(&first).expect("verify emits JSON"));

    let mut all = true;
    let criteria: [(&str, Outcome); 6] = [
        ("1 three-box payouts", criterion_1(&report)),
        ("2 depolarizing closed form", criterion_2(&report)),
        ("3 reference capacities and witnesses", criterion_3(&report)),
        ("4 crossovers and reversal predicates", criterion_4(&report)),
        ("5 property suites", criterion_5(&report)),
        ("6 classical no-reversal", criterion_6(&report)),
    ];
    for (title, outcome) in &criteria {
        let ok = outcome.ok();
        all &= ok;
        println!("{} criterion {title}", if ok { "PASS" } else { "FAIL" });
        for (line, fine) in &outcome.0 {
            if !fine {
                println!("       {line}");
            }
        }
    }
    let deterministic = first == second && !first.is_empty();
    all &= deterministic;
    println!(
        "{} criterion 7 determinism ({} bytes, identical: {deterministic})",
        if deterministic { "PASS" } else { "FAIL" },
        first.len()
    );

    let consistent = exit_ok == all;
    println!("{} verify exit status agrees with the checks above", if consistent { "PASS" } else { "FAIL" });
    if all && consistent {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
