//! Sweeps over the depolarizing parameter and crossover localization.
//!
//! A sweep compares one quantity (Shannon capacity, Holevo capacity or
//! three-box payout) for a pair of channels on a grid of `p`. A channel given
//! as bare `depolarizing` follows the grid; every other channel is fixed, is
//! evaluated once with four times the restart budget, and is repeated on each
//! row. Both capacities of `D_p` come from the closed form `1 − h₂(p/2)`.

mod crossover;
mod format;

pub(crate) use crossover::{crossover_with, reversal_with};
pub use crossover::{find_crossover, reversal_at, CrossoverResult, ReversalCheck, CROSSOVER_TOL};
pub use format::format_sig;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{depolarizing_capacity, holevo_capacity, shannon_capacity};
use crate::optim::OptimizerConfig;
use crate::payout::expected_payout;
use crate::qubit::QubitChannel;
use crate::{Error, Result};

/// Boxes in the game used by sweeps.
pub const SWEEP_BOXES: usize = 3;

/// Restart multiplier for fixed channels.
pub const FIXED_RESTART_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Shannon,
    Holevo,
    Payout,
}

impl Quantity {
    pub fn is_capacity(self) -> bool {
        self != Quantity::Payout
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shannon" => Ok(Quantity::Shannon),
            "holevo" => Ok(Quantity::Holevo),
            "payout" => Ok(Quantity::Payout),
            other => Err(Error::Usage(format!("unknown quantity '{other}' (expected shannon, holevo or payout)"))),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Quantity::Shannon => "shannon",
            Quantity::Holevo => "holevo",
            Quantity::Payout => "payout",
        })
    }
}

/// A channel identifier: `depolarizing`, `depolarizing:p=0.4`, `splaying`,
/// `knr` or `knr:mu=0.5,s=0.6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelSpec {
    /// `p = None` follows the sweep parameter.
    Depolarizing {
        p: Option<f64>,
    },
    Splaying,
    Knr {
        mu: f64,
        s: f64,
    },
}

impl ChannelSpec {
    pub const KNR_DEFAULT: ChannelSpec = ChannelSpec::Knr { mu: 0.5, s: 0.6 };

    /// Whether the channel changes along a sweep.
    pub fn is_swept(&self) -> bool {
        matches!(self, ChannelSpec::Depolarizing { p: None })
    }

    /// The channel at sweep parameter `p`.
    pub fn build(&self, p: f64) -> Result<QubitChannel> {
        match *self {
            ChannelSpec::Depolarizing { p: fixed } => QubitChannel::depolarizing(fixed.unwrap_or(p)),
            ChannelSpec::Splaying => Ok(QubitChannel::splaying()),
            ChannelSpec::Knr { mu, s } => QubitChannel::knr(mu, s),
        }
    }

    /// The channel when no sweep parameter is available.
    pub fn build_fixed(&self) -> Result<QubitChannel> {
        if self.is_swept() {
            return Err(Error::Usage("depolarizing needs a parameter here, e.g. depolarizing:p=0.4".into()));
        }
        self.build(f64::NAN)
    }

    /// Column label, free of commas.
    pub fn label(&self) -> String {
        match *self {
            ChannelSpec::Depolarizing { p: None } => "depolarizing".into(),
            ChannelSpec::Depolarizing { p: Some(p) } => format!("depolarizing(p={p})"),
            ChannelSpec::Splaying => "splaying".into(),
            ChannelSpec::Knr { mu, s } => format!("knr(mu={mu} s={s})"),
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut params = Vec::new();
        for item in args.split(',').filter(|a| !a.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("malformed channel parameter '{item}' in '{s}'")))?;
            let v: f64 =
                v.trim().parse().map_err(|_| Error::Usage(format!("channel parameter {k} = '{v}' is not a number")))?;
            params.push((k.trim(), v));
        }
        let take = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let allow = |keys: &[&str]| match params.iter().find(|(k, _)| !keys.contains(k)) {
            Some((k, _)) => Err(Error::Usage(format!("unknown parameter '{k}' for channel {name}"))),
            None => Ok(()),
        };
        let spec = match name.trim() {
            "depolarizing" => {
                allow(&["p"])?;
                ChannelSpec::Depolarizing { p: take("p") }
            }
            "splaying" => {
                allow(&[])?;
                ChannelSpec::Splaying
            }
            "knr" => {
                allow(&["mu", "s"])?;
                let ChannelSpec::Knr { mu, s } = Self::KNR_DEFAULT else { unreachable!() };
                ChannelSpec::Knr { mu: take("mu").unwrap_or(mu), s: take("s").unwrap_or(s) }
            }
            other => {
                return Err(Error::Usage(format!("unknown channel '{other}' (expected depolarizing, splaying or knr)")))
            }
        };
        // Surface parameter errors at parse time.
        spec.build(0.0)?;
        Ok(spec)
    }
}

/// A value and whether the optimizer behind it reported convergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub converged: bool,
}

/// Evaluates `quantity` for `spec` at sweep parameter `p`.
pub fn evaluate(quantity: Quantity, spec: &ChannelSpec, p: f64, config: &OptimizerConfig) -> Result<Evaluation> {
    if let (ChannelSpec::Depolarizing { p: fixed }, true) = (spec, quantity.is_capacity()) {
        return Ok(Evaluation { value: depolarizing_capacity(fixed.unwrap_or(p))?, converged: true });
    }
    let channel = spec.build(p)?;
    Ok(match quantity {
        Quantity::Shannon => {
            let est = shannon_capacity(&channel, config)?;
            Evaluation { value: est.value, converged: est.converged }
        }
        Quantity::Holevo => {
            let est = holevo_capacity(&channel, config)?;
            Evaluation { value: est.value, converged: est.converged }
        }
        Quantity::Payout => {
            let est = expected_payout(&channel, SWEEP_BOXES, config)?;
            Evaluation { value: est.value, converged: est.converged }
        }
    })
}

/// Evaluator for a channel pair that computes fixed channels once.
#[derive(Debug, Clone)]
pub(crate) struct PairEvaluator {
    pub(crate) quantity: Quantity,
    pub(crate) channels: [ChannelSpec; 2],
    config: OptimizerConfig,
    pub(crate) fixed: [Option<Evaluation>; 2],
}

impl PairEvaluator {
    pub(crate) fn new(quantity: Quantity, channels: [ChannelSpec; 2], config: &OptimizerConfig) -> Result<Self> {
        config.validate()?;
        let boosted = config.with_restarts(config.restarts * FIXED_RESTART_FACTOR);
        let mut fixed = [None, None];
        for (slot, spec) in fixed.iter_mut().zip(&channels) {
            if !spec.is_swept() {
                *slot = Some(evaluate(quantity, spec, f64::NAN, &boosted)?);
            }
        }
        Ok(PairEvaluator { quantity, channels, config: *config, fixed })
    }

    pub(crate) fn at(&self, p: f64) -> Result<[Evaluation; 2]> {
        let one = |i: usize| match self.fixed[i] {
            Some(v) => Ok(v),
            None => evaluate(self.quantity, &self.channels[i], p, &self.config),
        };
        Ok([one(0)?, one(1)?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub channels: [ChannelSpec; 2],
    pub quantity: Quantity,
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub optimizer: OptimizerConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.p_min && self.p_min < self.p_max && self.p_max <= 1.0) {
            return Err(Error::Usage(format!("need 0 <= p_min < p_max <= 1, got [{}, {}]", self.p_min, self.p_max)));
        }
        if self.steps < 2 {
            return Err(Error::Usage(format!("need at least 2 steps, got {}", self.steps)));
        }
        self.optimizer.validate()
    }

    /// Evenly spaced grid including both ends.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(
                |i| {
                    if i == last {
                        self.p_max
                    } else {
                        self.p_min + (self.p_max - self.p_min) * i as f64 / last as f64
                    }
                },
            )
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub values: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub quantity: Quantity,
    pub labels: [String; 2],
    pub rows: Vec<SweepRow>,
    /// Every optimizer run behind the table converged.
    pub converged: bool,
}

impl SweepTable {
    /// Header `p,<label1>,<label2>`, values to 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = format!("p,{},{}\n", self.labels[0], self.labels[1]);
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                format_sig(row.p, 9),
                format_sig(row.values[0], 9),
                format_sig(row.values[1], 9)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

/// Evaluates both channels on every grid point; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let eval = PairEvaluator::new(spec.quantity, spec.channels, &spec.optimizer)?;
    let points: Vec<(f64, [Evaluation; 2])> =
        spec.grid().into_par_iter().map(|p| eval.at(p).map(|v| (p, v))).collect::<Result<_>>()?;
    Ok(SweepTable {
        quantity: spec.quantity,
        labels: [spec.channels[0].label(), spec.channels[1].label()],
        converged: points.iter().all(|(_, v)| v[0].converged && v[1].converged),
        rows: points.into_iter().map(|(p, v)| SweepRow { p, values: [v[0].value, v[1].value] }).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parse_channels() {
        assert_eq!("depolarizing".parse::<ChannelSpec>().unwrap(), ChannelSpec::Depolarizing { p: None });
        assert_eq!("depolarizing:p=0.4".parse::<ChannelSpec>().unwrap(), ChannelSpec::Depolarizing { p: Some(0.4) });
        assert_eq!("splaying".parse::<ChannelSpec>().unwrap(), ChannelSpec::Splaying);
        assert_eq!("knr:mu=0.5,s=0.6".parse::<ChannelSpec>().unwrap(), ChannelSpec::Knr { mu: 0.5, s: 0.6 });
        assert_eq!("knr".parse::<ChannelSpec>().unwrap(), ChannelSpec::KNR_DEFAULT);
        for bad in ["amplitude", "knr:mu=0.5,s=0.9", "depolarizing:p=2", "splaying:x=1", "knr:mu", "knr:mu=a"] {
            assert!(bad.parse::<ChannelSpec>().is_err(), "{bad}");
        }
        assert!(matches!("bogus".parse::<ChannelSpec>(), Err(Error::Usage(_))));
        assert!(matches!("entropy".parse::<Quantity>(), Err(Error::Usage(_))));
        assert!(ChannelSpec::Depolarizing { p: None }.build_fixed().is_err());
        assert!(!ChannelSpec::KNR_DEFAULT.label().contains(','));
    }

    #[test]
    fn grid_endpoints() {
        let spec = SweepSpec {
            channels: [ChannelSpec::Depolarizing { p: None }, ChannelSpec::Splaying],
            quantity: Quantity::Shannon,
            p_min: 0.0,
            p_max: 0.3,
            steps: 4,
            optimizer: OptimizerConfig::default(),
        };
        let g = spec.grid();
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[3], 0.3);
        assert_abs_diff_eq!(g[1], 0.1, epsilon = 1e-15);
        let mut bad = spec.clone();
        bad.steps = 1;
        assert!(bad.validate().is_err());
        bad.steps = 3;
        bad.p_min = 0.5;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn payout_sweep_against_knr() {
        let spec = SweepSpec {
            channels: [ChannelSpec::Depolarizing { p: None }, ChannelSpec::KNR_DEFAULT],
            quantity: Quantity::Payout,
            p_min: 0.3,
            p_max: 0.45,
            steps: 4,
            optimizer: OptimizerConfig::default().with_restarts(8),
        };
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 4);
        for row in &table.rows {
            assert_abs_diff_eq!(row.values[0], (2.0 - row.p) / 3.0, epsilon = 1e-7);
            assert_eq!(row.values[1], table.rows[0].values[1]);
            assert_abs_diff_eq!(row.values[1], 8.0 / 15.0, epsilon = 1e-7);
        }
        let csv = table.to_csv();
        assert!(csv.starts_with("p,depolarizing,knr(mu=0.5 s=0.6)\n"));
        assert_eq!(csv.lines().count(), 5);
        let back: SweepTable = serde_json::from_str(&table.to_json()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn two_step_shannon_sweep() {
        let spec = SweepSpec {
            channels: [ChannelSpec::Depolarizing { p: None }, ChannelSpec::Splaying],
            quantity: Quantity::Shannon,
            p_min: 0.0,
            p_max: 0.5,
            steps: 2,
            optimizer: OptimizerConfig::default().with_restarts(4),
        };
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].values[0], 1.0);
        assert_abs_diff_eq!(table.rows[0].values[1], 0.255992, epsilon = 1e-4);
    }
}
