use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use channel_payout::capacity::{holevo_capacity, shannon_capacity, CapacityEstimate};
use channel_payout::classical::{
    distortion_rate, dmc_capacity, no_reversal_check, random_dmc, rate_distortion_uniform_hamming, DiscreteChannel,
    CAPACITY_TOL,
};
use channel_payout::config::{resolve, SEED_ENV};
use channel_payout::optim::{restart_rng, OptimizerConfig};
use channel_payout::payout::expected_payout;
use channel_payout::sweep::{find_crossover, format_sig, run_sweep, ChannelSpec, Quantity, SweepSpec, CROSSOVER_TOL};
use channel_payout::{verify, Error};

/// Classical capacities and guessing-game payouts of qubit channels.
#[derive(Parser)]
#[command(name = "channel-payout", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of text or CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Key-value optimizer config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Shannon or Holevo capacity of one channel.
    Capacity {
        channel: ChannelSpec,
        #[arg(long, default_value = "shannon")]
        quantity: Quantity,
    },
    /// Optimal expected payout of the N-box game.
    Payout {
        channel: ChannelSpec,
        #[arg(long, default_value_t = 3)]
        boxes: usize,
    },
    /// Tabulate a quantity for two channels over a grid of p.
    Sweep {
        channel1: ChannelSpec,
        channel2: ChannelSpec,
        #[arg(long, default_value = "payout")]
        quantity: Quantity,
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Locate p where the two channels' values cross.
    Crossover {
        channel1: ChannelSpec,
        channel2: ChannelSpec,
        #[arg(long, default_value = "payout")]
        quantity: Quantity,
        #[arg(long, default_value_t = 0.3)]
        p_lo: f64,
        #[arg(long, default_value_t = 0.5)]
        p_hi: f64,
        #[arg(long, default_value_t = CROSSOVER_TOL)]
        tol: f64,
    },
    /// Classical rate-distortion and channel-capacity tools.
    Rd {
        #[command(subcommand)]
        op: RdOp,
    },
    /// Run the acceptance criteria; exit 1 if any fails.
    Verify,
}

#[derive(Subcommand)]
enum RdOp {
    /// R(D) of a uniform source under Hamming distortion.
    Curve {
        #[arg(long, default_value_t = 3)]
        symbols: usize,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Least distortion at a given rate.
    Distortion {
        rate: f64,
        #[arg(long, default_value_t = 3)]
        symbols: usize,
    },
    /// Blahut–Arimoto capacity of a binary symmetric channel.
    Bsc { flip: f64 },
    /// Capacity and distortion ordering of two binary symmetric channels.
    Compare { flip1: f64, flip2: f64 },
    /// Count reversals among random channel pairs.
    RandomPairs {
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

enum Failure {
    Usage(String),
    Acceptance,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(global: &Global, text: &str) -> Result<(), Failure> {
    match &global.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn capacity_text(est: &CapacityEstimate, quantity: Quantity, channel: &ChannelSpec) -> String {
    let mut s = format!("{quantity} capacity of {}: {} bits\n", channel.label(), format_sig(est.value, 9));
    for (p, r) in est.witness_ensemble.entries() {
        s.push_str(&format!("  input p={} {r}\n", format_sig(*p, 6)));
    }
    if let Some(povm) = &est.witness_povm {
        for e in povm.effects() {
            s.push_str(&format!(
                "  effect e0={} e=({}, {}, {})\n",
                format_sig(e.e0, 6),
                format_sig(e.e.x, 6),
                format_sig(e.e.y, 6),
                format_sig(e.e.z, 6)
            ));
        }
    }
    s.push_str(&format!("  converged: {}\n", est.converged));
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let env_seed = std::env::var(SEED_ENV).ok();
    let config: OptimizerConfig = resolve(g.config.as_deref(), env_seed.as_deref(), g.seed, g.restarts)?;

    match cli.command {
        Command::Capacity { channel, quantity } => {
            let ch = channel.build_fixed()?;
            let est = match quantity {
                Quantity::Shannon => shannon_capacity(&ch, &config)?,
                Quantity::Holevo => holevo_capacity(&ch, &config)?,
                Quantity::Payout => return Err(Failure::Usage("use the payout subcommand for payouts".into())),
            };
            emit(g, &if g.json { pretty(&est) } else { capacity_text(&est, quantity, &channel) })
        }
        Command::Payout { channel, boxes } => {
            let est = expected_payout(&channel.build_fixed()?, boxes, &config)?;
            let text = if g.json {
                pretty(&est)
            } else {
                let mut s = format!("payout of {} with {boxes} boxes: {}\n", channel.label(), format_sig(est.value, 9));
                for (r, e) in est.witness.encodings().iter().zip(est.witness.povm().effects()) {
                    s.push_str(&format!("  encode {r}  effect e0={}\n", format_sig(e.e0, 6)));
                }
                s.push_str(&format!("  converged: {}, duality gap: {:.1e}\n", est.converged, est.duality_gap));
                s
            };
            emit(g, &text)
        }
        Command::Sweep { channel1, channel2, quantity, p_min, p_max, steps } => {
            let spec = SweepSpec { channels: [channel1, channel2], quantity, p_min, p_max, steps, optimizer: config };
            let table = run_sweep(&spec)?;
            emit(g, &if g.json { table.to_json() + "\n" } else { table.to_csv() })
        }
        Command::Crossover { channel1, channel2, quantity, p_lo, p_hi, tol } => {
            let r = find_crossover(quantity, [channel1, channel2], p_lo, p_hi, tol, &config)?;
            let text = if g.json {
                pretty(&r)
            } else {
                format!(
                    "{quantity}: {} = {} at p* = {} (bracket {:.1e}, values {} / {}, converged: {})\n",
                    r.labels[0],
                    r.labels[1],
                    format_sig(r.p_star, 9),
                    r.bracket_width,
                    format_sig(r.values_at_p_star[0], 9),
                    format_sig(r.values_at_p_star[1], 9),
                    r.converged
                )
            };
            emit(g, &text)
        }
        Command::Rd { op } => emit(g, &rd(op, g.json, &config)?),
        Command::Verify => {
            let report = verify::run(&config)?;
            if let Some(path) = &g.out {
                std::fs::write(path, report.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            if g.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_table());
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Acceptance)
            }
        }
    }
}

fn rd(op: RdOp, as_json: bool, config: &OptimizerConfig) -> Result<String, Failure> {
    let out = match op {
        RdOp::Curve { symbols, steps } => {
            if steps < 2 {
                return Err(Failure::Usage("need at least 2 steps".into()));
            }
            let d_max = (symbols as f64 - 1.0) / symbols as f64;
            let mut rows = Vec::new();
            for i in 0..steps {
                let d = d_max * i as f64 / (steps - 1) as f64;
                rows.push((d, rate_distortion_uniform_hamming(symbols, d)?));
            }
            if as_json {
                json!(rows.iter().map(|(d, r)| json!({"distortion": d, "rate": r})).collect::<Vec<_>>())
            } else {
                let mut s = String::from("distortion,rate\n");
                for (d, r) in rows {
                    s.push_str(&format!("{},{}\n", format_sig(d, 9), format_sig(r, 9)));
                }
                return Ok(s);
            }
        }
        RdOp::Distortion { rate, symbols } => {
            json!({"symbols": symbols, "rate": rate, "distortion": distortion_rate(symbols, rate)?})
        }
        RdOp::Bsc { flip } => {
            json!({"flip": flip, "capacity": dmc_capacity(&DiscreteChannel::bsc(flip)?, CAPACITY_TOL)})
        }
        RdOp::Compare { flip1, flip2 } => {
            serde_json::to_value(no_reversal_check(&DiscreteChannel::bsc(flip1)?, &DiscreteChannel::bsc(flip2)?)?)
                .expect("report serializes")
        }
        RdOp::RandomPairs { count } => {
            let mut rng = restart_rng(config.rng_seed, 0);
            let mut reversals = 0usize;
            for _ in 0..count {
                let a = random_dmc(&mut rng, 2..=4, 2..=4);
                let b = random_dmc(&mut rng, 2..=4, 2..=4);
                reversals += usize::from(no_reversal_check(&a, &b)?.reversal);
            }
            json!({"pairs": count, "reversals": reversals, "seed": config.rng_seed})
        }
    };
    if as_json {
        return Ok(pretty(&out));
    }
    let obj = out.as_object().expect("object output");
    Ok(obj.iter().map(|(k, v)| format!("{k}: {v}\n")).collect())
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Acceptance) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
