//! Shannon and Holevo capacities of the built-in qubit channels.
//!
//! ```text
//! cargo run --release --example capacities
//! ```

use std::time::Instant;

use channel_payout::capacity::{depolarizing_capacity, holevo_capacity, shannon_capacity, CapacityEstimate};
use channel_payout::optim::OptimizerConfig;
use channel_payout::qubit::QubitChannel;

fn describe(kind: &str, est: &CapacityEstimate) {
    println!("  {kind:<8} {:.7} bits  (converged: {}, restarts: {})", est.value, est.converged, est.restarts_used);
    for (p, s) in est.witness_ensemble.entries() {
        println!("           p = {p:.6}  input {s}");
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = OptimizerConfig::default();
    let channels = [QubitChannel::depolarizing(0.4)?, QubitChannel::splaying(), QubitChannel::knr(0.5, 0.6)?];
    for channel in &channels {
        println!("{channel}");
        let t = Instant::now();
        describe("shannon", &shannon_capacity(channel, &config)?);
        println!("  ({:.2?})", t.elapsed());
        let t = Instant::now();
        describe("holevo", &holevo_capacity(channel, &config)?);
        println!("  ({:.2?})", t.elapsed());
    }
    println!("closed form for depolarizing(0.4): {:.7}", depolarizing_capacity(0.4)?);
    Ok(())
}
