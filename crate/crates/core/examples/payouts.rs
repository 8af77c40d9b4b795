//! Optimal payouts of the three-box game, with the see-saw witnesses.
//!
//! ```text
//! cargo run --release --example payouts
//! ```

use channel_payout::optim::OptimizerConfig;
use channel_payout::payout::{expected_payout, two_state_payout};
use channel_payout::qubit::QubitChannel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = OptimizerConfig::default();
    let channels = [
        QubitChannel::depolarizing(0.2)?,
        QubitChannel::depolarizing(0.4)?,
        QubitChannel::splaying(),
        QubitChannel::knr(0.5, 0.6)?,
    ];
    println!("{:<24} {:>12} {:>12} {:>10}", "channel", "see-saw", "(1+s_max)/3", "gap");
    for ch in &channels {
        let est = expected_payout(ch, 3, &config)?;
        println!("{:<24} {:>12.9} {:>12.9} {:>10.1e}", ch.label(), est.value, two_state_payout(ch), est.duality_gap);
    }

    let est = expected_payout(&QubitChannel::splaying(), 3, &config)?;
    println!("\nsplaying witness (worst half-step {:.1e}):", est.worst_step);
    for (r, e) in est.witness.encodings().iter().zip(est.witness.povm().effects()) {
        println!("  send {r}  effect e0 = {:.6}", e.e0);
    }

    println!("\nmore boxes over depolarizing(0.2):");
    for n in 2..=5 {
        let est = expected_payout(&QubitChannel::depolarizing(0.2)?, n, &config.with_restarts(16))?;
        println!("  N = {n}: {:.9}", est.value);
    }
    Ok(())
}
