//! Where lower capacity buys a higher payout.
//!
//! For `p` between each pair of crossovers the depolarizing channel has the
//! smaller capacity yet wins more in the three-box game.
//!
//! ```text
//! cargo run --release --example crossovers
//! ```

use channel_payout::optim::OptimizerConfig;
use channel_payout::sweep::{find_crossover, reversal_at, ChannelSpec, Quantity, CROSSOVER_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = OptimizerConfig::default();
    let d = ChannelSpec::Depolarizing { p: None };
    for fixed in [ChannelSpec::Splaying, ChannelSpec::KNR_DEFAULT] {
        println!("depolarizing vs {}", fixed.label());
        for q in [Quantity::Shannon, Quantity::Holevo, Quantity::Payout] {
            let r = find_crossover(q, [d, fixed], 0.3, 0.5, CROSSOVER_TOL, &config)?;
            println!("  {q:<8} p* = {:.6}  (value {:.6})", r.p_star, r.values_at_p_star[1]);
        }
    }

    for (p, fixed, q) in
        [(0.415, ChannelSpec::Splaying, Quantity::Holevo), (0.38, ChannelSpec::KNR_DEFAULT, Quantity::Shannon)]
    {
        let r = reversal_at(p, fixed, q, &config)?;
        println!(
            "p = {p}: {q} {:.6} vs {:.6}, payout {:.6} vs {:.6} -> reversal: {}",
            r.capacity[0], r.capacity[1], r.payout[0], r.payout[1], r.reversal
        );
    }
    Ok(())
}
