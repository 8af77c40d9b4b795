//! Curve data as CSV: payout and Holevo capacity against the splaying channel.
//!
//! ```text
//! cargo run --release --example sweep_csv > sweep.csv
//! ```

use channel_payout::optim::OptimizerConfig;
use channel_payout::sweep::{run_sweep, ChannelSpec, Quantity, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for quantity in [Quantity::Payout, Quantity::Holevo] {
        let spec = SweepSpec {
            channels: [ChannelSpec::Depolarizing { p: None }, ChannelSpec::Splaying],
            quantity,
            p_min: 0.35,
            p_max: 0.45,
            steps: 11,
            optimizer: OptimizerConfig::default().with_restarts(16),
        };
        let table = run_sweep(&spec)?;
        eprintln!("# {quantity}");
        print!("{}", table.to_csv());
    }
    Ok(())
}
