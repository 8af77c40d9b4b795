//! The classical picture: capacity and distortion always agree.
//!
//! ```text
//! cargo run --release --example rate_distortion
//! ```

use channel_payout::classical::{
    blahut_arimoto, distortion_rate, no_reversal_check, random_dmc, rate_distortion_uniform_hamming, DiscreteChannel,
};
use channel_payout::optim::restart_rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("R(D) for a uniform ternary source:");
    for i in 0..=6 {
        let d = i as f64 / 9.0;
        println!("  D = {d:.4}  R = {:.6}", rate_distortion_uniform_hamming(3, d)?);
    }
    println!("D(1 bit) = {:.9}", distortion_rate(3, 1.0)?);

    let ba = blahut_arimoto(&DiscreteChannel::bsc(0.2)?, 1e-9, 100_000);
    println!(
        "BSC(0.2): {:.9} <= C <= {:.9} after {} iterations, input {:?}",
        ba.lower, ba.upper, ba.iterations, ba.input
    );

    let report = no_reversal_check(&DiscreteChannel::bsc(0.1)?, &DiscreteChannel::bsc(0.3)?)?;
    println!(
        "BSC(0.1) vs BSC(0.3): C {:.6} / {:.6}, D {:.6} / {:.6}: {}",
        report.capacity_1,
        report.capacity_2,
        report.distortion_1,
        report.distortion_2,
        report.verdict()
    );

    let mut rng = restart_rng(0, 0);
    let mut reversals = 0;
    for _ in 0..1000 {
        let a = random_dmc(&mut rng, 2..=4, 2..=4);
        let b = random_dmc(&mut rng, 2..=4, 2..=4);
        reversals += usize::from(no_reversal_check(&a, &b)?.reversal);
    }
    println!("reversals among 1000 random channel pairs: {reversals}");
    Ok(())
}
