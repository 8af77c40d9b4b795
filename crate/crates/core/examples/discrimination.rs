//! Minimum-error discrimination of qubit states, with its dual certificate.
//!
//! ```text
//! cargo run --example discrimination
//! ```

use channel_payout::payout::{enclosing_ball_povm, helstrom_success, optimal_povm_for_encodings};
use channel_payout::qubit::BlochVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = BlochVector::new(0.0, 0.0, 0.6)?;
    let b = BlochVector::new(0.0, 0.0, -0.6)?;
    let d = optimal_povm_for_encodings(&[a, b], &[2.0 / 3.0, 1.0 / 3.0])?;
    println!("two states: success {:.9}, Helstrom {:.9}", d.success, helstrom_success(&a, &b, 2.0 / 3.0, 1.0 / 3.0));

    // Noisy trine.
    let trine: Vec<BlochVector> = (0..3)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 3.0;
            BlochVector::new(0.8 * t.cos(), 0.8 * t.sin(), 0.0)
        })
        .collect::<Result<_, _>>()?;
    let d = optimal_povm_for_encodings(&trine, &[1.0 / 3.0; 3])?;
    println!("trine: success {:.9}  dual bound {:.9}  gap {:.1e}", d.success, d.dual_bound, d.duality_gap);
    for e in d.povm.effects() {
        println!("  e0 = {:.6}  e = ({:.6}, {:.6}, {:.6})", e.e0, e.e.x, e.e.y, e.e.z);
    }

    let d2 = enclosing_ball_povm(&[a, b], &[0.5, 0.5])?;
    println!("pair through the enclosing-ball route: {:.9}", d2.success);
    Ok(())
}
