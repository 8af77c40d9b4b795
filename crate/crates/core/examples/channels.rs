//! Built-in channels: affine action, Choi spectrum, Kraus operators.
//!
//! ```text
//! cargo run --example channels
//! ```

use channel_payout::qubit::{von_neumann_entropy, BlochVector, Effect, QubitChannel, PSD_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let channels = [
        QubitChannel::identity(),
        QubitChannel::depolarizing(0.4)?,
        QubitChannel::splaying(),
        QubitChannel::knr(0.5, 0.6)?,
    ];
    let probe = BlochVector::from_angles(0.3, 1.1);
    for ch in &channels {
        let out = ch.apply(&probe);
        println!("{ch}");
        println!("  unital: {}  image diameter: {:.6}", ch.is_unital(), ch.image_diameter());
        println!("  {probe} -> {out}  S = {:.6}", von_neumann_entropy(&out));
        println!("  Choi eigenvalues: {:.6?}  CPTP: {}", ch.choi_eigenvalues(), ch.is_cptp(PSD_TOL));
        let kraus = ch.kraus();
        println!("  {} Kraus operators", kraus.len());
        // Tr[E N(ρ)] = Tr[N†(E) ρ]
        let e = Effect::projector(&BlochVector::NORTH);
        println!(
            "  Tr[E N(rho)] = {:.12}  Tr[N'(E) rho] = {:.12}",
            e.expectation(&out),
            ch.adjoint_apply(&e).expectation(&probe)
        );
    }

    // KNR outside its valid region fails the Choi test.
    match QubitChannel::knr(0.5, 0.8) {
        Ok(_) => println!("knr(0.5, 0.8) accepted"),
        Err(e) => println!("knr(0.5, 0.8) rejected: {e}"),
    }
    Ok(())
}
