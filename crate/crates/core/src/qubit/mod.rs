//! Qubit states, effects, channels and entropies in Bloch form.
//!
//! A density operator is `½(I + r·σ)` with `|r| ≤ 1`, an effect (POVM element)
//! is `e0·I + e·σ`, and `Tr[E ρ] = e0 + e·r`. Channels are affine maps of the
//! Bloch ball, `r ↦ M·r + t`.
//!
//! The Choi matrix is unnormalized: `J = Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|)`, so
//! `Tr J = 2` for a trace-preserving qubit map. The other common convention
//! divides by the input dimension.

mod channel;
mod entropy;
mod state;

pub use channel::{Choi, Kraus, QubitChannel};
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub(crate) use entropy::{entropy_unchecked, h2_unchecked};
pub use state::{BlochVector, Effect};

/// Slack on Bloch-vector norms.
pub const STATE_TOL: f64 = 1e-9;
/// Slack on positivity checks (effects, Choi eigenvalues).
pub const PSD_TOL: f64 = 1e-10;
/// Slack on exact algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;
