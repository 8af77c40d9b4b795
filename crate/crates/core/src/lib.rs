//! Classical capacities and guessing-game payouts of qubit channels.
//!
//! Qubit states, effects and channels are handled in Bloch form: a state is
//! `½(I + r·σ)`, an effect is `e0·I + e·σ` and a channel is the affine map
//! `r ↦ M·r + t`. On top of that the crate provides
//!
//! - [`capacity`]: Shannon (accessible information) and Holevo capacities by
//!   multistart derivative-free ascent, plus the depolarizing closed form;
//! - [`payout`]: the optimal expected payout of the N-box dollar-bill game
//!   over a noisy qubit channel, by see-saw over encodings and measurements;
//! - [`classical`]: Blahut–Arimoto capacity of discrete memoryless channels and
//!   the Hamming rate-distortion curve of a uniform source;
//! - [`sweep`]: parameter sweeps and crossover localization over the
//!   depolarizing parameter;
//! - [`verify`]: the acceptance report driven by the `verify` subcommand.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod classical;
pub mod config;
pub mod error;
pub mod optim;
pub mod payout;
pub mod qubit;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
