//! Classical capacities of qubit channels.
//!
//! - [`shannon_capacity`]: product inputs and product measurements, i.e. the
//!   largest accessible information over signal ensembles and POVMs;
//! - [`holevo_capacity`]: product inputs with collective decoding, the largest
//!   Holevo χ over signal ensembles;
//! - [`depolarizing_capacity`]: closed form shared by both for `D_p`.
//!
//! Both optimizers solve nonconvex problems by multistart local ascent, so the
//! reported values are lower bounds carrying the strategy that attains them.
//!
//! The subtracted term of the accessible information uses the per-signal
//! outcome distributions `Tr[N(σᵢ) E_b]`.

mod holevo;
mod params;
mod shannon;
mod types;

pub use holevo::{holevo_capacity, holevo_capacity_with, holevo_chi};
pub use shannon::{mutual_information, shannon_capacity, shannon_capacity_with};
pub use types::{CapacityEstimate, Povm, SignalEnsemble};

use crate::qubit::h2_unchecked;
use crate::{Error, Result};

/// Default cap on signal-ensemble and POVM sizes; `d² = 4` suffices for qubits.
pub const MAX_ELEMENTS: usize = 4;

/// `1 + (1 − p/2) log₂(1 − p/2) + (p/2) log₂(p/2)`: Shannon, Holevo and
/// ultimate capacity of the depolarizing channel, which coincide.
pub fn depolarizing_capacity(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("depolarizing p = {p} not in [0, 1]")));
    }
    Ok(1.0 - h2_unchecked(p / 2.0))
}
