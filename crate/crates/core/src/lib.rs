//! Joint measurability of a noisy qubit spin measurement with a Pauli or
//! unital qubit channel.
//!
//! An unbiased binary observable `A_{s,n}(±) = ½(1 ± s n·σ)` is compatible
//! with a channel `Ψ` when a single instrument has `Ψ` as its total channel
//! and `A_{s,n}` as its outcome statistics. For a Pauli channel with weights
//! `p = (p0, p1, p2, p3)` the largest compatible sharpness along `n` is
//!
//! ```text
//! s_max(n) = (Σ_j n_j² / p_+[j]²)^(−1/2),   p_+[1] = 2(√(p0 p1) + √(p2 p3))
//! ```
//!
//! with the other two axes obtained cyclically.
//!
//! * [`compatibility`]: verdicts, `s_max`, the optimal environment
//!   measurement, dual certificates and region sampling.
//! * [`dilations`]: Naimark and Stinespring dilations and the observable a
//!   channel induces from a measurement on its environment.
//! * [`channels`]: Pauli channels, general qubit maps and the normal form of
//!   unital channels.
//! * [`verify`]: independent checks of certificates and instruments, and a
//!   randomized primal search.
//! * [`formats`] and [`cli`]: JSON/CSV exchange and the `pauli-compat`
//!   binary.
//!
//! ```
//! use pauli_compat::channels::PauliChannel;
//! use pauli_compat::compatibility::{is_compatible, s_max};
//! use pauli_compat::observables::UnbiasedBinaryObservable;
//!
//! let ch = PauliChannel::quantum_not();
//! assert!((s_max(&ch, [0.0, 0.0, 1.0]).unwrap() - 2.0 / 3.0).abs() < 1e-12);
//! let obs = UnbiasedBinaryObservable::z(0.6).unwrap();
//! assert!(is_compatible(&obs, &ch).compatible);
//! ```

pub mod channels;
pub mod cli;
pub mod compatibility;
pub mod dilations;
pub mod error;
pub mod formats;
pub mod linalg;
pub mod observables;
pub mod verify;

pub use error::{Error, Result};
