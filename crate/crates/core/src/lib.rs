//! A workbench for studying the finite-length behaviour of polar codes.
//!
//! The crate is organized around four questions:
//!
//! * How do the per-sub-channel Bhattacharyya parameters evolve under the
//!   polar transform? ([`channel`] holds the single-step transforms of
//!   binary-input symmetric channels, [`polarization`] iterates them into
//!   full spectra and sampled trajectories.)
//! * How fast does the fraction of mediocre sub-channels decay? ([`exponent`]
//!   iterates a supremum functional on a grid and extracts the decay rate
//!   `rho` from its `k`-th roots.)
//! * What blocklength suffices for a target gap-to-capacity and error
//!   probability, or for a target rate-distortion redundancy? ([`bounds`]
//!   evaluates the fully explicit constant chains.)
//! * Do the inequalities hold in practice? ([`codec`] provides the encoder,
//!   successive-cancellation decoder, randomized source encoder and Monte
//!   Carlo harnesses that check every bound empirically.)
//!
//! All randomized entry points take explicit seeds and use counter-mode
//! streams, so results are reproducible regardless of execution order.

pub mod bounds;
pub mod channel;
pub mod codec;
mod error;
pub mod exponent;
pub mod math;
pub mod polarization;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
