//! Finite-blocklength rate analysis for a two-user uplink Gaussian
//! multiple-access channel in which the users transmit with different
//! blocklengths and reliability targets, and each message is decoded with
//! the other user's signal treated as noise.
//!
//! The crate builds discrete superposition constellations from a
//! deterministic bit-level model of the channel, estimates the mutual
//! information and information-density variance of every sub-block by
//! seeded Monte Carlo, converts them into normal-approximation rate pairs
//! and sweeps whole rate regions, including three Gaussian-signaling
//! baselines for comparison.

pub mod channel;
pub mod constellation;
pub mod density;
pub mod detmodel;
pub mod error;
pub mod gf2;
pub mod quadrature;
pub mod rates;
pub mod rng;
pub mod sweep;

pub use channel::ChannelConfig;
pub use constellation::{Constellation, SignalingDesign};
pub use density::{BlockRole, InputKind, InputSpec, MiDispersion};
pub use detmodel::{DetModelParams, ModTuple, UserRole};
pub use error::Error;
pub use gf2::BinaryMatrix;
pub use rates::{RatePoint, Scheme};
pub use sweep::{SweepOutcome, SweepSpec};
