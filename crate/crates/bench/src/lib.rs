//! Shared fixtures for the criterion benchmarks. The crate carries no
//! logic of its own; everything under test lives in `mactin-core`.

use mactin_core::constellation::{build_design, ExponentMode, SignalingDesign};
use mactin_core::{ChannelConfig, ModTuple};

/// The channel the benchmarks measure on: receive SNRs 12 and 24 dB,
/// blocklengths 150 and 200, error targets 1e-6 and 1e-5.
pub fn reference_channel() -> ChannelConfig {
    ChannelConfig::from_snr_db(12.0, 24.0, 150, 200, 1e-6, 1e-5).unwrap()
}

/// A mid-region design point with 16-point constellations on both
/// interfered blocks, the densest case the sweep evaluates.
pub fn design_448(cfg: &ChannelConfig) -> SignalingDesign {
    let params = cfg.params_for(ModTuple::new(4, 4, 8)).unwrap();
    build_design(cfg, &params, ExponentMode::ExactLog).unwrap()
}
