//! Physical-layer configuration shared by every stage of the pipeline.

use crate::detmodel::{bit_levels, DetModelParams, ModTuple, UserRole};
use crate::error::Error;

/// Two-user uplink with heterogeneous blocklengths.
///
/// User 1 transmits `len1` symbols, user 2 transmits `len2 >= len1`
/// symbols; the receiver sees the superposition on the first `len1` uses
/// and user 2 alone on the remaining `len2 - len1`. Channel gains are real
/// and positive (any phase is assumed pre-compensated) and the additive
/// noise is unit-variance circular Gaussian, so the receive SNR of user
/// `k` is `p_k * h_k^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub h1: f64,
    pub h2: f64,
    pub p1: f64,
    pub p2: f64,
    pub len1: usize,
    pub len2: usize,
    pub eps1: f64,
    pub eps2: f64,
}

impl ChannelConfig {
    pub fn new(
        h1: f64,
        h2: f64,
        p1: f64,
        p2: f64,
        len1: usize,
        len2: usize,
        eps1: f64,
        eps2: f64,
    ) -> Result<Self, Error> {
        for (name, v) in [("h1", h1), ("h2", h2), ("p1", p1), ("p2", p2)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        for (name, v) in [("eps1", eps1), ("eps2", eps2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if len1 == 0 || len1 > len2 {
            return Err(Error::Domain(format!(
                "blocklengths must satisfy 1 <= len1 <= len2, got ({len1}, {len2})"
            )));
        }
        Ok(ChannelConfig { h1, h2, p1, p2, len1, len2, eps1, eps2 })
    }

    /// Unit transmit powers with gains chosen to hit the given SNRs.
    pub fn from_snr_db(
        snr1_db: f64,
        snr2_db: f64,
        len1: usize,
        len2: usize,
        eps1: f64,
        eps2: f64,
    ) -> Result<Self, Error> {
        let snr1 = 10f64.powf(snr1_db / 10.0);
        let snr2 = 10f64.powf(snr2_db / 10.0);
        ChannelConfig::new(snr1.sqrt(), snr2.sqrt(), 1.0, 1.0, len1, len2, eps1, eps2)
    }

    pub fn snr1(&self) -> f64 {
        self.p1 * self.h1 * self.h1
    }

    pub fn snr2(&self) -> f64 {
        self.p2 * self.h2 * self.h2
    }

    /// The user with the larger channel gain; ties go to user 1.
    pub fn strong_user(&self) -> UserRole {
        if self.h2 > self.h1 {
            UserRole::User2
        } else {
            UserRole::User1
        }
    }

    pub fn snr_of(&self, user: UserRole) -> f64 {
        match user {
            UserRole::User1 => self.snr1(),
            UserRole::User2 => self.snr2(),
        }
    }

    pub fn power_of(&self, user: UserRole) -> f64 {
        match user {
            UserRole::User1 => self.p1,
            UserRole::User2 => self.p2,
        }
    }

    pub fn gain_of(&self, user: UserRole) -> f64 {
        match user {
            UserRole::User1 => self.h1,
            UserRole::User2 => self.h2,
        }
    }

    /// Deterministic-model parameters for a message tuple on this channel:
    /// bit levels from the two SNRs, roles from the channel gains.
    pub fn params_for(&self, tuple: ModTuple) -> Result<DetModelParams, Error> {
        let n1 = bit_levels(self.snr1())?;
        let n2 = bit_levels(self.snr2())?;
        DetModelParams::new(n1, n2, tuple, self.strong_user())
    }
}
