//! Flat key=value run configuration.
//!
//! The file format is one `key = value` pair per line; `#` starts a
//! comment, blank lines are skipped, later assignments win. Unknown keys
//! are rejected so that typos surface instead of silently running the
//! default. Command-line flags are applied after the file, so they
//! override it.

use std::path::{Path, PathBuf};

use mactin_core::constellation::ExponentMode;
use mactin_core::detmodel::ModTuple;
use mactin_core::error::Error;
use mactin_core::sweep::SweepSpec;
use mactin_core::{ChannelConfig, Scheme};

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Receive SNRs in dB; converted to linear once, here.
    pub snr1_db: f64,
    pub snr2_db: f64,
    /// Transmit power budgets (channel gains absorb the rest of the SNR).
    pub p1: f64,
    pub p2: f64,
    /// Blocklengths of the two users (config keys `n1`, `n2`).
    pub len1: usize,
    pub len2: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub samples: u64,
    pub seed: u64,
    pub tuples: Vec<ModTuple>,
    pub schemes: Vec<Scheme>,
    pub out: Option<PathBuf>,
    pub exponent_mode: ExponentMode,
    pub sic_grid: usize,
}

impl Default for RunConfig {
    /// Mirrors the reference experiment the core crate ships.
    fn default() -> Self {
        let spec = SweepSpec::reference_experiment();
        RunConfig {
            snr1_db: 12.0,
            snr2_db: 24.0,
            p1: 1.0,
            p2: 1.0,
            len1: spec.cfg.len1,
            len2: spec.cfg.len2,
            eps1: spec.cfg.eps1,
            eps2: spec.cfg.eps2,
            samples: spec.samples,
            seed: spec.seed,
            tuples: spec.tuples,
            schemes: spec.schemes,
            out: None,
            exponent_mode: spec.exponent_mode,
            sic_grid: spec.sic_grid,
        }
    }
}

impl RunConfig {
    pub fn channel(&self) -> Result<ChannelConfig, Error> {
        if !(self.p1 > 0.0 && self.p2 > 0.0) {
            return Err(Error::Config(format!(
                "power budgets must be positive, got ({}, {})",
                self.p1, self.p2
            )));
        }
        let snr1 = 10f64.powf(self.snr1_db / 10.0);
        let snr2 = 10f64.powf(self.snr2_db / 10.0);
        ChannelConfig::new(
            (snr1 / self.p1).sqrt(),
            (snr2 / self.p2).sqrt(),
            self.p1,
            self.p2,
            self.len1,
            self.len2,
            self.eps1,
            self.eps2,
        )
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, Error> {
        Ok(SweepSpec {
            cfg: self.channel()?,
            tuples: self.tuples.clone(),
            samples: self.samples,
            seed: self.seed,
            schemes: self.schemes.clone(),
            exponent_mode: self.exponent_mode,
            sic_grid: self.sic_grid,
        })
    }
}

pub fn load_config_file(path: &Path, base: RunConfig) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
    apply_config_text(&text, base)
}

/// Applies every assignment in `text` on top of `base`.
pub fn apply_config_text(text: &str, mut base: RunConfig) -> Result<RunConfig, Error> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("config line {}: expected key = value, got {raw:?}", lineno + 1))
        })?;
        apply_key(&mut base, key.trim(), value.trim())
            .map_err(|e| Error::Config(format!("config line {}: {e}", lineno + 1)))?;
    }
    Ok(base)
}

fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), Error> {
    fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Error>
    where
        T::Err: std::fmt::Display,
    {
        value
            .parse()
            .map_err(|e| Error::Config(format!("{key}: cannot parse {value:?}: {e}")))
    }
    match key {
        "snr1_db" => cfg.snr1_db = num(key, value)?,
        "snr2_db" => cfg.snr2_db = num(key, value)?,
        "p1" => cfg.p1 = num(key, value)?,
        "p2" => cfg.p2 = num(key, value)?,
        "n1" => cfg.len1 = num(key, value)?,
        "n2" => cfg.len2 = num(key, value)?,
        "eps1" => cfg.eps1 = num(key, value)?,
        "eps2" => cfg.eps2 = num(key, value)?,
        "samples" => cfg.samples = num(key, value)?,
        "seed" => cfg.seed = num(key, value)?,
        "sic_grid" => cfg.sic_grid = num(key, value)?,
        "tuples" => cfg.tuples = parse_tuples(value)?,
        "schemes" => cfg.schemes = parse_schemes(value)?,
        "out" => cfg.out = Some(PathBuf::from(value)),
        "exponent_mode" => cfg.exponent_mode = parse_exponent_mode(value)?,
        other => {
            return Err(Error::Config(format!(
                "unknown config key {other:?}; valid keys: snr1_db, snr2_db, p1, p2, n1, n2, \
                 eps1, eps2, samples, seed, sic_grid, tuples, schemes, out, exponent_mode"
            )))
        }
    }
    Ok(())
}

/// Parses one `m1,m21,m22` triple.
pub fn parse_tuple(s: &str) -> Result<ModTuple, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("expected m1,m21,m22 with three entries, got {s:?}")));
    }
    let mut vals = [0u32; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .parse()
            .map_err(|e| Error::Config(format!("cannot parse message size {p:?}: {e}")))?;
    }
    Ok(ModTuple::new(vals[0], vals[1], vals[2]))
}

/// Parses a `;`-separated list of tuples, e.g. `0,8,8; 2,6,8`.
pub fn parse_tuples(s: &str) -> Result<Vec<ModTuple>, Error> {
    let list: Result<Vec<ModTuple>, Error> =
        s.split(';').filter(|part| !part.trim().is_empty()).map(parse_tuple).collect();
    let list = list?;
    if list.is_empty() {
        return Err(Error::Config(format!("no tuples in {s:?}")));
    }
    Ok(list)
}

pub fn parse_schemes(s: &str) -> Result<Vec<Scheme>, Error> {
    let list: Result<Vec<Scheme>, Error> = s
        .split(',')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(Scheme::parse)
        .collect();
    let list = list?;
    if list.is_empty() {
        return Err(Error::Config(format!("no schemes in {s:?}")));
    }
    Ok(list)
}

pub fn parse_exponent_mode(s: &str) -> Result<ExponentMode, Error> {
    match s {
        "exact-log" => Ok(ExponentMode::ExactLog),
        "ceiled" => Ok(ExponentMode::Ceiled),
        other => Err(Error::Config(format!(
            "unknown exponent mode {other:?}; valid modes: exact-log, ceiled"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_a_valid_sweep() {
        let cfg = RunConfig::default();
        let spec = cfg.sweep_spec().unwrap();
        assert_eq!(spec.tuples.len(), 6);
        assert_eq!(spec.cfg.len1, 150);
        assert!((spec.cfg.snr1() - 10f64.powf(1.2)).abs() < 1e-9);
    }

    #[test]
    fn config_text_overrides_and_comments() {
        let text = "\
# comment
snr1_db = 6.0
n1 = 80   # trailing comment
n2=120
tuples = 0,4,4 ; 2,2,4
schemes = proposed-qam-tin, orthogonal
samples = 5000
exponent_mode = ceiled
";
        let cfg = apply_config_text(text, RunConfig::default()).unwrap();
        assert_eq!(cfg.snr1_db, 6.0);
        assert_eq!((cfg.len1, cfg.len2), (80, 120));
        assert_eq!(cfg.tuples, vec![ModTuple::new(0, 4, 4), ModTuple::new(2, 2, 4)]);
        assert_eq!(cfg.schemes, vec![Scheme::ProposedQamTin, Scheme::Orthogonal]);
        assert_eq!(cfg.samples, 5000);
        assert_eq!(cfg.exponent_mode, ExponentMode::Ceiled);
        // Untouched keys keep their defaults.
        assert_eq!(cfg.seed, 1);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        let base = RunConfig::default;
        assert!(matches!(apply_config_text("snr_db = 3", base()), Err(Error::Config(_))));
        assert!(matches!(apply_config_text("samples = many", base()), Err(Error::Config(_))));
        assert!(matches!(apply_config_text("just a line", base()), Err(Error::Config(_))));
        assert!(matches!(apply_config_text("tuples = 1,2", base()), Err(Error::Config(_))));
        assert!(matches!(apply_config_text("schemes = qam", base()), Err(Error::Config(_))));
        assert!(matches!(apply_config_text("exponent_mode = exact", base()), Err(Error::Config(_))));
    }

    #[test]
    fn powers_fold_into_gains_keeping_receive_snrs() {
        let mut cfg = RunConfig::default();
        cfg.p1 = 4.0;
        let ch = cfg.channel().unwrap();
        assert!((ch.snr1() - 10f64.powf(1.2)).abs() < 1e-9);
        assert_eq!(ch.p1, 4.0);
    }
}
