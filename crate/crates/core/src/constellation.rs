//! Discrete constellations and the superposition signaling design.
//!
//! The design rests on one structural fact: adding a unit-spaced square
//! QAM to a second QAM scaled by the square root of the first one's
//! cardinality tiles a larger square QAM with the same spacing. Applying
//! that twice stacks the strong user's two message bands around the weak
//! user's band so that the *received* sum constellation is again a regular
//! grid, which is what keeps its minimum distance (and with it the
//! achievable rate under interference-as-noise decoding) under control.

use num_complex::Complex64;

use crate::channel::ChannelConfig;
use crate::detmodel::{bit_levels, DetModelParams, UserRole};
use crate::error::Error;

/// Largest supported per-constellation order, as log2 of the cardinality.
/// Construction computes pairwise statistics, so the cost grows with the
/// square of the cardinality; 2^14 points is already a second of work.
pub const MAX_BITS: u32 = 14;

/// A finite complex signal set. Point order is meaningful: it is the
/// label order used by the bit mapper.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    min_distance: f64,
    mean_energy: f64,
}

impl Constellation {
    /// Wraps a point list, computing its statistics. The order is kept.
    pub fn new(points: Vec<Complex64>) -> Self {
        assert!(!points.is_empty(), "a constellation needs at least one point");
        let mean_energy = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
        let mut min_distance = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let d = (points[i] - points[j]).norm_sqr();
                if d < min_distance {
                    min_distance = d;
                }
            }
        }
        Constellation { points, min_distance: min_distance.sqrt(), mean_energy }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn cardinality(&self) -> usize {
        self.points.len()
    }

    /// Smallest distance between two distinct points; infinite for a
    /// singleton.
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    /// Average symbol energy under equiprobable signaling.
    pub fn mean_energy(&self) -> f64 {
        self.mean_energy
    }

    /// Same set, every point multiplied by a real factor.
    pub fn scale(&self, factor: f64) -> Constellation {
        assert!(factor.is_finite());
        Constellation {
            points: self.points.iter().map(|p| p * factor).collect(),
            min_distance: self.min_distance * factor.abs(),
            mean_energy: self.mean_energy * factor * factor,
        }
    }
}

/// Zero-mean square QAM with `2^m_bits` points and neighbor spacing
/// `d_min`. Points are stored row-major in the per-axis index order that
/// the Gray mapper expects. `m_bits = 0` gives the singleton `{0}`.
pub fn regular_qam(m_bits: u32, d_min: f64) -> Result<Constellation, Error> {
    if m_bits % 2 != 0 {
        return Err(Error::Unsupported(format!(
            "square QAM needs an even number of bits per symbol, got {m_bits}"
        )));
    }
    if m_bits > MAX_BITS {
        return Err(Error::Unsupported(format!(
            "constellation order 2^{m_bits} exceeds the supported 2^{MAX_BITS}"
        )));
    }
    if !(d_min > 0.0) || !d_min.is_finite() {
        return Err(Error::Domain(format!("d_min must be positive and finite, got {d_min}")));
    }
    let k = 1usize << (m_bits / 2);
    let mut points = Vec::with_capacity(k * k);
    let axis = |i: usize| (2.0 * i as f64 - (k as f64 - 1.0)) * d_min * 0.5;
    for ii in 0..k {
        for qq in 0..k {
            points.push(Complex64::new(axis(ii), axis(qq)));
        }
    }
    Ok(Constellation::new(points))
}

/// Minkowski sum `a + scale_b * b` as a *set*: exact duplicates are
/// merged and the point order is not preserved. Use it for analyses of
/// what the channel superimposes, not for labeling.
pub fn superimpose(a: &Constellation, b: &Constellation, scale_b: f64) -> Constellation {
    assert!(scale_b.is_finite());
    let mut points = Vec::with_capacity(a.cardinality() * b.cardinality());
    for pa in a.points() {
        for pb in b.points() {
            let p = pa + scale_b * pb;
            // Normalize signed zeros so exact duplicates compare equal.
            points.push(Complex64::new(p.re + 0.0, p.im + 0.0));
        }
    }
    points.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    points.dedup_by(|x, y| x.re == y.re && x.im == y.im);
    Constellation::new(points)
}

/// Whether the scale exponent of the weak user's band uses the exact
/// base-two logarithms of the SNRs or their integer round-ups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    #[default]
    ExactLog,
    Ceiled,
}

/// Absolute amplitudes multiplying each unit-spaced component QAM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCoeffs {
    /// Strong user's high message band (carries the band gap factor).
    pub strong_high: f64,
    /// Strong user's low message band.
    pub strong_low: f64,
    /// Weak user's interfered-block constellation.
    pub weak: f64,
    /// User 2's interference-free block.
    pub clean: f64,
}

/// The three transmit constellations of a design point, plus the
/// normalization that ties them to the power budgets.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingDesign {
    pub params: DetModelParams,
    pub lambda1: Constellation,
    pub lambda21: Constellation,
    pub lambda22: Constellation,
    /// Common normalization of the two interfered-block constellations.
    pub eta: f64,
    /// Normalization of the interference-free block.
    pub eta_prime: f64,
    pub coeffs: PowerCoeffs,
}

/// Builds the transmit constellations for a validated design point.
///
/// The strong user superimposes two unit QAMs separated by the band gap
/// `2^(n_w/2)`; the weak user sends one unit QAM raised by an exponent
/// chosen so that, at the receiver, it slots exactly between the strong
/// user's bands. A common factor `eta` scales both interfered-block
/// constellations so the larger of their energy demands meets its power
/// budget and the other stays below budget by construction.
pub fn build_design(
    cfg: &ChannelConfig,
    p: &DetModelParams,
    mode: ExponentMode,
) -> Result<SignalingDesign, Error> {
    if cfg.strong_user() != p.strong_user
        || bit_levels(cfg.snr1())? != p.n1
        || bit_levels(cfg.snr2())? != p.n2
    {
        return Err(Error::Config(
            "design parameters were derived for a different channel".into(),
        ));
    }
    let (n_s, n_w) = p.levels_by_role();
    let (m_s, m_w) = p.messages_by_role();
    for (name, v) in [
        ("the weak user's level count", n_w),
        ("the strong interfered message", m_s),
        ("the weak interfered message", m_w),
        ("the clean-block message", p.m22),
    ] {
        if v % 2 != 0 {
            return Err(Error::Unsupported(format!(
                "{name} must be even to build square QAM components, got {v}"
            )));
        }
    }

    let f_high = regular_qam(p.strong_high_bits, 1.0)?;
    let f_low = regular_qam(p.strong_low_bits, 1.0)?;
    let f_weak = regular_qam(m_w, 1.0)?;
    let f_clean = regular_qam(p.m22, 1.0)?;

    // Unit composite of the strong user, in label order: high-band bits
    // are the most significant part of the symbol index.
    let band_gap = 2f64.powi((n_w / 2) as i32);
    let mut pts = Vec::with_capacity(f_high.cardinality() * f_low.cardinality());
    for ph in f_high.points() {
        for pl in f_low.points() {
            pts.push(pl + band_gap * ph);
        }
    }
    let strong_unit = Constellation::new(pts);

    let snr_s = cfg.snr_of(p.strong_user);
    let snr_w = cfg.snr_of(p.strong_user.other());
    let weak_exponent = match mode {
        ExponentMode::ExactLog => 0.5 * (snr_s.log2() - m_w as f64 + n_w as f64 - snr_w.log2()),
        ExponentMode::Ceiled => 0.5 * (n_s - m_w) as f64,
    };
    let weak_unit_scale = 2f64.powf(weak_exponent);

    let e_strong = strong_unit.mean_energy();
    let e_weak = weak_unit_scale * weak_unit_scale * f_weak.mean_energy();
    let e_max = e_strong.max(e_weak);
    let eta = if e_max > 0.0 { e_max.sqrt().recip() } else { 1.0 };
    let eta_prime = if p.m22 > 0 { f_clean.mean_energy().sqrt().recip() } else { 1.0 };

    let p_s = cfg.power_of(p.strong_user);
    let p_w = cfg.power_of(p.strong_user.other());
    let amp_strong = eta * p_s.sqrt();
    let amp_weak = eta * p_w.sqrt() * weak_unit_scale;
    let amp_clean = eta_prime * cfg.p2.sqrt();

    let lambda_strong = strong_unit.scale(amp_strong);
    let lambda_weak = f_weak.scale(amp_weak);
    let lambda22 = f_clean.scale(amp_clean);
    let (lambda1, lambda21) = match p.strong_user {
        UserRole::User1 => (lambda_strong, lambda_weak),
        UserRole::User2 => (lambda_weak, lambda_strong),
    };

    Ok(SignalingDesign {
        params: *p,
        lambda1,
        lambda21,
        lambda22,
        eta,
        eta_prime,
        coeffs: PowerCoeffs {
            strong_high: amp_strong * band_gap,
            strong_low: amp_strong,
            weak: amp_weak,
            clean: amp_clean,
        },
    })
}

impl SignalingDesign {
    /// Everything the receiver can see during the interfered block: the
    /// full Minkowski sum of the two faded constellations, duplicates not
    /// merged (a collision would surface as a zero minimum distance).
    pub fn received_superposition(&self, cfg: &ChannelConfig) -> Constellation {
        let mut pts = Vec::with_capacity(self.lambda1.cardinality() * self.lambda21.cardinality());
        for a in self.lambda1.points() {
            for b in self.lambda21.points() {
                pts.push(cfg.h1 * a + cfg.h2 * b);
            }
        }
        Constellation::new(pts)
    }

    fn index_interfered(&self, user: UserRole, bits: &[u8]) -> usize {
        if user == self.params.strong_user {
            let high = self.params.strong_high_bits as usize;
            let low = self.params.strong_low_bits as usize;
            debug_assert_eq!(bits.len(), high + low);
            (qam_gray_index(&bits[..high]) << low) | qam_gray_index(&bits[high..])
        } else {
            qam_gray_index(bits)
        }
    }
}

/// Received-superposition minimum distance of a design on its channel.
/// The construction guarantees at least `sqrt(3)` on the boundary of the
/// admissible region.
pub fn min_distance_check(design: &SignalingDesign, cfg: &ChannelConfig) -> f64 {
    design.received_superposition(cfg).min_distance()
}

/// Gray-decodes a bit string onto a square-QAM point index: the first
/// half selects the real axis, the second half the imaginary axis.
fn qam_gray_index(bits: &[u8]) -> usize {
    let half = bits.len() / 2;
    (gray_to_index(&bits[..half]) << half) | gray_to_index(&bits[half..])
}

fn gray_to_index(bits: &[u8]) -> usize {
    let mut level = 0usize;
    let mut idx = 0usize;
    for &b in bits {
        level ^= b as usize;
        idx = (idx << 1) | level;
    }
    idx
}

/// Maps an information bit sequence onto one user's transmit symbols.
///
/// User 1 sends `len1` symbols of `m1` bits each; user 2 sends `len1`
/// symbols of `m21` bits followed by `len2 - len1` symbols of `m22` bits.
/// The all-zero sequence maps to the Gray label zero of every block.
pub fn map_bits_to_symbols(
    bits: &[u8],
    design: &SignalingDesign,
    len1: usize,
    len2: usize,
    user: UserRole,
) -> Result<Vec<Complex64>, Error> {
    if len1 == 0 || len1 > len2 {
        return Err(Error::Mapping(format!(
            "blocklengths must satisfy 1 <= len1 <= len2, got ({len1}, {len2})"
        )));
    }
    if let Some(bad) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::Mapping(format!("bit values must be 0 or 1, got {bad}")));
    }
    let p = &design.params;
    let expected = match user {
        UserRole::User1 => len1 * p.m1 as usize,
        UserRole::User2 => len1 * p.m21 as usize + (len2 - len1) * p.m22 as usize,
    };
    if bits.len() != expected {
        return Err(Error::Mapping(format!(
            "expected {expected} bits for this user, got {}",
            bits.len()
        )));
    }

    match user {
        UserRole::User1 => {
            let m = p.m1 as usize;
            Ok((0..len1)
                .map(|i| {
                    let chunk = &bits[i * m..(i + 1) * m];
                    design.lambda1.points()[design.index_interfered(UserRole::User1, chunk)]
                })
                .collect())
        }
        UserRole::User2 => {
            let m21 = p.m21 as usize;
            let m22 = p.m22 as usize;
            let mut out = Vec::with_capacity(len2);
            for i in 0..len1 {
                let chunk = &bits[i * m21..(i + 1) * m21];
                out.push(design.lambda21.points()[design.index_interfered(UserRole::User2, chunk)]);
            }
            let tail = &bits[len1 * m21..];
            for i in 0..len2 - len1 {
                let chunk = &tail[i * m22..(i + 1) * m22];
                out.push(design.lambda22.points()[qam_gray_index(chunk)]);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detmodel::ModTuple;

    fn paper_channel() -> ChannelConfig {
        ChannelConfig::from_snr_db(12.0, 24.0, 150, 200, 1e-6, 1e-5).unwrap()
    }

    fn design_for(tuple: ModTuple) -> SignalingDesign {
        let cfg = paper_channel();
        let p = cfg.params_for(tuple).unwrap();
        build_design(&cfg, &p, ExponentMode::ExactLog).unwrap()
    }

    /// Snap a constellation onto the half-integer grid of spacing `d` so
    /// point sets can be compared exactly.
    fn lattice_keys(c: &Constellation, d: f64) -> Vec<(i64, i64)> {
        let mut keys: Vec<(i64, i64)> = c
            .points()
            .iter()
            .map(|p| {
                let re = (2.0 * p.re / d).round();
                let im = (2.0 * p.im / d).round();
                assert!((2.0 * p.re / d - re).abs() < 1e-9, "point off the expected lattice");
                assert!((2.0 * p.im / d - im).abs() < 1e-9, "point off the expected lattice");
                (re as i64, im as i64)
            })
            .collect();
        keys.sort_unstable();
        keys
    }

    #[test]
    fn qam_energy_matches_closed_form() {
        for m in [0u32, 2, 4, 6, 8] {
            for d in [0.5, 1.0, 2.0] {
                let c = regular_qam(m, d).unwrap();
                let cardinality = 1usize << m;
                assert_eq!(c.cardinality(), cardinality);
                let expect = d * d * (cardinality as f64 - 1.0) / 6.0;
                assert!((c.mean_energy() - expect).abs() < 1e-12, "m={m} d={d}");
                if m > 0 {
                    assert!((c.min_distance() - d).abs() < 1e-12);
                }
            }
        }
        let c = regular_qam(4, 1.0).unwrap();
        assert!((c.mean_energy() - 2.5).abs() < 1e-15);
        // Zero mean.
        let sum: Complex64 = c.points().iter().sum();
        assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn qam_rejects_odd_orders_and_bad_spacing() {
        assert!(matches!(regular_qam(3, 1.0), Err(Error::Unsupported(_))));
        assert!(matches!(regular_qam(16, 1.0), Err(Error::Unsupported(_))));
        assert!(matches!(regular_qam(2, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn singleton_constellation() {
        let c = regular_qam(0, 1.0).unwrap();
        assert_eq!(c.cardinality(), 1);
        assert_eq!(c.points()[0], Complex64::new(0.0, 0.0));
        assert_eq!(c.mean_energy(), 0.0);
        assert!(c.min_distance().is_infinite());
    }

    #[test]
    fn superimposing_scaled_qams_tiles_a_larger_qam() {
        // 4-QAM + 2 * 4-QAM = 16-QAM, spacing preserved.
        let a = regular_qam(2, 1.0).unwrap();
        let b = regular_qam(2, 1.0).unwrap();
        let s = superimpose(&a, &b, 2.0);
        let expect = regular_qam(4, 1.0).unwrap();
        assert_eq!(lattice_keys(&s, 1.0), lattice_keys(&expect, 1.0));
        assert!((s.min_distance() - 1.0).abs() < 1e-12);

        // Identity element.
        let zero = regular_qam(0, 1.0).unwrap();
        let same = superimpose(&a, &zero, 123.0);
        assert_eq!(lattice_keys(&same, 1.0), lattice_keys(&a, 1.0));
    }

    #[test]
    fn lattice_composition_property_small_sweep() {
        // QAM(2^a, d) + 2^(a/2) QAM(2^b, d) is QAM(2^(a+b), d), for all even
        // a, b up to a modest total (the acceptance suite pushes further).
        for a_bits in (0..=8u32).step_by(2) {
            for b_bits in (0..=(8 - a_bits)).step_by(2) {
                for d in [0.5, 1.0, 2.0] {
                    let a = regular_qam(a_bits, d).unwrap();
                    let b = regular_qam(b_bits, d).unwrap();
                    let scale = 2f64.powi((a_bits / 2) as i32);
                    let s = superimpose(&a, &b, scale);
                    let expect = regular_qam(a_bits + b_bits, d).unwrap();
                    assert_eq!(s.cardinality(), expect.cardinality(), "a={a_bits} b={b_bits}");
                    assert_eq!(lattice_keys(&s, d), lattice_keys(&expect, d));
                }
            }
        }
    }

    #[test]
    fn design_energies_respect_power_budgets() {
        let cfg = paper_channel();
        for tuple in [
            ModTuple::new(0, 8, 8),
            ModTuple::new(2, 6, 8),
            ModTuple::new(4, 4, 8),
            ModTuple::new(4, 2, 8),
            ModTuple::new(4, 0, 8),
            ModTuple::new(4, 0, 0),
        ] {
            let d = design_for(tuple);
            assert!(d.lambda1.mean_energy() <= cfg.p1 + 1e-9, "{tuple} user 1 over budget");
            assert!(d.lambda21.mean_energy() <= cfg.p2 + 1e-9, "{tuple} user 2 over budget");
            assert!(d.lambda22.mean_energy() <= cfg.p2 + 1e-9, "{tuple} clean block over budget");
            if tuple.m22 > 0 {
                // The clean block has the budget to itself and uses all of it.
                assert!((d.lambda22.mean_energy() - cfg.p2).abs() < 1e-9);
            }
            // At least one interfered-block constellation is at full power
            // unless both are silent.
            if tuple.m1 + tuple.m21 > 0 {
                let e1 = d.lambda1.mean_energy() / cfg.p1;
                let e21 = d.lambda21.mean_energy() / cfg.p2;
                assert!(e1.max(e21) > 1.0 - 1e-9, "{tuple} nobody at full power");
            }
        }
    }

    #[test]
    fn boundary_designs_keep_received_distance_above_sqrt3() {
        let cfg = paper_channel();
        for tuple in [ModTuple::new(0, 8, 8), ModTuple::new(2, 6, 8), ModTuple::new(4, 4, 8)] {
            let d = design_for(tuple);
            let dist = min_distance_check(&d, &cfg);
            assert!(dist >= 3f64.sqrt() - 1e-6, "{tuple}: received d_min {dist}");
        }
    }

    #[test]
    fn received_superposition_is_a_unit_qam_up_to_scale() {
        // On the boundary the received set is a regular QAM of cardinality
        // 2^(m1+m21); check via the unit-spaced composition.
        let d = design_for(ModTuple::new(2, 6, 8));
        let p = &d.params;
        let (_, n_w) = p.levels_by_role();
        let (_, m_w) = p.messages_by_role();
        let strong_unit = superimpose(
            &regular_qam(p.strong_low_bits, 1.0).unwrap(),
            &regular_qam(p.strong_high_bits, 1.0).unwrap(),
            2f64.powi((n_w / 2) as i32),
        );
        let unit_received = superimpose(
            &strong_unit,
            &regular_qam(m_w, 1.0).unwrap(),
            2f64.powi(((n_w - m_w) / 2) as i32),
        );
        assert_eq!(unit_received.cardinality(), 1 << (p.m1 + p.m21));
        assert!((unit_received.min_distance() - 1.0).abs() < 1e-12);
        let expect = regular_qam(p.m1 + p.m21, 1.0).unwrap();
        assert_eq!(lattice_keys(&unit_received, 1.0), lattice_keys(&expect, 1.0));

        // And the actual received set has the same cardinality: no
        // collisions after applying gains and normalization.
        let cfg = paper_channel();
        let received = d.received_superposition(&cfg);
        assert_eq!(received.cardinality(), 1 << (p.m1 + p.m21));
        assert!(received.min_distance() > 1e-9);
    }

    #[test]
    fn weak_band_energy_matches_the_closed_form() {
        // E[| 2^((log2 snr_s - m_w + n_w - log2 snr_w)/2) F_w |^2]
        //   = 2^(n_w + log2 snr_s - log2 snr_w) (1 - 2^-m_w) / 6,
        // evaluated at (n_w, m_w, snr_s, snr_w) = (8, 4, 10^1.2, 10^2.4).
        let (n_w, m_w) = (8u32, 4u32);
        let (snr_s, snr_w) = (10f64.powf(1.2), 10f64.powf(2.4));
        let scale = 2f64.powf(0.5 * (snr_s.log2() - m_w as f64 + n_w as f64 - snr_w.log2()));
        let brute = regular_qam(m_w, 1.0).unwrap().scale(scale).mean_energy();
        let closed = 2f64.powf(n_w as f64 + snr_s.log2() - snr_w.log2())
            * (1.0 - 2f64.powi(-(m_w as i32)))
            / 6.0;
        assert!((brute - closed).abs() < 1e-12 * closed);
    }

    #[test]
    fn strong_band_energy_matches_the_boundary_closed_form() {
        // On the boundary the strong composite's unit energy is
        // (2^(n_w - m_w) - 1 + 2^n_s - 2^n_w) / 6.
        let cfg = paper_channel();
        for tuple in [ModTuple::new(0, 8, 8), ModTuple::new(2, 6, 8), ModTuple::new(4, 4, 8)] {
            let d = design_for(tuple);
            let p = &d.params;
            let (n_s, n_w) = p.levels_by_role();
            let (_, m_w) = p.messages_by_role();
            let p_s = cfg.power_of(p.strong_user);
            let unit_energy = d.lambda21.mean_energy() / (d.eta * d.eta * p_s);
            let closed = (2f64.powi((n_w - m_w) as i32) - 1.0 + 2f64.powi(n_s as i32)
                - 2f64.powi(n_w as i32))
                / 6.0;
            assert!((unit_energy - closed).abs() < 1e-9 * closed, "{tuple}");
        }
    }

    #[test]
    fn exponent_mode_alters_only_the_weak_band() {
        let cfg = paper_channel();
        let p = cfg.params_for(ModTuple::new(4, 4, 8)).unwrap();
        let exact = build_design(&cfg, &p, ExponentMode::ExactLog).unwrap();
        let ceiled = build_design(&cfg, &p, ExponentMode::Ceiled).unwrap();
        // Weak user here is user 1.
        assert!(exact.coeffs.weak != ceiled.coeffs.weak);
        // The ceiled exponent is (n_s - m_w)/2 on the unit lattice.
        let unit = ceiled.coeffs.weak / (ceiled.eta * cfg.p1.sqrt());
        assert!((unit - 2f64.powf(0.5 * (8.0 - 4.0))).abs() < 1e-12);
        assert!(ceiled.lambda1.mean_energy() <= cfg.p1 + 1e-9);
    }

    #[test]
    fn build_design_rejects_mismatched_channels() {
        let cfg = paper_channel();
        let p = cfg.params_for(ModTuple::new(4, 4, 8)).unwrap();
        let other = ChannelConfig::from_snr_db(18.0, 24.0, 150, 200, 1e-6, 1e-5).unwrap();
        assert!(matches!(build_design(&other, &p, ExponentMode::ExactLog), Err(Error::Config(_))));
    }

    #[test]
    fn build_design_rejects_odd_messages() {
        let cfg = paper_channel();
        let p = cfg.params_for(ModTuple::new(3, 5, 8)).unwrap();
        assert!(matches!(build_design(&cfg, &p, ExponentMode::ExactLog), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bit_mapping_lengths_and_zero_label() {
        let d = design_for(ModTuple::new(4, 4, 8));
        let (len1, len2) = (3usize, 5usize);

        let bits1 = vec![0u8; len1 * 4];
        let sym1 = map_bits_to_symbols(&bits1, &d, len1, len2, UserRole::User1).unwrap();
        assert_eq!(sym1.len(), len1);
        assert!(sym1.iter().all(|&s| s == d.lambda1.points()[0]));

        let bits2 = vec![0u8; len1 * 4 + (len2 - len1) * 8];
        let sym2 = map_bits_to_symbols(&bits2, &d, len1, len2, UserRole::User2).unwrap();
        assert_eq!(sym2.len(), len2);
        assert_eq!(sym2[0], d.lambda21.points()[0]);
        assert_eq!(sym2[len2 - 1], d.lambda22.points()[0]);

        // Wrong lengths and non-bit values are rejected.
        assert!(map_bits_to_symbols(&bits1[1..], &d, len1, len2, UserRole::User1).is_err());
        assert!(map_bits_to_symbols(&[2u8; 12], &d, len1, len2, UserRole::User1).is_err());
    }

    #[test]
    fn bit_mapping_walks_gray_labels_per_axis() {
        // For a unit 16-QAM, flipping the last bit of the real-axis pair
        // moves between horizontally adjacent points (Gray property).
        let d = design_for(ModTuple::new(4, 0, 8));
        // User 1 is weak here, so lambda1 is a plain scaled 16-QAM.
        let sym_a = map_bits_to_symbols(&[0, 0, 0, 0], &d, 1, 1, UserRole::User1).unwrap()[0];
        let sym_b = map_bits_to_symbols(&[0, 1, 0, 0], &d, 1, 1, UserRole::User1).unwrap()[0];
        assert!((sym_a.im - sym_b.im).abs() < 1e-12);
        assert!(((sym_a.re - sym_b.re).abs() - d.lambda1.min_distance()).abs() < 1e-9);
    }

    #[test]
    fn silent_blocks_map_to_zero_symbols() {
        let d = design_for(ModTuple::new(4, 0, 8));
        let bits = vec![0u8; 2 * 8];
        let sym = map_bits_to_symbols(&bits, &d, 2, 4, UserRole::User2).unwrap();
        assert_eq!(sym.len(), 4);
        assert_eq!(sym[0], Complex64::new(0.0, 0.0));
        assert_eq!(sym[1], Complex64::new(0.0, 0.0));
    }
}
