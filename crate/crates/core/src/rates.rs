//! Second-order rate computations and the Gaussian-signaling baselines.
//!
//! A sub-block with mutual information `I` and information-density
//! variance `V`, decoded at blocklength `N` and error target `eps`,
//! supports roughly `I - sqrt(V/N) * Qinv(eps)` bits per channel use. The
//! longer user averages its two sub-blocks: the means weight by symbol
//! counts and the variances add before the square root, so one penalty
//! term covers the whole block.

use crate::channel::ChannelConfig;
use crate::density::{estimate_mi_dispersion, BlockRole, InputSpec, MiDispersion};
use crate::detmodel::ModTuple;
use crate::error::Error;
use crate::rng::substream;

/// Gaussian tail probability `P(Z > x)`.
pub fn q_func(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of [`q_func`]: the `x` with `P(Z > x) = eps`.
///
/// Newton iteration on `ln Q(x)` starting from the Chernoff-bound point
/// `sqrt(-2 ln(2 eps))`, which always lies right of the root; since
/// `ln Q` is concave the iterates decrease monotonically onto it.
pub fn q_inv(eps: f64) -> Result<f64, Error> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("tail probability must lie in (0, 1), got {eps}")));
    }
    if eps == 0.5 {
        return Ok(0.0);
    }
    if eps > 0.5 {
        return Ok(-q_inv(1.0 - eps)?);
    }
    let ln_eps = eps.ln();
    let mut x = (-2.0 * (2.0 * eps).ln()).sqrt();
    while q_func(x) == 0.0 {
        x *= 0.9;
    }
    for _ in 0..200 {
        let q = q_func(x);
        let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let step = (q.ln() - ln_eps) * q / phi;
        x += step;
        if step.abs() < 1e-13 * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x)
}

/// Normal-approximation rate of the short block: decoded alone at
/// blocklength `len1` and error target `eps1`, clamped at zero where the
/// approximation turns vacuous.
pub fn rate_user1(mi: f64, v: f64, len1: usize, eps1: f64) -> Result<f64, Error> {
    if len1 == 0 {
        return Err(Error::Domain("blocklength must be at least 1".into()));
    }
    check_moments(mi, v)?;
    Ok((mi - (v / len1 as f64).sqrt() * q_inv(eps1)?).max(0.0))
}

/// Normal-approximation rate of the long block: `len1` interfered symbols
/// followed by `len2 - len1` clean symbols, one decoding at error target
/// `eps2`. Means weight by symbol counts; variances add under the root.
pub fn rate_user2(
    mi21: f64,
    v21: f64,
    mi22: f64,
    v22: f64,
    len1: usize,
    len2: usize,
    eps2: f64,
) -> Result<f64, Error> {
    if len1 == 0 || len1 > len2 {
        return Err(Error::Domain(format!(
            "blocklengths must satisfy 1 <= len1 <= len2, got ({len1}, {len2})"
        )));
    }
    check_moments(mi21, v21)?;
    check_moments(mi22, v22)?;
    let (a, b, n) = (len1 as f64, (len2 - len1) as f64, len2 as f64);
    let mean = (a * mi21 + b * mi22) / n;
    let penalty = (a * v21 + b * v22).sqrt() / n * q_inv(eps2)?;
    Ok((mean - penalty).max(0.0))
}

fn check_moments(mi: f64, v: f64) -> Result<(), Error> {
    if !mi.is_finite() {
        return Err(Error::Domain(format!("mutual information must be finite, got {mi}")));
    }
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("dispersion must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

/// The four signaling schemes the sweep can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Superposition QAM design decoded with interference as noise.
    ProposedQamTin,
    /// Gaussian inputs with perfect cancellation: a hypothetical outer
    /// bound (cancellation failure and time-sharing losses are ignored).
    GaussianSic,
    /// User 2 stays silent during the interfered block; Gaussian inputs.
    Orthogonal,
    /// Gaussian inputs decoded with interference as noise.
    GaussianTin,
}

impl Scheme {
    pub const ALL: [Scheme; 4] =
        [Scheme::ProposedQamTin, Scheme::GaussianSic, Scheme::Orthogonal, Scheme::GaussianTin];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::ProposedQamTin => "proposed-qam-tin",
            Scheme::GaussianSic => "gaussian-sic",
            Scheme::Orthogonal => "orthogonal",
            Scheme::GaussianTin => "gaussian-tin",
        }
    }

    pub fn parse(s: &str) -> Result<Scheme, Error> {
        Scheme::ALL.into_iter().find(|sch| sch.tag() == s).ok_or_else(|| {
            let valid: Vec<&str> = Scheme::ALL.iter().map(|s| s.tag()).collect();
            Error::Config(format!("unknown scheme {s:?}; valid schemes: {}", valid.join(", ")))
        })
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// One evaluated rate pair with the per-sub-block moments behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub scheme: Scheme,
    /// Message-size tuple for the proposed scheme; benchmarks carry none.
    pub tuple: Option<ModTuple>,
    pub r1: f64,
    pub r2: f64,
    pub mi1: f64,
    pub mi21: f64,
    pub mi22: f64,
    pub v1: f64,
    pub v21: f64,
    pub v22: f64,
    pub se_mi1: f64,
    pub se_mi21: f64,
    pub se_mi22: f64,
    pub se_v1: f64,
    pub se_v21: f64,
    pub se_v22: f64,
    /// Monte Carlo samples per sub-block estimate.
    pub samples: u64,
    /// Root seed of the run that produced this point.
    pub seed: u64,
}

/// Assembles a rate point from the three sub-block moment estimates.
pub fn assemble_point(
    scheme: Scheme,
    tuple: Option<ModTuple>,
    cfg: &ChannelConfig,
    b1: &MiDispersion,
    b21: &MiDispersion,
    b22: &MiDispersion,
    seed: u64,
) -> Result<RatePoint, Error> {
    Ok(RatePoint {
        scheme,
        tuple,
        r1: rate_user1(b1.mi, b1.dispersion, cfg.len1, cfg.eps1)?,
        r2: rate_user2(
            b21.mi,
            b21.dispersion,
            b22.mi,
            b22.dispersion,
            cfg.len1,
            cfg.len2,
            cfg.eps2,
        )?,
        mi1: b1.mi,
        mi21: b21.mi,
        mi22: b22.mi,
        v1: b1.dispersion,
        v21: b21.dispersion,
        v22: b22.dispersion,
        se_mi1: b1.std_error,
        se_mi21: b21.std_error,
        se_mi22: b22.std_error,
        se_v1: b1.std_error_dispersion,
        se_v21: b21.std_error_dispersion,
        se_v22: b22.std_error_dispersion,
        samples: b1.samples.max(b21.samples).max(b22.samples),
        seed,
    })
}

fn gaussian_input(cfg: &ChannelConfig, role: BlockRole) -> InputSpec {
    let power = match role {
        BlockRole::User1 => cfg.p1,
        BlockRole::User2Interfered | BlockRole::User2Clean => cfg.p2,
    };
    InputSpec::gaussian(power, role)
}

/// Perfect-cancellation benchmark: both decode orders with Gaussian
/// inputs, plus `grid - 2` interior convex combinations of the corners
/// (every numeric field interpolates linearly). The region this traces is
/// a hypothetical outer bound: cancellation is assumed error-free.
pub fn benchmark_gaussian_sic(
    cfg: &ChannelConfig,
    samples: u64,
    seed: u64,
    grid: usize,
) -> Result<Vec<RatePoint>, Error> {
    if grid < 2 {
        return Err(Error::Domain(format!("the mixture grid needs at least 2 points, got {grid}")));
    }
    let u1 = gaussian_input(cfg, BlockRole::User1);
    let u21 = gaussian_input(cfg, BlockRole::User2Interfered);
    let u22 = gaussian_input(cfg, BlockRole::User2Clean);

    let e1_clean = estimate_mi_dispersion(cfg, &u1, None, samples, substream(seed, 0))?;
    let e1_tin = estimate_mi_dispersion(cfg, &u1, Some(&u21), samples, substream(seed, 1))?;
    let e21_clean = estimate_mi_dispersion(cfg, &u21, None, samples, substream(seed, 2))?;
    let e21_tin = estimate_mi_dispersion(cfg, &u21, Some(&u1), samples, substream(seed, 3))?;
    let e22_clean = estimate_mi_dispersion(cfg, &u22, None, samples, substream(seed, 4))?;

    // Corner A: user 2 decoded first under interference, user 1 cleanly
    // after cancellation. Corner B: the opposite order.
    let corner_a =
        assemble_point(Scheme::GaussianSic, None, cfg, &e1_clean, &e21_tin, &e22_clean, seed)?;
    let corner_b =
        assemble_point(Scheme::GaussianSic, None, cfg, &e1_tin, &e21_clean, &e22_clean, seed)?;

    let mut points = Vec::with_capacity(grid);
    for i in 0..grid {
        let t = i as f64 / (grid - 1) as f64;
        points.push(mix_points(&corner_a, &corner_b, t));
    }
    Ok(points)
}

/// Linear interpolation of every numeric field; `t = 0` gives `a`.
fn mix_points(a: &RatePoint, b: &RatePoint, t: f64) -> RatePoint {
    let l = |x: f64, y: f64| x + (y - x) * t;
    RatePoint {
        scheme: a.scheme,
        tuple: None,
        r1: l(a.r1, b.r1),
        r2: l(a.r2, b.r2),
        mi1: l(a.mi1, b.mi1),
        mi21: l(a.mi21, b.mi21),
        mi22: l(a.mi22, b.mi22),
        v1: l(a.v1, b.v1),
        v21: l(a.v21, b.v21),
        v22: l(a.v22, b.v22),
        se_mi1: l(a.se_mi1, b.se_mi1),
        se_mi21: l(a.se_mi21, b.se_mi21),
        se_mi22: l(a.se_mi22, b.se_mi22),
        se_v1: l(a.se_v1, b.se_v1),
        se_v21: l(a.se_v21, b.se_v21),
        se_v22: l(a.se_v22, b.se_v22),
        samples: a.samples,
        seed: a.seed,
    }
}

/// Orthogonal benchmark: user 2 is silent during the interfered block, so
/// both users see clean channels; Gaussian inputs.
pub fn benchmark_orthogonal(cfg: &ChannelConfig, samples: u64, seed: u64) -> Result<RatePoint, Error> {
    let e1 = estimate_mi_dispersion(
        cfg,
        &gaussian_input(cfg, BlockRole::User1),
        None,
        samples,
        substream(seed, 0),
    )?;
    let e22 = estimate_mi_dispersion(
        cfg,
        &gaussian_input(cfg, BlockRole::User2Clean),
        None,
        samples,
        substream(seed, 1),
    )?;
    let silent = MiDispersion::exact_zero(samples);
    assemble_point(Scheme::Orthogonal, None, cfg, &e1, &silent, &e22, seed)
}

/// Interference-as-noise benchmark with Gaussian inputs at full power.
/// Returned as a list for symmetry with the other region-valued
/// benchmarks.
pub fn benchmark_gaussian_tin(
    cfg: &ChannelConfig,
    samples: u64,
    seed: u64,
) -> Result<Vec<RatePoint>, Error> {
    let u1 = gaussian_input(cfg, BlockRole::User1);
    let u21 = gaussian_input(cfg, BlockRole::User2Interfered);
    let u22 = gaussian_input(cfg, BlockRole::User2Clean);
    let e1 = estimate_mi_dispersion(cfg, &u1, Some(&u21), samples, substream(seed, 0))?;
    let e21 = estimate_mi_dispersion(cfg, &u21, Some(&u1), samples, substream(seed, 1))?;
    let e22 = estimate_mi_dispersion(cfg, &u22, None, samples, substream(seed, 2))?;
    Ok(vec![assemble_point(Scheme::GaussianTin, None, cfg, &e1, &e21, &e22, seed)?])
}
