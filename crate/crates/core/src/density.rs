//! Information densities under interference-as-noise decoding, and their
//! first two moments by Monte Carlo.
//!
//! For a received sample `y`, the density of one sub-block is
//! `log2 p(y | x_own) / p(y)`, where both laws average over everything the
//! decoder does not know: the conditional averages over the interfering
//! constellation, the marginal additionally over the decoder's own
//! constellation. A Gaussian interferer folds into the noise variance
//! instead of being averaged point by point; a Gaussian own input turns
//! the marginal into a single wider Gaussian. All four combinations share
//! one evaluation path below.
//!
//! The estimator averages the density and its square over seeded samples.
//! Work is split into fixed-size chunks whose generators are derived from
//! `(seed, chunk index)` and whose partial sums are folded in chunk order,
//! so the result is a pure function of `(inputs, samples, seed)` no matter
//! how many rayon workers participate.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::ChannelConfig;
use crate::constellation::Constellation;
use crate::detmodel::DetModelParams;
use crate::error::Error;
use crate::rng::chunk_rng;

/// Samples per work chunk. Fixed so that the chunk decomposition, and
/// with it every floating-point reduction order, is independent of the
/// worker count.
const CHUNK: u64 = 1 << 14;

/// Terms this far (in nats) below the running maximum are dropped from
/// log-sum-exp accumulation; they are below double precision resolution.
const LSE_CUTOFF: f64 = 46.0;

/// Which sub-block an input law describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockRole {
    User1,
    User2Interfered,
    User2Clean,
}

impl BlockRole {
    fn user_is_1(self) -> bool {
        matches!(self, BlockRole::User1)
    }
}

/// Input law of one sub-block.
#[derive(Debug, Clone)]
pub enum InputKind {
    Discrete(Constellation),
    Gaussian { variance: f64 },
}

/// An input law attached to the sub-block it drives.
#[derive(Debug, Clone)]
pub struct InputSpec {
    pub kind: InputKind,
    pub role: BlockRole,
}

impl InputSpec {
    pub fn discrete(constellation: Constellation, role: BlockRole) -> Self {
        InputSpec { kind: InputKind::Discrete(constellation), role }
    }

    pub fn gaussian(variance: f64, role: BlockRole) -> Self {
        InputSpec { kind: InputKind::Gaussian { variance }, role }
    }
}

/// Monte Carlo moments of an information density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiDispersion {
    /// Mean density: the mutual information in bits per channel use.
    pub mi: f64,
    /// Variance of the density in bits^2 per channel use.
    pub dispersion: f64,
    /// Standard error of `mi`.
    pub std_error: f64,
    /// Standard error of `dispersion`.
    pub std_error_dispersion: f64,
    pub samples: u64,
}

impl MiDispersion {
    /// The exact moments of a silent (single-point) block.
    pub fn exact_zero(samples: u64) -> Self {
        MiDispersion { mi: 0.0, dispersion: 0.0, std_error: 0.0, std_error_dispersion: 0.0, samples }
    }
}

/// Information density, in bits, of a discrete own input against an
/// optional discrete interferer on the unit-variance Gaussian channel:
/// `log2 p(y | x_own) / p(y)`.
///
/// This is the direct textbook evaluation; the Monte Carlo estimator uses
/// a precomputed equivalent and is tested against this function.
pub fn info_density_tin(
    y: Complex64,
    x_own: Complex64,
    own: &Constellation,
    interferer: Option<&Constellation>,
    h_own: f64,
    h_int: f64,
) -> f64 {
    let zero = [Complex64::new(0.0, 0.0)];
    let int_points: &[Complex64] = match interferer {
        Some(c) => c.points(),
        None => &zero,
    };
    // exp arguments of the conditional around the chosen x_own, and of the
    // marginal around every own candidate.
    let cond: Vec<f64> = int_points
        .iter()
        .map(|d| -(y - h_own * x_own - h_int * d).norm_sqr())
        .collect();
    let marg: Vec<f64> = own
        .points()
        .iter()
        .flat_map(|x| int_points.iter().map(move |d| -(y - h_own * x - h_int * d).norm_sqr()))
        .collect();
    let ln_cond = ln_mean_exp(&cond);
    let ln_marg = ln_mean_exp(&marg);
    (ln_cond - ln_marg) / std::f64::consts::LN_2
}

/// log of the mean of exp(args), stabilized by the maximum.
fn ln_mean_exp(args: &[f64]) -> f64 {
    let amax = args.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = args.iter().map(|&a| (a - amax).exp()).sum();
    amax + (sum / args.len() as f64).ln()
}

/// Per-sub-block mutual information guaranteed by the construction on the
/// admissible region: the message size minus the constant
/// `log2(5 pi e / 6)` (about 2.83 bits), clamped at zero.
pub fn mi_lower_bound(p: &DetModelParams) -> (f64, f64, f64) {
    let c = (5.0 * std::f64::consts::PI * std::f64::consts::E / 6.0).log2();
    let lb = |m: u32| (m as f64 - c).max(0.0);
    (lb(p.m1), lb(p.m21), lb(p.m22))
}

/// Own-input law after the channel gain has been applied.
enum OwnLaw {
    /// Received own points `h_own * x`, grouped so that the marginal grid
    /// is row-major `[own][interferer]`.
    Discrete(Vec<Complex64>),
    /// Received own variance `h_own^2 * variance`.
    Gaussian(f64),
}

/// Everything the per-sample density evaluation needs, precomputed.
struct Prepared {
    own: OwnLaw,
    /// Received interferer points `h_int * d`; `[0]` when there is none
    /// or it is Gaussian.
    int_points: Vec<Complex64>,
    /// Effective noise variance: 1 plus any Gaussian interference power.
    sigma2: f64,
    /// Received grid (discrete own only), row-major over own then
    /// interferer indices.
    grid: Vec<Complex64>,
}

impl Prepared {
    fn new(cfg: &ChannelConfig, own: &InputSpec, interferer: Option<&InputSpec>) -> Result<Self, Error> {
        validate_roles(own, interferer)?;
        let h_own = cfg.gain_of_block(own.role);
        let p_own = cfg.power_of_block(own.role);
        check_power(&own.kind, p_own, "own input")?;

        let mut sigma2 = 1.0;
        let mut int_points = vec![Complex64::new(0.0, 0.0)];
        if let Some(int) = interferer {
            let h_int = cfg.gain_of_block(int.role);
            let p_int = cfg.power_of_block(int.role);
            check_power(&int.kind, p_int, "interferer")?;
            match &int.kind {
                InputKind::Discrete(c) => {
                    int_points = c.points().iter().map(|d| h_int * d).collect();
                }
                InputKind::Gaussian { variance } => {
                    sigma2 += h_int * h_int * variance;
                }
            }
        }

        let own_law = match &own.kind {
            InputKind::Discrete(c) => OwnLaw::Discrete(c.points().iter().map(|x| h_own * x).collect()),
            InputKind::Gaussian { variance } => {
                if !(*variance > 0.0) {
                    return Err(Error::Domain(format!(
                        "gaussian input variance must be positive, got {variance}"
                    )));
                }
                OwnLaw::Gaussian(h_own * h_own * variance)
            }
        };

        let grid = match &own_law {
            OwnLaw::Discrete(own_pts) => {
                let grid: Vec<Complex64> = own_pts
                    .iter()
                    .flat_map(|&x| int_points.iter().map(move |&d| x + d))
                    .collect();
                if grid.len() > 1 << 16 {
                    return Err(Error::Unsupported(format!(
                        "received grid of {} points is too large to average over",
                        grid.len()
                    )));
                }
                grid
            }
            OwnLaw::Gaussian(_) => Vec::new(),
        };

        Ok(Prepared { own: own_law, int_points, sigma2, grid })
    }

    /// Density in bits for a received `y`; `own_idx` is the transmitted
    /// own point for discrete laws, `x` the transmitted value for
    /// Gaussian laws.
    fn density_bits(&self, y: Complex64, own_idx: usize, x: Complex64, args: &mut Vec<f64>) -> f64 {
        match &self.own {
            OwnLaw::Discrete(_) => {
                let mi_count = self.int_points.len();
                args.clear();
                let mut amax = f64::NEG_INFINITY;
                for r in &self.grid {
                    let a = -(y - r).norm_sqr() / self.sigma2;
                    if a > amax {
                        amax = a;
                    }
                    args.push(a);
                }
                let cut = amax - LSE_CUTOFF;
                let mut den = 0.0;
                for &a in args.iter() {
                    if a >= cut {
                        den += (a - amax).exp();
                    }
                }
                // The numerator is stabilized by its own row maximum so the
                // density stays accurate even when the conditioned-on symbol
                // is deep in the tail of the received sample.
                let row = &args[own_idx * mi_count..(own_idx + 1) * mi_count];
                let row_max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let row_cut = row_max - LSE_CUTOFF;
                let mut num = 0.0;
                for &a in row {
                    if a >= row_cut {
                        num += (a - row_max).exp();
                    }
                }
                let mo = self.grid.len() / mi_count;
                ((mo as f64).ln() + row_max + num.ln() - amax - den.ln())
                    / std::f64::consts::LN_2
            }
            OwnLaw::Gaussian(var_recv) => {
                let sigma_y2 = self.sigma2 + var_recv;
                let num = ln_sum_exp_over(&self.int_points, y - x, self.sigma2);
                let den = ln_sum_exp_over(&self.int_points, y, sigma_y2);
                (num - den + (sigma_y2 / self.sigma2).ln()) / std::f64::consts::LN_2
            }
        }
    }
}

fn ln_sum_exp_over(points: &[Complex64], center: Complex64, sigma2: f64) -> f64 {
    if points.len() == 1 {
        return -(center - points[0]).norm_sqr() / sigma2;
    }
    let mut amax = f64::NEG_INFINITY;
    let mut args = Vec::with_capacity(points.len());
    for d in points {
        let a = -(center - d).norm_sqr() / sigma2;
        if a > amax {
            amax = a;
        }
        args.push(a);
    }
    amax + args.iter().map(|&a| (a - amax).exp()).sum::<f64>().ln()
}

fn validate_roles(own: &InputSpec, interferer: Option<&InputSpec>) -> Result<(), Error> {
    match (own.role, interferer.map(|i| i.role)) {
        (_, None) => Ok(()),
        (BlockRole::User1, Some(BlockRole::User2Interfered))
        | (BlockRole::User2Interfered, Some(BlockRole::User1)) => Ok(()),
        (own_role, Some(int_role)) => Err(Error::Config(format!(
            "{own_role:?} cannot be interfered by {int_role:?}; only the two sub-blocks that \
             overlap in time interfere"
        ))),
    }
}

fn check_power(kind: &InputKind, budget: f64, what: &str) -> Result<(), Error> {
    let energy = match kind {
        InputKind::Discrete(c) => c.mean_energy(),
        InputKind::Gaussian { variance } => *variance,
    };
    if energy > budget * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::Domain(format!(
            "{what} energy {energy} exceeds its power budget {budget}"
        )));
    }
    Ok(())
}

impl ChannelConfig {
    fn gain_of_block(&self, role: BlockRole) -> f64 {
        if role.user_is_1() {
            self.h1
        } else {
            self.h2
        }
    }

    fn power_of_block(&self, role: BlockRole) -> f64 {
        if role.user_is_1() {
            self.p1
        } else {
            self.p2
        }
    }
}

/// Raw power sums of one chunk of density samples.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    s1: f64,
    s2: f64,
    s3: f64,
    s4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let x2 = x * x;
        self.s1 += x;
        self.s2 += x2;
        self.s3 += x2 * x;
        self.s4 += x2 * x2;
    }

    fn merge(mut self, other: Moments) -> Moments {
        self.n += other.n;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s3 += other.s3;
        self.s4 += other.s4;
        self
    }

    fn finalize(self) -> MiDispersion {
        let n = self.n as f64;
        let mean = self.s1 / n;
        let var_pop = (self.s2 / n - mean * mean).max(0.0);
        let dispersion = var_pop * n / (n - 1.0);
        // Fourth central moment from the raw sums; the standard error of a
        // sample variance is sqrt((m4 - var^2) / n).
        let m4 = (self.s4 - 4.0 * mean * self.s3 + 6.0 * mean * mean * self.s2
            - 4.0 * mean * mean * mean * self.s1
            + n * mean * mean * mean * mean)
            / n;
        MiDispersion {
            mi: mean,
            dispersion,
            std_error: (var_pop / n).sqrt(),
            std_error_dispersion: ((m4 - var_pop * var_pop).max(0.0) / n).sqrt(),
            samples: self.n,
        }
    }
}

/// Estimates the mean and variance of the information density of one
/// sub-block by seeded Monte Carlo.
///
/// The result is deterministic in `(cfg, inputs, samples, seed)`; rayon
/// workers only change how chunks are scheduled, never what they compute
/// or the order their sums are combined in.
pub fn estimate_mi_dispersion(
    cfg: &ChannelConfig,
    own: &InputSpec,
    interferer: Option<&InputSpec>,
    samples: u64,
    seed: u64,
) -> Result<MiDispersion, Error> {
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    // A single-point block carries no information; the density is
    // identically zero, so skip the sampling.
    if let InputKind::Discrete(c) = &own.kind {
        if c.cardinality() == 1 {
            validate_roles(own, interferer)?;
            return Ok(MiDispersion::exact_zero(samples));
        }
    }
    let prep = Prepared::new(cfg, own, interferer)?;

    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            let mut rng = chunk_rng(seed, c);
            let mut acc = Moments::default();
            let mut args = Vec::new();
            let noise_scale = (prep.sigma2 / 2.0).sqrt();
            for _ in 0..count {
                // Draw own symbol, interferer symbol, then noise, in a
                // fixed order.
                let (own_idx, x) = match &prep.own {
                    OwnLaw::Discrete(pts) => {
                        let i = rng.random_range(0..pts.len());
                        (i, pts[i])
                    }
                    OwnLaw::Gaussian(var_recv) => {
                        let g = (var_recv / 2.0).sqrt();
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        (0, Complex64::new(g * re, g * im))
                    }
                };
                let d = if prep.int_points.len() > 1 {
                    prep.int_points[rng.random_range(0..prep.int_points.len())]
                } else {
                    prep.int_points[0]
                };
                let zr: f64 = rng.sample(StandardNormal);
                let zi: f64 = rng.sample(StandardNormal);
                let y = x + d + Complex64::new(noise_scale * zr, noise_scale * zi);
                acc.push(prep.density_bits(y, own_idx, x, &mut args));
            }
            acc
        })
        .collect();

    Ok(partials.into_iter().fold(Moments::default(), Moments::merge).finalize())
}
