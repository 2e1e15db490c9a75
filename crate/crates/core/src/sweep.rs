//! The region sweep: evaluates the proposed design points and the
//! Gaussian baselines on one shared channel and exports the results.

use std::fmt::Write as _;
use std::path::Path;

use crate::channel::ChannelConfig;
use crate::constellation::{build_design, ExponentMode};
use crate::density::{estimate_mi_dispersion, BlockRole, InputSpec};
use crate::detmodel::ModTuple;
use crate::error::Error;
use crate::rates::{
    assemble_point, benchmark_gaussian_sic, benchmark_gaussian_tin, benchmark_orthogonal,
    RatePoint, Scheme,
};
use crate::rng::substream;

/// Everything one sweep run needs.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub cfg: ChannelConfig,
    /// Message-size tuples for the proposed scheme, in output order.
    pub tuples: Vec<ModTuple>,
    /// Monte Carlo samples per sub-block estimate.
    pub samples: u64,
    /// Root seed; every estimate derives its own substream from it.
    pub seed: u64,
    /// Schemes to evaluate, in output order.
    pub schemes: Vec<Scheme>,
    pub exponent_mode: ExponentMode,
    /// Points sampled on the perfect-cancellation mixture edge,
    /// corners included.
    pub sic_grid: usize,
}

impl SweepSpec {
    /// The experiment this crate ships as its reference demonstration:
    /// receive SNRs of 12 and 24 dB, error targets 1e-6 and 1e-5,
    /// blocklengths 150 and 200, six design points walking the admissible
    /// region from user 1 silent to user 2 silent, all four schemes.
    pub fn reference_experiment() -> SweepSpec {
        SweepSpec {
            cfg: ChannelConfig::from_snr_db(12.0, 24.0, 150, 200, 1e-6, 1e-5)
                .expect("reference channel parameters are valid"),
            tuples: vec![
                ModTuple::new(0, 8, 8),
                ModTuple::new(2, 6, 8),
                ModTuple::new(4, 4, 8),
                ModTuple::new(4, 2, 8),
                ModTuple::new(4, 0, 8),
                ModTuple::new(4, 0, 0),
            ],
            samples: 1_000_000,
            seed: 1,
            schemes: Scheme::ALL.to_vec(),
            exponent_mode: ExponentMode::ExactLog,
            sic_grid: 33,
        }
    }
}

/// A design point that could not be evaluated; the sweep carries on.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntryError {
    pub scheme: Scheme,
    pub tuple: Option<ModTuple>,
    pub error: Error,
}

/// Evaluated points in output order, plus whatever failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub points: Vec<RatePoint>,
    pub errors: Vec<SweepEntryError>,
}

/// Evaluates one proposed-scheme design point.
///
/// The three sub-block densities are estimated against the actual faded
/// interference constellation of the other user, with substreams 0..2 of
/// `seed` so the result is deterministic.
pub fn proposed_point(
    cfg: &ChannelConfig,
    tuple: ModTuple,
    mode: ExponentMode,
    samples: u64,
    seed: u64,
) -> Result<RatePoint, Error> {
    let params = cfg.params_for(tuple)?;
    let design = build_design(cfg, &params, mode)?;

    let own1 = InputSpec::discrete(design.lambda1.clone(), BlockRole::User1);
    let own21 = InputSpec::discrete(design.lambda21.clone(), BlockRole::User2Interfered);
    let own22 = InputSpec::discrete(design.lambda22.clone(), BlockRole::User2Clean);

    let e1 = estimate_mi_dispersion(cfg, &own1, Some(&own21), samples, substream(seed, 0))?;
    let e21 = estimate_mi_dispersion(cfg, &own21, Some(&own1), samples, substream(seed, 1))?;
    let e22 = estimate_mi_dispersion(cfg, &own22, None, samples, substream(seed, 2))?;

    assemble_point(Scheme::ProposedQamTin, Some(tuple), cfg, &e1, &e21, &e22, seed)
}

/// Runs every requested scheme. Infeasible or otherwise unbuildable
/// design points become error entries; the sweep continues. Points come
/// back in scheme order, proposed-scheme points in tuple order.
///
/// Points are evaluated one after another: the Monte Carlo estimator
/// inside each point already spreads its sample chunks across the rayon
/// pool, so point-level parallelism would add nothing but scheduling
/// noise, and the chunked reduction keeps results independent of the
/// worker count either way.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome, Error> {
    if spec.samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {}", spec.samples)));
    }
    if spec.sic_grid < 2 {
        return Err(Error::Domain(format!(
            "the mixture grid needs at least 2 points, got {}",
            spec.sic_grid
        )));
    }

    let mut points = Vec::new();
    let mut errors = Vec::new();
    // Fixed seed lanes per scheme, so adding or dropping a scheme does not
    // move any other scheme's substreams.
    let lane = |k: u64| substream(spec.seed, k);

    for &scheme in &spec.schemes {
        match scheme {
            Scheme::ProposedQamTin => {
                for (i, &tuple) in spec.tuples.iter().enumerate() {
                    let seed = substream(lane(1), i as u64);
                    match proposed_point(&spec.cfg, tuple, spec.exponent_mode, spec.samples, seed)
                    {
                        Ok(mut p) => {
                            p.seed = spec.seed;
                            points.push(p);
                        }
                        Err(error) => {
                            errors.push(SweepEntryError { scheme, tuple: Some(tuple), error })
                        }
                    }
                }
            }
            Scheme::GaussianSic => {
                match benchmark_gaussian_sic(&spec.cfg, spec.samples, lane(2), spec.sic_grid) {
                    Ok(mut pts) => {
                        for p in &mut pts {
                            p.seed = spec.seed;
                        }
                        points.extend(pts);
                    }
                    Err(error) => errors.push(SweepEntryError { scheme, tuple: None, error }),
                }
            }
            Scheme::Orthogonal => {
                match benchmark_orthogonal(&spec.cfg, spec.samples, lane(3)) {
                    Ok(mut p) => {
                        p.seed = spec.seed;
                        points.push(p);
                    }
                    Err(error) => errors.push(SweepEntryError { scheme, tuple: None, error }),
                }
            }
            Scheme::GaussianTin => {
                match benchmark_gaussian_tin(&spec.cfg, spec.samples, lane(4)) {
                    Ok(mut pts) => {
                        for p in &mut pts {
                            p.seed = spec.seed;
                        }
                        points.extend(pts);
                    }
                    Err(error) => errors.push(SweepEntryError { scheme, tuple: None, error }),
                }
            }
        }
    }
    Ok(SweepOutcome { points, errors })
}

pub const CSV_HEADER: &str = "scheme,m1,m21,m22,r1,r2,mi1,mi21,mi22,v1,v21,v22,\
                              stderr_mi1,stderr_mi21,stderr_mi22,samples,seed";

/// Renders points to the CSV schema. Floating-point fields carry 12
/// significant digits; benchmark rows leave the tuple columns empty.
pub fn csv_string(points: &[RatePoint]) -> String {
    let mut out = String::with_capacity(64 + points.len() * 256);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        let (m1, m21, m22) = match p.tuple {
            Some(t) => (t.m1.to_string(), t.m21.to_string(), t.m22.to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        let f = |x: f64| format!("{x:.11e}");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.scheme.tag(),
            m1,
            m21,
            m22,
            f(p.r1),
            f(p.r2),
            f(p.mi1),
            f(p.mi21),
            f(p.mi22),
            f(p.v1),
            f(p.v21),
            f(p.v22),
            f(p.se_mi1),
            f(p.se_mi21),
            f(p.se_mi22),
            p.samples,
            p.seed,
        );
    }
    out
}

/// Writes [`csv_string`] to a file, wrapping failures with the path.
pub fn emit_csv(points: &[RatePoint], path: &Path) -> Result<(), Error> {
    std::fs::write(path, csv_string(points))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
