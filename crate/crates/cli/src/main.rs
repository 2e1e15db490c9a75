//! `mactin`: rate regions for a two-user uplink where a short urgent
//! block and a longer block overlap, each decoded with the other treated
//! as noise.
//!
//! Subcommands: `region` sweeps rate/dispersion points for the requested
//! schemes and writes a CSV; `detmodel` prints the bit-level model of a
//! design point; `constellation` builds and checks the transmit
//! constellations; `estimate` measures one sub-block's mutual information
//! and dispersion. All randomness flows from `--seed`; the environment
//! variable `MACTIN_THREADS` caps the worker count without changing any
//! result.

mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use mactin_core::constellation::{build_design, min_distance_check, SignalingDesign};
use mactin_core::density::{estimate_mi_dispersion, BlockRole, InputSpec};
use mactin_core::detmodel::{build_generators, det_tin_mi, DetModelParams, UserRole};
use mactin_core::error::Error;
use mactin_core::rng::substream;
use mactin_core::sweep::{emit_csv, run_sweep};
use mactin_core::ChannelConfig;

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "mactin",
    version,
    about = "Finite-blocklength rate regions for a two-user uplink with \
             discrete signaling and interference-as-noise decoding"
)]
struct Cli {
    /// Flat key=value config file; flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Root seed for all Monte Carlo estimates
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte Carlo samples per sub-block estimate
    #[arg(long, global = true)]
    samples: Option<u64>,

    /// Output file (CSV for `region` and `constellation`)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Comma-separated scheme tags to evaluate
    #[arg(long, global = true, value_name = "LIST")]
    schemes: Option<String>,

    /// Weak-band scale exponent: exact-log or ceiled
    #[arg(long, global = true, value_name = "MODE")]
    exponent_mode: Option<String>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep rate and dispersion points for every requested scheme and
    /// write them as CSV
    Region,
    /// Print the bit-level model of a design point: generator matrices
    /// and the exact per-block mutual information triple
    Detmodel {
        /// Message sizes as m1,m21,m22
        #[arg(long, value_name = "TUPLE")]
        tuple: String,
        /// Bit levels as n1,n2; derived from the configured SNRs when
        /// omitted
        #[arg(long, value_name = "LEVELS")]
        levels: Option<String>,
    },
    /// Build the transmit constellations of a design point, check the
    /// received minimum distance, optionally export the points
    Constellation {
        /// Message sizes as m1,m21,m22
        #[arg(long, value_name = "TUPLE")]
        tuple: String,
    },
    /// Estimate mutual information and dispersion of one sub-block
    Estimate {
        /// Message sizes as m1,m21,m22
        #[arg(long, value_name = "TUPLE")]
        tuple: String,
        /// Which sub-block: 1, 21 or 22
        #[arg(long, value_name = "BLOCK")]
        block: String,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => 2,
                _ => 1,
            }
        }
    });
}

fn run(cli: Cli) -> Result<(), Error> {
    install_thread_cap()?;

    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg = config::load_config_file(path, cfg)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = cli.samples {
        cfg.samples = samples;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(schemes) = &cli.schemes {
        cfg.schemes = config::parse_schemes(schemes)?;
    }
    if let Some(mode) = &cli.exponent_mode {
        cfg.exponent_mode = config::parse_exponent_mode(mode)?;
    }

    match &cli.cmd {
        Cmd::Region => cmd_region(&cfg),
        Cmd::Detmodel { tuple, levels } => cmd_detmodel(&cfg, tuple, levels.as_deref()),
        Cmd::Constellation { tuple } => cmd_constellation(&cfg, tuple),
        Cmd::Estimate { tuple, block } => cmd_estimate(&cfg, tuple, block),
    }
}

/// Applies `MACTIN_THREADS` before any rayon work happens.
fn install_thread_cap() -> Result<(), Error> {
    let Ok(raw) = std::env::var("MACTIN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            Error::Config(format!("MACTIN_THREADS must be a positive integer, got {raw:?}"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot size the worker pool: {e}")))
}

fn cmd_region(cfg: &RunConfig) -> Result<(), Error> {
    let spec = cfg.sweep_spec()?;
    let outcome = run_sweep(&spec)?;
    for entry in &outcome.errors {
        match entry.tuple {
            Some(t) => eprintln!("warning: {} {t} skipped: {}", entry.scheme, entry.error),
            None => eprintln!("warning: {} skipped: {}", entry.scheme, entry.error),
        }
    }

    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("region.csv"));
    emit_csv(&outcome.points, &out)?;
    println!("wrote {} points to {}", outcome.points.len(), out.display());

    for &scheme in &spec.schemes {
        let pts: Vec<_> = outcome.points.iter().filter(|p| p.scheme == scheme).collect();
        if pts.is_empty() {
            continue;
        }
        let max_r1 = pts.iter().map(|p| p.r1).fold(f64::NEG_INFINITY, f64::max);
        let max_r2 = pts.iter().map(|p| p.r2).fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{scheme}: {} point{}, max r1 {max_r1:.6}, max r2 {max_r2:.6}",
            pts.len(),
            if pts.len() == 1 { "" } else { "s" },
        );
    }
    Ok(())
}

fn cmd_detmodel(cfg: &RunConfig, tuple: &str, levels: Option<&str>) -> Result<(), Error> {
    let tuple = config::parse_tuple(tuple)?;
    let (n1, n2) = match levels {
        Some(s) => {
            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::Config(format!("expected n1,n2 for --levels, got {s:?}")));
            }
            let parse = |p: &str| -> Result<u32, Error> {
                p.parse().map_err(|e| Error::Config(format!("cannot parse level {p:?}: {e}")))
            };
            (parse(parts[0])?, parse(parts[1])?)
        }
        None => {
            let ch = cfg.channel()?;
            (
                mactin_core::detmodel::bit_levels(ch.snr1())?,
                mactin_core::detmodel::bit_levels(ch.snr2())?,
            )
        }
    };
    let strong = if n2 > n1 { UserRole::User2 } else { UserRole::User1 };
    let p = DetModelParams::new(n1, n2, tuple, strong)?;
    let (g1, g21, g22) = build_generators(&p);
    let (i1, i21, i22) = det_tin_mi(&p);

    println!("bit levels: n1={n1} n2={n2} (strong user {})", if n2 > n1 { 2 } else { 1 });
    println!("tuple: {tuple}");
    println!(
        "strong user's band split: {} high bits above the weak band, {} low bits below",
        p.strong_high_bits, p.strong_low_bits
    );
    for (name, g) in [("G1", &g1), ("G21", &g21), ("G22", &g22)] {
        println!("{name} ({}x{}):", g.row_count(), g.col_count());
        if g.col_count() == 0 {
            println!("  (no message bits)");
        } else {
            print!("{g}");
        }
    }
    println!("per-block mutual information: I1={i1} I21={i21} I22={i22} bits/symbol");
    Ok(())
}

fn design_for(cfg: &RunConfig, tuple: &str) -> Result<(ChannelConfig, SignalingDesign), Error> {
    let tuple = config::parse_tuple(tuple)?;
    let ch = cfg.channel()?;
    let p = ch.params_for(tuple)?;
    let design = build_design(&ch, &p, cfg.exponent_mode)?;
    Ok((ch, design))
}

fn cmd_constellation(cfg: &RunConfig, tuple: &str) -> Result<(), Error> {
    let (ch, design) = design_for(cfg, tuple)?;
    let p = &design.params;
    println!(
        "design point {} at receive SNRs {:.2}/{:.2} dB (strong user {})",
        p.tuple(),
        10.0 * ch.snr1().log10(),
        10.0 * ch.snr2().log10(),
        match p.strong_user {
            UserRole::User1 => 1,
            UserRole::User2 => 2,
        }
    );
    for (name, c, budget) in [
        ("lambda1 (user 1)", &design.lambda1, ch.p1),
        ("lambda21 (user 2, interfered block)", &design.lambda21, ch.p2),
        ("lambda22 (user 2, clean block)", &design.lambda22, ch.p2),
    ] {
        println!(
            "{name}: {} points, mean energy {:.6} of budget {budget}, d_min {:.6}",
            c.cardinality(),
            c.mean_energy(),
            c.min_distance(),
        );
    }
    let coeffs = &design.coeffs;
    println!(
        "unit-band amplitudes: strong_high {:.6}, strong_low {:.6}, weak {:.6}, clean {:.6}",
        coeffs.strong_high, coeffs.strong_low, coeffs.weak, coeffs.clean
    );

    let received = design.received_superposition(&ch);
    let d_min = min_distance_check(&design, &ch);
    let threshold = 3f64.sqrt() - 1e-6;
    println!(
        "received superposition: {} points, d_min {:.6} (threshold sqrt(3)): {}",
        received.cardinality(),
        d_min,
        if d_min >= threshold { "OK" } else { "BELOW" },
    );

    if let Some(out) = &cfg.out {
        let mut csv = String::from("set,re,im\n");
        for (name, c) in [
            ("lambda1", &design.lambda1),
            ("lambda21", &design.lambda21),
            ("lambda22", &design.lambda22),
            ("received", &received),
        ] {
            for pt in c.points() {
                csv.push_str(&format!("{name},{:.11e},{:.11e}\n", pt.re, pt.im));
            }
        }
        std::fs::write(out, csv).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
        println!("wrote constellation points to {}", out.display());
    }
    Ok(())
}

fn cmd_estimate(cfg: &RunConfig, tuple: &str, block: &str) -> Result<(), Error> {
    let (ch, design) = design_for(cfg, tuple)?;
    let (own, interferer) = match block {
        "1" => (
            InputSpec::discrete(design.lambda1.clone(), BlockRole::User1),
            Some(InputSpec::discrete(design.lambda21.clone(), BlockRole::User2Interfered)),
        ),
        "21" => (
            InputSpec::discrete(design.lambda21.clone(), BlockRole::User2Interfered),
            Some(InputSpec::discrete(design.lambda1.clone(), BlockRole::User1)),
        ),
        "22" => (InputSpec::discrete(design.lambda22.clone(), BlockRole::User2Clean), None),
        other => {
            return Err(Error::Config(format!("unknown sub-block {other:?}; expected 1, 21 or 22")))
        }
    };

    let est = estimate_mi_dispersion(
        &ch,
        &own,
        interferer.as_ref(),
        cfg.samples,
        substream(cfg.seed, 0),
    )?;
    println!("design point {}, sub-block {block}", design.params.tuple());
    println!("samples {} (seed {})", est.samples, cfg.seed);
    println!("mi = {:.6} bits (stderr {:.2e})", est.mi, est.std_error);
    println!(
        "dispersion = {:.6} bits^2 (stderr {:.2e})",
        est.dispersion, est.std_error_dispersion
    );
    Ok(())
}
