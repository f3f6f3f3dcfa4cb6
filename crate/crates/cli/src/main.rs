//! `kflats`: command-line front end for kflats-core.
//!
//! Exit status is 0 for a positive answer, 1 for a negative one and 2 for
//! usage or input errors.

mod experiment;
mod input;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use kflats_core::convexpos::{
    hyperplanes_convex_position, lift_cell_certificate, lines_convex_position_2d, lines_general_position, points_certificate,
    points_convex_position, verify_certificate, ConvexityCertificate, HyperplaneVerdict,
};
use kflats_core::eskit::extract_convex_flats;
use kflats_core::geom::rat;
use kflats_core::grassmann::{build_eps_net_with, EpsNet, NetConfig};
use kflats_core::nonconvex::{
    check_refutation, octa_family_with, refute_cone_with, section_to_affine, verify_octa_nonconvex, Cone, OctaFamily, RefuteOptions,
};
use kflats_core::Error;

use experiment::{ExperimentSpec, Mode};

#[derive(Parser)]
#[command(name = "kflats", version, about = "Convex position of affine flats")]
#[command(after_help = "Resource caps: KFLATS_MAX_NET_SIZE (net elements), KFLATS_MAX_LP_PIVOTS (simplex pivots).")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Perturbed octahedron arrangement, 2 <= d <= 4.
    GenOcta {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturbation bound, as a rational.
        #[arg(long, default_value = "1/1000")]
        magnitude: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exact proof that an octahedron family is not in convex position.
    VerifyOcta {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Are the points vertices of their convex hull?
    CheckPoints {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Are the planar lines in convex position? Exact.
    CheckLines {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Searches a random planar section for a cell bounded by every hyperplane.
    CheckHyperplanes {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exact check of a convexity certificate.
    VerifyCert { file: PathBuf },
    /// Selects n flats in convex position, with a certificate.
    Extract {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attempts, with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 4)]
        retries: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Audited eps-net of Gr(k, d).
    Net {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        /// Decimal or rational, e.g. 1/40.
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        stall: Option<usize>,
        #[arg(long)]
        audit_samples: Option<usize>,
        #[arg(long)]
        packing: Option<f64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Shows that some net element cannot meet the cone in a face.
    RefuteCone {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        net: PathBuf,
        /// Skip the net scan and go straight to the explicit construction.
        #[arg(long)]
        no_scan: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Sections a net of linear subspaces by x_d = 1.
    Section {
        #[arg(long)]
        net: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Seeded random trials, as CSV.
    Experiment {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        d: usize,
        /// Flat dimension; defaults to 0 for points, 1 for lines, d - 1 for hyperplanes.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.verb) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn parse_eps(s: &str) -> Result<f64> {
    let eps = match s.parse::<f64>() {
        Ok(x) => x,
        Err(_) => rat::to_f64(&rat::parse(s)?),
    };
    if !(eps > 0.0 && eps.is_finite()) {
        bail!("eps must be positive, got {s}");
    }
    Ok(eps)
}

fn run(verb: Verb) -> Result<bool> {
    match verb {
        Verb::GenOcta { d, seed, magnitude, out } => {
            let fam = octa_family_with(d, seed, &rat::parse(&magnitude)?)?;
            emit(&fam, out.as_deref())?;
            Ok(true)
        }
        Verb::VerifyOcta { file, out } => {
            let fam: OctaFamily = input::read(&file)?;
            let proof = verify_octa_nonconvex(&fam)?;
            emit(&proof, out.as_deref())?;
            Ok(proof.certified)
        }
        Verb::CheckPoints { file, out } => {
            let pts = input::points(&file)?;
            if !points_convex_position(&pts)? {
                emit(&json!({"format": 1, "convex": false}), out.as_deref())?;
                return Ok(false);
            }
            let certificate = match points_certificate(&pts) {
                Ok(c) => c,
                Err(Error::Degenerate(msg)) => {
                    eprintln!("no certificate: {msg}");
                    None
                }
                Err(e) => return Err(e.into()),
            };
            emit(&json!({"format": 1, "convex": true, "certificate": certificate}), out.as_deref())?;
            Ok(true)
        }
        Verb::CheckLines { file, out } => {
            let lines = input::hyperplanes(&file)?;
            if let Some(h) = lines.iter().find(|h| h.dim() != 2) {
                bail!("check-lines expects lines in the plane, found dimension {}", h.dim());
            }
            lines_general_position(&lines)?;
            let verdict = lines_convex_position_2d(&lines)?;
            let certificate = verdict.witness.as_ref().map(|s| lift_cell_certificate(&lines, s)).transpose()?;
            emit(&json!({"format": 1, "convex": verdict.convex, "witness": verdict.witness, "certificate": certificate}), out.as_deref())?;
            Ok(verdict.convex)
        }
        Verb::CheckHyperplanes { file, seed, out } => {
            let hps = input::hyperplanes(&file)?;
            let verdict = hyperplanes_convex_position(&hps, seed)?;
            let value = match &verdict {
                HyperplaneVerdict::Convex { certificate, witness, section } => {
                    json!({"format": 1, "convex": true, "witness": witness, "section": section, "certificate": certificate})
                }
                HyperplaneVerdict::NotFound { section } => {
                    if section.is_some() {
                        eprintln!("no cell bounded by every hyperplane in the sampled section; this is not a proof");
                    }
                    json!({"format": 1, "convex": false, "section": section})
                }
            };
            emit(&value, out.as_deref())?;
            Ok(verdict.is_convex())
        }
        Verb::VerifyCert { file } => {
            let cert: ConvexityCertificate =
                serde_json::from_value(input::certificate(&file)?).with_context(|| format!("decoding {}", file.display()))?;
            match verify_certificate(&cert) {
                Ok(()) => {
                    println!("certificate verified: {} flats", cert.flats.len());
                    Ok(true)
                }
                Err(v) => {
                    println!("certificate rejected: {v}");
                    Ok(false)
                }
            }
        }
        Verb::Extract { file, n, seed, retries, out } => {
            let flats = input::flats(&file)?;
            let mut last = None;
            for attempt in 0..retries.max(1) {
                match extract_convex_flats(&flats, n, seed.wrapping_add(attempt)) {
                    Ok(r) => {
                        emit(&r, out.as_deref())?;
                        return Ok(true);
                    }
                    Err(e @ (Error::Extraction(_) | Error::GeneralPosition(_) | Error::RetriesExhausted(..))) => last = Some(e),
                    Err(e) => return Err(e.into()),
                }
            }
            eprintln!("no extraction: {}", last.expect("at least one attempt"));
            Ok(false)
        }
        Verb::Net { d, k, eps, seed, stall, audit_samples, packing, out } => {
            let mut cfg = NetConfig::default();
            cfg.stall = stall.unwrap_or(cfg.stall);
            cfg.audit_samples = audit_samples.unwrap_or(cfg.audit_samples);
            cfg.packing = packing.unwrap_or(cfg.packing);
            let net = build_eps_net_with(d, k, parse_eps(&eps)?, seed, &cfg)?;
            eprintln!("{} elements, audited gap {:.6} over {} samples", net.len(), net.audit.max_observed_gap, net.audit.samples);
            emit(&net, out.as_deref())?;
            Ok(true)
        }
        Verb::RefuteCone { cone, net, no_scan, out } => {
            let cone: Cone = input::read(&cone)?;
            let net: EpsNet = input::read(&net)?;
            match refute_cone_with(&cone, &net, &RefuteOptions { scan_first: !no_scan }) {
                Ok(r) => {
                    if !check_refutation(&cone, &net, &r)? {
                        bail!("refutation failed its own check");
                    }
                    emit(&r, out.as_deref())?;
                    Ok(true)
                }
                Err(Error::Refutation(msg)) => {
                    eprintln!("no refutation: {msg}");
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Verb::Section { net, out } => {
            let net: EpsNet = input::read(&net)?;
            let section = section_to_affine(&net)?;
            emit(&section, out.as_deref())?;
            Ok(true)
        }
        Verb::Experiment { mode, d, k, n, big_n, trials, seed, out } => {
            let k = k.unwrap_or(match mode {
                Mode::Hyperplanes => d.saturating_sub(1),
                Mode::Lines => 1,
                _ => 0,
            });
            let spec = ExperimentSpec { mode, d, k, n, big_n, trials, seed };
            let rows = experiment::run_experiment(&spec)?;
            match out {
                Some(p) => experiment::write_csv(&rows, fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?)?,
                None => experiment::write_csv(&rows, io::stdout().lock())?,
            }
            Ok(true)
        }
    }
}
