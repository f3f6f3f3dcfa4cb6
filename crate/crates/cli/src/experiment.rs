//! Seeded random trials of the extraction and decision procedures.

use std::io::Write;

use anyhow::{bail, Result};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use kflats_core::combin::Combinations;
use kflats_core::convexpos::{
    hyperplanes_general_position, lift_cell_certificate, lines_convex_position_2d, lines_general_position, points_certificate,
    verify_certificate,
};
use kflats_core::eskit::{check_no_three_collinear, extract_convex_flats, hyperplane_pipeline, largest_convex_subset_2d, SUBSET_CAP};
use kflats_core::geom::{Flat, Hyperplane, RVec};
use kflats_core::{random, Error};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Points,
    Lines,
    Hyperplanes,
    Flats,
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub big_n: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Coordinate range of random instances.
const RANGE: i64 = 1000;
const FLAT_RANGE: i64 = 20;
const MAX_LINES: usize = 16;

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let ExperimentSpec { mode, d, k, n, big_n, trials, .. } = *self;
        if trials == 0 {
            bail!("trials must be positive");
        }
        if n == 0 || big_n < n {
            bail!("need 1 <= n <= N, got n = {n}, N = {big_n}");
        }
        match mode {
            Mode::Points | Mode::Lines if d != 2 => bail!("{mode:?} mode is planar; use --d 2"),
            Mode::Lines if big_n > MAX_LINES => bail!("lines mode supports N <= {MAX_LINES}"),
            Mode::Hyperplanes if d < 2 || big_n < d => bail!("hyperplanes mode needs d >= 2 and N >= d"),
            Mode::Hyperplanes if k != d - 1 => bail!("hyperplanes have k = d - 1"),
            Mode::Flats if k >= d => bail!("flats need k < d"),
            Mode::Flats | Mode::Hyperplanes if n < 2 => bail!("n must be at least 2"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub trial: usize,
    pub seed: u64,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub n: usize,
    pub found_size: usize,
    pub verified: bool,
}

/// One row per trial, in trial order. Trial `t` uses seed `seed + t`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = spec.seed.wrapping_add(trial as u64);
            let (found_size, verified) = run_trial(spec, seed)?;
            Ok(Row { trial, seed, big_n: spec.big_n, n: spec.n, found_size, verified })
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn run_trial(spec: &ExperimentSpec, seed: u64) -> Result<(usize, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d, big_n) = (spec.d, spec.big_n);
    Ok(match spec.mode {
        Mode::Points => {
            let pts = loop {
                let pts: Vec<RVec> = (0..big_n).map(|_| random::int_vec(&mut rng, 2, RANGE)).collect();
                if check_no_three_collinear(&pts).is_ok() {
                    break pts;
                }
            };
            let chosen = largest_convex_subset_2d(&pts)?;
            let sub: Vec<RVec> = chosen.iter().map(|&i| pts[i].clone()).collect();
            let verified = sub.len() < 3 || points_certificate(&sub)?.is_some();
            (sub.len(), verified)
        }
        Mode::Lines => {
            let lines = loop {
                let ls: Vec<Hyperplane> = (0..big_n).map(|_| random::int_hyperplane(&mut rng, 2, RANGE)).collect();
                if lines_general_position(&ls).is_ok() {
                    break ls;
                }
            };
            largest_convex_lines(&lines)?
        }
        Mode::Hyperplanes => {
            let hps = loop {
                let hs: Vec<Hyperplane> = (0..big_n).map(|_| random::int_hyperplane(&mut rng, d, FLAT_RANGE)).collect();
                if hyperplanes_general_position(&hs).is_ok() {
                    break hs;
                }
            };
            settle(hyperplane_pipeline(&hps, spec.n, seed).map(|r| (r.chosen_indices.len(), verify_certificate(&r.certificate).is_ok())))?
        }
        Mode::Flats => {
            let flats: Vec<Flat> = (0..big_n).map(|_| random::int_flat(&mut rng, d, spec.k, FLAT_RANGE)).collect();
            settle(extract_convex_flats(&flats, spec.n, seed).map(|r| (r.chosen_indices.len(), verify_certificate(&r.certificate).is_ok())))?
        }
    })
}

/// A failed search is a row with nothing found; other errors abort.
fn settle(r: kflats_core::Result<(usize, bool)>) -> Result<(usize, bool)> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Extraction(_) | Error::GeneralPosition(_) | Error::RetriesExhausted(..)) => Ok((0, false)),
        Err(e) => Err(e.into()),
    }
}

/// Largest subset in convex position, by size then first in subset order.
fn largest_convex_lines(lines: &[Hyperplane]) -> Result<(usize, bool)> {
    let mut tried = 0;
    for m in (2..=lines.len()).rev() {
        for subset in Combinations::new(lines.len(), m) {
            tried += 1;
            if tried > SUBSET_CAP {
                bail!("more than {SUBSET_CAP} subsets searched");
            }
            let sub: Vec<Hyperplane> = subset.iter().map(|&i| lines[i].clone()).collect();
            if let Some(sigma) = lines_convex_position_2d(&sub)?.witness {
                let cert = lift_cell_certificate(&sub, &sigma)?;
                return Ok((m, verify_certificate(&cert).is_ok()));
            }
        }
    }
    Ok((lines.len().min(1), true))
}
