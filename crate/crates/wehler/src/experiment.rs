//! Multi-surface experiments: random surfaces per prime, censuses, averaged
//! curves and window checks.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use wehler_core::dynamics::PhaseSpace;
use wehler_core::random::{experiment_rng, random_surface_with, Degeneracy, DEFAULT_MAX_ATTEMPTS};
use wehler_core::stats::{area_error, average_curves, summarize, DistributionCurve, SurfaceSummary, ZVariant};
use wehler_core::{next_prime, FpSurface, PrimeField, SurfaceError};

use crate::report::{curve_csv, header, to_json, window_rows, windows_csv};

/// How many successive primes are tried after the listed one.
pub const MAX_PRIME_ADVANCES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub count: usize,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub mode: Degeneracy,
    pub variant: ZVariant,
    pub grid_step: f64,
    /// Worker threads; `None` uses the rayon default. Results do not depend
    /// on it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceFailure {
    pub index: u64,
    pub prime: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeReport {
    /// Prime from the configured list; surfaces record the prime they were
    /// actually drawn at.
    pub prime: u64,
    pub surfaces: Vec<SurfaceSummary>,
    pub failures: Vec<SurfaceFailure>,
    pub averaged_curve: Option<DistributionCurve>,
    /// Area error of the averaged curve.
    pub averaged_area_error: Option<f64>,
    /// Mean of the per-surface area errors.
    pub mean_area_error: Option<f64>,
    pub mean_symmetric_fraction: Option<f64>,
    pub windows_pass: bool,
    /// `(period, symmetric) -> cycles`, summed over surfaces.
    pub cycle_counts: Vec<(usize, bool, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub primes: Vec<PrimeReport>,
}

impl ExperimentReport {
    pub fn all_windows_pass(&self) -> bool {
        self.primes.iter().all(|p| p.windows_pass)
    }

    pub fn failure_count(&self) -> usize {
        self.primes.iter().map(|p| p.failures.len()).sum()
    }
}

/// Surface `index` for listed prime `p`, moving on to the next prime when
/// no acceptable surface is found at `p`.
pub fn experiment_surface(seed: u64, p: u64, index: u64, mode: Degeneracy) -> Result<FpSurface, SurfaceFailure> {
    let mut q = p;
    for _ in 0..=MAX_PRIME_ADVANCES {
        let field = PrimeField::new(q).map_err(|e| SurfaceFailure { index, prime: q, error: e.to_string() })?;
        let mut rng = experiment_rng(seed, q, index);
        match random_surface_with(field, &mut rng, mode, DEFAULT_MAX_ATTEMPTS) {
            Ok(s) => return Ok(s),
            Err(SurfaceError::ExhaustedAttempts(_)) => q = next_prime(q + 1),
            Err(e) => return Err(SurfaceFailure { index, prime: q, error: e.to_string() }),
        }
    }
    Err(SurfaceFailure { index, prime: q, error: "no acceptable surface at any tried prime".into() })
}

type Outcome = Result<(SurfaceSummary, DistributionCurve), SurfaceFailure>;

fn run_one(cfg: &ExperimentConfig, p: u64, index: u64) -> Outcome {
    let s = experiment_surface(cfg.seed, p, index, cfg.mode)?;
    let q = s.field().modulus();
    let fail = |e: String| SurfaceFailure { index, prime: q, error: e };
    let space = PhaseSpace::build(&s).map_err(|e| fail(e.to_string()))?;
    let (summary, _, curve) = summarize(&space, index, cfg.variant, cfg.grid_step).map_err(|e| fail(e.to_string()))?;
    Ok((summary, curve))
}

fn mean(xs: impl ExactSizeIterator<Item = f64>) -> Option<f64> {
    let n = xs.len();
    (n > 0).then(|| xs.sum::<f64>() / n as f64)
}

fn aggregate(p: u64, outcomes: Vec<Outcome>) -> PrimeReport {
    let mut surfaces = Vec::new();
    let mut curves = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok((s, c)) => {
                surfaces.push(s);
                curves.push(c);
            }
            Err(f) => failures.push(f),
        }
    }
    let averaged_curve = average_curves(&curves).ok();
    let averaged_area_error = averaged_curve.as_ref().and_then(|c| area_error(c).ok());
    let mut counts: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for s in &surfaces {
        for &(t, sym, n) in &s.cycle_counts {
            *counts.entry((t, sym)).or_default() += n;
        }
    }
    PrimeReport {
        prime: p,
        mean_area_error: mean(surfaces.iter().map(|s| s.area_error)),
        mean_symmetric_fraction: mean(surfaces.iter().map(|s| s.symmetric_mass_fraction)),
        windows_pass: surfaces.iter().all(|s| s.windows.all_pass()),
        cycle_counts: counts.into_iter().map(|((t, s), n)| (t, s, n)).collect(),
        surfaces,
        failures,
        averaged_curve,
        averaged_area_error,
    }
}

/// Deterministic in the configuration apart from `threads`, which only
/// changes the schedule.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cfg.threads {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().context("starting worker threads")?;
    let jobs: Vec<(u64, u64)> = cfg.primes.iter().flat_map(|&p| (0..cfg.count as u64).map(move |i| (p, i))).collect();
    let outcomes: Vec<Outcome> = pool.install(|| jobs.par_iter().map(|&(p, i)| run_one(cfg, p, i)).collect());
    let mut outcomes = outcomes.into_iter();
    let primes = cfg.primes.iter().map(|&p| aggregate(p, outcomes.by_ref().take(cfg.count).collect())).collect();
    Ok(ExperimentReport { config: cfg.clone(), primes })
}

/// `report.json` plus `curve_<p>.csv`, `census_<p>.csv` and
/// `windows_<p>.csv` for every listed prime.
pub fn write_outputs(report: &ExperimentReport, dir: &Path) -> Result<Vec<String>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let head = header("experiment", Some(report.config.seed));
    let mut files = vec![("report.json".to_string(), to_json(report)?)];
    for pr in &report.primes {
        if let Some(c) = &pr.averaged_curve {
            files.push((format!("curve_{}.csv", pr.prime), curve_csv(c, &head)?));
        }
        let rows = pr.surfaces.iter().flat_map(|s| window_rows(&s.windows, &format!("s{}.", s.index))).collect();
        files.push((format!("windows_{}.csv", pr.prime), windows_csv(rows, &head)?));
        let census = crate::report::counts_csv(&pr.cycle_counts, &head)?;
        files.push((format!("census_{}.csv", pr.prime), census));
    }
    let mut names = Vec::new();
    for (name, text) in files {
        let path = dir.join(&name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        names.push(name);
    }
    Ok(names)
}
