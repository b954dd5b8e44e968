//! Period statistics of a cycle census and comparison with the limit law
//! `R(x) = 1 - e^{-x} (1 + x)`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dynamics::{CycleCensus, PhaseSpace};
use crate::surface::Side;
use crate::StatsError;

/// Upper end of every curve grid.
pub const X_MAX: f64 = 10.0;
pub const DEFAULT_GRID_STEP: f64 = 0.1;

/// Slack for comparing a period with `x z` on a floating grid.
const GRID_EPS: f64 = 1e-9;

/// `P_t`: fraction of phase points of minimal period `t`.
pub fn period_histogram(census: &CycleCensus) -> Result<BTreeMap<usize, f64>, StatsError> {
    if census.total == 0 {
        return Err(StatsError::EmptyPhaseSpace);
    }
    let mut mass: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &census.cycles {
        *mass.entry(c.period).or_insert(0) += c.period;
    }
    let n = census.total as f64;
    Ok(mass.into_iter().map(|(t, m)| (t, m as f64 / n)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ZVariant {
    /// `z = 2N / (fix_x + fix_y)`, all cycles counted.
    Definition,
    /// `z` = mean symmetric period, only symmetric mass counted.
    SymmetricMean,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistributionCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub z: f64,
    pub variant: ZVariant,
}

/// `0, step, 2 step, ..., X_MAX`.
pub fn grid(step: f64) -> Result<Vec<f64>, StatsError> {
    if step.is_nan() || step <= 0.0 || step > X_MAX {
        return Err(StatsError::BadDomain);
    }
    let n = libm::round(X_MAX / step) as usize;
    Ok((0..=n).map(|i| i as f64 * step).collect())
}

fn cumulative(masses: &[(usize, usize)], total: usize, z: f64, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&x| {
            let cut = x * z + GRID_EPS;
            let m: usize = masses.iter().filter(|(t, _)| (*t as f64) <= cut).map(|(_, m)| m).sum();
            m as f64 / total as f64
        })
        .collect()
}

pub fn empirical_curve(census: &CycleCensus, variant: ZVariant, step: f64) -> Result<DistributionCurve, StatsError> {
    if census.total == 0 {
        return Err(StatsError::EmptyPhaseSpace);
    }
    let grid = grid(step)?;
    let (masses, total, z): (Vec<(usize, usize)>, usize, f64) = match variant {
        ZVariant::Definition => {
            let fixed = census.fix_x + census.fix_y;
            if fixed == 0 {
                return Err(StatsError::ZeroFixedPoints);
            }
            let z = 2.0 * census.total as f64 / fixed as f64;
            (census.cycles.iter().map(|c| (c.period, c.period)).collect(), census.total, z)
        }
        ZVariant::SymmetricMean => {
            let sym: Vec<_> = census.cycles.iter().filter(|c| c.symmetric).map(|c| (c.period, c.period)).collect();
            if sym.is_empty() {
                return Err(StatsError::NoSymmetricCycles);
            }
            let mass: usize = sym.iter().map(|(_, m)| m).sum();
            let z = mass as f64 / sym.len() as f64;
            (sym, mass, z)
        }
    };
    let values = cumulative(&masses, total, z, &grid);
    Ok(DistributionCurve { grid, values, z, variant })
}

/// Pointwise mean of curves on a common grid; `z` is the mean of the `z`s.
pub fn average_curves(curves: &[DistributionCurve]) -> Result<DistributionCurve, StatsError> {
    let first = curves.first().ok_or(StatsError::EmptyPhaseSpace)?;
    if curves.iter().any(|c| c.grid != first.grid || c.variant != first.variant) {
        return Err(StatsError::BadDomain);
    }
    let n = curves.len() as f64;
    let values = (0..first.grid.len()).map(|i| curves.iter().map(|c| c.values[i]).sum::<f64>() / n).collect();
    let z = curves.iter().map(|c| c.z).sum::<f64>() / n;
    Ok(DistributionCurve { grid: first.grid.clone(), values, z, variant: first.variant })
}

pub fn limit_r(x: f64) -> Result<f64, StatsError> {
    if x < 0.0 || x.is_nan() {
        return Err(StatsError::NegativeX);
    }
    Ok(1.0 - libm::exp(-x) * (1.0 + x))
}

/// `int_0^x R = x - 2 + e^{-x} (x + 2)`.
pub fn limit_area(x: f64) -> f64 {
    x - 2.0 + libm::exp(-x) * (x + 2.0)
}

pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2).zip(values.windows(2)).map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / 2.0).sum()
}

/// Percent difference between the trapezoid area under `curve` and the
/// exact area under `R` on `[0, 10]`.
pub fn area_error(curve: &DistributionCurve) -> Result<f64, StatsError> {
    let g = &curve.grid;
    let ok = g.len() >= 2
        && g.len() == curve.values.len()
        && g[0] == 0.0
        && libm::fabs(g[g.len() - 1] - X_MAX) < 1e-9
        && g.windows(2).all(|w| w[1] > w[0]);
    if !ok {
        return Err(StatsError::BadDomain);
    }
    let exact = limit_area(X_MAX);
    Ok(100.0 * libm::fabs(trapezoid(g, &curve.values) - exact) / exact)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowCheck {
    pub check: String,
    pub bound: f64,
    pub actual: f64,
    /// Distance to the bound, positive when satisfied.
    pub slack: f64,
    pub pass: bool,
    /// `false` when the bound is vacuous (reported as a pass).
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowReport {
    pub checks: Vec<WindowCheck>,
}

impl WindowReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn lower(check: &'static str, bound: f64, actual: f64) -> WindowCheck {
    let applicable = bound > 0.0;
    WindowCheck {
        check: check.to_string(),
        bound,
        actual,
        slack: actual - bound,
        pass: !applicable || actual >= bound,
        applicable,
    }
}

fn upper(check: &'static str, bound: f64, actual: f64) -> WindowCheck {
    WindowCheck {
        check: check.to_string(),
        bound,
        actual,
        slack: bound - actual,
        pass: actual <= bound,
        applicable: true,
    }
}

/// Point-count lower bound `p^2 - 22p + 1` and, per involution, the
/// fixed-point window `(p+1) -+ 20 sqrt(p)` with the upper end widened by
/// `6 w_p` for `w_p` degenerate fibers of that side.
pub fn windows_from_counts(p: u64, points: usize, fix: [usize; 2], degenerate: [usize; 2]) -> WindowReport {
    let pf = p as f64;
    let root = 20.0 * libm::sqrt(pf);
    let mut checks = alloc::vec![lower("points_lower", pf * pf - 22.0 * pf + 1.0, points as f64)];
    let names = [("fix_x_lower", "fix_x_upper"), ("fix_y_lower", "fix_y_upper")];
    for i in 0..2 {
        checks.push(lower(names[i].0, pf + 1.0 - root, fix[i] as f64));
        checks.push(upper(names[i].1, pf + 1.0 + root + 6.0 * degenerate[i] as f64, fix[i] as f64));
    }
    WindowReport { checks }
}

pub fn sanity_windows(space: &PhaseSpace, census: &CycleCensus) -> WindowReport {
    let p = space.surface().field().modulus();
    let w = Side::BOTH.map(|side| space.charts().keys().filter(|(s, _)| *s == side).count());
    windows_from_counts(p, space.len(), [census.fix_x, census.fix_y], w)
}

/// Census summary of one surface in an experiment.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfaceSummary {
    pub prime: u64,
    pub index: u64,
    pub points: usize,
    pub boundary_points: usize,
    pub charts: usize,
    pub fix_x: usize,
    pub fix_y: usize,
    pub symmetric_cycles: usize,
    pub asymmetric_cycles: usize,
    pub symmetric_mass_fraction: f64,
    /// `(period, symmetric, count)` rows.
    pub cycle_counts: Vec<(usize, bool, usize)>,
    pub area_error: f64,
    pub windows: WindowReport,
}

/// Census, curve and windows of one phase space.
pub fn summarize(
    space: &PhaseSpace,
    index: u64,
    variant: ZVariant,
    step: f64,
) -> Result<(SurfaceSummary, CycleCensus, DistributionCurve), StatsError> {
    let census = space.census();
    let curve = empirical_curve(&census, variant, step)?;
    let summary = SurfaceSummary {
        prime: space.surface().field().modulus(),
        index,
        points: space.len(),
        boundary_points: census.boundary,
        charts: space.charts().len(),
        fix_x: census.fix_x,
        fix_y: census.fix_y,
        symmetric_cycles: census.symmetric_count(),
        asymmetric_cycles: census.asymmetric_count(),
        symmetric_mass_fraction: census.symmetric_mass() as f64 / census.total as f64,
        cycle_counts: census.counts().into_iter().map(|((t, s), n)| (t, s, n)).collect(),
        area_error: area_error(&curve)?,
        windows: sanity_windows(space, &census),
    };
    Ok((summary, census, curve))
}
