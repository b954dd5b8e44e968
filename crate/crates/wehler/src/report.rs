//! CSV and JSON renderings. Every CSV starts with a `#` header line naming
//! the generator seed (`none` for inputs read from a file).

use anyhow::Result;
use serde::Serialize;
use wehler_core::dynamics::{CycleCensus, PhaseSpace};
use wehler_core::stats::{DistributionCurve, WindowReport};

use crate::fixtures::format_point;

pub fn header(command: &str, seed: Option<u64>) -> String {
    match seed {
        Some(s) => format!("# wehler {command} seed={s}\n"),
        None => format!("# wehler {command} seed=none\n"),
    }
}

fn csv_body<R: Serialize>(columns: &[&str], rows: impl IntoIterator<Item = R>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(columns)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// `length,symmetric,count`.
pub fn census_csv(census: &CycleCensus, header_line: &str) -> Result<String> {
    let rows: Vec<_> = census.counts().into_iter().map(|((t, s), n)| (t, s, n)).collect();
    counts_csv(&rows, header_line)
}

pub fn counts_csv(rows: &[(usize, bool, usize)], header_line: &str) -> Result<String> {
    Ok(header_line.to_string() + &csv_body(&["length", "symmetric", "count"], rows)?)
}

/// `x,value`.
pub fn curve_csv(curve: &DistributionCurve, header_line: &str) -> Result<String> {
    let rows = curve.grid.iter().zip(&curve.values);
    Ok(header_line.to_string() + &csv_body(&["x", "value"], rows)?)
}

/// `check,bound,actual,slack,pass`; `prefix` distinguishes surfaces sharing
/// a file.
pub fn window_rows(report: &WindowReport, prefix: &str) -> Vec<(String, f64, f64, f64, bool)> {
    report.checks.iter().map(|c| (format!("{prefix}{}", c.check), c.bound, c.actual, c.slack, c.pass)).collect()
}

pub fn windows_csv(rows: Vec<(String, f64, f64, f64, bool)>, header_line: &str) -> Result<String> {
    Ok(header_line.to_string() + &csv_body(&["check", "bound", "actual", "slack", "pass"], rows)?)
}

/// One canonical point per line, sorted.
pub fn points_csv(points: &[wehler_core::Point], header_line: &str) -> Result<String> {
    let rows = points.iter().map(|p| {
        let [a, b] = [p.a.coords().map(|c| c.value()), p.b.coords().map(|c| c.value())];
        (a[0], a[1], a[2], b[0], b[1], b[2])
    });
    Ok(header_line.to_string() + &csv_body(&["a0", "a1", "a2", "b0", "b1", "b2"], rows)?)
}

#[derive(Serialize)]
pub struct CycleDetail {
    pub id: usize,
    pub period: usize,
    pub interleaved_length: usize,
    pub symmetric: bool,
    pub representative: String,
    pub boundary: bool,
    /// Cycle of the `sigma_x` image, for asymmetric cycles.
    pub twin: Option<usize>,
    /// The cycle in `phi` order from the representative.
    pub points: Vec<String>,
}

#[derive(Serialize)]
pub struct CensusDetail {
    pub seed: Option<u64>,
    pub prime: u64,
    pub points: usize,
    pub boundary_points: usize,
    pub fix_x: usize,
    pub fix_y: usize,
    pub symmetric_cycles: usize,
    pub asymmetric_cycles: usize,
    pub symmetric_identity: bool,
    pub cycles: Vec<CycleDetail>,
}

pub fn census_detail(space: &PhaseSpace, census: &CycleCensus, seed: Option<u64>) -> CensusDetail {
    let pairing = census.asymmetric_pairing().unwrap_or_default();
    let cycles = census
        .cycles
        .iter()
        .enumerate()
        .map(|(id, c)| CycleDetail {
            id,
            period: c.period,
            interleaved_length: c.interleaved_length(),
            symmetric: c.symmetric,
            representative: format_point(&space.points()[c.representative].point),
            boundary: space.points()[c.representative].is_boundary(),
            twin: pairing.get(&id).copied(),
            points: std::iter::successors(Some(c.representative), |&i| Some(space.phi_index(i)))
                .take(c.period)
                .map(|i| format_point(&space.points()[i].point))
                .collect(),
        })
        .collect();
    CensusDetail {
        seed,
        prime: space.surface().field().modulus(),
        points: census.total,
        boundary_points: census.boundary,
        fix_x: census.fix_x,
        fix_y: census.fix_y,
        symmetric_cycles: census.symmetric_count(),
        asymmetric_cycles: census.asymmetric_count(),
        symmetric_identity: 2 * census.symmetric_count() == census.fix_x + census.fix_y,
        cycles,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}
