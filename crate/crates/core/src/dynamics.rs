//! Phase space, orbits and cycle structure of `phi = sigma_y . sigma_x`.
//!
//! The phase space is in bijection with the rational points of the surface.
//! A point on a degenerate fiber additionally carries the blow-up line it
//! lies on (one label per side), and the involution of that side swaps it
//! inside the line. Both involutions are tabulated as permutations of point
//! indices; `phi` and `psi` are their compositions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::blowup::{build_charts, BlowupChart, BoundaryPoint};
use crate::involution::sigma;
use crate::projective::{P1, P2};
use crate::surface::{FpSurface, Point, Side};
use crate::{BlowupError, DynamicsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhasePoint {
    pub point: Point,
    /// Blow-up line when the x-fiber through the point is degenerate.
    pub x_line: Option<P1>,
    /// Blow-up line when the y-fiber through the point is degenerate.
    pub y_line: Option<P1>,
}

impl PhasePoint {
    pub fn line(&self, side: Side) -> Option<P1> {
        match side {
            Side::X => self.x_line,
            Side::Y => self.y_line,
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.x_line.is_some() || self.y_line.is_some()
    }
}

/// Points of degenerate fibers that could not be given a line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unresolved {
    pub point: Point,
    pub side: Side,
    pub error: BlowupError,
}

pub struct PhaseSpace {
    surface: FpSurface,
    points: Vec<PhasePoint>,
    keys: Vec<u64>,
    charts: BTreeMap<(Side, P2), BlowupChart>,
    sigma_x: Vec<u32>,
    sigma_y: Vec<u32>,
    pub unresolved: Vec<Unresolved>,
}

fn key(p: &Point, n: u64) -> u64 {
    p.a.rank() * n + p.b.rank()
}

impl PhaseSpace {
    pub fn build(surface: &FpSurface) -> Result<Self, DynamicsError> {
        let charts = build_charts(surface)?;
        let n = crate::projective::p2_count(surface.field());
        let mut unresolved = Vec::new();
        let mut points = Vec::new();
        for p in surface.enumerate_points() {
            let mut lines = [None, None];
            let mut ok = true;
            for (slot, side) in Side::BOTH.into_iter().enumerate() {
                if let Some(chart) = charts.get(&(side, *p.base(side))) {
                    match chart.resolve_s(p.moving(side)) {
                        Ok(s) => lines[slot] = Some(s),
                        Err(error) => {
                            unresolved.push(Unresolved { point: p, side, error });
                            ok = false;
                        }
                    }
                }
            }
            if ok {
                points.push(PhasePoint { point: p, x_line: lines[0], y_line: lines[1] });
            }
        }
        let keys: Vec<u64> = points.iter().map(|pp| key(&pp.point, n)).collect();
        let mut space = Self {
            surface: surface.clone(),
            points,
            keys,
            charts,
            sigma_x: Vec::new(),
            sigma_y: Vec::new(),
            unresolved,
        };
        space.sigma_x = space.tabulate(Side::X)?;
        space.sigma_y = space.tabulate(Side::Y)?;
        space.check_involutions()?;
        Ok(space)
    }

    fn tabulate(&self, side: Side) -> Result<Vec<u32>, DynamicsError> {
        self.points
            .iter()
            .map(|pp| {
                let image = self.apply_sigma(side, pp)?;
                self.index_of(&image).map(|i| i as u32).ok_or(DynamicsError::MissingImage)
            })
            .collect()
    }

    /// `sigma` of `side` computed from the surface (not the tables).
    pub fn apply_sigma(&self, side: Side, pp: &PhasePoint) -> Result<Point, DynamicsError> {
        match pp.line(side) {
            Some(s) => {
                let chart = &self.charts[&(side, *pp.point.base(side))];
                let bp = BoundaryPoint { moving: *pp.point.moving(side), center: chart.center, s };
                let other = chart.sigma_extended(&self.surface, &bp)?;
                Ok(pp.point.with_moving(side, other.moving))
            }
            None => Ok(sigma(&self.surface, side, &pp.point)?),
        }
    }

    fn check_involutions(&self) -> Result<(), DynamicsError> {
        let mut preimages = vec![0u32; self.points.len()];
        for i in 0..self.points.len() {
            preimages[self.phi_index(i)] += 1;
        }
        let bad = preimages.iter().filter(|&&c| c != 1).count()
            + (0..self.points.len())
                .filter(|&i| {
                    self.sigma_x[self.sigma_x[i] as usize] as usize != i
                        || self.sigma_y[self.sigma_y[i] as usize] as usize != i
                })
                .count();
        if bad > 0 {
            return Err(DynamicsError::NonBijective(bad));
        }
        Ok(())
    }

    pub fn surface(&self) -> &FpSurface {
        &self.surface
    }

    pub fn charts(&self) -> &BTreeMap<(Side, P2), BlowupChart> {
        &self.charts
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn boundary_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_boundary()).count()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        let n = crate::projective::p2_count(self.surface.field());
        self.keys.binary_search(&key(p, n)).ok()
    }

    pub fn phase_point(&self, p: &Point) -> Option<&PhasePoint> {
        self.index_of(p).map(|i| &self.points[i])
    }

    #[inline]
    pub fn sigma_index(&self, side: Side, i: usize) -> usize {
        match side {
            Side::X => self.sigma_x[i] as usize,
            Side::Y => self.sigma_y[i] as usize,
        }
    }

    #[inline]
    pub fn phi_index(&self, i: usize) -> usize {
        self.sigma_y[self.sigma_x[i] as usize] as usize
    }

    #[inline]
    pub fn psi_index(&self, i: usize) -> usize {
        self.sigma_x[self.sigma_y[i] as usize] as usize
    }

    pub fn fixed_count(&self, side: Side) -> usize {
        (0..self.len()).filter(|&i| self.sigma_index(side, i) == i).count()
    }

    /// `[p, phi p, ..., phi^n p]`.
    pub fn orbit(&self, p: &Point, n: usize) -> Result<Vec<PhasePoint>, DynamicsError> {
        let mut i = self.index_of(p).ok_or(DynamicsError::MissingImage)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.points[i]);
        for _ in 0..n {
            i = self.phi_index(i);
            out.push(self.points[i]);
        }
        Ok(out)
    }

    /// Cycle decomposition of `phi` by walking the permutation once.
    pub fn census(&self) -> CycleCensus {
        self.census_of(|i| self.phi_index(i))
    }

    /// Cycle decomposition of `psi = phi^-1`.
    pub fn census_psi(&self) -> CycleCensus {
        self.census_of(|i| self.psi_index(i))
    }

    fn census_of(&self, step: impl Fn(usize) -> usize) -> CycleCensus {
        const UNSEEN: u32 = u32::MAX;
        let n = self.len();
        let mut cycle_of = vec![UNSEEN; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if cycle_of[start] != UNSEEN {
                continue;
            }
            let id = cycles.len() as u32;
            let mut len = 0;
            let mut i = start;
            while cycle_of[i] == UNSEEN {
                cycle_of[i] = id;
                len += 1;
                i = step(i);
            }
            cycles.push(Cycle { period: len, representative: start, symmetric: false });
        }
        for c in cycles.iter_mut() {
            c.symmetric = cycle_of[self.sigma_x[c.representative] as usize] == cycle_of[c.representative];
        }
        CycleCensus {
            cycles,
            cycle_of,
            sigma_x_of_rep: Vec::new(),
            fix_x: self.fixed_count(Side::X),
            fix_y: self.fixed_count(Side::Y),
            total: n,
            boundary: self.boundary_count(),
        }
        .with_images(|i| self.sigma_x[i] as usize)
    }

    /// Whether `sigma` of `side` maps the point set of `cycle` onto itself,
    /// checked pointwise.
    pub fn classify_cycle(&self, census: &CycleCensus, cycle: usize, side: Side) -> bool {
        let c = &census.cycles[cycle];
        let mut i = c.representative;
        for _ in 0..c.period {
            if census.cycle_of[self.sigma_index(side, i)] as usize != cycle {
                return false;
            }
            i = self.phi_index(i);
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    /// Minimal period of `phi`.
    pub period: usize,
    /// Index of the smallest point of the cycle.
    pub representative: usize,
    pub symmetric: bool,
}

impl Cycle {
    /// Length of the alternating `sigma_x`, `sigma_y` walk around the cycle.
    pub fn interleaved_length(&self) -> usize {
        2 * self.period
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCensus {
    pub cycles: Vec<Cycle>,
    /// Cycle id of every phase point.
    pub cycle_of: Vec<u32>,
    sigma_x_of_rep: Vec<usize>,
    pub fix_x: usize,
    pub fix_y: usize,
    pub total: usize,
    /// Phase points carrying a blow-up line.
    pub boundary: usize,
}

/// Aggregated `(period, symmetric) -> number of cycles`.
pub type CycleCounts = BTreeMap<(usize, bool), usize>;

impl CycleCensus {
    /// A census from cycle data alone, without point-level information;
    /// [`CycleCensus::asymmetric_pairing`] is unavailable on it.
    pub fn from_cycles(cycles: Vec<Cycle>, fix_x: usize, fix_y: usize) -> Self {
        let total = cycles.iter().map(|c| c.period).sum();
        Self { cycles, cycle_of: Vec::new(), sigma_x_of_rep: Vec::new(), fix_x, fix_y, total, boundary: 0 }
    }

    fn with_images(mut self, sx: impl Fn(usize) -> usize) -> Self {
        self.sigma_x_of_rep = self.cycles.iter().map(|c| sx(c.representative)).collect();
        self
    }

    pub fn symmetric_count(&self) -> usize {
        self.cycles.iter().filter(|c| c.symmetric).count()
    }

    pub fn asymmetric_count(&self) -> usize {
        self.cycles.len() - self.symmetric_count()
    }

    /// Points lying on symmetric cycles.
    pub fn symmetric_mass(&self) -> usize {
        self.cycles.iter().filter(|c| c.symmetric).map(|c| c.period).sum()
    }

    pub fn counts(&self) -> CycleCounts {
        let mut m = BTreeMap::new();
        for c in &self.cycles {
            *m.entry((c.period, c.symmetric)).or_insert(0) += 1;
        }
        m
    }

    /// Multiset of periods.
    pub fn period_multiset(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for c in &self.cycles {
            *m.entry(c.period).or_insert(0) += 1;
        }
        m
    }

    /// The cycle containing phase point `i`.
    pub fn cycle_containing(&self, i: usize) -> usize {
        self.cycle_of[i] as usize
    }

    /// Pairs every asymmetric cycle with its `sigma_x` image. The map is
    /// checked to be a fixed-point-free, period-preserving involution.
    pub fn asymmetric_pairing(&self) -> Result<BTreeMap<usize, usize>, DynamicsError> {
        let mut pairing = BTreeMap::new();
        for (id, c) in self.cycles.iter().enumerate() {
            if c.symmetric {
                continue;
            }
            let Some(&image) = self.sigma_x_of_rep.get(id) else {
                return Err(DynamicsError::PairingFailure(id));
            };
            let other = self.cycle_of[image] as usize;
            if other == id || self.cycles[other].symmetric || self.cycles[other].period != c.period {
                return Err(DynamicsError::PairingFailure(id));
            }
            pairing.insert(id, other);
        }
        for (&a, &b) in &pairing {
            if pairing.get(&b) != Some(&a) {
                return Err(DynamicsError::PairingFailure(a));
            }
        }
        Ok(pairing)
    }
}
