//! The bundled W1 fixture and its golden checks.

use anyhow::{Context, Result};
use wehler_core::dynamics::PhaseSpace;
use wehler_core::{FieldElement, FpSurface, Point, Rational, Side, WehlerSurface, P2};

use crate::oracle::{involution_failures, oracle_mismatches};
use crate::surface_file;

pub const W1_SURFACE: &str = include_str!("../fixtures/w1.surface");
pub const W1_ORBIT_29: &str = include_str!("../fixtures/w1_orbit_29.txt");

/// Start of the golden orbit, `((-1, -1, 1), (1, 0, 1))`.
pub const W1_ORBIT_START: [[i64; 3]; 2] = [[-1, -1, 1], [1, 0, 1]];

pub fn w1_rational() -> WehlerSurface<Rational> {
    surface_file::parse(W1_SURFACE).and_then(|f| f.to_rational()).expect("bundled fixture parses")
}

pub fn w1(p: u64) -> Result<FpSurface> {
    Ok(surface_file::parse(W1_SURFACE)?.to_fp(Some(p))?)
}

pub fn point_from_i64(p: u64, coords: [[i64; 3]; 2]) -> Result<Point> {
    let field = wehler_core::PrimeField::new(p)?;
    Ok(Point::new(P2::from_i64(field, coords[0])?, P2::from_i64(field, coords[1])?))
}

pub fn signed_last_normalized(v: &P2) -> [i64; 3] {
    let c = *v.coords();
    let last = c.iter().rev().find(|x| x.value() != 0).copied().expect("nonzero point");
    let inv = last.inverse().expect("nonzero");
    c.map(|x: FieldElement| (x * inv).signed())
}

/// `(a0 : a1 : a2 : b0 : b1 : b2)` with each factor scaled so its last nonzero
/// coordinate is 1 and residues printed in the symmetric range.
pub fn format_point(p: &Point) -> String {
    let [a, b] = [signed_last_normalized(&p.a), signed_last_normalized(&p.b)];
    let parts: Vec<String> = a.iter().chain(b.iter()).map(|x| x.to_string()).collect();
    format!("({})", parts.join(" : "))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> FixtureCheck {
    FixtureCheck { name, pass, detail }
}

/// Golden orbit, involution identity and oracle equivalence for W1 mod 29.
pub fn verify_fixtures() -> Result<Vec<FixtureCheck>> {
    let s = w1(29)?;
    let space = PhaseSpace::build(&s).context("building the W1 phase space")?;
    let start = point_from_i64(29, W1_ORBIT_START)?;
    let orbit = space.orbit(&start, 8)?;
    let text: String = orbit.iter().map(|pp| format_point(&pp.point) + "\n").collect();
    let mut checks = vec![check("orbit_golden", text == W1_ORBIT_29, format!("{} lines", orbit.len()))];
    let census = space.census();
    let id = census.cycle_containing(space.index_of(&start).context("orbit start is a phase point")?);
    let cycle = &census.cycles[id];
    checks.push(check(
        "orbit_cycle_asymmetric_period_4",
        cycle.period == 4 && !cycle.symmetric,
        format!("period {} symmetric {}", cycle.period, cycle.symmetric),
    ));
    let pairing = census.asymmetric_pairing();
    let twin = pairing.as_ref().ok().and_then(|m| m.get(&id)).copied();
    checks.push(check(
        "orbit_twin",
        twin.is_some_and(|t| t != id && census.cycles[t].period == 4),
        format!("{twin:?}"),
    ));
    let fails = involution_failures(&space);
    checks.push(check("involution_squared", fails == 0, format!("{fails} failures over {} points", space.len())));
    let bad = oracle_mismatches(&space);
    checks.push(check("oracle_equivalence", bad == 0, format!("{bad} mismatches over {} points", space.len())));
    let rational: Vec<_> = w1_rational().degenerate_fibers_bounded(Side::X, 3);
    checks.push(check("rational_degenerate_x", rational.len() == 2, format!("{} centers", rational.len())));
    Ok(checks)
}
