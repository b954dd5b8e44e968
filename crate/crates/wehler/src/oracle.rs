//! Brute-force partners used to cross-check the phase-space involutions.
//!
//! Ordinary fibers go through [`fiber_partner_oracle`]. On a degenerate
//! fiber over `c` the two points attached to the line through `c` in
//! direction `d` are the zeros, on the fiber line `L(c, .) = 0`, of the
//! first-order term of the surface along that line:
//!
//! `F_d(y) = B(c, d; y) - M(y) L(d, y)`, with `Q(c, y) = L(c, y) M(y)` and
//! `B(c, d; y) = Q(c + d, y) - Q(c, y) - Q(d, y)`.
//!
//! When `L(c, .)` vanishes identically the fiber is the conic `Q(c, .) = 0`
//! and the attached points are its intersection with the line `L(d, .) = 0`.
//!
//! Nothing here touches the blow-up charts.

use wehler_core::blowup::chart_indices;
use wehler_core::dynamics::{PhasePoint, PhaseSpace};
use wehler_core::fiber::line_basis;
use wehler_core::involution::fiber_partner_oracle;
use wehler_core::projective::p1_points;
use wehler_core::{FieldElement, FpSurface, Point, Scalar, Side, P1, P2};

type Form = Box<dyn Fn(&[FieldElement; 3]) -> FieldElement>;

/// `M` with `Q(c, y) = L(c, y) M(y)`, or `None` if the fiber over `c` is not
/// of that shape.
fn cofactor(s: &FpSurface, side: Side, c: &P2) -> Option<[FieldElement; 3]> {
    let fc = s.fiber_coeffs(side, c.coords());
    let zero = s.field().zero();
    let m = (0..3).find(|&i| !fc.l[i].is_zero())?;
    let inv = fc.l[m].inverse().ok()?;
    let mut form = [zero; 3];
    form[m] = fc.q[m][m] * inv;
    for k in (0..3).filter(|&k| k != m) {
        form[k] = (fc.q[m][k] - fc.l[k] * form[m]) * inv;
    }
    // the cofactor must reproduce every coefficient
    for i in 0..3 {
        for j in i..3 {
            let lm = if i == j { fc.l[i] * form[i] } else { fc.l[i] * form[j] + fc.l[j] * form[i] };
            if lm != fc.q[i][j] {
                return None;
            }
        }
    }
    Some(form)
}

/// Base-plane direction of the line `s` through `c`.
pub fn direction(c: &P2, s: &P1) -> [FieldElement; 3] {
    let (_, e, f) = chart_indices(c.lead_index());
    let [s0, s1] = *s.coords();
    let mut dir = [s0.field().zero(); 3];
    dir[e] = s0;
    dir[f] = s1;
    dir
}

/// The fiber points attached to line `s` through the degenerate center `c`,
/// by scanning the fiber line. `None` if every point qualifies.
pub fn attached_points(s: &FpSurface, side: Side, c: &P2, line: &P1) -> Option<Vec<P2>> {
    let cc = *c.coords();
    let d = direction(c, line);
    let fcc = s.fiber_coeffs(side, &cc);
    let fcd = s.fiber_coeffs(side, &d);
    let (basis, f): (_, Form) = match line_basis(&fcc.l) {
        Some(basis) => {
            let m = cofactor(s, side, c)?;
            let sum: [FieldElement; 3] = std::array::from_fn(|i| cc[i] + d[i]);
            let fcs = s.fiber_coeffs(side, &sum);
            let first_order = move |y: &[FieldElement; 3]| {
                let bilinear = fcs.conic_at(y) - fcc.conic_at(y) - fcd.conic_at(y);
                let my = m[0] * y[0] + m[1] * y[1] + m[2] * y[2];
                bilinear - my * fcd.line_at(y)
            };
            (basis, Box::new(first_order))
        }
        None => (line_basis(&fcd.l)?, Box::new(move |y: &[FieldElement; 3]| fcc.conic_at(y))),
    };
    let [u, v] = basis;
    let mut roots = Vec::new();
    let lines = p1_points(s.field()).collect::<Vec<_>>();
    for st in &lines {
        let [a, b] = *st.coords();
        let y: [FieldElement; 3] = std::array::from_fn(|i| a * u[i] + b * v[i]);
        if f(&y).is_zero() {
            roots.push(P2::new(y).expect("independent basis"));
        }
    }
    (roots.len() < lines.len()).then_some(roots)
}

/// Partner of a phase point under `sigma` of `side`, computed without charts.
pub fn phase_partner(s: &FpSurface, side: Side, pp: &PhasePoint) -> Option<Point> {
    match pp.line(side) {
        None => fiber_partner_oracle(s, side, &pp.point).ok(),
        Some(line) => {
            let c = pp.point.base(side);
            let roots = attached_points(s, side, c, &line)?;
            let me = pp.point.moving(side);
            if !roots.contains(me) || roots.len() > 2 {
                return None;
            }
            let other = roots.iter().find(|v| *v != me).unwrap_or(me);
            Some(pp.point.with_moving(side, *other))
        }
    }
}

/// Number of phase points whose tabulated `sigma` images disagree with the
/// oracle, over both sides.
pub fn oracle_mismatches(space: &PhaseSpace) -> usize {
    let mut bad = 0;
    for (i, pp) in space.points().iter().enumerate() {
        for side in Side::BOTH {
            let table = space.points()[space.sigma_index(side, i)].point;
            if phase_partner(space.surface(), side, pp) != Some(table) {
                bad += 1;
            }
        }
    }
    bad
}

/// Number of `(point, side)` with `sigma(sigma(P)) != P`.
pub fn involution_failures(space: &PhaseSpace) -> usize {
    (0..space.len())
        .flat_map(|i| Side::BOTH.map(|side| (i, side)))
        .filter(|&(i, side)| space.sigma_index(side, space.sigma_index(side, i)) != i)
        .count()
}
