//! The fiber involutions `sigma_x`, `sigma_y` on non-degenerate fibers and
//! their compositions `phi = sigma_y . sigma_x`, `psi = sigma_x . sigma_y`.
//!
//! `sigma(Side::X, (a, b)) = (a, b')` keeps the x-coordinate and swaps the
//! two points of the fiber over `a`; `Side::Y` does the same over `b`.

use alloc::vec::Vec;

use crate::fiber::{binary_quadratic_roots, line_basis, BinaryRoots};
use crate::field::Scalar;
use crate::projective::{p1_points, ProjectivePoint2};
use crate::surface::{FpSurface, Point, Side, SurfacePoint, WehlerSurface};
use crate::{FiberError, InvolutionError};

/// The other point of the fiber of `side` through `p`, or `p` itself on a
/// ramified fiber.
pub fn sigma<C: Scalar>(
    s: &WehlerSurface<C>,
    side: Side,
    p: &SurfacePoint<C>,
) -> Result<SurfacePoint<C>, InvolutionError> {
    if !s.contains(p) {
        return Err(InvolutionError::NotOnSurface);
    }
    let sys = s.fiber_system(side, p.base(side));
    match sys.partner(p.moving(side)) {
        Ok(v) => Ok(p.with_moving(side, v)),
        Err(FiberError::Degenerate) => Err(InvolutionError::DegenerateFiber(side)),
        Err(FiberError::NotOnFiber) => Err(InvolutionError::NotOnSurface),
        Err(FiberError::NoUsablePair) => fiber_partner_direct(s, side, p),
    }
}

/// Partner by solving the fiber directly: parametrize the line `L = 0` and
/// take the roots of the restricted conic.
pub fn fiber_partner_direct<C: Scalar>(
    s: &WehlerSurface<C>,
    side: Side,
    p: &SurfacePoint<C>,
) -> Result<SurfacePoint<C>, InvolutionError> {
    let fc = s.fiber_coeffs(side, p.base(side).coords());
    let [u, v] = line_basis(&fc.l).ok_or(InvolutionError::DegenerateFiber(side))?;
    let [qa, qb, qc] = fc.restricted_conic(&u, &v);
    let BinaryRoots::Roots { roots, .. } = binary_quadratic_roots(qa, qb, qc) else {
        return Err(InvolutionError::DegenerateFiber(side));
    };
    let pts: Vec<_> = roots
        .iter()
        .map(|st| {
            let [a, b] = *st.coords();
            ProjectivePoint2::new(core::array::from_fn(|i| a * u[i] + b * v[i])).expect("independent basis")
        })
        .collect();
    pick_other(side, p, &pts)
}

fn pick_other<C: Scalar>(
    side: Side,
    p: &SurfacePoint<C>,
    fiber: &[ProjectivePoint2<C>],
) -> Result<SurfacePoint<C>, InvolutionError> {
    let me = p.moving(side);
    if fiber.len() > 2 {
        return Err(InvolutionError::DegenerateFiber(side));
    }
    if !fiber.contains(me) {
        return Err(InvolutionError::NotOnSurface);
    }
    let other = fiber.iter().find(|v| *v != me).unwrap_or(me);
    Ok(p.with_moving(side, *other))
}

/// Brute-force partner: every point `s u + t v` of the fiber line for
/// `(s:t)` in `P^1(F_p)` is tested against `Q`.
pub fn fiber_partner_oracle(s: &FpSurface, side: Side, p: &Point) -> Result<Point, InvolutionError> {
    if !s.contains(p) {
        return Err(InvolutionError::NotOnSurface);
    }
    let base = p.base(side).coords();
    let fc = s.fiber_coeffs(side, base);
    let [u, v] = line_basis(&fc.l).ok_or(InvolutionError::DegenerateFiber(side))?;
    let mut fiber = Vec::new();
    for st in p1_points(s.field()) {
        let [a, b] = *st.coords();
        let y: [_; 3] = core::array::from_fn(|i| a * u[i] + b * v[i]);
        if fc.conic_at(&y).is_zero() {
            fiber.push(ProjectivePoint2::new(y).expect("independent basis"));
            if fiber.len() > 2 {
                return Err(InvolutionError::DegenerateFiber(side));
            }
        }
    }
    pick_other(side, p, &fiber)
}

pub fn phi<C: Scalar>(s: &WehlerSurface<C>, p: &SurfacePoint<C>) -> Result<SurfacePoint<C>, InvolutionError> {
    sigma(s, Side::Y, &sigma(s, Side::X, p)?)
}

pub fn psi<C: Scalar>(s: &WehlerSurface<C>, p: &SurfacePoint<C>) -> Result<SurfacePoint<C>, InvolutionError> {
    sigma(s, Side::X, &sigma(s, Side::Y, p)?)
}

/// Points fixed by `sigma(side)` among the points whose `side` fiber is not
/// degenerate. Fixed points on degenerate fibers come from the blow-up
/// charts.
pub fn fixed_points(s: &FpSurface, side: Side) -> Vec<Point> {
    s.enumerate_points().into_iter().filter(|p| matches!(sigma(s, side, p), Ok(q) if q == *p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::projective::P2;

    fn w1(p: u64) -> FpSurface {
        let f = PrimeField::new(p).unwrap();
        let e = |v: i64| f.from_i64(v);
        FpSurface::from_entries(
            f.zero(),
            &[(0, 0, e(1)), (1, 1, e(1)), (2, 2, e(1))],
            &[(1, 1, 0, 0, e(1)), (2, 2, 0, 1, e(2)), (0, 0, 1, 1, e(1)), (0, 1, 2, 2, e(-1))],
        )
        .unwrap()
    }

    fn pt(s: &FpSurface, a: [i64; 3], b: [i64; 3]) -> Point {
        let f = s.field();
        Point::new(P2::from_i64(f, a).unwrap(), P2::from_i64(f, b).unwrap())
    }

    #[test]
    fn hand_solved_examples() {
        let s = w1(29);
        let p = pt(&s, [1, 0, -1], [1, 0, 1]);
        let q = pt(&s, [1, 1, -1], [1, 0, 1]);
        assert_eq!(sigma(&s, Side::Y, &p).unwrap(), q);
        assert_eq!(fiber_partner_oracle(&s, Side::Y, &p).unwrap(), q);
        let p = pt(&s, [1, 0, 1], [1, 0, -1]);
        let q = pt(&s, [1, 0, 1], [1, -2, -1]);
        assert_eq!(sigma(&s, Side::X, &p).unwrap(), q);
        assert_eq!(fiber_partner_oracle(&s, Side::X, &p).unwrap(), q);
    }

    #[test]
    fn phi_first_orbit_step() {
        let s = w1(29);
        // the start point lies on a degenerate x-fiber, so sigma_x needs the
        // blow-up; the sigma_y half is regular
        let start = pt(&s, [-1, -1, 1], [1, 0, 1]);
        assert_eq!(sigma(&s, Side::X, &start), Err(InvolutionError::DegenerateFiber(Side::X)));
        let mid = pt(&s, [-1, -1, 1], [-1, 2, 1]);
        assert_eq!(sigma(&s, Side::Y, &mid).unwrap(), pt(&s, [1, 0, 1], [-1, 2, 1]));
    }

    #[test]
    fn sigma_matches_oracle_and_is_involutive() {
        let s = w1(29);
        for p in s.enumerate_points() {
            for side in Side::BOTH {
                match fiber_partner_oracle(&s, side, &p) {
                    Ok(q) => {
                        assert_eq!(sigma(&s, side, &p).unwrap(), q);
                        assert_eq!(sigma(&s, side, &q).unwrap(), p);
                        assert!(s.contains(&q));
                        assert_eq!(q.base(side), p.base(side));
                    }
                    Err(e) => {
                        assert_eq!(e, InvolutionError::DegenerateFiber(side));
                        assert!(s.is_degenerate_base(side, p.base(side)));
                    }
                }
            }
        }
    }

    #[test]
    fn partner_is_pair_independent() {
        let s = w1(31);
        for p in s.enumerate_points() {
            for side in Side::BOTH {
                let Ok(q) = sigma(&s, side, &p) else { continue };
                let sys = s.fiber_system(side, p.base(side));
                let v = p.moving(side).coords();
                let w = q.moving(side).coords();
                for (k, l) in crate::fiber::PAIRS {
                    if let Some([xk, xl]) = sys.partner_ratio(v, k, l) {
                        // same ratio as the returned partner
                        assert!((xk * w[l] - xl * w[k]).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn fixed_points_lie_on_branch_curve() {
        let s = w1(29);
        for side in Side::BOTH {
            let g = s.ramification_sextic(side).unwrap();
            let fixed = fixed_points(&s, side);
            for p in &fixed {
                assert!(g.eval_at(p.base(side)).is_zero());
            }
            // conversely, a non-degenerate base on the branch curve carrying
            // a rational point gives a fixed point
            for p in s.enumerate_points() {
                if !s.is_degenerate_base(side, p.base(side)) && g.eval_at(p.base(side)).is_zero() {
                    assert!(fixed.contains(&p));
                }
            }
        }
    }

    #[test]
    fn psi_inverts_phi_where_regular() {
        let s = w1(37);
        let mut checked = 0;
        for p in s.enumerate_points() {
            if let Ok(q) = phi(&s, &p) {
                assert_eq!(psi(&s, &q).unwrap(), p);
                checked += 1;
            }
        }
        assert!(checked > 100);
    }
}
