//! Blow-up charts at degenerate base points.
//!
//! Over a degenerate base point `c` the fiber is a whole curve and the
//! `G`, `H` coefficients all vanish. Replacing `c` by the lines through it,
//! parametrized by `s = (s0 : s1)`, restores a 2-point fiber on each line.
//! With `d` the first nonzero index of `c` (so `c_d = 1`) and `(e, f)` the
//! other two indices, the chart is
//!
//! ```text
//! x_d -> s0,   x_e -> s0 w,   x_f -> s1 (w - c_e) + s0 c_f
//! ```
//!
//! which is `s0 c` at `w = c_e`. The substituted `G`, `H` are divided by the
//! largest common power of `(w - c_e)`, specialized to `w = c_e`, and freed
//! of their common power of `s0`; `L` is treated the same way. For each `s`
//! this gives a [`FiberSystem`] whose roots are the boundary points on that
//! line.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::fiber::{pair_of_complement, FiberSystem, PAIRS};
use crate::field::{FieldElement, Scalar};
use crate::poly::{Images, SparsePoly, Var, NVARS};
use crate::projective::{p1_points, P1, P2};
use crate::surface::{FpSurface, Side};
use crate::{BlowupError, FiberError, PolyError};

/// Index triples `(d, e, f)` of the chart, keyed by `d`.
pub fn chart_indices(d: usize) -> (usize, usize, usize) {
    match d {
        0 => (0, 1, 2),
        1 => (1, 0, 2),
        _ => (2, 1, 0),
    }
}

/// A point of the exceptional fiber: a point of the degenerate fiber over
/// `center` together with the line `s` it is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPoint {
    pub moving: P2,
    pub center: P2,
    pub s: P1,
}

/// Branch form of a chart. `stripped` is built from the `s0`-free family and
/// is the form whose roots are the ramified lines; `raw` keeps the common
/// `s0` factor, `raw = s0^s0_power * stripped`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationPrime {
    pub stripped: SparsePoly<FieldElement>,
    pub raw: SparsePoly<FieldElement>,
    pub s0_power: u32,
}

impl RamificationPrime {
    pub fn eval(&self, s: &P1) -> FieldElement {
        eval_s(&self.stripped, s)
    }

    /// Rational roots of the stripped form.
    pub fn rational_roots(&self) -> Vec<P1> {
        let f = self.raw.terms().next().map(|(_, c)| c.field());
        match f {
            None => Vec::new(),
            Some(f) => p1_points(f).filter(|s| self.eval(s).is_zero()).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlowupChart {
    pub side: Side,
    pub center: P2,
    /// First nonzero coordinate of the center.
    pub dehomogenize: usize,
    /// Images of the three base variables in `(s0, s1, w)`.
    pub images: [SparsePoly<FieldElement>; 3],
    /// Value of `w` at the center, `c_e`.
    pub w_root: FieldElement,
    /// Common vanishing order of the `G`, `H` family at `w = c_e`.
    pub e: u32,
    /// Common vanishing order of the `L` coefficients at `w = c_e`.
    pub e_l: u32,
    /// Common `s0` power removed from the specialized `G`, `H` family.
    pub s0_power: u32,
    /// Common `s0` power removed from the specialized `L` coefficients.
    pub l_s0_power: u32,
    /// `L'`, `Q'`: substituted and divided, in moving variables, `s`, `w`.
    pub lp: SparsePoly<FieldElement>,
    pub qp: SparsePoly<FieldElement>,
    /// Divided `G'`, `H'` in `(s0, s1, w)`; `hp` indexed like [`PAIRS`].
    pub gp: [SparsePoly<FieldElement>; 3],
    pub hp: [SparsePoly<FieldElement>; 3],
    /// Binary forms in `s` used for solving.
    pub l_forms: [SparsePoly<FieldElement>; 3],
    pub g_forms: [SparsePoly<FieldElement>; 3],
    pub h_forms: [SparsePoly<FieldElement>; 3],
    /// The same before removing the `s0` powers.
    pub l_raw: [SparsePoly<FieldElement>; 3],
    pub g_raw: [SparsePoly<FieldElement>; 3],
    pub h_raw: [SparsePoly<FieldElement>; 3],
    systems: Vec<FiberSystem<FieldElement>>,
}

fn eval_s(f: &SparsePoly<FieldElement>, s: &P1) -> FieldElement {
    let [s0, s1] = *s.coords();
    let mut vals = [s0.zero_like(); NVARS];
    vals[Var::S0.index()] = s0;
    vals[Var::S1.index()] = s1;
    f.eval(&vals)
}

/// Common vanishing order of the nonzero members of `family` at `var = t`.
fn common_order(family: &[SparsePoly<FieldElement>], var: Var, t: FieldElement) -> Result<Option<u32>, PolyError> {
    let mut best: Option<u32> = None;
    for f in family.iter().filter(|f| !f.is_zero()) {
        let k = f.vanishing_order(var, t)?;
        best = Some(best.map_or(k, |b| b.min(k)));
    }
    Ok(best)
}

fn divide_family(
    family: &[SparsePoly<FieldElement>; 3],
    var: Var,
    t: FieldElement,
    k: u32,
) -> Result<[SparsePoly<FieldElement>; 3], PolyError> {
    let mut out: [SparsePoly<FieldElement>; 3] = Default::default();
    for (o, f) in out.iter_mut().zip(family.iter()) {
        *o = f.divide_exact_linear(var, t, k)?;
    }
    Ok(out)
}

impl BlowupChart {
    pub fn build(s: &FpSurface, side: Side, center: &P2) -> Result<Self, BlowupError> {
        if !s.is_degenerate_base(side, center) {
            return Err(BlowupError::NotDegenerate);
        }
        let field = s.field();
        let (zero, one) = (field.zero(), field.one());
        let c = center.coords();
        let (d, e_idx, f_idx) = chart_indices(center.lead_index());
        let w_root = c[e_idx];
        let v = |x: Var| SparsePoly::var(x, one);
        let mut images: [SparsePoly<FieldElement>; 3] = Default::default();
        images[d] = v(Var::S0);
        images[e_idx] = &v(Var::S0) * &v(Var::W);
        images[f_idx] = &v(Var::S1) * &(v(Var::W) - SparsePoly::constant(w_root)) + v(Var::S0).scale(c[f_idx]);

        let mut subst: Images<FieldElement> = Default::default();
        for i in 0..3 {
            subst[side.base_var(i).index()] = Some(images[i].clone());
            subst[side.fiber_var(i).index()] = Some(v(side.fiber_var(i)));
        }

        let gh = s.gh_system(side);
        let sub3 = |fam: &[SparsePoly<FieldElement>; 3]| -> Result<[SparsePoly<FieldElement>; 3], PolyError> {
            let mut out: [SparsePoly<FieldElement>; 3] = Default::default();
            for (o, f) in out.iter_mut().zip(fam.iter()) {
                *o = f.substitute(&subst)?;
            }
            Ok(out)
        };
        let g_sub = sub3(&gh.g)?;
        let h_sub = sub3(&gh.h)?;
        let l_sub = sub3(&gh.lc)?;

        let all: Vec<_> = g_sub.iter().chain(h_sub.iter()).cloned().collect();
        let e = common_order(&all, Var::W, w_root)?.ok_or(BlowupError::IdenticallyZeroQuadratic)?;
        let gp = divide_family(&g_sub, Var::W, w_root, e)?;
        let hp = divide_family(&h_sub, Var::W, w_root, e)?;
        let e_l = common_order(&l_sub, Var::W, w_root)?.ok_or(BlowupError::IdenticallyZeroQuadratic)?;
        let lc_div = divide_family(&l_sub, Var::W, w_root, e_l)?;

        let spec = |fam: &[SparsePoly<FieldElement>; 3]| fam.clone().map(|f| f.specialize(Var::W, w_root));
        let g_raw = spec(&gp);
        let h_raw = spec(&hp);
        let l_raw = spec(&lc_div);
        let raw_all: Vec<_> = g_raw.iter().chain(h_raw.iter()).cloned().collect();
        let s0_power = common_order(&raw_all, Var::S0, zero)?.ok_or(BlowupError::IdenticallyZeroQuadratic)?;
        let g_forms = divide_family(&g_raw, Var::S0, zero, s0_power)?;
        let h_forms = divide_family(&h_raw, Var::S0, zero, s0_power)?;
        let l_s0_power = common_order(&l_raw, Var::S0, zero)?.ok_or(BlowupError::IdenticallyZeroQuadratic)?;
        let l_forms = divide_family(&l_raw, Var::S0, zero, l_s0_power)?;

        let lp = s.l_poly().substitute(&subst)?.divide_exact_linear(Var::W, w_root, e_l)?;
        let q_sub = s.q_poly().substitute(&subst)?;
        let e_q = q_sub.vanishing_order(Var::W, w_root)?;
        let qp = q_sub.divide_exact_linear(Var::W, w_root, e_q)?;

        let systems = p1_points(field)
            .map(|st| FiberSystem {
                l: core::array::from_fn(|i| eval_s(&l_forms[i], &st)),
                g: core::array::from_fn(|i| eval_s(&g_forms[i], &st)),
                h: core::array::from_fn(|i| eval_s(&h_forms[i], &st)),
            })
            .collect();

        Ok(Self {
            side,
            center: *center,
            dehomogenize: d,
            images,
            w_root,
            e,
            e_l,
            s0_power,
            l_s0_power,
            lp,
            qp,
            gp,
            hp,
            l_forms,
            g_forms,
            h_forms,
            l_raw,
            g_raw,
            h_raw,
            systems,
        })
    }

    /// Fiber system on the line `s`.
    pub fn system(&self, s: &P1) -> &FiberSystem<FieldElement> {
        &self.systems[s.rank() as usize]
    }

    fn lines(&self) -> impl Iterator<Item = (P1, &FiberSystem<FieldElement>)> {
        let field = self.center.get(0).field();
        p1_points(field).zip(self.systems.iter())
    }

    /// The base point `s0 c + (w - c_e) dir(s)` for given `s`, `w`.
    pub fn image_point(&self, s: &P1, w: FieldElement) -> [FieldElement; 3] {
        let [s0, s1] = *s.coords();
        let mut vals = [s0.zero_like(); NVARS];
        vals[Var::S0.index()] = s0;
        vals[Var::S1.index()] = s1;
        vals[Var::W.index()] = w;
        core::array::from_fn(|i| self.images[i].eval(&vals))
    }

    /// The unique line whose system `moving` satisfies. Lines where the
    /// system vanishes identically only claim points no other line takes.
    pub fn resolve_s(&self, moving: &P2) -> Result<P1, BlowupError> {
        let v = moving.coords();
        let mut hits = Vec::new();
        let mut null_lines = Vec::new();
        for (st, sys) in self.lines() {
            if sys.is_degenerate() {
                null_lines.push(st);
            } else if sys.satisfies(v) {
                hits.push(st);
            }
        }
        match (hits.len(), null_lines.len()) {
            (1, _) => Ok(hits[0]),
            (0, 1) => Ok(null_lines[0]),
            (0, 0) => Err(BlowupError::NoRationalS),
            (0, n) => Err(BlowupError::AmbiguousS(n)),
            (n, _) => Err(BlowupError::AmbiguousS(n)),
        }
    }

    /// Lines on which the chart system vanishes identically.
    pub fn null_lines(&self) -> Vec<P1> {
        self.lines().filter(|(_, sys)| sys.is_degenerate()).map(|(s, _)| s).collect()
    }

    /// Boundary points line by line, in canonical order of `s`. Lines whose
    /// two points are conjugate contribute nothing. On a null line the
    /// points are the fiber points that resolve to it.
    pub fn exceptional_points(&self, surface: &FpSurface) -> Result<Vec<BoundaryPoint>, BlowupError> {
        let mut out = Vec::new();
        let mut fiber: Option<Vec<P2>> = None;
        for (st, sys) in self.lines() {
            match sys.points() {
                Ok(pts) => {
                    out.extend(pts.points.into_iter().map(|m| BoundaryPoint { moving: m, center: self.center, s: st }));
                }
                Err(_) => {
                    let fib = fiber.get_or_insert_with(|| surface.fiber_points(self.side, &self.center));
                    for m in fib.iter() {
                        if self.resolve_s(m)? == st {
                            out.push(BoundaryPoint { moving: *m, center: self.center, s: st });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Number of lines whose two points are conjugate over `F_p^2`.
    pub fn irrational_lines(&self) -> usize {
        self.lines().filter(|(_, sys)| matches!(sys.points(), Ok(p) if p.points.is_empty())).count()
    }

    /// The other boundary point on the same line, or `p` itself on a
    /// ramified line.
    pub fn sigma_extended(&self, surface: &FpSurface, p: &BoundaryPoint) -> Result<BoundaryPoint, BlowupError> {
        if p.center != self.center {
            return Err(BlowupError::NotOnFiber);
        }
        let sys = self.system(&p.s);
        let moving = match sys.partner(&p.moving) {
            Ok(m) => m,
            Err(FiberError::NotOnFiber) => return Err(BlowupError::NotOnFiber),
            Err(_) => {
                let mates: Vec<_> = surface
                    .fiber_points(self.side, &self.center)
                    .into_iter()
                    .filter(|m| matches!(self.resolve_s(m), Ok(t) if t == p.s))
                    .collect();
                if !mates.contains(&p.moving) || mates.len() > 2 {
                    return Err(BlowupError::NotOnFiber);
                }
                *mates.iter().find(|m| **m != p.moving).unwrap_or(&p.moving)
            }
        };
        Ok(BoundaryPoint { moving, ..*p })
    }

    /// `(H'_ij^2 - 4 G'_i G'_j) / L'_k^2` on the exceptional line, for the
    /// `s0`-free family and for the raw one.
    pub fn ramification_prime(&self) -> Result<RamificationPrime, BlowupError> {
        let stripped = branch_form(&self.l_forms, &self.g_forms, &self.h_forms)?;
        let raw = branch_form(&self.l_raw, &self.g_raw, &self.h_raw)?;
        let s0_power = 2 * self.s0_power - 2 * self.l_s0_power;
        Ok(RamificationPrime { stripped, raw, s0_power })
    }

    /// Sorted term listing of the chart, for golden comparisons.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "side {}", self.side.name());
        let _ = writeln!(out, "center {}", self.center);
        let _ = writeln!(out, "dehomogenize {}", self.dehomogenize);
        let _ = writeln!(out, "w_root {}", self.w_root);
        let _ =
            writeln!(out, "e {} e_l {} s0_power {} l_s0_power {}", self.e, self.e_l, self.s0_power, self.l_s0_power);
        for (i, f) in self.images.iter().enumerate() {
            let _ = writeln!(out, "image {i}: {f:?}");
        }
        for (i, f) in self.l_forms.iter().enumerate() {
            let _ = writeln!(out, "L'{i}: {f:?}");
        }
        for (i, f) in self.g_forms.iter().enumerate() {
            let _ = writeln!(out, "G'{i}: {f:?}");
        }
        for ((k, l), f) in PAIRS.iter().zip(self.h_forms.iter()) {
            let _ = writeln!(out, "H'{k}{l}: {f:?}");
        }
        out
    }
}

fn branch_form(
    l: &[SparsePoly<FieldElement>; 3],
    g: &[SparsePoly<FieldElement>; 3],
    h: &[SparsePoly<FieldElement>; 3],
) -> Result<SparsePoly<FieldElement>, BlowupError> {
    let mut result: Option<SparsePoly<FieldElement>> = None;
    for k in 0..3 {
        if l[k].is_zero() {
            continue;
        }
        let (i, j) = pair_of_complement(k);
        let hij = &h[crate::fiber::pair_slot(i, j)];
        let four = l[k].terms().next().map(|(_, c)| c.from_i64_like(4)).expect("nonzero");
        let num = hij * hij - (&g[i] * &g[j]).scale(four);
        let q = num.div_exact(&(&l[k] * &l[k])).map_err(|_| BlowupError::InexactQuotient)?;
        match &result {
            None => result = Some(q),
            Some(prev) if *prev != q => return Err(BlowupError::InexactQuotient),
            Some(_) => {}
        }
    }
    result.ok_or(BlowupError::InexactQuotient)
}

/// Charts at every degenerate base of both sides, keyed by side and center.
pub fn build_charts(s: &FpSurface) -> Result<BTreeMap<(Side, P2), BlowupChart>, BlowupError> {
    let mut out = BTreeMap::new();
    for side in Side::BOTH {
        for c in s.degenerate_fibers(side) {
            out.insert((side, c), BlowupChart::build(s, side, &c)?);
        }
    }
    Ok(out)
}

/// Every chart builds, has no null line, and assigns each rational point of
/// its degenerate fiber a unique line.
pub fn charts_resolve(s: &FpSurface) -> bool {
    let Ok(charts) = build_charts(s) else { return false };
    charts.values().all(|chart| {
        chart.null_lines().is_empty()
            && s.fiber_points(chart.side, &chart.center).iter().all(|m| chart.resolve_s(m).is_ok())
    })
}

/// Relation between a boundary point and its partner: the symmetric
/// products `(v_i v'_i, v_i v'_j + v_j v'_i)` are proportional to
/// `(G'_0, G'_1, G'_2, -H'_01, -H'_02, -H'_12)`, and both points lie on the
/// line `L'`.
pub fn partner_relation_holds(sys: &FiberSystem<FieldElement>, v: &P2, w: &P2) -> bool {
    let (v, w) = (v.coords(), w.coords());
    let on_line = |u: &[FieldElement; 3]| (sys.l[0] * u[0] + sys.l[1] * u[1] + sys.l[2] * u[2]).is_zero();
    if !on_line(v) || !on_line(w) {
        return false;
    }
    let prods: [FieldElement; 6] = [
        v[0] * w[0],
        v[1] * w[1],
        v[2] * w[2],
        v[0] * w[1] + v[1] * w[0],
        v[0] * w[2] + v[2] * w[0],
        v[1] * w[2] + v[2] * w[1],
    ];
    let coeffs = [sys.g[0], sys.g[1], sys.g[2], -sys.h[0], -sys.h[1], -sys.h[2]];
    (0..6).all(|i| (i + 1..6).all(|j| (prods[i] * coeffs[j] - prods[j] * coeffs[i]).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

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

    #[test]
    fn w1_chart_family() {
        let s = w1(29);
        let f = s.field();
        let c = P2::from_i64(f, [-1, -1, 1]).unwrap();
        let chart = BlowupChart::build(&s, Side::X, &c).unwrap();
        assert_eq!(chart.e, 1);
        assert_eq!(chart.e_l, 0);
        assert_eq!(chart.s0_power, 3);
        assert_eq!(chart.l_s0_power, 1);
        // the center is (1 : 1 : -1), so d = 0 and w_root = 1
        assert_eq!(chart.w_root, f.one());
        let pr = chart.ramification_prime().unwrap();
        assert_eq!(pr.s0_power, 4);
        assert_eq!(pr.raw.degree(), Some(6));
        assert!(pr.stripped.degree().unwrap() <= 6);
        let mut s0_4 = SparsePoly::constant(f.one());
        for _ in 0..4 {
            s0_4 = &s0_4 * &SparsePoly::var(Var::S0, f.one());
        }
        assert_eq!(&s0_4 * &pr.stripped, pr.raw);
        assert_eq!(
            BlowupChart::build(&s, Side::X, &P2::from_i64(f, [1, 0, 1]).unwrap()).unwrap_err(),
            BlowupError::NotDegenerate
        );
    }

    #[test]
    fn image_passes_through_center() {
        let s = w1(29);
        for chart in build_charts(&s).unwrap().values() {
            for st in p1_points(s.field()) {
                let pt = chart.image_point(&st, chart.w_root);
                if st.coords()[0].is_zero() {
                    assert!(pt.iter().all(|c| c.is_zero()));
                } else {
                    assert_eq!(P2::new(pt).unwrap(), chart.center);
                }
            }
        }
    }

    #[test]
    fn boundary_points_cover_the_fiber() {
        let s = w1(29);
        let charts = build_charts(&s).unwrap();
        assert_eq!(charts.len(), 8);
        for chart in charts.values() {
            let bps = chart.exceptional_points(&s).unwrap();
            let mut fiber = s.fiber_points(chart.side, &chart.center);
            let mut seen: Vec<P2> = bps.iter().map(|b| b.moving).collect();
            seen.sort();
            fiber.sort();
            assert_eq!(seen, fiber);
            for b in &bps {
                assert_eq!(chart.resolve_s(&b.moving).unwrap(), b.s);
                let o = chart.sigma_extended(&s, b).unwrap();
                assert_eq!(o.s, b.s);
                assert_eq!(chart.sigma_extended(&s, &o).unwrap(), *b);
                assert!(partner_relation_holds(chart.system(&b.s), &b.moving, &o.moving));
            }
            assert!(chart.null_lines().is_empty());
        }
    }

    #[test]
    fn w1_orbit_swap_on_degenerate_fiber() {
        let s = w1(29);
        let f = s.field();
        let c = P2::from_i64(f, [-1, -1, 1]).unwrap();
        let chart = BlowupChart::build(&s, Side::X, &c).unwrap();
        let y = P2::from_i64(f, [1, 0, 1]).unwrap();
        let y2 = P2::from_i64(f, [-1, 2, 1]).unwrap();
        let st = chart.resolve_s(&y).unwrap();
        assert_eq!(chart.resolve_s(&y2).unwrap(), st);
        let b = BoundaryPoint { moving: y, center: c, s: st };
        assert_eq!(chart.sigma_extended(&s, &b).unwrap().moving, y2);
        let bps = chart.exceptional_points(&s).unwrap();
        assert_eq!(bps.iter().filter(|b| b.moving == y).count(), 1);
    }

    #[test]
    fn fixed_boundary_points_match_branch_roots() {
        for p in [29u64, 37, 41, 101] {
            let s = w1(p);
            for chart in build_charts(&s).unwrap().values() {
                let pr = chart.ramification_prime().unwrap();
                let roots = pr.rational_roots();
                assert!(roots.len() <= 6);
                let mut fixed = 0;
                for b in chart.exceptional_points(&s).unwrap() {
                    let is_fixed = chart.sigma_extended(&s, &b).unwrap() == b;
                    assert_eq!(is_fixed, roots.contains(&b.s));
                    fixed += usize::from(is_fixed);
                }
                assert!(fixed <= 6);
            }
        }
    }
}
