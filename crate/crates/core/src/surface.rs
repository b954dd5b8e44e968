//! Wehler surfaces `S = V(L, Q)` in `P^2 x P^2`.
//!
//! `L = sum a_ij x_i y_j` and `Q = sum b_ijkl x_i x_j y_k y_l` with `i <= j`,
//! `k <= l`. Index pairs `i <= j` are stored in the order of [`PAIR6`].

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::fiber::{self, line_basis, pair_of_complement, FiberCoeffs, FiberSystem, PAIRS};
use crate::field::{FieldElement, PrimeField, Rational, Scalar};
use crate::poly::{SparsePoly, Var};
use crate::projective::{p2_points, ProjectivePoint2, P2};
use crate::{fiber::BinaryRoots, SurfaceError};

/// Ordered pairs `i <= j` in storage order.
pub const PAIR6: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Storage slot of the unordered pair `{i, j}`.
#[inline]
pub fn pair6(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => panic!("index out of range: ({i}, {j})"),
    }
}

/// Which projection a fiber belongs to. `X` has base in the x-plane and
/// moving coordinates in y (the involution `sigma_x` fixes x); `Y` is the
/// mirror image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::X, Side::Y];

    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }

    /// Variable of base coordinate `i`.
    pub fn base_var(self, i: usize) -> Var {
        match self {
            Side::X => Var::x(i),
            Side::Y => Var::y(i),
        }
    }

    /// Variable of moving coordinate `i`.
    pub fn fiber_var(self, i: usize) -> Var {
        self.other().base_var(i)
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::X => "x",
            Side::Y => "y",
        }
    }
}

/// A point `(a, b)` with `a` in the x-plane and `b` in the y-plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurfacePoint<C> {
    pub a: ProjectivePoint2<C>,
    pub b: ProjectivePoint2<C>,
}

pub type Point = SurfacePoint<FieldElement>;

impl<C: Scalar> SurfacePoint<C> {
    pub fn new(a: ProjectivePoint2<C>, b: ProjectivePoint2<C>) -> Self {
        Self { a, b }
    }

    pub fn base(&self, side: Side) -> &ProjectivePoint2<C> {
        match side {
            Side::X => &self.a,
            Side::Y => &self.b,
        }
    }

    pub fn moving(&self, side: Side) -> &ProjectivePoint2<C> {
        self.base(side.other())
    }

    /// Replaces the moving coordinate of `side`.
    pub fn with_moving(&self, side: Side, v: ProjectivePoint2<C>) -> Self {
        match side {
            Side::X => Self { a: self.a, b: v },
            Side::Y => Self { a: v, b: self.b },
        }
    }

    /// Builds a point from base and moving coordinates of `side`.
    pub fn from_side(side: Side, base: ProjectivePoint2<C>, moving: ProjectivePoint2<C>) -> Self {
        match side {
            Side::X => Self { a: base, b: moving },
            Side::Y => Self { a: moving, b: base },
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WehlerSurface<C> {
    a: [[C; 3]; 3],
    b: [[C; 6]; 6],
}

pub type FpSurface = WehlerSurface<FieldElement>;

/// `L_j` and `Q_kl` of one side as polynomials in the base variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientPolys<C> {
    pub side: Side,
    pub lc: [SparsePoly<C>; 3],
    /// Symmetric; off-diagonal entries carry the full cross coefficient.
    pub qc: [[SparsePoly<C>; 3]; 3],
}

/// `G_k` and `H_ij` of one side. `h` is indexed like [`PAIRS`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GHSystem<C> {
    pub side: Side,
    pub lc: [SparsePoly<C>; 3],
    pub g: [SparsePoly<C>; 3],
    pub h: [SparsePoly<C>; 3],
}

impl<C: Scalar> GHSystem<C> {
    pub fn h(&self, i: usize, j: usize) -> &SparsePoly<C> {
        &self.h[fiber::pair_slot(i, j)]
    }
}

/// Branch curve of one projection: `(H_ij^2 - 4 G_i G_j) / L_k^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationSextic<C> {
    pub side: Side,
    pub g: SparsePoly<C>,
}

impl<C: Scalar> RamificationSextic<C> {
    pub fn eval_at(&self, base: &ProjectivePoint2<C>) -> C {
        let zero = base.get(0).zero_like();
        let mut vals = [zero; crate::poly::NVARS];
        for i in 0..3 {
            vals[self.side.base_var(i).index()] = base.get(i);
        }
        self.g.eval(&vals)
    }
}

/// Result of the rational Jacobian scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub points_checked: usize,
    pub singular_points: Vec<Point>,
}

impl SmoothnessReport {
    /// The Jacobian has rank 2 at every rational point. This does not
    /// exclude singular points over extensions.
    pub fn no_rational_singular_point(&self) -> bool {
        self.singular_points.is_empty()
    }
}

fn quad_products<C: Scalar>(v: &[C; 3]) -> [C; 6] {
    PAIR6.map(|(i, j)| v[i] * v[j])
}

impl<C: Scalar> WehlerSurface<C> {
    /// `a[i][j]` is the coefficient of `x_i y_j`, `b[pair6(i,j)][pair6(k,l)]`
    /// that of `x_i x_j y_k y_l`.
    pub fn new(a: [[C; 3]; 3], b: [[C; 6]; 6]) -> Result<Self, SurfaceError> {
        if a.iter().flatten().all(|c| c.is_zero()) {
            return Err(SurfaceError::ZeroForm("L"));
        }
        if b.iter().flatten().all(|c| c.is_zero()) {
            return Err(SurfaceError::ZeroForm("Q"));
        }
        Ok(Self { a, b })
    }

    /// Accumulates entries given with arbitrary index order.
    pub fn from_entries(
        zero: C,
        l_entries: &[(usize, usize, C)],
        q_entries: &[(usize, usize, usize, usize, C)],
    ) -> Result<Self, SurfaceError> {
        let mut a = [[zero; 3]; 3];
        let mut b = [[zero; 6]; 6];
        for &(i, j, c) in l_entries {
            a[i][j] = a[i][j] + c;
        }
        for &(i, j, k, l, c) in q_entries {
            let (r, s) = (pair6(i, j), pair6(k, l));
            b[r][s] = b[r][s] + c;
        }
        Self::new(a, b)
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> C {
        self.a[i][j]
    }

    #[inline]
    pub fn b(&self, i: usize, j: usize, k: usize, l: usize) -> C {
        self.b[pair6(i, j)][pair6(k, l)]
    }

    pub fn a_matrix(&self) -> &[[C; 3]; 3] {
        &self.a
    }

    pub fn b_matrix(&self) -> &[[C; 6]; 6] {
        &self.b
    }

    fn zero(&self) -> C {
        self.a[0][0].zero_like()
    }

    fn one(&self) -> C {
        self.a[0][0].one_like()
    }

    pub fn map_coeffs<D: Scalar>(&self, mut f: impl FnMut(C) -> D) -> Result<WehlerSurface<D>, SurfaceError> {
        let a = self.a.map(|row| row.map(&mut f));
        let b = self.b.map(|row| row.map(&mut f));
        WehlerSurface::new(a, b)
    }

    pub fn eval_l(&self, a: &[C; 3], b: &[C; 3]) -> C {
        let mut acc = self.zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + self.a[i][j] * a[i] * b[j];
            }
        }
        acc
    }

    pub fn eval_q(&self, a: &[C; 3], b: &[C; 3]) -> C {
        let (pa, pb) = (quad_products(a), quad_products(b));
        let mut acc = self.zero();
        for r in 0..6 {
            for s in 0..6 {
                acc = acc + self.b[r][s] * pa[r] * pb[s];
            }
        }
        acc
    }

    pub fn contains(&self, p: &SurfacePoint<C>) -> bool {
        let (a, b) = (p.a.coords(), p.b.coords());
        self.eval_l(a, b).is_zero() && self.eval_q(a, b).is_zero()
    }

    /// Line and conic of the fiber of `side` over `base`.
    pub fn fiber_coeffs(&self, side: Side, base: &[C; 3]) -> FiberCoeffs<C> {
        let zero = self.zero();
        let m = quad_products(base);
        let mut l = [zero; 3];
        let mut q = [[zero; 3]; 3];
        match side {
            Side::X => {
                for (j, lj) in l.iter_mut().enumerate() {
                    *lj = (0..3).fold(zero, |acc, i| acc + self.a[i][j] * base[i]);
                }
                for (s, &(k, kk)) in PAIR6.iter().enumerate() {
                    let v = (0..6).fold(zero, |acc, r| acc + self.b[r][s] * m[r]);
                    q[k][kk] = v;
                    q[kk][k] = v;
                }
            }
            Side::Y => {
                for (i, li) in l.iter_mut().enumerate() {
                    *li = (0..3).fold(zero, |acc, j| acc + self.a[i][j] * base[j]);
                }
                for (r, &(i, j)) in PAIR6.iter().enumerate() {
                    let v = (0..6).fold(zero, |acc, s| acc + self.b[r][s] * m[s]);
                    q[i][j] = v;
                    q[j][i] = v;
                }
            }
        }
        FiberCoeffs { l, q }
    }

    pub fn fiber_system(&self, side: Side, base: &ProjectivePoint2<C>) -> FiberSystem<C> {
        self.fiber_coeffs(side, base.coords()).system()
    }

    /// `(G_k, H_kl, G_l)` at `base`: the quadratic
    /// `G_k v_l^2 + H_kl v_k v_l + G_l v_k^2` in the moving coordinates.
    pub fn fiber_quadratic(
        &self,
        side: Side,
        base: &ProjectivePoint2<C>,
        pair: (usize, usize),
    ) -> Result<[C; 3], SurfaceError> {
        let sys = self.fiber_system(side, base);
        if sys.is_degenerate() {
            return Err(SurfaceError::DegenerateBase);
        }
        Ok(sys.pair_quadratic(pair.0, pair.1))
    }

    /// Base point where every `G` and `H` vanishes and the fiber is a curve.
    pub fn is_degenerate_base(&self, side: Side, base: &ProjectivePoint2<C>) -> bool {
        let fc = self.fiber_coeffs(side, base.coords());
        fc.system().is_degenerate() && fc.is_positive_dimensional()
    }

    pub fn l_poly(&self) -> SparsePoly<C> {
        let one = self.one();
        let mut f = SparsePoly::zero();
        for i in 0..3 {
            for j in 0..3 {
                let t = SparsePoly::var(Var::x(i), one) * SparsePoly::var(Var::y(j), one);
                f = f + t.scale(self.a[i][j]);
            }
        }
        f
    }

    pub fn q_poly(&self) -> SparsePoly<C> {
        let one = self.one();
        let v = |x: Var| SparsePoly::var(x, one);
        let mut f = SparsePoly::zero();
        for (r, &(i, j)) in PAIR6.iter().enumerate() {
            let xs = v(Var::x(i)) * v(Var::x(j));
            for (s, &(k, l)) in PAIR6.iter().enumerate() {
                let ys = v(Var::y(k)) * v(Var::y(l));
                f = f + (&xs * &ys).scale(self.b[r][s]);
            }
        }
        f
    }

    pub fn coefficient_polys(&self, side: Side) -> CoefficientPolys<C> {
        let one = self.one();
        let v = |i: usize| SparsePoly::var(side.base_var(i), one);
        let lc = core::array::from_fn(|t| {
            let mut f = SparsePoly::zero();
            for u in 0..3 {
                let c = match side {
                    Side::X => self.a[u][t],
                    Side::Y => self.a[t][u],
                };
                f = f + v(u).scale(c);
            }
            f
        });
        let qc = core::array::from_fn(|k| {
            core::array::from_fn(|l| {
                let slot = pair6(k, l);
                let mut f = SparsePoly::zero();
                for (r, &(i, j)) in PAIR6.iter().enumerate() {
                    let c = match side {
                        Side::X => self.b[r][slot],
                        Side::Y => self.b[slot][r],
                    };
                    f = f + (v(i) * v(j)).scale(c);
                }
                f
            })
        });
        CoefficientPolys { side, lc, qc }
    }

    pub fn gh_system(&self, side: Side) -> GHSystem<C> {
        let CoefficientPolys { lc: l, qc: q, .. } = self.coefficient_polys(side);
        let g = core::array::from_fn(|k| {
            let (i, j) = pair_of_complement(k);
            &(&(&l[j] * &l[j]) * &q[i][i]) - &(&(&l[i] * &l[j]) * &q[i][j]) + &(&l[i] * &l[i]) * &q[j][j]
        });
        let h = PAIRS.map(|(i, j)| {
            let k = fiber::complement(i, j);
            let two = self.one().from_i64_like(2);
            (&(&l[i] * &l[j]) * &q[k][k]).scale(two) - &(&l[i] * &l[k]) * &q[j][k] - &(&l[j] * &l[k]) * &q[i][k]
                + &(&l[k] * &l[k]) * &q[i][j]
        });
        GHSystem { side, lc: l, g, h }
    }

    /// Exact quotient `(H_ij^2 - 4 G_i G_j) / L_k^2`; every `k` with
    /// `L_k != 0` must give the same polynomial.
    pub fn ramification_sextic(&self, side: Side) -> Result<RamificationSextic<C>, SurfaceError> {
        let gh = self.gh_system(side);
        let four = self.one().from_i64_like(4);
        let mut result: Option<SparsePoly<C>> = None;
        for k in 0..3 {
            if gh.lc[k].is_zero() {
                continue;
            }
            let (i, j) = pair_of_complement(k);
            let h = gh.h(i, j);
            let num = h * h - (&gh.g[i] * &gh.g[j]).scale(four);
            let den = &gh.lc[k] * &gh.lc[k];
            let q = num.div_exact(&den).map_err(|_| SurfaceError::InexactQuotient)?;
            match &result {
                None => result = Some(q),
                Some(prev) if *prev != q => return Err(SurfaceError::InexactQuotient),
                Some(_) => {}
            }
        }
        let g = result.ok_or(SurfaceError::ZeroForm("L"))?;
        Ok(RamificationSextic { side, g })
    }
}

impl WehlerSurface<Rational> {
    /// Reduction mod `p`; fails on a denominator divisible by `p` or when a
    /// form vanishes mod `p`.
    pub fn reduce(&self, field: PrimeField) -> Result<FpSurface, SurfaceError> {
        let mut err = None;
        let s = self.map_coeffs(|c| match field.from_rational(&c) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                field.zero()
            }
        });
        if let Some(e) = err {
            return Err(e.into());
        }
        s
    }

    /// Degenerate bases with primitive integer coordinates of absolute value
    /// at most `height`, in canonical form.
    pub fn degenerate_fibers_bounded(&self, side: Side, height: i64) -> Vec<ProjectivePoint2<Rational>> {
        let mut found = BTreeSet::new();
        let r = |v: i64| Rational::from_integer(i128::from(v));
        for c0 in -height..=height {
            for c1 in -height..=height {
                for c2 in -height..=height {
                    let Ok(pt) = ProjectivePoint2::new([r(c0), r(c1), r(c2)]) else { continue };
                    if found.contains(&pt) {
                        continue;
                    }
                    if self.is_degenerate_base(side, &pt) {
                        found.insert(pt);
                    }
                }
            }
        }
        found.into_iter().collect()
    }
}

impl FpSurface {
    pub fn field(&self) -> PrimeField {
        self.a[0][0].field()
    }

    /// All degenerate bases of `side` in canonical order.
    pub fn degenerate_fibers(&self, side: Side) -> Vec<P2> {
        p2_points(self.field()).filter(|c| self.is_degenerate_base(side, c)).collect()
    }

    /// Rational points of the fiber of `side` over `base`, sorted.
    pub fn fiber_points(&self, side: Side, base: &P2) -> Vec<P2> {
        let fc = self.fiber_coeffs(side, base.coords());
        let mut out: Vec<P2> = match line_basis(&fc.l) {
            None => p2_points(self.field()).filter(|v| fc.conic_at(v.coords()).is_zero()).collect(),
            Some([u, v]) => {
                let [qa, qb, qc] = fc.restricted_conic(&u, &v);
                let point = |s: FieldElement, t: FieldElement| {
                    P2::new(core::array::from_fn(|i| s * u[i] + t * v[i])).expect("independent basis")
                };
                match fiber::binary_quadratic_roots(qa, qb, qc) {
                    BinaryRoots::All => crate::projective::p1_points(self.field())
                        .map(|st| point(st.coords()[0], st.coords()[1]))
                        .collect(),
                    BinaryRoots::Roots { roots, .. } => {
                        roots.iter().map(|st| point(st.coords()[0], st.coords()[1])).collect()
                    }
                }
            }
        };
        out.sort();
        out
    }

    /// Every rational point, each once, sorted lexicographically.
    pub fn enumerate_points(&self) -> Vec<Point> {
        let mut pts = Vec::new();
        for a in p2_points(self.field()) {
            for b in self.fiber_points(Side::X, &a) {
                pts.push(Point::new(a, b));
            }
        }
        pts
    }

    /// Rank of the 2x6 Jacobian of `(L, Q)` at `p` is 2.
    pub fn is_smooth_at(&self, p: &Point) -> bool {
        let (a, b) = (p.a.coords(), p.b.coords());
        let fx = self.fiber_coeffs(Side::X, a);
        let fy = self.fiber_coeffs(Side::Y, b);
        let zero = self.zero();
        let mut grad_l = [zero; 6];
        let mut grad_q = [zero; 6];
        for i in 0..3 {
            // L = sum_i Ly_i(b) x_i = sum_j Lx_j(a) y_j
            grad_l[i] = fy.l[i];
            grad_l[3 + i] = fx.l[i];
            grad_q[i] = conic_partial(&fy.q, a, i);
            grad_q[3 + i] = conic_partial(&fx.q, b, i);
        }
        (0..6).any(|i| (i + 1..6).any(|j| !(grad_l[i] * grad_q[j] - grad_l[j] * grad_q[i]).is_zero()))
    }

    pub fn is_smooth_rational(&self) -> SmoothnessReport {
        let pts = self.enumerate_points();
        let singular_points = pts.iter().filter(|p| !self.is_smooth_at(p)).copied().collect();
        SmoothnessReport { points_checked: pts.len(), singular_points }
    }
}

/// `d/dv_i` of `sum_{k<=l} q[k][l] v_k v_l`.
fn conic_partial<C: Scalar>(q: &[[C; 3]; 3], v: &[C; 3], i: usize) -> C {
    let mut acc = q[i][i] * v[i] + q[i][i] * v[i];
    for j in 0..3 {
        if j != i {
            acc = acc + q[i][j] * v[j];
        }
    }
    acc
}
