//! Fibers of the two projections as scalar data.
//!
//! Over a base point the fiber is cut out by a line (from `L`) and a conic
//! (from `Q`) in the moving plane. Eliminating the coordinate `m` with the
//! line gives, for the complementary pair `(k, l)`, the binary quadratic
//!
//! ```text
//! G_k x_l^2 + H_kl x_k x_l + G_l x_k^2  =  L_m^2 * Q|line
//! ```
//!
//! whose roots are the two fiber points. [`FiberSystem`] holds the line
//! coefficients together with the `G`, `H` values and is also produced by
//! blow-up charts, so the same solver handles regular and exceptional fibers.

use alloc::vec::Vec;

use crate::field::Scalar;
use crate::projective::{ProjectivePoint1, ProjectivePoint2};
use crate::FiberError;

/// Index pairs in the order used everywhere: `(0,1), (0,2), (1,2)`.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[inline]
pub fn complement(k: usize, l: usize) -> usize {
    3 - k - l
}

#[inline]
pub fn pair_slot(k: usize, l: usize) -> usize {
    let (k, l) = if k < l { (k, l) } else { (l, k) };
    match (k, l) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("not an index pair: ({k}, {l})"),
    }
}

pub(crate) fn dot<C: Scalar>(u: &[C; 3], v: &[C; 3]) -> C {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Two independent vectors spanning the line `l . v = 0`.
pub fn line_basis<C: Scalar>(l: &[C; 3]) -> Option<[[C; 3]; 2]> {
    let m = l.iter().position(|c| !c.is_zero())?;
    let zero = l[m].zero_like();
    let one = l[m].one_like();
    let inv = l[m].inv()?;
    let mut basis = [[zero; 3]; 2];
    let others = [(m + 1) % 3, (m + 2) % 3];
    for (vec, &i) in basis.iter_mut().zip(others.iter()) {
        vec[i] = one;
        vec[m] = -(l[i] * inv);
    }
    Some(basis)
}

/// Roots in P^1 of `a X^2 + b X Y + c Y^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinaryRoots<C> {
    /// The form is identically zero.
    All,
    /// Distinct rational roots; `double` marks a repeated root.
    Roots { roots: Vec<ProjectivePoint1<C>>, double: bool },
}

pub fn binary_quadratic_roots<C: Scalar>(a: C, b: C, c: C) -> BinaryRoots<C> {
    let zero = a.zero_like();
    let one = a.one_like();
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return BinaryRoots::All;
    }
    let mk = |u: C, v: C| ProjectivePoint1::new([u, v]).expect("nonzero root");
    if a.is_zero() {
        // Y (b X + c Y)
        let inf = mk(one, zero);
        if b.is_zero() {
            return BinaryRoots::Roots { roots: alloc::vec![inf], double: true };
        }
        let other = mk(-c, b);
        return BinaryRoots::Roots { roots: alloc::vec![other, inf], double: false };
    }
    let two_a = a + a;
    let disc = b * b - a.from_i64_like(4) * a * c;
    let Some(r) = disc.sqrt() else {
        return BinaryRoots::Roots { roots: Vec::new(), double: false };
    };
    let inv = two_a.inv().expect("odd characteristic");
    if r.is_zero() {
        return BinaryRoots::Roots { roots: alloc::vec![mk(-b * inv, one)], double: true };
    }
    let mut roots = alloc::vec![mk((-b + r) * inv, one), mk((-b - r) * inv, one)];
    roots.sort();
    BinaryRoots::Roots { roots, double: false }
}

/// Line and conic of one fiber: `l[j]` is the coefficient of the moving
/// coordinate `j` in `L`, `q[k][l]` the coefficient of the moving monomial
/// `v_k v_l` in `Q` (symmetric, off-diagonal entries carry the full cross
/// coefficient).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberCoeffs<C> {
    pub l: [C; 3],
    pub q: [[C; 3]; 3],
}

impl<C: Scalar> FiberCoeffs<C> {
    pub fn line_at(&self, v: &[C; 3]) -> C {
        dot(&self.l, v)
    }

    pub fn conic_at(&self, v: &[C; 3]) -> C {
        let q = &self.q;
        q[0][0] * v[0] * v[0]
            + q[1][1] * v[1] * v[1]
            + q[2][2] * v[2] * v[2]
            + q[0][1] * v[0] * v[1]
            + q[0][2] * v[0] * v[2]
            + q[1][2] * v[1] * v[2]
    }

    /// Conic restricted to the span of `u`, `v`: coefficients of
    /// `s^2, s t, t^2` for the point `s u + t v`.
    pub fn restricted_conic(&self, u: &[C; 3], v: &[C; 3]) -> [C; 3] {
        let qu = self.conic_at(u);
        let qv = self.conic_at(v);
        let sum: [C; 3] = core::array::from_fn(|i| u[i] + v[i]);
        [qu, self.conic_at(&sum) - qu - qv, qv]
    }

    /// Exact positive-dimension test: the line is identically zero, or the
    /// conic vanishes on the whole line.
    pub fn is_positive_dimensional(&self) -> bool {
        match line_basis(&self.l) {
            None => true,
            Some([u, v]) => self.restricted_conic(&u, &v).iter().all(|c| c.is_zero()),
        }
    }

    pub fn system(&self) -> FiberSystem<C> {
        let (l, q) = (&self.l, &self.q);
        let g = core::array::from_fn(|k| {
            let (i, j) = pair_of_complement(k);
            l[j] * l[j] * q[i][i] - l[i] * l[j] * q[i][j] + l[i] * l[i] * q[j][j]
        });
        let h = PAIRS.map(|(i, j)| {
            let k = complement(i, j);
            let two = l[i].from_i64_like(2);
            two * l[i] * l[j] * q[k][k] - l[i] * l[k] * q[j][k] - l[j] * l[k] * q[i][k] + l[k] * l[k] * q[i][j]
        });
        FiberSystem { l: self.l, g, h }
    }
}

/// The pair `(i, j)`, `i < j`, complementary to `k`.
#[inline]
pub fn pair_of_complement(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Points of a fiber as returned by [`FiberSystem::points`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPoints<C> {
    pub points: Vec<ProjectivePoint2<C>>,
    /// The two points coincide (ramified base).
    pub ramified: bool,
}

/// Line coefficients plus the `G`, `H` values of a fiber. `h` is indexed by
/// [`PAIRS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberSystem<C> {
    pub l: [C; 3],
    pub g: [C; 3],
    pub h: [C; 3],
}

impl<C: Scalar> FiberSystem<C> {
    #[inline]
    pub fn h(&self, k: usize, l: usize) -> C {
        self.h[pair_slot(k, l)]
    }

    /// `(G_k, H_kl, G_l)`: the quadratic `G_k x_l^2 + H_kl x_k x_l + G_l x_k^2`.
    pub fn pair_quadratic(&self, k: usize, l: usize) -> [C; 3] {
        [self.g[k], self.h(k, l), self.g[l]]
    }

    pub fn pair_value(&self, k: usize, l: usize, v: &[C; 3]) -> C {
        let [gk, h, gl] = self.pair_quadratic(k, l);
        gk * v[l] * v[l] + h * v[k] * v[l] + gl * v[k] * v[k]
    }

    /// Every `G` and `H` vanishes.
    pub fn is_degenerate(&self) -> bool {
        self.g.iter().chain(self.h.iter()).all(|c| c.is_zero())
    }

    /// `v` is on the line and a root of all three pair quadratics.
    pub fn satisfies(&self, v: &[C; 3]) -> bool {
        dot(&self.l, v).is_zero() && PAIRS.iter().all(|&(k, l)| self.pair_value(k, l, v).is_zero())
    }

    /// Discriminant of the pair quadratic `(k, l)`.
    pub fn discriminant(&self, k: usize, l: usize) -> C {
        let [gk, h, gl] = self.pair_quadratic(k, l);
        h * h - gk.from_i64_like(4) * gk * gl
    }

    /// Solves the fiber: eliminate the first coordinate with a nonzero line
    /// coefficient and take the roots of the complementary pair quadratic.
    pub fn points(&self) -> Result<FiberPoints<C>, FiberError> {
        let m = self.l.iter().position(|c| !c.is_zero()).ok_or(FiberError::Degenerate)?;
        let (k, l) = pair_of_complement(m);
        let [gk, h, gl] = self.pair_quadratic(k, l);
        // in (X, Y) = (v_k, v_l): G_l X^2 + H X Y + G_k Y^2
        match binary_quadratic_roots(gl, h, gk) {
            BinaryRoots::All => Err(FiberError::Degenerate),
            BinaryRoots::Roots { roots, double } => {
                let inv = self.l[m].inv().expect("nonzero");
                let points = roots
                    .iter()
                    .map(|r| {
                        let [x, y] = *r.coords();
                        let mut v = [x; 3];
                        v[k] = x;
                        v[l] = y;
                        v[m] = -(self.l[k] * x + self.l[l] * y) * inv;
                        ProjectivePoint2::new(v).expect("root of a nonzero line")
                    })
                    .collect();
                Ok(FiberPoints { points, ramified: double })
            }
        }
    }

    /// Partner ratio `(v'_k : v'_l)` from the pair quadratic by Vieta, given
    /// the known root `v`. `None` when the pair cannot be used.
    pub fn partner_ratio(&self, v: &[C; 3], k: usize, l: usize) -> Option<[C; 2]> {
        let [gk, h, gl] = self.pair_quadratic(k, l);
        if gk.is_zero() && h.is_zero() && gl.is_zero() {
            return None;
        }
        let (ak, al) = (v[k], v[l]);
        if ak.is_zero() && al.is_zero() {
            return None;
        }
        // G_l X^2 + H X Y + G_k Y^2 = (al X - ak Y)(alpha X + beta Y)
        let (alpha, beta) = if !al.is_zero() {
            let inv = al.inv()?;
            let alpha = gl * inv;
            (alpha, (h + ak * alpha) * inv)
        } else {
            let inv = ak.inv()?;
            (-(h * inv), -(gk * inv))
        };
        Some([-beta, alpha])
    }

    /// The other point of the fiber through `v` (or `v` itself when the
    /// fiber is a double point). Pairs are tried in [`PAIRS`] order; a pair
    /// is used when its quadratic is nonzero, `v` has a nonzero `(k, l)`
    /// part and the complementary line coefficient is nonzero.
    pub fn partner(&self, v: &ProjectivePoint2<C>) -> Result<ProjectivePoint2<C>, FiberError> {
        let v = v.coords();
        if !self.satisfies(v) {
            return Err(FiberError::NotOnFiber);
        }
        for (k, l) in PAIRS {
            let m = complement(k, l);
            if self.l[m].is_zero() {
                continue;
            }
            let Some([xk, xl]) = self.partner_ratio(v, k, l) else { continue };
            let mut out = [xk; 3];
            out[k] = xk;
            out[l] = xl;
            out[m] = -(self.l[k] * xk + self.l[l] * xl) * self.l[m].inv().expect("nonzero");
            return ProjectivePoint2::new(out).map_err(|_| FiberError::NoUsablePair);
        }
        if self.is_degenerate() {
            Err(FiberError::Degenerate)
        } else {
            Err(FiberError::NoUsablePair)
        }
    }
}
