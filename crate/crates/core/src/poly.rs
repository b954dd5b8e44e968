//! Sparse multivariate polynomials over a [`Scalar`] in a fixed set of nine
//! variables: the two coordinate planes, the blow-up line parameters and the
//! dehomogenized chart coordinate `w`.
//!
//! Only what the surface and blow-up code needs is provided: ring operations,
//! substitution homomorphisms, evaluation, exact division by powers of
//! `(w - t)` and exact division by an arbitrary divisor.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::field::Scalar;
use crate::PolyError;

pub const NVARS: usize = 9;

/// Exponents above this are a hard error.
pub const MAX_EXPONENT: u16 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X0,
    X1,
    X2,
    Y0,
    Y1,
    Y2,
    S0,
    S1,
    W,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::X0, Var::X1, Var::X2, Var::Y0, Var::Y1, Var::Y2, Var::S0, Var::S1, Var::W];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x0", "x1", "x2", "y0", "y1", "y2", "s0", "s1", "w"][self.index()]
    }

    pub fn x(i: usize) -> Var {
        [Var::X0, Var::X1, Var::X2][i]
    }

    pub fn y(i: usize) -> Var {
        [Var::Y0, Var::Y1, Var::Y2][i]
    }
}

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn checked_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            let s = self.0[i] + other.0[i];
            if s > MAX_EXPONENT {
                return Err(PolyError::ExponentOverflow { max: MAX_EXPONENT });
            }
            e[i] = s;
        }
        Ok(Monomial(e))
    }

    fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Monomial(e))
    }

    fn with_exp(&self, v: Var, k: u16) -> Monomial {
        let mut m = *self;
        m.0[v.index()] = k;
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(v.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial as a map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C> Default for SparsePoly<C> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

/// Per-variable images for [`SparsePoly::substitute`]. `None` means the
/// variable has no image; hitting it is an error.
pub type Images<C> = [Option<SparsePoly<C>>; NVARS];

impl<C: Scalar> SparsePoly<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The variable `v` with coefficient `one`.
    pub fn var(v: Var, one: C) -> Self {
        Self::monomial(Monomial::var(v), one)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<C> {
        self.terms.get(m).copied()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn is_homogeneous_in(&self, vars: &[Var], deg: u32) -> bool {
        self.terms.keys().all(|m| vars.iter().map(|&v| u32::from(m.exp(v))).sum::<u32>() == deg)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = *e + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, &a)| (*m, a * c)).collect() }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        let mut out = Self::zero();
        for (ma, &a) in &self.terms {
            for (mb, &b) in &rhs.terms {
                out.add_term(ma.checked_mul(mb)?, a * b);
            }
        }
        Ok(out)
    }

    pub fn checked_pow(&self, k: u32, one: C) -> Result<Self, PolyError> {
        let mut acc = Self::constant(one);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Ring homomorphism sending each variable to its image.
    pub fn substitute(&self, images: &Images<C>) -> Result<Self, PolyError> {
        let Some((_, lead)) = self.terms.iter().next() else {
            return Ok(Self::zero());
        };
        let one = lead.one_like();
        let mut powers: [Vec<SparsePoly<C>>; NVARS] = Default::default();
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            let mut t = Self::constant(c);
            for v in Var::ALL {
                let e = usize::from(m.exp(v));
                if e == 0 {
                    continue;
                }
                let img = images[v.index()].as_ref().ok_or(PolyError::ArityMismatch(v.name()))?;
                let cache = &mut powers[v.index()];
                if cache.is_empty() {
                    cache.push(Self::constant(one));
                }
                while cache.len() <= e {
                    let next = cache[cache.len() - 1].checked_mul(img)?;
                    cache.push(next);
                }
                t = t.checked_mul(&cache[e])?;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Evaluates with a value for every variable.
    pub fn eval(&self, values: &[C; NVARS]) -> C {
        let mut acc = values[0].zero_like();
        for (m, &c) in &self.terms {
            let mut t = c;
            for v in Var::ALL {
                for _ in 0..m.exp(v) {
                    t = t * values[v.index()];
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes a constant for one variable.
    pub fn specialize(&self, v: Var, value: C) -> Self {
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for _ in 0..m.exp(v) {
                t = t * value;
            }
            out.add_term(m.with_exp(v, 0), t);
        }
        out
    }

    /// Coefficients of `f` as a polynomial in `v`: entry `k` holds the
    /// coefficient of `v^k`.
    fn coefficients_in(&self, v: Var) -> Vec<SparsePoly<C>> {
        let n = usize::from(self.degree_in(v).unwrap_or(0));
        let mut out = alloc::vec![Self::zero(); n + 1];
        for (m, &c) in &self.terms {
            out[usize::from(m.exp(v))].add_term(m.with_exp(v, 0), c);
        }
        out
    }

    fn from_coefficients_in(v: Var, coeffs: &[SparsePoly<C>]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, &a) in &c.terms {
                out.add_term(m.with_exp(v, k as u16), a);
            }
        }
        out
    }

    /// Synthetic division by `(v - t)`: returns quotient and remainder, the
    /// remainder being free of `v`.
    pub fn div_rem_linear(&self, v: Var, t: C) -> (Self, Self) {
        let c = self.coefficients_in(v);
        let n = c.len() - 1;
        if n == 0 {
            return (Self::zero(), self.clone());
        }
        let mut q = alloc::vec![Self::zero(); n];
        q[n - 1] = c[n].clone();
        for k in (1..n).rev() {
            q[k - 1] = &c[k] + &q[k].scale(t);
        }
        let rem = &c[0] + &q[0].scale(t);
        (Self::from_coefficients_in(v, &q), rem)
    }

    /// Largest `e` with `(v - t)^e` dividing `self`.
    pub fn vanishing_order(&self, v: Var, t: C) -> Result<u32, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut f = self.clone();
        let mut e = 0;
        loop {
            let (q, r) = f.div_rem_linear(v, t);
            if !r.is_zero() {
                return Ok(e);
            }
            f = q;
            e += 1;
        }
    }

    /// Quotient by `(v - t)^e`, which must divide exactly.
    pub fn divide_exact_linear(&self, v: Var, t: C, e: u32) -> Result<Self, PolyError> {
        let mut f = self.clone();
        for _ in 0..e {
            let (q, r) = f.div_rem_linear(v, t);
            if !r.is_zero() {
                return Err(PolyError::InexactDivision);
            }
            f = q;
        }
        Ok(f)
    }

    /// Exact quotient `self / divisor` by leading-term reduction.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (dm, dc) = divisor.terms.iter().next_back().map(|(m, c)| (*m, *c)).ok_or(PolyError::ZeroPolynomial)?;
        let dinv = dc.inv().ok_or(PolyError::InexactDivision)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((&m, &c)) = rem.terms.iter().next_back() {
            let qm = m.divide(&dm).ok_or(PolyError::InexactDivision)?;
            let t = Self::monomial(qm, c * dinv);
            rem = &rem - &t.checked_mul(divisor)?;
            quot.add_term(qm, c * dinv);
        }
        Ok(quot)
    }
}

impl<C: fmt::Debug> fmt::Debug for SparsePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c:?}*{m:?}")?;
        }
        Ok(())
    }
}

impl<C: Scalar> Add for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: Self) -> SparsePoly<C> {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<C: Scalar> Sub for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: Self) -> SparsePoly<C> {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<C: Scalar> Neg for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        SparsePoly { terms: self.terms.iter().map(|(m, &c)| (*m, -c)).collect() }
    }
}

/// Panics on exponent overflow; use [`SparsePoly::checked_mul`] to handle it.
impl<C: Scalar> Mul for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: Self) -> SparsePoly<C> {
        self.checked_mul(rhs).expect("polynomial exponent overflow")
    }
}

impl<C: Scalar> Add for SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: Self) -> SparsePoly<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: Self) -> SparsePoly<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Mul for SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: Self) -> SparsePoly<C> {
        &self * &rhs
    }
}

/// Substitution in the spec-level call shape.
pub fn poly_substitute<C: Scalar>(f: &SparsePoly<C>, images: &Images<C>) -> Result<SparsePoly<C>, PolyError> {
    f.substitute(images)
}
