//! Points of P^1 and P^2 in canonical form: the first nonzero coordinate is 1.
//!
//! With this normalization two points are equal iff their stored coordinates
//! are equal, and the derived ordering is lexicographic on coordinates.

use core::fmt;

use crate::field::{FieldElement, PrimeField, Scalar};
use crate::AlgebraError;

fn normalize<C: Scalar, const N: usize>(mut v: [C; N]) -> Result<[C; N], AlgebraError> {
    let lead = v.iter().find(|c| !c.is_zero()).copied().ok_or(AlgebraError::ZeroPoint)?;
    if !lead.is_one() {
        let inv = lead.inv().ok_or(AlgebraError::ZeroInverse)?;
        for c in v.iter_mut() {
            *c = *c * inv;
        }
    }
    Ok(v)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint2<C> {
    coords: [C; 3],
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint1<C> {
    coords: [C; 2],
}

pub type P2 = ProjectivePoint2<FieldElement>;
pub type P1 = ProjectivePoint1<FieldElement>;

impl<C: Scalar> ProjectivePoint2<C> {
    pub fn new(coords: [C; 3]) -> Result<Self, AlgebraError> {
        Ok(Self { coords: normalize(coords)? })
    }

    #[inline]
    pub fn coords(&self) -> &[C; 3] {
        &self.coords
    }

    #[inline]
    pub fn get(&self, i: usize) -> C {
        self.coords[i]
    }

    /// Index of the first nonzero coordinate; that coordinate is 1.
    pub fn lead_index(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }
}

impl<C: Scalar> ProjectivePoint1<C> {
    pub fn new(coords: [C; 2]) -> Result<Self, AlgebraError> {
        Ok(Self { coords: normalize(coords)? })
    }

    #[inline]
    pub fn coords(&self) -> &[C; 2] {
        &self.coords
    }
}

impl<C: fmt::Debug> fmt::Debug for ProjectivePoint2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "({a:?}:{b:?}:{c:?})")
    }
}

impl<C: fmt::Display> fmt::Display for ProjectivePoint2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "({a}:{b}:{c})")
    }
}

impl<C: fmt::Debug> fmt::Debug for ProjectivePoint1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = &self.coords;
        write!(f, "({a:?}:{b:?})")
    }
}

impl<C: fmt::Display> fmt::Display for ProjectivePoint1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = &self.coords;
        write!(f, "({a}:{b})")
    }
}

impl P2 {
    /// Canonicalizes small signed integer coordinates.
    pub fn from_i64(field: PrimeField, v: [i64; 3]) -> Result<Self, AlgebraError> {
        Self::new(v.map(|c| field.from_i64(c)))
    }

    /// Position in the lexicographic enumeration of P^2(F_p).
    pub fn rank(&self) -> u64 {
        let p = self.coords[0].field().modulus();
        let [a, b, c] = self.coords.map(|x| x.value());
        if a == 1 {
            1 + p + b * p + c
        } else if b == 1 {
            1 + c
        } else {
            0
        }
    }

    pub fn from_rank(field: PrimeField, r: u64) -> Self {
        let p = field.modulus();
        let coords = if r == 0 {
            [0, 0, 1]
        } else if r <= p {
            [0, 1, r - 1]
        } else {
            let t = r - 1 - p;
            [1, t / p, t % p]
        };
        Self { coords: coords.map(|c| field.elem(c)) }
    }
}

impl P1 {
    pub fn rank(&self) -> u64 {
        let [a, b] = self.coords.map(|x| x.value());
        if a == 1 {
            1 + b
        } else {
            0
        }
    }

    pub fn from_rank(field: PrimeField, r: u64) -> Self {
        let coords = if r == 0 { [0, 1] } else { [1, r - 1] };
        Self { coords: coords.map(|c| field.elem(c)) }
    }
}

/// Number of points of P^2(F_p).
pub fn p2_count(field: PrimeField) -> u64 {
    let p = field.modulus();
    p * p + p + 1
}

/// P^2(F_p) in lexicographic canonical order.
pub fn p2_points(field: PrimeField) -> impl Iterator<Item = P2> {
    (0..p2_count(field)).map(move |r| P2::from_rank(field, r))
}

/// P^1(F_p) in lexicographic canonical order: (0:1), (1:0), (1:1), ...
pub fn p1_points(field: PrimeField) -> impl Iterator<Item = P1> {
    (0..=field.modulus()).map(move |r| P1::from_rank(field, r))
}
