//! Prime-field and rational scalars.
//!
//! Everything above this module is written against the [`Scalar`] trait so the
//! same polynomial code runs over `F_p` and over exact rationals. The rational
//! configuration only exists to check fixtures stated with integer
//! coefficients before they are reduced mod `p`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Roots;
use num_rational::Ratio;

use crate::AlgebraError;

/// Exact rational numbers, used for fixtures stated over `Q`.
pub type Rational = Ratio<i128>;

/// Coefficient domain shared by polynomials, surfaces and fibers.
///
/// Constructors take `&self` so that prime-field elements can borrow their
/// modulus from an existing element.
pub trait Scalar:
    Copy
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// A square root if one exists in the domain.
    fn sqrt(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| *self * r)
    }
}

/// An odd prime modulus below 2^32.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if p < 3 || p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(AlgebraError::BadModulus(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement { value: v % self.p, field: *self }
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        let r = v.rem_euclid(self.p as i64) as u64;
        FieldElement { value: r, field: *self }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// Reduces a rational with denominator prime to `p`.
    pub fn from_rational(&self, q: &Rational) -> Result<FieldElement, AlgebraError> {
        let p = self.p as i128;
        let n = q.numer().rem_euclid(p) as u64;
        let d = q.denom().rem_euclid(p) as u64;
        let d = self.elem(d).inv().ok_or(AlgebraError::ZeroInverse)?;
        Ok(self.elem(n) * d)
    }

    /// All field elements in increasing residue order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(move |v| self.elem(v))
    }
}

/// A residue in `[0, p)` together with its field.
///
/// Ordering compares residues; mixing fields is a logic error caught in debug
/// builds.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Representative in `(-p/2, p/2]`, handy for printing small coordinates.
    pub fn signed(&self) -> i64 {
        let p = self.field.p;
        if self.value > p / 2 {
            self.value as i64 - p as i64
        } else {
            self.value as i64
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_square(&self) -> bool {
        self.value == 0 || self.pow((self.field.p - 1) / 2).value == 1
    }

    /// Modular inverse by the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<FieldElement, AlgebraError> {
        if self.value == 0 {
            return Err(AlgebraError::ZeroInverse);
        }
        let p = self.field.p as i64;
        let (mut r0, mut r1) = (p, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.field.from_i64(t0))
    }

    /// Tonelli-Shanks. Returns the root with the smaller residue.
    pub fn square_root(&self) -> Option<FieldElement> {
        let f = self.field;
        let p = f.p;
        if self.value == 0 {
            return Some(f.zero());
        }
        if !self.is_square() {
            return None;
        }
        let r = if p % 4 == 3 {
            self.pow((p + 1) / 4)
        } else {
            // p - 1 = q * 2^s with q odd
            let mut q = p - 1;
            let mut s = 0u32;
            while q % 2 == 0 {
                q /= 2;
                s += 1;
            }
            let mut z = f.elem(2);
            while z.is_square() {
                z = z + f.one();
            }
            let mut m = s;
            let mut c = z.pow(q);
            let mut t = self.pow(q);
            let mut r = self.pow((q + 1) / 2);
            while t.value != 1 {
                let mut i = 0u32;
                let mut t2 = t;
                while t2.value != 1 {
                    t2 = t2 * t2;
                    i += 1;
                }
                let b = c.pow(1u64 << (m - i - 1));
                m = i;
                c = b * b;
                t = t * c;
                r = r * b;
            }
            r
        };
        let other = -r;
        Some(if other.value < r.value { other } else { r })
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value).then(self.field.cmp(&other.field))
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        let s = self.value + rhs.value;
        let p = self.field.p;
        FieldElement { value: if s >= p { s - p } else { s }, field: self.field }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        let p = self.field.p;
        let v = if self.value >= rhs.value { self.value - rhs.value } else { self.value + p - rhs.value };
        FieldElement { value: v, field: self.field }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.field, rhs.field);
        FieldElement { value: self.value * rhs.value % self.field.p, field: self.field }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> Self {
        let v = if self.value == 0 { 0 } else { self.field.p - self.value };
        FieldElement { value: v, field: self.field }
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        self.field.from_i64(v)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn sqrt(&self) -> Option<Self> {
        self.square_root()
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Ratio::from_integer(0)
    }
    fn one_like(&self) -> Self {
        Ratio::from_integer(1)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Ratio::from_integer(i128::from(v))
    }
    fn is_zero(&self) -> bool {
        *self.numer() == 0
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn sqrt(&self) -> Option<Self> {
        let (n, d) = (*self.numer(), *self.denom());
        if n < 0 {
            return None;
        }
        let (rn, rd) = (n.sqrt(), d.sqrt());
        (rn * rn == n && rd * rd == d).then(|| Ratio::new(rn, rd))
    }
}

/// Field inverse with the error contract of the public API.
pub fn field_inv(a: FieldElement) -> Result<FieldElement, AlgebraError> {
    a.inverse()
}

/// Square root with the smaller canonical residue, or `None` for non-squares.
pub fn field_sqrt(a: FieldElement) -> Option<FieldElement> {
    a.square_root()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest odd prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !(c >= 3 && is_prime(c)) {
        c += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn inverse_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(field_inv(f5.elem(2)).unwrap().value(), 3);
        for p in [3u64, 7, 29, 503] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(field_inv(f.one()).unwrap(), f.one());
        }
        assert_eq!(field_inv(f5.zero()), Err(AlgebraError::ZeroInverse));
    }

    #[test]
    fn inverse_matches_fermat_at_503() {
        let f = PrimeField::new(503).unwrap();
        for r in 1..503 {
            let a = f.elem(r);
            let inv = field_inv(a).unwrap();
            assert_eq!(inv.value(), pow_mod(r, 501, 503));
            assert_eq!((a * inv).value(), 1);
        }
    }

    #[test]
    fn sqrt_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(field_sqrt(f7.elem(4)).map(|r| r.value()), Some(2));
        assert_eq!(field_sqrt(f7.elem(3)), None);
        let f29 = PrimeField::new(29).unwrap();
        assert_eq!(field_sqrt(f29.zero()), Some(f29.zero()));
        // squares mod 7 by brute force: {0, 1, 2, 4}
        let squares: Vec<u64> = (0..7).filter(|&a| field_sqrt(f7.elem(a)).is_some()).collect();
        assert_eq!(squares, [0, 1, 2, 4]);
    }

    #[test]
    fn sqrt_counts_and_roots() {
        // 1 mod 8 exercises the full Tonelli-Shanks loop
        for p in [3u64, 5, 7, 11, 13, 17, 29, 31, 41, 73, 97, 101, 113, 257, 401, 409, 503] {
            let f = PrimeField::new(p).unwrap();
            let mut count = 0;
            for a in f.elements() {
                if let Some(r) = field_sqrt(a) {
                    count += 1;
                    assert_eq!(r * r, a);
                    assert!(r.value() <= (-r).value());
                }
            }
            assert_eq!(count, (p + 1) / 2, "p = {p}");
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let f = PrimeField::new(p).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(a * a.inverse().unwrap(), f.one());
                }
                assert_eq!(a + (-a), f.zero());
                for b in f.elements() {
                    assert_eq!(a * b, b * a);
                    assert_eq!((a - b) + b, a);
                    for c in [f.elem(1), f.elem(p - 1), f.elem(p / 2)] {
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(503).is_ok());
        assert_eq!(next_prime(29), 31);
        assert_eq!(next_prime(2), 3);
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn rational_scalar() {
        let h = Rational::new(9, 4);
        assert_eq!(Scalar::sqrt(&h), Some(Rational::new(3, 2)));
        assert_eq!(Scalar::sqrt(&Rational::new(2, 1)), None);
        assert_eq!(Scalar::inv(&Rational::new(0, 1)), None);
        let f = PrimeField::new(29).unwrap();
        assert_eq!(f.from_rational(&Rational::new(1, 2)).unwrap(), f.elem(15));
        assert!(f.from_rational(&Rational::new(1, 29)).is_err());
    }
}
