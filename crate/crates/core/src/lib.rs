//! Involution dynamics of Wehler K3 surfaces over prime fields.
//!
//! A Wehler surface is the intersection of a (1,1) form `L` and a (2,2) form
//! `Q` in `P^2 x P^2`. Each projection is generically 2-to-1, giving two
//! involutions `sigma_x`, `sigma_y` whose composition `phi` permutes the
//! rational points. Degenerate fibers are handled by blowing up their base
//! points. The crate enumerates points, computes the cycle structure of
//! `phi` and the derived period statistics.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod blowup;
pub mod dynamics;
mod error;
pub mod fiber;
pub mod field;
pub mod involution;
pub mod poly;
pub mod projective;
pub mod random;
pub mod stats;
pub mod surface;

pub use error::*;
pub use field::{field_inv, field_sqrt, is_prime, next_prime, FieldElement, PrimeField, Rational, Scalar};
pub use poly::{poly_substitute, Monomial, SparsePoly, Var};
pub use projective::{ProjectivePoint1, ProjectivePoint2, P1, P2};
pub use surface::{FpSurface, Point, Side, SurfacePoint, WehlerSurface};
