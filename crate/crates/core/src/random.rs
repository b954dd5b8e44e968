//! Seeded random surfaces.
//!
//! Coefficients are drawn uniformly from `F_p`. A draw is accepted when the
//! rational Jacobian check finds no singular point and the degeneracy
//! requirement holds. For the degenerate mode a degenerate fiber is planted
//! at a random center before the checks, because uniform draws almost never
//! have one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::charts_resolve;
use crate::field::{FieldElement, PrimeField};
use crate::projective::{p2_count, P2};
use crate::surface::{pair6, FpSurface, Side, PAIR6};
use crate::{AlgebraError, SurfaceError};

pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Degeneracy {
    /// No degenerate fiber on either side.
    NonDegenerate,
    /// At least one degenerate fiber.
    Degenerate,
}

fn uniform(field: PrimeField, rng: &mut (impl Rng + ?Sized)) -> FieldElement {
    field.elem(rng.gen_range(0..field.modulus()))
}

/// One uniform draw of all coefficients; `None` if `L` or `Q` vanishes.
pub fn draw_uniform(field: PrimeField, rng: &mut (impl Rng + ?Sized)) -> Option<FpSurface> {
    let a = core::array::from_fn(|_| core::array::from_fn(|_| uniform(field, rng)));
    let b = core::array::from_fn(|_| core::array::from_fn(|_| uniform(field, rng)));
    FpSurface::new(a, b).ok()
}

/// Makes the fiber of a random side over a random center contain its whole
/// line: `Q <- Q - u_m^2 (Q(c, .) - L(c, .) M)` with `u` the base variables,
/// `m` the leading index of `c` and `M` a random linear form.
pub fn plant_degenerate(s: &FpSurface, rng: &mut (impl Rng + ?Sized)) -> Option<FpSurface> {
    let field = s.field();
    let side = if rng.gen_bool(0.5) { Side::X } else { Side::Y };
    let center = P2::from_rank(field, rng.gen_range(0..p2_count(field)));
    let m = center.lead_index();
    let mform: [FieldElement; 3] = core::array::from_fn(|_| uniform(field, rng));
    let fc = s.fiber_coeffs(side, center.coords());
    let mut b = *s.b_matrix();
    let base_slot = pair6(m, m);
    for (slot, &(k, l)) in PAIR6.iter().enumerate() {
        let lm = if k == l { fc.l[k] * mform[k] } else { fc.l[k] * mform[l] + fc.l[l] * mform[k] };
        let r = fc.q[k][l] - lm;
        match side {
            Side::X => b[base_slot][slot] = b[base_slot][slot] - r,
            Side::Y => b[slot][base_slot] = b[slot][base_slot] - r,
        }
    }
    FpSurface::new(*s.a_matrix(), b).ok()
}

/// Applies the acceptance filters for `mode`.
pub fn accept(s: &FpSurface, mode: Degeneracy) -> bool {
    let degenerate = Side::BOTH.iter().any(|&side| !s.degenerate_fibers(side).is_empty());
    match mode {
        Degeneracy::NonDegenerate if degenerate => return false,
        Degeneracy::Degenerate if !degenerate => return false,
        _ => {}
    }
    if !s.is_smooth_rational().no_rational_singular_point() {
        return false;
    }
    mode == Degeneracy::NonDegenerate || charts_resolve(s)
}

/// Rejection sampling with an explicit generator.
pub fn random_surface_with(
    field: PrimeField,
    rng: &mut (impl Rng + ?Sized),
    mode: Degeneracy,
    max_attempts: usize,
) -> Result<FpSurface, SurfaceError> {
    if field.modulus() < 5 {
        return Err(AlgebraError::BadModulus(field.modulus()).into());
    }
    for _ in 0..max_attempts {
        let Some(mut s) = draw_uniform(field, rng) else { continue };
        if mode == Degeneracy::Degenerate {
            let Some(t) = plant_degenerate(&s, rng) else { continue };
            s = t;
        }
        if accept(&s, mode) {
            return Ok(s);
        }
    }
    Err(SurfaceError::ExhaustedAttempts(max_attempts))
}

/// Deterministic in `(p, seed, mode)`.
pub fn random_surface(p: u64, seed: u64, mode: Degeneracy) -> Result<FpSurface, SurfaceError> {
    let field = PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_surface_with(field, &mut rng, mode, DEFAULT_MAX_ATTEMPTS)
}

/// Generator for surface `index` at prime `p` of an experiment seeded with
/// `seed`: independent streams of one ChaCha8 key.
pub fn experiment_rng(seed: u64, p: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((p << 32) | index);
    rng
}
