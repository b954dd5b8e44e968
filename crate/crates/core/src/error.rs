use thiserror::Error;

use crate::surface::Side;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("modulus {0} is not an odd prime below 2^32")]
    BadModulus(u64),
    #[error("projective point with all coordinates zero")]
    ZeroPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("no image given for variable {0}")]
    ArityMismatch(&'static str),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division leaves a nonzero remainder")]
    InexactDivision,
    #[error("exponent exceeds {max}")]
    ExponentOverflow { max: u16 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("{0} form is identically zero")]
    ZeroForm(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("base point is degenerate for every index pair")]
    DegenerateBase,
    #[error("ramification quotient is not exact")]
    InexactQuotient,
    #[error("no acceptable surface after {0} draws")]
    ExhaustedAttempts(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("fiber of side {0:?} is degenerate")]
    DegenerateFiber(Side),
    #[error("point is not on the surface")]
    NotOnSurface,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("center is not a degenerate base point")]
    NotDegenerate,
    #[error("fiber point lies on no rational line through the center")]
    NoRationalS,
    #[error("fiber point lies on {0} rational lines through the center")]
    AmbiguousS(usize),
    #[error("chart quadratic vanishes identically on a line through the center")]
    IdenticallyZeroQuadratic,
    #[error("ramification quotient on the chart is not exact")]
    InexactQuotient,
    #[error("point is not on the degenerate fiber of this chart")]
    NotOnFiber,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("phi is not a bijection on the phase space ({0} points with a wrong preimage count)")]
    NonBijective(usize),
    #[error("image point is missing from the phase space")]
    MissingImage,
    #[error("asymmetric cycle {0} has no valid partner")]
    PairingFailure(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("phase space is empty")]
    EmptyPhaseSpace,
    #[error("no symmetric cycles")]
    NoSymmetricCycles,
    #[error("involutions have no fixed points")]
    ZeroFixedPoints,
    #[error("x must be nonnegative")]
    NegativeX,
    #[error("curve must start at 0 and be sampled on an increasing grid")]
    BadDomain,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("fiber is positive dimensional")]
    Degenerate,
    #[error("point is not on the fiber")]
    NotOnFiber,
    #[error("no index pair determines the partner")]
    NoUsablePair,
}
