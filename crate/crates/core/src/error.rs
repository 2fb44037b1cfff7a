use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime (p >= 3 required)")]
    InvalidPrime(i64),

    #[error("working level {level} exceeds the context maximum {e_max}")]
    LevelOverflow { level: u32, e_max: u32 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("antisymmetry violated: c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]")]
    AntisymmetryViolation { i: usize, j: usize, k: usize },

    #[error("Jacobi identity violated on basis triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },

    #[error("algebra is not uniform: [L,L] is not contained in pL")]
    NotUniform,

    #[error("algebra is not perfect: [L,L] has rank below n")]
    NotPerfect,

    #[error("character correspondence needs u >= 1 for p >= 5 and u >= 2 for p = 3 (got p = {p}, u = {u})")]
    HypothesisViolation { p: i64, u: String },

    #[error("radical exponent {0} is odd; the bilinear form is not alternating")]
    OddExponent(u32),

    #[error("orbit of {rep:?} at level {level} has {found} members, expected p^{expected_exp}")]
    OrbitSizeMismatch {
        rep: Vec<i64>,
        level: u32,
        found: usize,
        expected_exp: u32,
    },

    #[error("resource cap exceeded: {what} (limit {limit})")]
    ResourceCap { what: &'static str, limit: u64 },

    #[error("matrix {0} is not a Lie algebra automorphism at the working level")]
    NotAutomorphism(usize),

    #[error("direct cyclotomic summation disagrees with the Galois route at degree index {i}: {direct} vs {galois}")]
    MismatchWithGaloisRoute {
        i: usize,
        direct: String,
        galois: String,
    },

    #[error("character sum at degree index {0} is not rational")]
    IrrationalCharacterSum(usize),

    #[error("no linear recurrence of order <= {0} fits the sequence with two validation terms")]
    NoFit(usize),

    #[error("need at least {needed} coefficients, got {got}")]
    InsufficientCoefficients { needed: usize, got: usize },

    #[error("BCH series of degree {needed} needed at level {level}; only degree {implemented} is implemented")]
    SeriesDegreeExceeded {
        needed: u32,
        level: u32,
        implemented: u32,
    },

    #[error("character order p^{order} must be below the cell level {level}")]
    BoxTooDeep { order: u32, level: u32 },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}
