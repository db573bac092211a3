//! Error type shared by all modules.

use core::fmt;

/// Everything that can go wrong short of a failed verification (failed checks
/// are reported through [`crate::report::CheckReport`], and an inconsistent
/// linear system is the [`crate::linalg::SolveOutcome::Unsolvable`] value, not
/// an error).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested characteristic is not a prime number.
    NonPrime(u32),
    /// Modulus of the wrong degree, non-monic, out-of-range coefficients, or
    /// reducible over `F_p`.
    BadModulus,
    /// Multiplicative inverse of zero.
    DivisionByZero,
    /// Field elements from incompatible field descriptors were mixed.
    DescriptorMismatch,
    /// A regular vector of length `n` needs extension degree at least `n`.
    FieldTooSmall { degree: usize, needed: usize },
    /// Monomials with different numbers of variables were combined.
    ArityMismatch,
    /// Direction or variable index outside `1..=n`.
    IndexOutOfRange,
    /// Elements of different algebras (mismatched `n`, `p`, or field) were
    /// combined.
    ContextMismatch,
    /// A parameter outside its documented range.
    BadParam,
    /// The construction degenerates in characteristic 2 (`x_i^2 = 0`).
    CharTwoUnsupported,
    /// Dimensions of matrices or vectors do not line up.
    DimensionMismatch,
    /// The computation would exceed the configured dimension cap.
    Infeasible { dim: usize, cap: usize },
    /// The given vector is not regular (entries `F_p`-linearly dependent).
    NotRegular,
    /// An operator on `A_n` that does not satisfy the Leibniz rule cannot be
    /// read back as a `W_n` element.
    NotADerivation,
    /// A pointwise map was queried at an element outside its domain.
    OutOfDomain,
    /// The check needs the map defined on the whole (finite) algebra.
    DomainNotFull,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrime(p) => write!(f, "{p} is not prime"),
            Error::BadModulus => write!(f, "modulus is not a monic irreducible of the stated degree"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::DescriptorMismatch => write!(f, "field descriptors differ"),
            Error::FieldTooSmall { degree, needed } => {
                write!(f, "extension degree {degree} too small, need at least {needed}")
            }
            Error::ArityMismatch => write!(f, "monomial arity mismatch"),
            Error::IndexOutOfRange => write!(f, "index out of range"),
            Error::ContextMismatch => write!(f, "algebra contexts differ"),
            Error::BadParam => write!(f, "parameter out of range"),
            Error::CharTwoUnsupported => write!(f, "construction degenerates in characteristic 2"),
            Error::DimensionMismatch => write!(f, "dimension mismatch"),
            Error::Infeasible { dim, cap } => {
                write!(f, "dimension {dim} exceeds the cap {cap}")
            }
            Error::NotRegular => write!(f, "vector is not regular"),
            Error::NotADerivation => write!(f, "operator is not a derivation"),
            Error::OutOfDomain => write!(f, "element not in the domain of the map"),
            Error::DomainNotFull => write!(f, "map must be defined on the whole algebra"),
        }
    }
}

impl core::error::Error for Error {}
