//! Exact-arithmetic toolkit for polymatroids on small ground sets.
//!
//! Everything is computed over exact rationals (`num_rational::BigRational`)
//! or prime fields GF(p); there is no floating point anywhere. The main
//! pieces:
//!
//! - [`setfn`]: rank tables over all subsets of a ground set, the
//!   conditional-information forms, and polymatroid/matroid axiom checks.
//! - [`linrep`]: subspace collections over GF(p), induced rank functions,
//!   and triple-intersection bounds.
//! - [`tensor`]: tensor products with the uniform matroid U_{2,3}, the
//!   Kronecker construction, and the alpha/beta sandwich bounds.
//! - [`ingleton`]: Ingleton's inequality on quadruples, plus scans.
//! - [`ci`]: common-information witnesses and extensions, including the
//!   construction of a CI extension from a tensor product with U_{2,3}.
//! - [`lp`]: exact rational linear feasibility with Farkas certificates.
//! - [`corpus`]: built-in rank tables and representations used throughout
//!   the test suite and the CLI.

pub mod ci;
pub mod corpus;
pub mod ingleton;
pub mod linrep;
pub mod lp;
pub mod rat;
pub mod setfn;
pub mod tensor;

pub use rat::Rational;

/// Errors reported by fallible operations across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid ground set: {0}")]
    InvalidGroundSet(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate subset {0:?} in rank table")]
    DuplicateSubset(String),
    #[error("incomplete table: subset {0:?} missing")]
    IncompleteTable(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("vector length mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u64, u64),
    #[error("ground set mismatch: {0}")]
    GroundMismatch(String),
    #[error("input is not a polymatroid")]
    NotAPolymatroid,
    #[error("not a tensor product with U_{{2,3}}: {0}")]
    NotATensorProduct(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("element {0:?} not present")]
    MissingElement(String),
    #[error("multiplier count {got} does not match row count {expected}")]
    CertificateLength { expected: usize, got: usize },
    #[error("point length {got} does not match variable count {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("time budget exceeded after {0} simplex pivots")]
    BudgetExceeded(u64),
    #[error("fingerprint mismatch: document was issued for a different system")]
    FingerprintMismatch,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
