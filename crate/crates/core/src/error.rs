//! Crate-wide error type with stable machine-readable codes.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operands live in different coefficient rings.
    RingMismatch { left: String, right: String },
    /// Variable counts (or image counts) disagree.
    ArityMismatch { expected: usize, found: usize },
    IndexOutOfRange { index: usize, len: usize },
    SingularMatrix,
    /// A map or word factor fails the bracket-preservation check.
    NotSymplectic(String),
    /// The linear part of a map is not in Sp(2n).
    NotSymplecticLinear,
    /// An element expected to be central is not.
    NotCentral(String),
    /// A commutator coefficient is not divisible by p (implementation fault).
    NonDivisible(String),
    /// Reduction mod p hit a denominator divisible by p, or a factor singular mod p.
    BadPrime(String),
    /// Weyl commutation relations fail on a set of images.
    RelationViolation(String),
    /// Gauge normalization requires the image of x to be exactly x.
    PreconditionX,
    /// A y-free defect at hbar-order 1 cannot be removed by conjugation with 1 + hbar*Q.
    DefectOrderOne,
    /// Deviation extraction requires an identity linear part.
    LinearPartNotIdentity,
    IsIdentity,
    /// Approximation inputs must have zero constant part.
    TranslationPresent,
    /// Closedness verification failed: the deviation is not a Hamiltonian field.
    NonHamiltonian(String),
    /// Waring sampling hit the retry cap; the seed reproduces the failure.
    SamplerExhausted { seed: u64 },
    ZeroForm,
    Parse { pos: usize, msg: String },
    Json(String),
}

impl Error {
    /// Stable code for machine consumption (CLI error objects).
    pub fn code(&self) -> &'static str {
        match self {
            Error::RingMismatch { .. } => "ring_mismatch",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::SingularMatrix => "singular_matrix",
            Error::NotSymplectic(_) => "not_symplectic",
            Error::NotSymplecticLinear => "not_symplectic_linear",
            Error::NotCentral(_) => "not_central",
            Error::NonDivisible(_) => "non_divisible",
            Error::BadPrime(_) => "bad_prime",
            Error::RelationViolation(_) => "relation_violation",
            Error::PreconditionX => "precondition_x",
            Error::DefectOrderOne => "defect_order_one",
            Error::LinearPartNotIdentity => "linear_part_not_identity",
            Error::IsIdentity => "is_identity",
            Error::TranslationPresent => "translation_present",
            Error::NonHamiltonian(_) => "non_hamiltonian",
            Error::SamplerExhausted { .. } => "sampler_exhausted",
            Error::ZeroForm => "zero_form",
            Error::Parse { .. } => "parse",
            Error::Json(_) => "json",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch { left, right } => {
                write!(f, "coefficient ring mismatch: {} vs {}", left, right)
            }
            Error::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {}, found {}", expected, found)
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {} out of range (len {})", index, len)
            }
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::NotSymplectic(why) => write!(f, "not symplectic: {}", why),
            Error::NotSymplecticLinear => write!(f, "linear part is not symplectic"),
            Error::NotCentral(what) => write!(f, "not central: {}", what),
            Error::NonDivisible(what) => {
                write!(f, "commutator coefficient not divisible by p: {}", what)
            }
            Error::BadPrime(why) => write!(f, "bad prime: {}", why),
            Error::RelationViolation(why) => write!(f, "Weyl relations violated: {}", why),
            Error::PreconditionX => write!(f, "normalization requires the image of x to be x"),
            Error::DefectOrderOne => {
                write!(f, "y-free defect at hbar-order 1 is not removable by gauging")
            }
            Error::LinearPartNotIdentity => write!(f, "linear part is not the identity"),
            Error::IsIdentity => write!(f, "map is the identity"),
            Error::TranslationPresent => write!(f, "constant part is nonzero"),
            Error::NonHamiltonian(why) => write!(f, "deviation is not Hamiltonian: {}", why),
            Error::SamplerExhausted { seed } => {
                write!(f, "Waring sampler exhausted (seed {})", seed)
            }
            Error::ZeroForm => write!(f, "linear form is zero"),
            Error::Parse { pos, msg } => write!(f, "syntax error at offset {}: {}", pos, msg),
            Error::Json(why) => write!(f, "invalid JSON input: {}", why),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
