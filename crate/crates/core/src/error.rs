//! Library-wide error type.

use thiserror::Error;

use crate::kernel::scalar::FieldSpec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("search bound exceeded: {0}")]
    SearchBoundExceeded(String),
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("projection is not a retraction onto the subalgebra")]
    BadProjection,
    #[error("section does not split the projection")]
    NotSection,
    #[error("rho is not invertible")]
    RhoNotInvertible,
    #[error("scaling witness must be nonzero")]
    ZeroScalingWitness,
    #[error("extending datum is not a perm extending structure")]
    InvalidDatum,
    #[error("triple is not a non-abelian 2-cocycle")]
    InvalidCocycle,
    #[error("map is not a deformation map of the matched pair")]
    InvalidDeformationMap,
    #[error("comultiplication is not a perm bialgebra structure")]
    InvalidBialgebra,
    #[error("pair is not an automorphism pair: {0}")]
    InvalidAutomorphism(String),
    #[error("pair is not compatible with the module actions")]
    NotCompatiblePair,
    #[error("kernel multiplication is not trivial")]
    NonAbelianKernel,
    #[error("algebra is not commutative associative")]
    NotCommutativeAssociative,
    #[error("map is not a differential: {0}")]
    NotDifferential(String),
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}
