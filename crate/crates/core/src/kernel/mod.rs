//! Exact scalar arithmetic and dimension-checked multilinear containers.

pub mod matrix;
pub mod scalar;
pub mod tensor;

pub use matrix::Matrix;
pub use scalar::{FieldSpec, Scalar, ScalarOp};
pub use tensor::{Tensor2, Tensor3};
