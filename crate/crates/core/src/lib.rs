//! permlab-core: exact computer algebra for finite-dimensional perm algebras.
//!
//! A perm algebra is an associative algebra satisfying the right-commutative
//! law (a₁a₂)a₃ = a₁(a₂a₃) = a₁(a₃a₂). This crate works with such algebras
//! through structure constants over ℚ or GF(p), in exact arithmetic
//! throughout, and provides:
//!
//! - validators for perm algebras, morphisms, representations and invariant
//!   bilinear forms ([`perm`]);
//! - extending structures: unified products and their ten validity laws,
//!   equivalence and cohomology of extending data, matched pairs, bicrossed
//!   products, deformation maps and complement classification ([`ext`]);
//! - codimension-one (flag) extensions with exhaustive enumeration over
//!   finite fields ([`flag`]);
//! - non-abelian 2-cocycles, crossed products, automorphism inducibility,
//!   the Wells map and its exact sequence ([`nonab`]);
//! - perm bialgebras, Manin triples, coboundary comultiplications and the
//!   S-equation ([`bialg`]);
//! - a strict JSON definition-file format shared with the `permlab` CLI
//!   ([`io`]).
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to use across threads. Exhaustive
//! sweeps are internally parallel but their outputs are canonically ordered.

pub mod bialg;
pub mod error;
pub mod ext;
pub mod flag;
pub mod io;
pub mod kernel;
pub mod nonab;
pub mod perm;
pub mod sweep;
pub mod verdict;

pub use error::{Error, Result};
pub use kernel::{FieldSpec, Matrix, Scalar, ScalarOp, Tensor2, Tensor3};
pub use perm::PermAlgebra;
pub use verdict::{Verdict, Violation};
