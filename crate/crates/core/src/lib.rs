//! Computations behind the rigidity of the bi-invariant Einstein metric on
//! `SU(n)`: Einstein deformations built from the invariant cubic form,
//! Koiso's second-order obstruction, symmetric-group character counts for
//! equivariant quadratic maps, and solitonic corollaries on `CP^m`.
//!
//! Most numerical routines are generic over [`Scalar`], so the same code runs
//! in `f64` and in exact rational arithmetic.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod cubic;
pub mod error;
pub mod geometry;
pub mod lie;
pub mod matrix;
pub mod obstruction;
pub mod scalar;
pub mod soliton;
pub mod weyl;

pub use error::{Error, Result};
pub use lie::{build_basis, eta, AlgebraElement, Basis, BasisIndex, OrthonormalBasis};
pub use scalar::Scalar;
