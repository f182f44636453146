//! Exact polynomial-identity testing for subalgebras of `n × n` matrices.
//!
//! The crate evaluates standard polynomials `s_t` on matrix tuples, builds
//! subalgebras from generators, computes Jacobson radicals, and classifies
//! block upper triangular subalgebras by whether they satisfy `s_{2n-2}`.
//! All arithmetic is exact: GF(p), Q, and Z/m.

mod arith;
pub mod algebra;
pub mod blocks;
pub mod constructions;
pub mod error;
pub mod identity;
pub mod lemmas;
pub mod matrix;
pub mod ring;
pub mod sampling;
pub mod standard;

#[cfg(test)]
pub(crate) mod testutil;

pub use algebra::{close_generators, is_semisimple, jacobson_radical, GeneratorSet, SubalgebraBasis};
pub use blocks::{classify, BlockShape, ClassificationVerdict, LowDegreeReason};
pub use error::{Error, Result};
pub use identity::{is_standard_identity, min_standard_degree, multilinear_identity_space, IdentityReport, Mode};
pub use matrix::Matrix;
pub use ring::{RingSpec, Scalar};
pub use standard::{eval_standard_dp, eval_standard_naive};
