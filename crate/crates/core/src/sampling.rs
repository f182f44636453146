//! Seeded random scalars, matrices and algebra elements.
//!
//! All randomness in the crate flows through [`ChaCha8Rng`] so a seed fixes
//! every draw on every platform.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::SubalgebraBasis;
use crate::matrix::{Entries, Matrix};
use crate::ring::{RingSpec, Scalar};

pub use rand::SeedableRng;
pub type SeededRng = ChaCha8Rng;

/// Integer coordinates over Q are drawn from `[-RATIONAL_BOUND, RATIONAL_BOUND]`.
pub const RATIONAL_BOUND: i64 = 100;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over GF(p) and Z/m; uniform integers in `[-100, 100]` over Q.
pub fn random_scalar<R: Rng>(ring: RingSpec, rng: &mut R) -> Scalar {
    match ring.modulus() {
        Some(m) => Scalar::from_i64(ring, rng.gen_range(0..m) as i64),
        None => Scalar::from_rational(BigRational::from_integer(BigInt::from(
            rng.gen_range(-RATIONAL_BOUND..=RATIONAL_BOUND),
        ))),
    }
}

pub fn random_matrix<R: Rng>(ring: RingSpec, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    match ring.modulus() {
        Some(m) => {
            let v: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..m)).collect();
            Matrix::from_raw(ring, rows, cols, Entries::Residues(v))
        }
        None => {
            let v: Vec<Scalar> = (0..rows * cols).map(|_| random_scalar(ring, rng)).collect();
            Matrix::from_scalars(ring, rows, cols, &v).expect("consistent shape")
        }
    }
}

/// A random linear combination of the algebra's basis.
pub fn random_element<R: Rng>(algebra: &SubalgebraBasis, rng: &mut R) -> Matrix {
    let ring = algebra.ring();
    if algebra.dim() == 0 {
        return Matrix::zeros(ring, algebra.n(), algebra.n());
    }
    let coeffs: Vec<Scalar> = (0..algebra.dim()).map(|_| random_scalar(ring, rng)).collect();
    Matrix::combination(&coeffs, algebra.basis()).expect("basis is nonempty and consistent")
}
