use crate::matrix::Matrix;
use crate::ring::RingSpec;

pub(crate) use crate::sampling::random_matrix as random_rect;

pub(crate) fn gf(p: u64) -> RingSpec {
    RingSpec::prime_field(p).unwrap()
}

pub(crate) fn unit(ring: RingSpec, n: usize, i: usize, j: usize) -> Matrix {
    Matrix::unit(ring, n, i, j).unwrap()
}

pub(crate) fn random_matrix<R: rand::Rng>(ring: RingSpec, n: usize, rng: &mut R) -> Matrix {
    random_rect(ring, n, n, rng)
}
