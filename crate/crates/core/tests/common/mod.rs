//! Algebras in block coordinates shared by the classification tests.

#![allow(dead_code)]

use matpi::algebra::{close_generators, GeneratorSet, SubalgebraBasis};
use matpi::blocks::BlockShape;
use matpi::constructions::{
    block_diagonal, diagonal_embedding, full_block_algebra, quadratic_extension, repetition_algebra,
};
use matpi::matrix::Matrix;
use matpi::sampling::{random_scalar, rng_from_seed};
use matpi::{RingSpec, Scalar};
use rand::Rng;

pub struct Case {
    pub name: String,
    pub algebra: SubalgebraBasis,
    pub shape: BlockShape,
}

pub fn shape(parts: &[usize]) -> BlockShape {
    BlockShape::new(parts.to_vec()).unwrap()
}

pub fn unit(ring: RingSpec, n: usize, i: usize, j: usize) -> Matrix {
    Matrix::unit(ring, n, i, j).unwrap()
}

pub fn closure(ring: RingSpec, n: usize, gens: Vec<Matrix>) -> SubalgebraBasis {
    close_generators(&GeneratorSet::new(ring, n, gens, true).unwrap()).unwrap()
}

/// `diag(x, 1)`-style embedding of a 2×2 block into the top-left of `M_n`.
fn embed(x: &Matrix, n: usize) -> Matrix {
    Matrix::zeros(x.ring(), n, n).with_block(0, 0, x).unwrap()
}

/// A non-square `d` for the quadratic-extension blocks.
pub fn non_square(ring: RingSpec) -> Scalar {
    Scalar::from_i64(ring, 2)
}

/// Deterministic structured cases with `2 ≤ n ≤ max_n`.
pub fn structured(ring: RingSpec, max_n: usize) -> Vec<Case> {
    let mut out = Vec::new();
    let mut push = |name: String, algebra: SubalgebraBasis, shape: BlockShape| {
        if shape.n() <= max_n {
            out.push(Case { name, algebra, shape });
        }
    };
    for n in 2..=max_n {
        for s in BlockShape::compositions(n) {
            push(format!("full_block{s}"), full_block_algebra(&s, ring).unwrap(), s);
        }
    }
    push("repetition(1,1)".into(), repetition_algebra(1, 1, ring).unwrap(), shape(&[1, 1, 1]));
    push("repetition(1,2)".into(), repetition_algebra(1, 2, ring).unwrap(), shape(&[1, 2, 1]));
    for parts in [&[1, 1][..], &[1, 2], &[2, 1], &[1, 1, 1], &[2, 2], &[1, 3], &[1, 1, 1, 1]] {
        let s = shape(parts);
        push(format!("block_diagonal{s}"), block_diagonal(&s, ring).unwrap(), s);
    }
    push(
        "coupled_1_2_only".into(),
        closure(ring, 3, vec![unit(ring, 3, 1, 1), unit(ring, 3, 2, 2), unit(ring, 3, 1, 2)]),
        shape(&[1, 1, 1]),
    );
    push(
        "coupled_until_3".into(),
        closure(
            ring,
            4,
            vec![unit(ring, 4, 1, 1), unit(ring, 4, 2, 2), unit(ring, 4, 3, 3), unit(ring, 4, 1, 2), unit(ring, 4, 2, 3)],
        ),
        shape(&[1, 1, 1, 1]),
    );
    push("diagonal_embedding(2,2)".into(), diagonal_embedding(2, 2, ring).unwrap(), shape(&[4]));
    push("diagonal_embedding(2,2)/blocks".into(), diagonal_embedding(2, 2, ring).unwrap(), shape(&[2, 2]));
    push("scalars(3)".into(), diagonal_embedding(1, 3, ring).unwrap(), shape(&[3]));
    push("scalars(2)".into(), diagonal_embedding(1, 2, ring).unwrap(), shape(&[2]));
    let ext = quadratic_extension(&non_square(ring)).unwrap();
    push("quadratic_extension".into(), ext.clone(), shape(&[2]));
    let j = ext.basis().iter().find(|b| !b.get(1, 0).is_zero()).unwrap().clone();
    push(
        "quadratic_extension+scalar".into(),
        closure(ring, 3, vec![embed(&j, 3), unit(ring, 3, 3, 3), unit(ring, 3, 1, 3)]),
        shape(&[2, 1]),
    );
    push(
        "quadratic_extension+M2".into(),
        closure(
            ring,
            4,
            vec![embed(&j, 4), unit(ring, 4, 3, 4), unit(ring, 4, 4, 3), unit(ring, 4, 1, 3)],
        ),
        shape(&[2, 2]),
    );
    out
}

/// A random element of `U_n` supported on a random set of matrix units.
pub fn sparse_upper<R: Rng>(ring: RingSpec, n: usize, rng: &mut R) -> Matrix {
    let mut x = Matrix::zeros(ring, n, n);
    for p in 0..n {
        for q in p..n {
            if rng.gen_bool(0.35) {
                x.set(p, q, &random_scalar(ring, rng));
            }
        }
    }
    x
}

/// Seeded unital closures of one to three sparse upper triangular
/// generators inside `U_n`.
pub fn random_upper_closures(ring: RingSpec, n: usize, count: usize, seed: u64) -> Vec<Case> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|k| {
            let gens = (0..rng.gen_range(1..=3)).map(|_| sparse_upper(ring, n, &mut rng)).collect();
            Case {
                name: format!("random_upper_{n}#{k}"),
                algebra: closure(ring, n, gens),
                shape: BlockShape::ones(n).unwrap(),
            }
        })
        .collect()
}

pub fn corpus(ring: RingSpec) -> Vec<Case> {
    let mut all = structured(ring, 4);
    all.extend(random_upper_closures(ring, 4, 12, 2024));
    all
}
