//! Builders for the named algebras and matrix sequences used by the
//! classification and identity checks.
//!
//! Every algebra comes back as a canonical echelon basis, so two builders
//! producing the same subspace produce equal values.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::SubalgebraBasis;
use crate::blocks::BlockShape;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{RingKind, RingSpec, Scalar};

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidConstruction(format!("{name} must be positive")));
    }
    Ok(())
}

fn units(ring: RingSpec, n: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Vec<Matrix>> {
    cells.into_iter().map(|(i, j)| Matrix::unit(ring, n, i, j)).collect()
}

/// `E_{(ℓ_1,…,ℓ_t)}`: every matrix unit on or above the block diagonal.
pub fn full_block_algebra(shape: &BlockShape, ring: RingSpec) -> Result<SubalgebraBasis> {
    let n = shape.n();
    let cells = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|&(p, q)| shape.block_of(p) <= shape.block_of(q))
        .map(|(p, q)| (p + 1, q + 1));
    SubalgebraBasis::from_closed_span(ring, n, &units(ring, n, cells)?)
}

/// Matrix units inside the diagonal blocks only.
pub fn block_diagonal(shape: &BlockShape, ring: RingSpec) -> Result<SubalgebraBasis> {
    let n = shape.n();
    let cells = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|&(p, q)| shape.block_of(p) == shape.block_of(q))
        .map(|(p, q)| (p + 1, q + 1));
    SubalgebraBasis::from_closed_span(ring, n, &units(ring, n, cells)?)
}

/// `U_n`, the upper triangular matrices.
pub fn upper_triangular(n: usize, ring: RingSpec) -> Result<SubalgebraBasis> {
    positive("n", n)?;
    full_block_algebra(&BlockShape::ones(n)?, ring)
}

/// `e11, e12, e22, e23, …, enn`. Works over any ring.
pub fn staircase(n: usize, ring: RingSpec) -> Result<Vec<Matrix>> {
    positive("n", n)?;
    let mut seq = Vec::with_capacity(2 * n - 1);
    for k in 1..=n {
        if k > 1 {
            seq.push(Matrix::unit(ring, n, k - 1, k)?);
        }
        seq.push(Matrix::unit(ring, n, k, k)?);
    }
    Ok(seq)
}

/// Matrices `[[a, b, c], [0, e, d], [0, 0, a]]` with `a, c ∈ M_ℓ`,
/// `e ∈ M_m`, inside `M_{2ℓ+m}`.
pub fn repetition_algebra(l: usize, m: usize, ring: RingSpec) -> Result<SubalgebraBasis> {
    positive("ℓ", l)?;
    positive("m", m)?;
    let n = 2 * l + m;
    let mut gens = Vec::new();
    for p in 1..=l {
        for q in 1..=l {
            let a = Matrix::unit(ring, n, p, q)?.add(&Matrix::unit(ring, n, p + l + m, q + l + m)?)?;
            gens.push(a);
        }
    }
    let b = (1..=l).flat_map(|p| (l + 1..=l + m).map(move |q| (p, q)));
    let c = (1..=l).flat_map(|p| (l + m + 1..=n).map(move |q| (p, q)));
    let e = (l + 1..=l + m).flat_map(|p| (l + 1..=l + m).map(move |q| (p, q)));
    let d = (l + 1..=l + m).flat_map(|p| (l + m + 1..=n).map(move |q| (p, q)));
    gens.extend(units(ring, n, b.chain(c).chain(e).chain(d))?);
    SubalgebraBasis::from_closed_span(ring, n, &gens)
}

/// `T_{(ℓ,m)}`: the strip `e_pq` with `p ≤ ℓ < q` in `M_{ℓ+m}`.
pub fn radical_t(l: usize, m: usize, ring: RingSpec) -> Result<SubalgebraBasis> {
    positive("ℓ", l)?;
    positive("m", m)?;
    let n = l + m;
    let cells = (1..=l).flat_map(|p| (l + 1..=n).map(move |q| (p, q)));
    SubalgebraBasis::from_closed_span(ring, n, &units(ring, n, cells)?)
}

/// `{diag(x, …, x) : x ∈ M_k}` with `copies` repetitions.
pub fn diagonal_embedding(k: usize, copies: usize, ring: RingSpec) -> Result<SubalgebraBasis> {
    positive("k", k)?;
    positive("copies", copies)?;
    let n = k * copies;
    let mut gens = Vec::with_capacity(k * k);
    for i in 1..=k {
        for j in 1..=k {
            let mut x = Matrix::zeros(ring, n, n);
            for s in 0..copies {
                x.set(s * k + i - 1, s * k + j - 1, &Scalar::one(ring));
            }
            gens.push(x);
        }
    }
    SubalgebraBasis::from_closed_span(ring, n, &gens)
}

fn is_square(ring: RingSpec, d: &Scalar) -> bool {
    match ring.kind() {
        RingKind::PrimeField { p } => {
            let Some(r) = d.residue() else { return false };
            r == 0 || p == 2 || pow_mod(r, (p - 1) / 2, p) == 1
        }
        RingKind::Rationals => {
            let Some(q) = d.as_rational() else { return false };
            q.numer().sign() != num_bigint::Sign::Minus && {
                let (n, den) = (q.numer().sqrt(), q.denom().sqrt());
                &n * &n == *q.numer() && &den * &den == *q.denom()
            }
        }
        RingKind::IntegersMod { .. } => false,
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `span{I, J}` in `M_2` with `J = [[0, d], [1, 0]]`, so `J² = d·I`.
///
/// For `d` a non-square this is a quadratic field extension: a simple
/// subalgebra of `M_2` that is irreducible but not all of `M_2`.
pub fn quadratic_extension(d: &Scalar) -> Result<SubalgebraBasis> {
    let ring = d.ring();
    ring.require_field("quadratic_extension")?;
    if is_square(ring, d) {
        return Err(Error::InvalidConstruction(format!("{d} is a square in {ring}")));
    }
    let j = Matrix::from_scalars(ring, 2, 2, &[Scalar::zero(ring), d.clone(), Scalar::one(ring), Scalar::zero(ring)])?;
    SubalgebraBasis::from_closed_span(ring, 2, &[Matrix::identity(ring, 2), j])
}

/// A matrix set over a ring that is not a field, given by generators of
/// its underlying module together with a membership rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningSet {
    pub ring: RingSpec,
    pub n: usize,
    pub elements: Vec<Matrix>,
    /// `gcd(g, m)`: the `(1,2)` entry must be a multiple of it.
    pub ideal_generator: u64,
}

impl SpanningSet {
    /// Upper triangular with `(1,2)` entry in the ideal.
    pub fn contains(&self, x: &Matrix) -> Result<bool> {
        if x.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: x.ring(),
            });
        }
        if (x.rows(), x.cols()) != (self.n, self.n) {
            return Err(Error::DimensionMismatch {
                op: "SpanningSet::contains",
                left: (self.n, self.n),
                right: (x.rows(), x.cols()),
            });
        }
        if x.support().iter().any(|&(r, c)| r > c) {
            return Ok(false);
        }
        if self.n < 2 {
            return Ok(true);
        }
        let corner = x.get(0, 1).residue().expect("residue ring");
        Ok(corner.is_multiple_of(self.ideal_generator))
    }
}

/// `B ⊂ U_n(ℤ/m)`: upper triangular matrices whose `(1,2)` entry lies in
/// the ideal `(g)`.
pub fn scaled_corner_algebra(n: usize, modulus: u64, g: u64) -> Result<SpanningSet> {
    if n < 2 {
        return Err(Error::InvalidConstruction("scaled corner algebra needs n ≥ 2".into()));
    }
    let ring = RingSpec::integers_mod(modulus)?;
    let d = g.gcd(&modulus);
    if g.is_multiple_of(modulus) || d == 1 {
        return Err(Error::InvalidConstruction(format!(
            "{g} does not generate a proper nonzero ideal of Z/{modulus}"
        )));
    }
    let mut elements = Vec::new();
    for p in 1..=n {
        for q in p..=n {
            let e = Matrix::unit(ring, n, p, q)?;
            elements.push(if (p, q) == (1, 2) {
                e.scale(&Scalar::from_i64(ring, g as i64))
            } else {
                e
            });
        }
    }
    Ok(SpanningSet {
        ring,
        n,
        elements,
        ideal_generator: d,
    })
}

/// A construction named in an input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NamedConstruction {
    FullBlock { shape: BlockShape },
    BlockDiagonal { shape: BlockShape },
    Staircase { n: usize },
    RepetitionAlgebra { l: usize, m: usize },
    RadicalT { l: usize, m: usize },
    UpperTriangular { n: usize },
    ScaledCorner { n: usize, modulus: u64, g: u64 },
    DiagonalEmbedding { k: usize, copies: usize },
}

/// What a [`NamedConstruction`] evaluates to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constructed {
    Algebra(SubalgebraBasis),
    Sequence(Vec<Matrix>),
    Spanning(SpanningSet),
}

impl NamedConstruction {
    /// Size of the ambient matrix algebra.
    pub fn n(&self) -> usize {
        match self {
            Self::FullBlock { shape } | Self::BlockDiagonal { shape } => shape.n(),
            Self::Staircase { n } | Self::UpperTriangular { n } | Self::ScaledCorner { n, .. } => *n,
            Self::RepetitionAlgebra { l, m } => 2 * l + m,
            Self::RadicalT { l, m } => l + m,
            Self::DiagonalEmbedding { k, copies } => k * copies,
        }
    }

    /// Builds over `ring`; the scaled corner algebra carries its own modulus and
    /// requires `ring` to match it.
    pub fn build(&self, ring: RingSpec) -> Result<Constructed> {
        Ok(match self {
            Self::FullBlock { shape } => Constructed::Algebra(full_block_algebra(shape, ring)?),
            Self::BlockDiagonal { shape } => Constructed::Algebra(block_diagonal(shape, ring)?),
            Self::Staircase { n } => Constructed::Sequence(staircase(*n, ring)?),
            Self::RepetitionAlgebra { l, m } => Constructed::Algebra(repetition_algebra(*l, *m, ring)?),
            Self::RadicalT { l, m } => Constructed::Algebra(radical_t(*l, *m, ring)?),
            Self::UpperTriangular { n } => Constructed::Algebra(upper_triangular(*n, ring)?),
            Self::DiagonalEmbedding { k, copies } => {
                Constructed::Algebra(diagonal_embedding(*k, *copies, ring)?)
            }
            Self::ScaledCorner { n, modulus, g } => {
                let set = scaled_corner_algebra(*n, *modulus, *g)?;
                if set.ring != ring {
                    return Err(Error::RingMismatch {
                        left: ring,
                        right: set.ring,
                    });
                }
                Constructed::Spanning(set)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::jacobson_radical;
    use crate::standard::eval_standard_dp;
    use crate::testutil::{gf, unit};

    fn shape(parts: &[usize]) -> BlockShape {
        BlockShape::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn full_block_dimensions() {
        let q = RingSpec::rationals();
        assert_eq!(full_block_algebra(&shape(&[3]), q).unwrap().dim(), 9);
        assert_eq!(full_block_algebra(&shape(&[1, 1]), q).unwrap().dim(), 3);
        assert_eq!(full_block_algebra(&shape(&[1, 2]), q).unwrap().dim(), 7);
        let u4 = upper_triangular(4, q).unwrap();
        assert_eq!(u4.dim(), 10);
        assert_eq!(u4, full_block_algebra(&shape(&[1, 1, 1, 1]), q).unwrap());
        assert!(u4.is_unital());
    }

    #[test]
    fn full_block_radical_is_strict_upper_blocks() {
        let q = RingSpec::rationals();
        let s = shape(&[2, 1, 1]);
        let rad = jacobson_radical(&full_block_algebra(&s, q).unwrap()).unwrap();
        let n = s.n();
        let strict: Vec<Matrix> = (0..n)
            .flat_map(|p| (0..n).map(move |c| (p, c)))
            .filter(|&(p, c)| s.block_of(p) < s.block_of(c))
            .map(|(p, c)| unit(q, n, p + 1, c + 1))
            .collect();
        assert_eq!(rad, SubalgebraBasis::span(q, n, &strict).unwrap());
    }

    #[test]
    fn staircase_values() {
        let r = gf(101);
        for n in 1..=4 {
            let s = staircase(n, r).unwrap();
            assert_eq!(s.len(), 2 * n - 1);
            assert_eq!(eval_standard_dp(&s).unwrap(), unit(r, n, 1, n));
        }
        assert!(staircase(0, r).is_err());
    }

    #[test]
    fn repetition_shape() {
        let q = RingSpec::rationals();
        let a = repetition_algebra(1, 1, q).unwrap();
        assert_eq!((a.n(), a.dim()), (3, 5));
        let a = repetition_algebra(1, 2, q).unwrap();
        assert_eq!((a.n(), a.dim()), (4, 10));
        let a = repetition_algebra(2, 1, q).unwrap();
        assert_eq!((a.n(), a.dim()), (5, 8 + 1 + 4));
        assert!(a.is_unital());
    }

    #[test]
    fn radical_strip() {
        let q = RingSpec::rationals();
        let t = radical_t(1, 1, q).unwrap();
        assert_eq!(t.basis(), &[unit(q, 2, 1, 2)]);
        let t = radical_t(2, 1, q).unwrap();
        assert_eq!(t.basis(), &[unit(q, 3, 1, 3), unit(q, 3, 2, 3)]);
        for x in t.basis() {
            for y in t.basis() {
                assert!(x.mul(y).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn diagonal_embedding_is_simple_copy() {
        let r = gf(101);
        let d = diagonal_embedding(2, 2, r).unwrap();
        assert_eq!((d.n(), d.dim()), (4, 4));
        assert!(d.is_unital());
        let s = diagonal_embedding(1, 3, r).unwrap();
        assert_eq!(s.basis(), &[Matrix::identity(r, 3)]);
    }

    #[test]
    fn quadratic_extension_needs_non_square() {
        let q = RingSpec::rationals();
        assert_eq!(quadratic_extension(&Scalar::from_i64(q, 2)).unwrap().dim(), 2);
        assert!(quadratic_extension(&Scalar::from_i64(q, 4)).is_err());
        assert!(quadratic_extension(&Scalar::from_fraction(q, 9, 4).unwrap()).is_err());
        let r = gf(101);
        // 2 is a non-residue mod 101 (101 ≡ 5 mod 8)
        assert!(quadratic_extension(&Scalar::from_i64(r, 2)).is_ok());
        assert!(quadratic_extension(&Scalar::from_i64(r, 4)).is_err());
    }

    #[test]
    fn scaled_corner_membership() {
        let b = scaled_corner_algebra(2, 4, 2).unwrap();
        let z4 = b.ring;
        assert_eq!(b.elements.len(), 3);
        assert!(!b.contains(&unit(z4, 2, 1, 2)).unwrap());
        assert!(b.contains(&unit(z4, 2, 1, 2).scale(&Scalar::from_i64(z4, 2))).unwrap());
        assert!(!b.contains(&unit(z4, 2, 2, 1)).unwrap());
        for x in &b.elements {
            assert!(b.contains(x).unwrap());
        }
        assert!(scaled_corner_algebra(2, 4, 1).is_err());
        assert!(scaled_corner_algebra(2, 4, 4).is_err());
        assert!(scaled_corner_algebra(2, 5, 2).is_err());
    }

    #[test]
    fn scaled_corner_small_witnesses() {
        let b = scaled_corner_algebra(2, 4, 2).unwrap();
        let z4 = b.ring;
        let two_e12 = unit(z4, 2, 1, 2).scale(&Scalar::from_i64(z4, 2));
        let v = eval_standard_dp(&[unit(z4, 2, 1, 1), two_e12.clone()]).unwrap();
        assert_eq!(v, two_e12);

        let b = scaled_corner_algebra(3, 4, 2).unwrap();
        let two = Scalar::from_i64(z4, 2);
        let args = [
            unit(z4, 3, 1, 2).scale(&two),
            unit(z4, 3, 2, 2),
            unit(z4, 3, 2, 3),
            unit(z4, 3, 3, 3),
        ];
        for x in &args {
            assert!(b.contains(x).unwrap());
        }
        assert_eq!(eval_standard_dp(&args).unwrap(), unit(z4, 3, 1, 3).scale(&two));
    }

    #[test]
    fn named_constructions_dispatch() {
        let q = RingSpec::rationals();
        let c = NamedConstruction::RepetitionAlgebra { l: 1, m: 1 };
        assert_eq!(c.n(), 3);
        assert!(matches!(c.build(q).unwrap(), Constructed::Algebra(a) if a.dim() == 5));
        let c = NamedConstruction::ScaledCorner { n: 2, modulus: 4, g: 2 };
        assert!(c.build(q).is_err());
        assert!(matches!(
            c.build(RingSpec::integers_mod(4).unwrap()).unwrap(),
            Constructed::Spanning(_)
        ));
        let json = serde_json::to_string(&NamedConstruction::FullBlock { shape: shape(&[1, 2]) }).unwrap();
        assert_eq!(json, r#"{"kind":"full_block","shape":[1,2]}"#);
    }
}
