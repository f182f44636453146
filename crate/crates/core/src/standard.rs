//! Standard and multilinear polynomials evaluated on tuples of matrices.
//!
//! `s_t(X_1, …, X_t) = Σ_σ sgn(σ) X_σ(1)⋯X_σ(t)`. Two evaluators are
//! provided: a permutation sum capped at `t = 8`, kept deliberately simple so
//! it can act as an oracle, and a subset dynamic program that groups
//! permutations by their last letter:
//!
//! ```text
//! g(∅) = I,   g(S) = Σ_{i ∈ S} (-1)^{#{j ∈ S : j > i}} · g(S \ {i}) · X_i
//! ```
//!
//! so that `s_t = g({1..t})` after `O(2^t · t)` matrix products.

use std::borrow::Borrow;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dispatch, Matrix, Storage};
use crate::ring::{RingSpec, Scalar};

/// Largest degree accepted by the permutation-sum evaluators.
pub const NAIVE_MAX_DEGREE: usize = 8;
/// Largest degree accepted by the subset evaluator.
pub const DP_MAX_DEGREE: usize = 24;
/// Upper bound on scalar cells in the subset table.
const DP_MAX_CELLS: usize = 1 << 28;
/// Largest degree for which a [`MultilinearPoly`] may be evaluated.
pub const MULTILINEAR_MAX_DEGREE: usize = 10;

/// A permutation of `1..=t` as its word `(σ(1), …, σ(t))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    word: Vec<usize>,
    sign: i8,
}

impl Permutation {
    pub fn identity(t: usize) -> Self {
        Self {
            word: (1..=t).collect(),
            sign: 1,
        }
    }

    pub fn from_word(word: Vec<usize>) -> Result<Self> {
        let t = word.len();
        let mut seen = vec![false; t + 1];
        for &w in &word {
            if w == 0 || w > t || seen[w] {
                return Err(Error::InvalidArgument(format!(
                    "{word:?} is not a permutation of 1..={t}"
                )));
            }
            seen[w] = true;
        }
        let inversions = (0..t)
            .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
            .filter(|&(i, j)| word[i] > word[j])
            .count();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Ok(Self { word, sign })
    }

    /// The permutation at 0-based position `rank` in lexicographic order.
    pub fn from_lex_rank(t: usize, mut rank: usize) -> Result<Self> {
        let total = factorial(t).ok_or(Error::DegreeTooLarge {
            op: "from_lex_rank",
            t,
            max: 20,
        })?;
        if rank >= total {
            return Err(Error::InvalidArgument(format!("rank {rank} >= {t}!")));
        }
        let mut pool: Vec<usize> = (1..=t).collect();
        let mut word = Vec::with_capacity(t);
        for k in (0..t).rev() {
            let f = factorial(k).expect("k < t");
            word.push(pool.remove(rank / f));
            rank %= f;
        }
        Self::from_word(word)
    }

    /// 0-based position in lexicographic order (Lehmer code).
    pub fn lex_rank(&self) -> usize {
        let t = self.word.len();
        (0..t)
            .map(|i| {
                let smaller_after = self.word[i + 1..].iter().filter(|&&w| w < self.word[i]).count();
                smaller_after * factorial(t - 1 - i).expect("small degree")
            })
            .sum()
    }

    /// Advances to the lexicographic successor, updating the sign
    /// incrementally. Returns `false` (leaving `self` unchanged) at the end.
    pub fn advance(&mut self) -> bool {
        let w = &mut self.word;
        let t = w.len();
        if t < 2 {
            return false;
        }
        let Some(i) = (0..t - 1).rev().find(|&i| w[i] < w[i + 1]) else {
            return false;
        };
        let j = (i + 1..t).rev().find(|&j| w[j] > w[i]).expect("successor exists");
        w.swap(i, j);
        w[i + 1..].reverse();
        let suffix = t - i - 1;
        let transpositions = 1 + suffix / 2;
        if transpositions % 2 == 1 {
            self.sign = -self.sign;
        }
        true
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

/// All permutations of `1..=t` in lexicographic order.
pub fn permutations(t: usize) -> impl Iterator<Item = Permutation> {
    let mut next = Some(Permutation::identity(t));
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        if succ.advance() {
            next = Some(succ);
        }
        Some(cur)
    })
}

pub fn factorial(t: usize) -> Option<usize> {
    (1..=t).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// A multilinear polynomial of degree `t`: coefficients indexed by the
/// lexicographic rank of the monomial's permutation word. Missing entries
/// are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultilinearPoly {
    degree: usize,
    ring: RingSpec,
    coefficients: BTreeMap<usize, Scalar>,
}

impl MultilinearPoly {
    pub fn zero(ring: RingSpec, degree: usize) -> Self {
        Self {
            degree,
            ring,
            coefficients: BTreeMap::new(),
        }
    }

    /// `s_t`, with coefficient `sgn(σ)` on every monomial.
    pub fn standard(ring: RingSpec, degree: usize) -> Result<Self> {
        check_multilinear_degree(degree)?;
        let coefficients = permutations(degree)
            .enumerate()
            .map(|(rank, p)| (rank, Scalar::from_i64(ring, p.sign() as i64)))
            .collect();
        Ok(Self {
            degree,
            ring,
            coefficients,
        })
    }

    /// Dense coefficient vector of length `t!`.
    pub fn from_dense(ring: RingSpec, degree: usize, coeffs: &[Scalar]) -> Result<Self> {
        check_multilinear_degree(degree)?;
        let total = factorial(degree).expect("bounded degree");
        if coeffs.len() != total {
            return Err(Error::DimensionMismatch {
                op: "from_dense",
                left: (coeffs.len(), 1),
                right: (total, 1),
            });
        }
        let mut poly = Self::zero(ring, degree);
        for (rank, c) in coeffs.iter().enumerate() {
            poly.set(rank, c.clone())?;
        }
        Ok(poly)
    }

    pub fn set(&mut self, rank: usize, coeff: Scalar) -> Result<()> {
        if coeff.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: coeff.ring(),
            });
        }
        if rank >= factorial(self.degree).unwrap_or(usize::MAX) {
            return Err(Error::InvalidArgument(format!("monomial rank {rank} out of range")));
        }
        if coeff.is_zero() {
            self.coefficients.remove(&rank);
        } else {
            self.coefficients.insert(rank, coeff);
        }
        Ok(())
    }

    pub fn set_monomial(&mut self, perm: &Permutation, coeff: Scalar) -> Result<()> {
        if perm.degree() != self.degree {
            return Err(Error::InvalidArgument("monomial degree differs".into()));
        }
        self.set(perm.lex_rank(), coeff)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn coefficient(&self, rank: usize) -> Scalar {
        self.coefficients
            .get(&rank)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.ring))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coefficients.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

fn check_multilinear_degree(t: usize) -> Result<()> {
    if t > MULTILINEAR_MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            op: "multilinear polynomial",
            t,
            max: MULTILINEAR_MAX_DEGREE,
        });
    }
    Ok(())
}

/// Validates an argument tuple; returns `(ring, n)`.
fn check_tuple<M: Borrow<Matrix>>(mats: &[M], op: &'static str) -> Result<(RingSpec, usize)> {
    let first = mats.first().ok_or(Error::EmptyInput { op })?.borrow();
    if !first.is_square() {
        return Err(Error::DimensionMismatch {
            op,
            left: (first.rows(), first.cols()),
            right: (first.cols(), first.rows()),
        });
    }
    for m in mats.iter().map(Borrow::borrow) {
        if m.ring() != first.ring() {
            return Err(Error::RingMismatch {
                left: first.ring(),
                right: m.ring(),
            });
        }
        if (m.rows(), m.cols()) != (first.rows(), first.cols()) {
            return Err(Error::DimensionMismatch {
                op,
                left: (first.rows(), first.cols()),
                right: (m.rows(), m.cols()),
            });
        }
    }
    Ok((first.ring(), first.rows()))
}

fn has_repeat<M: Borrow<Matrix>>(mats: &[M]) -> bool {
    (0..mats.len()).any(|i| (i + 1..mats.len()).any(|j| mats[i].borrow() == mats[j].borrow()))
}

fn product<M: Borrow<Matrix>>(ring: RingSpec, n: usize, mats: &[M], word: &[usize]) -> Result<Matrix> {
    let mut acc = Matrix::identity(ring, n);
    for &w in word {
        acc = acc.mul(mats[w - 1].borrow())?;
    }
    Ok(acc)
}

/// `s_t` by summing all `t!` signed products (`t ≤ 8`).
pub fn eval_standard_naive<M: Borrow<Matrix>>(mats: &[M]) -> Result<Matrix> {
    let (ring, n) = check_tuple(mats, "eval_standard_naive")?;
    let t = mats.len();
    if t > NAIVE_MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            op: "eval_standard_naive",
            t,
            max: NAIVE_MAX_DEGREE,
        });
    }
    if has_repeat(mats) {
        return Ok(Matrix::zeros(ring, n, n));
    }
    fn go<A: Storage, M: Borrow<Matrix>>(ar: A, mats: &[M], n: usize) -> crate::matrix::Entries {
        let xs: Vec<&[A::E]> = mats.iter().map(|m| A::slice(m.borrow())).collect();
        let sq = n * n;
        let mut acc = vec![ar.zero(); sq];
        let mut term = vec![ar.zero(); sq];
        let mut scratch = vec![ar.zero(); sq];
        let mut p = Permutation::identity(xs.len());
        loop {
            let w = p.word();
            term.clone_from_slice(xs[w[0] - 1]);
            for &k in &w[1..] {
                ar.matmul_into(&term, xs[k - 1], n, n, n, &mut scratch);
                std::mem::swap(&mut term, &mut scratch);
            }
            for (a, x) in acc.iter_mut().zip(&term) {
                *a = if p.sign() > 0 { ar.add(a, x) } else { ar.sub(a, x) };
            }
            if !p.advance() {
                break;
            }
        }
        A::wrap(acc)
    }
    Ok(Matrix::from_raw(ring, n, n, dispatch!(ring, go(mats, n))))
}

/// `s_t` by the subset recursion (`t ≤ 24`, table permitting).
pub fn eval_standard_dp<M: Borrow<Matrix>>(mats: &[M]) -> Result<Matrix> {
    let (ring, n) = check_tuple(mats, "eval_standard_dp")?;
    let t = mats.len();
    if t > DP_MAX_DEGREE || (1usize << t).saturating_mul(n * n) > DP_MAX_CELLS {
        return Err(Error::DegreeTooLarge {
            op: "eval_standard_dp",
            t,
            max: DP_MAX_DEGREE,
        });
    }
    if has_repeat(mats) {
        return Ok(Matrix::zeros(ring, n, n));
    }
    fn go<A: Storage, M: Borrow<Matrix>>(ar: A, mats: &[M], n: usize) -> crate::matrix::Entries {
        let xs: Vec<&[A::E]> = mats.iter().map(|m| A::slice(m.borrow())).collect();
        A::wrap(subset_kernel(ar, &xs, n))
    }
    Ok(Matrix::from_raw(ring, n, n, dispatch!(ring, go(mats, n))))
}

/// The subset recursion on raw row-major slices.
pub(crate) fn subset_kernel<A: crate::arith::Arith>(ar: A, xs: &[&[A::E]], n: usize) -> Vec<A::E> {
    let t = xs.len();
    let sq = n * n;
    let full = (1usize << t) - 1;
    let mut table = vec![ar.zero(); (full + 1) * sq];
    for i in 0..n {
        table[i * n + i] = ar.one();
    }
    for s in 1..=full {
        let size = s.count_ones() as usize;
        let (done, rest) = table.split_at_mut(s * sq);
        let out = &mut rest[..sq];
        let mut rank = 0;
        for (i, x) in xs.iter().enumerate() {
            if s >> i & 1 == 0 {
                continue;
            }
            rank += 1;
            let prev = s ^ (1 << i);
            let negate = (size - rank) % 2 == 1;
            ar.matmul_acc(out, &done[prev * sq..(prev + 1) * sq], x, n, negate);
        }
    }
    table.split_off(full * sq)
}

/// `Σ_σ coeff(σ) X_σ(1)⋯X_σ(t)`.
pub fn eval_multilinear<M: Borrow<Matrix>>(poly: &MultilinearPoly, mats: &[M]) -> Result<Matrix> {
    let (ring, n) = check_tuple(mats, "eval_multilinear")?;
    if mats.len() != poly.degree() {
        return Err(Error::InvalidArgument(format!(
            "polynomial of degree {} given {} arguments",
            poly.degree(),
            mats.len()
        )));
    }
    if ring != poly.ring() {
        return Err(Error::RingMismatch {
            left: poly.ring(),
            right: ring,
        });
    }
    let one = Scalar::one(ring);
    let mut acc = Matrix::zeros(ring, n, n);
    for (rank, coeff) in poly.terms() {
        let p = Permutation::from_lex_rank(poly.degree(), rank)?;
        let term = product(ring, n, mats, p.word())?;
        acc = acc.add_scale(&term, &one, coeff)?;
    }
    Ok(acc)
}

/// Sum of the terms of `s_m` whose word contains the run
/// `offset+1, offset+2, …, offset+window` consecutively and in order, each
/// with its sign in `s_m`.
///
/// For odd `window` this is `s_{m-window+1}(X_1, …, X_offset, Y, …, X_m)`
/// with `Y = X_{offset+1}⋯X_{offset+window}`.
pub fn consecutive_factor_sum<M: Borrow<Matrix>>(mats: &[M], offset: usize, window: usize) -> Result<Matrix> {
    let (ring, n) = check_tuple(mats, "consecutive_factor_sum")?;
    let m = mats.len();
    if window == 0 || offset + window > m {
        return Err(Error::InvalidArgument(format!(
            "window {}..={} does not fit in {m} variables",
            offset + 1,
            offset + window
        )));
    }
    if m > NAIVE_MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            op: "consecutive_factor_sum",
            t: m,
            max: NAIVE_MAX_DEGREE,
        });
    }
    let run: Vec<usize> = (offset + 1..=offset + window).collect();
    let one = Scalar::one(ring);
    let mut acc = Matrix::zeros(ring, n, n);
    for p in permutations(m) {
        if !p.word().windows(window).any(|w| w == run.as_slice()) {
            continue;
        }
        let term = product(ring, n, mats, p.word())?;
        let sign = Scalar::from_i64(ring, p.sign() as i64);
        acc = acc.add_scale(&term, &one, &sign)?;
    }
    Ok(acc)
}
