//! Slice-level kernels shared by the matrix type and the evaluators.
//!
//! Each ring gets a small `Copy` context implementing [`Arith`]; the matrix
//! code dispatches on its storage variant once per operation and then runs a
//! monomorphized loop.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::mod_inverse;

pub(crate) trait Arith: Copy + Send + Sync {
    type E: Clone + PartialEq + Send + Sync + std::fmt::Debug;

    fn zero(self) -> Self::E;
    fn one(self) -> Self::E;
    fn lift_i64(self, v: i64) -> Self::E;
    fn is_zero(self, a: &Self::E) -> bool;
    fn add(self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(self, a: &Self::E) -> Option<Self::E>;

    /// `out[r×c] = a[r×k] · b[k×c]`, row-major.
    fn matmul_into(self, a: &[Self::E], b: &[Self::E], r: usize, k: usize, c: usize, out: &mut [Self::E]) {
        for i in 0..r {
            for j in 0..c {
                let mut acc = self.zero();
                for l in 0..k {
                    acc = self.add(&acc, &self.mul(&a[i * k + l], &b[l * c + j]));
                }
                out[i * c + j] = acc;
            }
        }
    }

    /// `acc[n×n] ±= a · b` for square matrices.
    fn matmul_acc(self, acc: &mut [Self::E], a: &[Self::E], b: &[Self::E], n: usize, negate: bool) {
        for i in 0..n {
            for j in 0..n {
                let mut s = self.zero();
                for l in 0..n {
                    s = self.add(&s, &self.mul(&a[i * n + l], &b[l * n + j]));
                }
                let cell = &mut acc[i * n + j];
                *cell = if negate { self.sub(cell, &s) } else { self.add(cell, &s) };
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref_in_place(self, data: &mut [Self::E], rows: usize, cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(found) = (row..rows).find(|&r| !self.is_zero(&data[r * cols + col])) else {
                continue;
            };
            if found != row {
                for c in 0..cols {
                    data.swap(found * cols + c, row * cols + c);
                }
            }
            let inv = self.inv(&data[row * cols + col]).expect("nonzero pivot in a field");
            for c in col..cols {
                data[row * cols + c] = self.mul(&data[row * cols + c], &inv);
            }
            for r in 0..rows {
                if r == row || self.is_zero(&data[r * cols + col]) {
                    continue;
                }
                let factor = data[r * cols + col].clone();
                for c in col..cols {
                    let t = self.mul(&factor, &data[row * cols + c]);
                    data[r * cols + c] = self.sub(&data[r * cols + c], &t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

/// Residues modulo `m < 2^32`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Modular(pub u64);

impl Arith for Modular {
    type E = u64;

    #[inline]
    fn zero(self) -> u64 {
        0
    }
    #[inline]
    fn one(self) -> u64 {
        1 % self.0
    }
    fn lift_i64(self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.0 as i128) as u64
    }
    #[inline]
    fn is_zero(self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    #[inline]
    fn sub(self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }
    #[inline]
    fn mul(self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(self, a: &u64) -> Option<u64> {
        mod_inverse(*a, self.0)
    }

    fn matmul_into(self, a: &[u64], b: &[u64], r: usize, k: usize, c: usize, out: &mut [u64]) {
        let m = self.0 as u128;
        for i in 0..r {
            let arow = &a[i * k..(i + 1) * k];
            for j in 0..c {
                let mut s: u128 = 0;
                for (l, x) in arow.iter().enumerate() {
                    s += (*x * b[l * c + j]) as u128;
                }
                out[i * c + j] = (s % m) as u64;
            }
        }
    }

    fn matmul_acc(self, acc: &mut [u64], a: &[u64], b: &[u64], n: usize, negate: bool) {
        let m = self.0 as u128;
        for i in 0..n {
            let arow = &a[i * n..(i + 1) * n];
            for j in 0..n {
                let mut s: u128 = 0;
                for (l, x) in arow.iter().enumerate() {
                    s += (*x * b[l * n + j]) as u128;
                }
                let s = (s % m) as u64;
                let cell = &mut acc[i * n + j];
                *cell = if negate { self.sub(cell, &s) } else { self.add(cell, &s) };
            }
        }
    }
}

/// Arbitrary-precision rationals.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rationals;

impl Arith for Rationals {
    type E = BigRational;

    fn zero(self) -> BigRational {
        BigRational::zero()
    }
    fn one(self) -> BigRational {
        BigRational::one()
    }
    fn lift_i64(self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn matmul_into(
        self,
        a: &[BigRational],
        b: &[BigRational],
        r: usize,
        k: usize,
        c: usize,
        out: &mut [BigRational],
    ) {
        for i in 0..r {
            for j in 0..c {
                let mut acc = BigRational::zero();
                for l in 0..k {
                    let (x, y) = (&a[i * k + l], &b[l * c + j]);
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                out[i * c + j] = acc;
            }
        }
    }

    fn matmul_acc(
        self,
        acc: &mut [BigRational],
        a: &[BigRational],
        b: &[BigRational],
        n: usize,
        negate: bool,
    ) {
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    let (x, y) = (&a[i * n + l], &b[l * n + j]);
                    if !x.is_zero() && !y.is_zero() {
                        s += x * y;
                    }
                }
                if negate {
                    acc[i * n + j] -= s;
                } else {
                    acc[i * n + j] += s;
                }
            }
        }
    }
}
