//! Dense matrices over a [`RingSpec`].
//!
//! Storage is row-major. A matrix is vectorized by reading its entries in
//! row-major order; every module that turns matrices into coordinate vectors
//! uses that convention.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{Arith, Modular, Rationals};
use crate::error::{Error, Result};
use crate::ring::{RingSpec, Scalar, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Entries {
    Residues(Vec<u64>),
    Rationals(Vec<BigRational>),
}

/// Ties an [`Arith`] context to the matching storage variant.
pub(crate) trait Storage: Arith {
    fn slice(m: &Matrix) -> &[Self::E];
    fn wrap(v: Vec<Self::E>) -> Entries;
    fn lift(self, s: &Scalar) -> Self::E;
}

impl Storage for Modular {
    fn slice(m: &Matrix) -> &[u64] {
        match &m.entries {
            Entries::Residues(v) => v,
            Entries::Rationals(_) => unreachable!("residue ring stores residues"),
        }
    }
    fn wrap(v: Vec<u64>) -> Entries {
        Entries::Residues(v)
    }
    fn lift(self, s: &Scalar) -> u64 {
        match s.value() {
            Value::Residue(r) => *r,
            Value::Rational(_) => unreachable!("ring checked"),
        }
    }
}

impl Storage for Rationals {
    fn slice(m: &Matrix) -> &[BigRational] {
        match &m.entries {
            Entries::Rationals(v) => v,
            Entries::Residues(_) => unreachable!("Q stores rationals"),
        }
    }
    fn wrap(v: Vec<BigRational>) -> Entries {
        Entries::Rationals(v)
    }
    fn lift(self, s: &Scalar) -> BigRational {
        match s.value() {
            Value::Rational(q) => q.clone(),
            Value::Residue(_) => unreachable!("ring checked"),
        }
    }
}

/// Runs a generic `fn f<A: Storage>(ar: A, ...)` with the context for `ring`.
macro_rules! dispatch {
    ($ring:expr, $f:ident ( $($arg:expr),* $(,)? )) => {
        match $ring.modulus() {
            Some(m) => $f($crate::arith::Modular(m), $($arg),*),
            None => $f($crate::arith::Rationals, $($arg),*),
        }
    };
}
pub(crate) use dispatch;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    ring: RingSpec,
    pub(crate) entries: Entries,
}

/// Result of [`Matrix::rref`]. Pivot columns are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rank: usize,
    pub echelon: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub(crate) fn from_raw(ring: RingSpec, rows: usize, cols: usize, entries: Entries) -> Self {
        Self {
            rows,
            cols,
            ring,
            entries,
        }
    }

    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        fn go<A: Storage>(ar: A, len: usize) -> Entries {
            A::wrap(vec![ar.zero(); len])
        }
        let entries = dispatch!(ring, go(rows * cols));
        Self::from_raw(ring, rows, cols, entries)
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        let one = Scalar::one(ring);
        for i in 0..n {
            m.set(i, i, &one);
        }
        m
    }

    /// The matrix unit `e_ij` of size `n`, with 1-based `i`, `j`.
    pub fn unit(ring: RingSpec, n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange { i, j, n });
        }
        let mut m = Self::zeros(ring, n, n);
        m.set(i - 1, j - 1, &Scalar::one(ring));
        Ok(m)
    }

    pub fn from_i64(ring: RingSpec, rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_i64",
                left: (rows, cols),
                right: (values.len(), 1),
            });
        }
        fn go<A: Storage>(ar: A, values: &[i64]) -> Entries {
            A::wrap(values.iter().map(|&v| ar.lift_i64(v)).collect())
        }
        Ok(Self::from_raw(ring, rows, cols, dispatch!(ring, go(values))))
    }

    pub fn from_scalars(ring: RingSpec, rows: usize, cols: usize, values: &[Scalar]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_scalars",
                left: (rows, cols),
                right: (values.len(), 1),
            });
        }
        if let Some(bad) = values.iter().find(|s| s.ring() != ring) {
            return Err(Error::RingMismatch {
                left: ring,
                right: bad.ring(),
            });
        }
        fn go<A: Storage>(ar: A, values: &[Scalar]) -> Entries {
            A::wrap(values.iter().map(|s| ar.lift(s)).collect())
        }
        Ok(Self::from_raw(ring, rows, cols, dispatch!(ring, go(values))))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> Scalar {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of bounds");
        let k = r * self.cols + c;
        match &self.entries {
            Entries::Residues(v) => Scalar::from_residue(self.ring, v[k]),
            Entries::Rationals(v) => Scalar::from_rational(v[k].clone()),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: &Scalar) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of bounds");
        assert_eq!(value.ring(), self.ring, "entry from a different ring");
        let k = r * self.cols + c;
        match (&mut self.entries, value.value()) {
            (Entries::Residues(v), Value::Residue(x)) => v[k] = *x,
            (Entries::Rationals(v), Value::Rational(x)) => v[k] = x.clone(),
            _ => unreachable!("ring checked"),
        }
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> Vec<Scalar> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Residues(v) => v.iter().all(|x| *x == 0),
            Entries::Rationals(v) => v.iter().all(|x| Rationals.is_zero(x)),
        }
    }

    /// Positions (0-based) of nonzero entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let nz: Vec<bool> = match &self.entries {
            Entries::Residues(v) => v.iter().map(|x| *x != 0).collect(),
            Entries::Rationals(v) => v.iter().map(|x| !Rationals.is_zero(x)).collect(),
        };
        nz.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| (k / self.cols, k % self.cols))
            .collect()
    }

    fn check_ring(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Matrix, op: &'static str) -> Result<()> {
        self.check_ring(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_ring(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        fn go<A: Storage>(ar: A, a: &Matrix, b: &Matrix) -> Entries {
            let mut out = vec![ar.zero(); a.rows * b.cols];
            ar.matmul_into(A::slice(a), A::slice(b), a.rows, a.cols, b.cols, &mut out);
            A::wrap(out)
        }
        let entries = dispatch!(self.ring, go(self, rhs));
        Ok(Self::from_raw(self.ring, self.rows, rhs.cols, entries))
    }

    /// `alpha·self + beta·other`.
    pub fn add_scale(&self, other: &Matrix, alpha: &Scalar, beta: &Scalar) -> Result<Matrix> {
        self.check_same_shape(other, "add_scale")?;
        for s in [alpha, beta] {
            if s.ring() != self.ring {
                return Err(Error::RingMismatch {
                    left: self.ring,
                    right: s.ring(),
                });
            }
        }
        fn go<A: Storage>(ar: A, a: &Matrix, b: &Matrix, alpha: &Scalar, beta: &Scalar) -> Entries {
            let (al, be) = (ar.lift(alpha), ar.lift(beta));
            A::wrap(
                A::slice(a)
                    .iter()
                    .zip(A::slice(b))
                    .map(|(x, y)| ar.add(&ar.mul(&al, x), &ar.mul(&be, y)))
                    .collect(),
            )
        }
        let entries = dispatch!(self.ring, go(self, other, alpha, beta));
        Ok(Self::from_raw(self.ring, self.rows, self.cols, entries))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        let one = Scalar::one(self.ring);
        self.add_scale(other, &one, &one)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        let one = Scalar::one(self.ring);
        self.add_scale(other, &one, &-&one)
    }

    pub fn scale(&self, alpha: &Scalar) -> Matrix {
        assert_eq!(alpha.ring(), self.ring, "scalar from a different ring");
        fn go<A: Storage>(ar: A, a: &Matrix, alpha: &Scalar) -> Entries {
            let al = ar.lift(alpha);
            A::wrap(A::slice(a).iter().map(|x| ar.mul(&al, x)).collect())
        }
        let entries = dispatch!(self.ring, go(self, alpha));
        Self::from_raw(self.ring, self.rows, self.cols, entries)
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-&Scalar::one(self.ring))
    }

    pub fn trace(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "trace",
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        Ok((0..self.rows).fold(Scalar::zero(self.ring), |acc, i| &acc + &self.get(i, i)))
    }

    pub fn pow(&self, k: u32) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "pow",
                left: (self.rows, self.cols),
                right: (self.rows, self.cols),
            });
        }
        let mut acc = Matrix::identity(self.ring, self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, &self.get(r, c));
            }
        }
        t
    }

    /// The `rows × cols` block starting at 0-based `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Matrix> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::DimensionMismatch {
                op: "submatrix",
                left: (self.rows, self.cols),
                right: (r0 + rows, c0 + cols),
            });
        }
        fn go<A: Storage>(_ar: A, a: &Matrix, r0: usize, c0: usize, rows: usize, cols: usize) -> Entries {
            let s = A::slice(a);
            let mut out = Vec::with_capacity(rows * cols);
            for r in r0..r0 + rows {
                out.extend_from_slice(&s[r * a.cols + c0..r * a.cols + c0 + cols]);
            }
            A::wrap(out)
        }
        let entries = dispatch!(self.ring, go(self, r0, c0, rows, cols));
        Ok(Self::from_raw(self.ring, rows, cols, entries))
    }

    /// Copy of `self` with `block` written at 0-based `(r0, c0)`.
    pub fn with_block(&self, r0: usize, c0: usize, block: &Matrix) -> Result<Matrix> {
        self.check_ring(block)?;
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::DimensionMismatch {
                op: "with_block",
                left: (self.rows, self.cols),
                right: (r0 + block.rows, c0 + block.cols),
            });
        }
        let mut out = self.clone();
        for r in 0..block.rows {
            for c in 0..block.cols {
                out.set(r0 + r, c0 + c, &block.get(r, c));
            }
        }
        Ok(out)
    }

    /// The same entries viewed as a `1 × rows·cols` row vector.
    pub fn vectorize(&self) -> Matrix {
        Self::from_raw(self.ring, 1, self.rows * self.cols, self.entries.clone())
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Result<Matrix> {
        if rows * cols != self.rows * self.cols {
            return Err(Error::DimensionMismatch {
                op: "reshape",
                left: (self.rows, self.cols),
                right: (rows, cols),
            });
        }
        Ok(Self::from_raw(self.ring, rows, cols, self.entries.clone()))
    }

    /// Vertical concatenation; all blocks must share column count and ring.
    pub fn stack(ring: RingSpec, cols: usize, blocks: &[Matrix]) -> Result<Matrix> {
        for b in blocks {
            if b.ring != ring {
                return Err(Error::RingMismatch {
                    left: ring,
                    right: b.ring,
                });
            }
            if b.cols != cols {
                return Err(Error::DimensionMismatch {
                    op: "stack",
                    left: (b.rows, b.cols),
                    right: (b.rows, cols),
                });
            }
        }
        fn go<A: Storage>(_ar: A, blocks: &[Matrix]) -> Entries {
            A::wrap(blocks.iter().flat_map(|b| A::slice(b).iter().cloned()).collect())
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        Ok(Self::from_raw(ring, rows, cols, dispatch!(ring, go(blocks))))
    }

    /// Linear combination `Σ coeffs[k]·mats[k]`; `mats` must be nonempty.
    pub fn combination(coeffs: &[Scalar], mats: &[Matrix]) -> Result<Matrix> {
        let first = mats.first().ok_or(Error::EmptyInput { op: "combination" })?;
        if coeffs.len() != mats.len() {
            return Err(Error::DimensionMismatch {
                op: "combination",
                left: (coeffs.len(), 1),
                right: (mats.len(), 1),
            });
        }
        let mut acc = Matrix::zeros(first.ring, first.rows, first.cols);
        let one = Scalar::one(first.ring);
        for (c, m) in coeffs.iter().zip(mats) {
            if !c.is_zero() {
                acc = acc.add_scale(m, &one, c)?;
            }
        }
        Ok(acc)
    }

    pub fn rref(&self) -> Result<Echelon> {
        self.ring.require_field("rref")?;
        fn go<A: Storage>(ar: A, a: &Matrix) -> (Entries, Vec<usize>) {
            let mut data = A::slice(a).to_vec();
            let pivots = ar.rref_in_place(&mut data, a.rows, a.cols);
            (A::wrap(data), pivots)
        }
        let (entries, pivots) = dispatch!(self.ring, go(self));
        Ok(Echelon {
            rank: pivots.len(),
            echelon: Self::from_raw(self.ring, self.rows, self.cols, entries),
            pivots,
        })
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.rank)
    }

    /// Basis of `{v : self·v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Result<Vec<Vec<Scalar>>> {
        let Echelon { echelon, pivots, .. } = self.rref()?;
        let ring = self.ring;
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        Ok(free
            .map(|f| {
                let mut v = vec![Scalar::zero(ring); self.cols];
                v[f] = Scalar::one(ring);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&echelon.get(row, f);
                }
                v
            })
            .collect())
    }
}

/// `a·b`.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.mul(b)
}

/// `alpha·a + beta·b`.
pub fn mat_add_scale(a: &Matrix, b: &Matrix, alpha: &Scalar, beta: &Scalar) -> Result<Matrix> {
    a.add_scale(b, alpha, beta)
}

/// `e_ij` in `M_n`, 1-based indices.
pub fn matrix_unit(n: usize, i: usize, j: usize, ring: RingSpec) -> Result<Matrix> {
    Matrix::unit(ring, n, i, j)
}

pub fn rref(a: &Matrix) -> Result<Echelon> {
    a.rref()
}

pub fn nullspace(a: &Matrix) -> Result<Vec<Vec<Scalar>>> {
    a.nullspace()
}

/// Row echelon form grown one row at a time, for rank tracking over long
/// streams of rows.
#[derive(Clone, Debug)]
pub struct IncrementalEchelon {
    ring: RingSpec,
    cols: usize,
    rows: Vec<Matrix>,
    pivots: Vec<usize>,
}

impl IncrementalEchelon {
    pub fn new(ring: RingSpec, cols: usize) -> Result<Self> {
        ring.require_field("incremental echelon")?;
        Ok(Self {
            ring,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `row` (a `1 × cols` matrix) against the stored rows; keeps it
    /// if independent. Returns whether the rank grew.
    pub fn insert(&mut self, row: &Matrix) -> Result<bool> {
        if row.ring != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: row.ring,
            });
        }
        if row.rows != 1 || row.cols != self.cols {
            return Err(Error::DimensionMismatch {
                op: "insert",
                left: (row.rows, row.cols),
                right: (1, self.cols),
            });
        }
        fn go<A: Storage>(ar: A, me: &mut IncrementalEchelon, row: &Matrix) -> bool {
            let mut v = A::slice(row).to_vec();
            for (stored, &p) in me.rows.iter().zip(&me.pivots) {
                if ar.is_zero(&v[p]) {
                    continue;
                }
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(A::slice(stored)).skip(p) {
                    *x = ar.sub(x, &ar.mul(&f, y));
                }
            }
            let Some(p) = v.iter().position(|x| !ar.is_zero(x)) else {
                return false;
            };
            let inv = ar.inv(&v[p]).expect("field");
            for x in v.iter_mut().skip(p) {
                *x = ar.mul(x, &inv);
            }
            let ring = me.ring;
            let cols = me.cols;
            me.rows.push(Matrix::from_raw(ring, 1, cols, A::wrap(v)));
            me.pivots.push(p);
            true
        }
        Ok(dispatch!(self.ring, go(self, row)))
    }

    /// Stored rows stacked into one matrix (not necessarily reduced).
    pub fn to_matrix(&self) -> Matrix {
        Matrix::stack(self.ring, self.cols, &self.rows).expect("consistent rows")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect();
        MatrixRepr {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix entries do not match the stated shape"));
        }
        let scalars = repr
            .entries
            .iter()
            .flatten()
            .map(|t| Scalar::parse(repr.ring, t))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Matrix::from_scalars(repr.ring, repr.rows, repr.cols, &scalars).map_err(D::Error::custom)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{} {}", self.ring, self.rows, self.cols, self)
    }
}
