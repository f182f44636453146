//! Block coordinates, diagonal-block projections and the classification of
//! block upper triangular subalgebras.
//!
//! Block indices are 1-based throughout, matching the way verdicts are
//! reported (`Repetition(1, 3)` names the first and third diagonal blocks).
//!
//! A diagonal block counts as "simple" when its projection is all of
//! `M_ℓ`. Over an algebraically closed field this is the same as
//! irreducibility; over GF(p) and Q it is stronger, and an irreducible but
//! proper block is reported as [`LowDegreeReason::ProperSimpleBlock`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{is_semisimple, SubalgebraBasis};
use crate::constructions::staircase;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Scalar;
use crate::standard::eval_standard_dp;

/// A composition `(ℓ_1, …, ℓ_t)` of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockShape {
    parts: Vec<usize>,
}

impl BlockShape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidShape("a shape needs at least one block".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidShape(format!("{parts:?} has an empty block")));
        }
        Ok(Self { parts })
    }

    /// All `2^(n-1)` compositions of `n`, ordered by their cut sets read as
    /// binary numbers.
    pub fn compositions(n: usize) -> Vec<BlockShape> {
        if n == 0 {
            return Vec::new();
        }
        (0..1usize << (n - 1))
            .map(|cuts| {
                let mut parts = vec![1];
                for k in 0..n - 1 {
                    if cuts >> k & 1 == 1 {
                        parts.push(1);
                    } else {
                        *parts.last_mut().expect("nonempty") += 1;
                    }
                }
                BlockShape { parts }
            })
            .collect()
    }

    /// `(1, 1, …, 1)`.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks `t`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Size of block `i` (1-based).
    pub fn size(&self, i: usize) -> usize {
        self.parts[i - 1]
    }

    /// First row/column (0-based) of block `i` (1-based).
    pub fn offset(&self, i: usize) -> usize {
        self.parts[..i - 1].iter().sum()
    }

    /// The block (1-based) containing 0-based row `r`.
    pub fn block_of(&self, r: usize) -> usize {
        let mut end = 0;
        for (k, &l) in self.parts.iter().enumerate() {
            end += l;
            if r < end {
                return k + 1;
            }
        }
        panic!("row {r} outside a shape of size {}", self.n())
    }

    /// `Σ_{i ≤ j} ℓ_i ℓ_j`, the dimension of the full block algebra.
    pub fn full_dimension(&self) -> usize {
        let t = self.parts.len();
        (0..t)
            .flat_map(|i| (i..t).map(move |j| (i, j)))
            .map(|(i, j)| self.parts[i] * self.parts[j])
            .sum()
    }

    /// Sub-shape of blocks `i..=j`.
    pub fn slice(&self, i: usize, j: usize) -> BlockShape {
        BlockShape {
            parts: self.parts[i - 1..j].to_vec(),
        }
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > j || j > self.len() {
            return Err(Error::InvalidArgument(format!(
                "block range {i}..={j} invalid for {} blocks",
                self.len()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for BlockShape {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<BlockShape> for Vec<usize> {
    fn from(s: BlockShape) -> Self {
        s.parts
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Why an algebra satisfies `s_{2n-2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum LowDegreeReason {
    /// Diagonal blocks `i < j` carry equivalent representations.
    Repetition { i: usize, j: usize },
    /// The projection onto blocks `i, i+1` is semisimple.
    NotUniserial { i: usize },
    /// Diagonal block `i` projects onto a proper semisimple subalgebra.
    ProperSimpleBlock { i: usize },
}

impl fmt::Display for LowDegreeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Repetition { i, j } => write!(f, "Repetition({i},{j})"),
            Self::NotUniserial { i } => write!(f, "NotUniserial({i})"),
            Self::ProperSimpleBlock { i } => write!(f, "ProperSimpleBlock({i})"),
        }
    }
}

/// The staircase `e11, e12, e22, …, enn` together with the two values that
/// certify `s_{2n-1}` and `s_{2n-2}` are not identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseWitness {
    pub staircase: Vec<Matrix>,
    /// `s_{2n-1}(staircase)`, equal to `e_1n`.
    pub value: Matrix,
    /// `s_{2n-2}` of the staircase without its leading `e11`; absent for
    /// `n = 1`.
    pub low_degree_value: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClassificationVerdict {
    FullBlockTriangular {
        shape: BlockShape,
        witness: StaircaseWitness,
    },
    SatisfiesLowDegree {
        reason: LowDegreeReason,
    },
    NotCanonical {
        detail: String,
    },
}

impl ClassificationVerdict {
    pub fn is_full_block_triangular(&self) -> bool {
        matches!(self, Self::FullBlockTriangular { .. })
    }
}

impl fmt::Display for ClassificationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FullBlockTriangular { shape, .. } => write!(f, "FullBlockTriangular{shape}"),
            Self::SatisfiesLowDegree { reason } => write!(f, "SatisfiesLowDegree({reason})"),
            Self::NotCanonical { detail } => write!(f, "NotCanonical({detail})"),
        }
    }
}

fn check_shape(a: &SubalgebraBasis, shape: &BlockShape) -> Result<()> {
    if shape.n() != a.n() {
        return Err(Error::InvalidShape(format!(
            "shape {shape} sums to {} but the algebra lives in M_{}",
            shape.n(),
            a.n()
        )));
    }
    Ok(())
}

/// Fails with [`Error::NotBlockTriangular`] on the first basis entry below
/// the block diagonal.
pub fn check_block_triangular(a: &SubalgebraBasis, shape: &BlockShape) -> Result<()> {
    check_shape(a, shape)?;
    for (k, b) in a.basis().iter().enumerate() {
        if let Some(&(row, col)) = b
            .support()
            .iter()
            .find(|&&(r, c)| shape.block_of(r) > shape.block_of(c))
        {
            return Err(Error::NotBlockTriangular { element: k, row, col });
        }
    }
    Ok(())
}

/// Image of `a` under restriction to the square block spanned by parts
/// `i..=j`.
pub fn project(a: &SubalgebraBasis, shape: &BlockShape, i: usize, j: usize) -> Result<SubalgebraBasis> {
    shape.check_range(i, j)?;
    check_block_triangular(a, shape)?;
    let start = shape.offset(i);
    let size = shape.offset(j) + shape.size(j) - start;
    let images = a
        .basis()
        .iter()
        .map(|b| b.submatrix(start, start, size, size))
        .collect::<Result<Vec<_>>>()?;
    SubalgebraBasis::span(a.ring(), size, &images)
}

/// The `ℓ × ℓ` block in rows `1..=ℓ`, columns `ℓ+m+1..=2ℓ+m`.
pub fn ur_corner(x: &Matrix, l: usize, m: usize) -> Result<Matrix> {
    let size = 2 * l + m;
    if (x.rows(), x.cols()) != (size, size) {
        return Err(Error::DimensionMismatch {
            op: "ur_corner",
            left: (size, size),
            right: (x.rows(), x.cols()),
        });
    }
    x.submatrix(0, l + m, l, l)
}

/// Basis of `{T : T·π_i(x) = π_j(x)·T for all x ∈ a}`.
pub fn intertwiner_space(a: &SubalgebraBasis, shape: &BlockShape, i: usize, j: usize) -> Result<Vec<Matrix>> {
    a.ring().require_field("intertwiner_space")?;
    check_shape(a, shape)?;
    shape.check_range(i.min(j), i.max(j))?;
    let k = shape.size(i);
    if k != shape.size(j) {
        return Err(Error::InvalidArgument(format!(
            "blocks {i} and {j} have sizes {k} and {}",
            shape.size(j)
        )));
    }
    let ring = a.ring();
    let (oi, oj) = (shape.offset(i), shape.offset(j));
    let unknowns = k * k;
    let mut rows: Vec<Scalar> = Vec::new();
    let mut row_count = 0;
    for b in a.basis() {
        let p = b.submatrix(oi, oi, k, k)?;
        let q = b.submatrix(oj, oj, k, k)?;
        for r in 0..k {
            for c in 0..k {
                // (T·P)[r][c] - (Q·T)[r][c] = 0
                let mut row = vec![Scalar::zero(ring); unknowns];
                for s in 0..k {
                    row[r * k + s] = &row[r * k + s] + &p.get(s, c);
                    row[s * k + c] = &row[s * k + c] - &q.get(r, s);
                }
                rows.extend(row);
                row_count += 1;
            }
        }
    }
    if row_count == 0 {
        rows = vec![Scalar::zero(ring); unknowns];
        row_count = 1;
    }
    let system = Matrix::from_scalars(ring, row_count, unknowns, &rows)?;
    system
        .nullspace()?
        .iter()
        .map(|v| Matrix::from_scalars(ring, k, k, v))
        .collect()
}

fn check_simple_blocks(a: &SubalgebraBasis, shape: &BlockShape) -> Result<()> {
    for i in 1..=shape.len() {
        let l = shape.size(i);
        if project(a, shape, i, i)?.dim() != l * l {
            return Err(Error::NotSimpleBlocks { block: i });
        }
    }
    Ok(())
}

/// First pair `i < j` (lexicographic) of equal-size blocks whose
/// representations are equivalent.
///
/// Requires every diagonal projection to be a full matrix algebra; then any
/// nonzero intertwiner is invertible, so a nonzero intertwiner space decides
/// equivalence.
pub fn detect_repetition(a: &SubalgebraBasis, shape: &BlockShape) -> Result<Option<(usize, usize)>> {
    check_block_triangular(a, shape)?;
    check_simple_blocks(a, shape)?;
    let t = shape.len();
    for i in 1..=t {
        for j in i + 1..=t {
            if shape.size(i) == shape.size(j) && !intertwiner_space(a, shape, i, j)?.is_empty() {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// First `i` with a semisimple projection onto blocks `i, i+1`.
pub fn first_semisimple_coupling(a: &SubalgebraBasis, shape: &BlockShape) -> Result<Option<usize>> {
    for i in 1..shape.len() {
        if is_semisimple(&project(a, shape, i, i + 1)?)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// True when no consecutive two-block projection is semisimple.
pub fn is_uniserial(a: &SubalgebraBasis, shape: &BlockShape) -> Result<bool> {
    if shape.len() < 2 {
        return Err(Error::InvalidShape(format!(
            "uniseriality needs at least two blocks, got {shape}"
        )));
    }
    Ok(first_semisimple_coupling(a, shape)?.is_none())
}

/// Staircase certificate for a full block algebra of size `n`.
pub fn staircase_witness(a: &SubalgebraBasis) -> Result<StaircaseWitness> {
    let n = a.n();
    let stairs = staircase(n, a.ring())?;
    let value = eval_standard_dp(&stairs)?;
    let low_degree_value = if n > 1 {
        Some(eval_standard_dp(&stairs[1..])?)
    } else {
        None
    };
    let corner = Matrix::unit(a.ring(), n, 1, n)?;
    if value != corner || low_degree_value.as_ref().is_some_and(|v| *v != corner) {
        return Err(Error::ContractViolation(format!(
            "staircase of size {n} did not evaluate to e_1{n}"
        )));
    }
    Ok(StaircaseWitness {
        staircase: stairs,
        value,
        low_degree_value,
    })
}

/// Decides whether `a` (given in the block coordinates of `shape`) is the
/// full block upper triangular algebra, or names the first structural
/// reason it satisfies `s_{2n-2}`.
///
/// The checks run in order: block-triangular and unital input, diagonal
/// blocks equal to full matrix algebras, no repeated representation,
/// non-semisimple coupling between each pair of neighbouring blocks. An
/// algebra passing all of them must have full couplings and full dimension;
/// anything else is reported as [`Error::ContractViolation`].
pub fn classify(a: &SubalgebraBasis, shape: &BlockShape) -> Result<ClassificationVerdict> {
    check_shape(a, shape)?;
    a.ring().require_field("classify")?;
    let p = a.ring().characteristic();
    if p != 0 && p as usize <= a.n() {
        return Err(Error::CharacteristicTooSmall { p, n: a.n() });
    }
    if let Err(e) = check_block_triangular(a, shape) {
        return Ok(ClassificationVerdict::NotCanonical { detail: e.to_string() });
    }
    if !a.is_unital() {
        return Ok(ClassificationVerdict::NotCanonical {
            detail: "the algebra does not contain the identity matrix".into(),
        });
    }

    for i in 1..=shape.len() {
        let l = shape.size(i);
        let block = project(a, shape, i, i)?;
        if block.dim() < l * l {
            if !is_semisimple(&block)? {
                return Ok(ClassificationVerdict::NotCanonical {
                    detail: format!(
                        "diagonal block {i} has a nonzero radical, so it is reducible; refine the shape"
                    ),
                });
            }
            return Ok(ClassificationVerdict::SatisfiesLowDegree {
                reason: LowDegreeReason::ProperSimpleBlock { i },
            });
        }
    }

    if let Some((i, j)) = detect_repetition(a, shape)? {
        return Ok(ClassificationVerdict::SatisfiesLowDegree {
            reason: LowDegreeReason::Repetition { i, j },
        });
    }

    if let Some(i) = first_semisimple_coupling(a, shape)? {
        return Ok(ClassificationVerdict::SatisfiesLowDegree {
            reason: LowDegreeReason::NotUniserial { i },
        });
    }

    for i in 1..shape.len() {
        let pair = shape.slice(i, i + 1);
        let coupling = project(a, shape, i, i + 1)?;
        if coupling.dim() != pair.full_dimension() {
            return Err(Error::ContractViolation(format!(
                "blocks {i},{} are simple, inequivalent and coupled, yet their projection has dimension {} < {}",
                i + 1,
                coupling.dim(),
                pair.full_dimension()
            )));
        }
    }
    if a.dim() != shape.full_dimension() {
        return Err(Error::ContractViolation(format!(
            "all couplings are full but the algebra has dimension {} < {}",
            a.dim(),
            shape.full_dimension()
        )));
    }
    Ok(ClassificationVerdict::FullBlockTriangular {
        shape: shape.clone(),
        witness: staircase_witness(a)?,
    })
}
