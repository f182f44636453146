//! Subalgebras of `M_n` presented by canonical bases.
//!
//! A [`SubalgebraBasis`] stores matrices whose row-major vectorizations are
//! in reduced row echelon form, so two bases of the same subspace compare
//! equal as lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{RingSpec, Scalar};

/// Generators for a subalgebra of `M_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    ring: RingSpec,
    n: usize,
    gens: Vec<Matrix>,
    include_identity: bool,
}

impl GeneratorSet {
    pub fn new(ring: RingSpec, n: usize, gens: Vec<Matrix>, include_identity: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ambient size must be positive".into()));
        }
        for g in &gens {
            if g.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring,
                    right: g.ring(),
                });
            }
            if (g.rows(), g.cols()) != (n, n) {
                return Err(Error::DimensionMismatch {
                    op: "GeneratorSet::new",
                    left: (n, n),
                    right: (g.rows(), g.cols()),
                });
            }
        }
        Ok(Self {
            ring,
            n,
            gens,
            include_identity,
        })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn include_identity(&self) -> bool {
        self.include_identity
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraBasis {
    ring: RingSpec,
    n: usize,
    basis: Vec<Matrix>,
    /// Pivot column of each basis vector in the vectorized (row-major) layout.
    pivots: Vec<usize>,
}

impl SubalgebraBasis {
    /// Canonical basis of the linear span of `mats`. No closure is taken.
    pub fn span(ring: RingSpec, n: usize, mats: &[Matrix]) -> Result<Self> {
        ring.require_field("span")?;
        let rows: Vec<Matrix> = mats
            .iter()
            .map(|m| {
                if (m.rows(), m.cols()) != (n, n) {
                    Err(Error::DimensionMismatch {
                        op: "span",
                        left: (n, n),
                        right: (m.rows(), m.cols()),
                    })
                } else {
                    Ok(m.vectorize())
                }
            })
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Ok(Self {
                ring,
                n,
                basis: Vec::new(),
                pivots: Vec::new(),
            });
        }
        let ech = Matrix::stack(ring, n * n, &rows)?.rref()?;
        let basis = (0..ech.rank)
            .map(|r| ech.echelon.submatrix(r, 0, 1, n * n)?.reshape(n, n))
            .collect::<Result<_>>()?;
        Ok(Self {
            ring,
            n,
            basis,
            pivots: ech.pivots,
        })
    }

    /// Canonical basis of the span of `mats`, which must already be closed
    /// under multiplication.
    pub fn from_closed_span(ring: RingSpec, n: usize, mats: &[Matrix]) -> Result<Self> {
        let a = Self::span(ring, n, mats)?;
        if let Some((i, j)) = a.closure_defect()? {
            return Err(Error::InvalidConstruction(format!(
                "span is not closed: product of basis elements {i} and {j} leaves it"
            )));
        }
        Ok(a)
    }

    /// First basis pair whose product is outside the span, if any.
    pub fn closure_defect(&self) -> Result<Option<(usize, usize)>> {
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate() {
                if !self.contains(&u.mul(v)?)? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    /// Ambient matrix size.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is outside the span.
    pub fn coordinates(&self, x: &Matrix) -> Result<Option<Vec<Scalar>>> {
        if x.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: x.ring(),
            });
        }
        if (x.rows(), x.cols()) != (self.n, self.n) {
            return Err(Error::DimensionMismatch {
                op: "contains",
                left: (self.n, self.n),
                right: (x.rows(), x.cols()),
            });
        }
        let v = x.vectorize();
        let coeffs: Vec<Scalar> = self.pivots.iter().map(|&p| v.get(0, p)).collect();
        if self.basis.is_empty() {
            return Ok(v.is_zero().then(Vec::new));
        }
        let recon = Matrix::combination(&coeffs, &self.basis)?;
        Ok((recon == *x).then_some(coeffs))
    }

    pub fn contains(&self, x: &Matrix) -> Result<bool> {
        Ok(self.coordinates(x)?.is_some())
    }

    pub fn is_unital(&self) -> bool {
        self.contains(&Matrix::identity(self.ring, self.n)).unwrap_or(false)
    }

    /// True when every basis element of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &SubalgebraBasis) -> Result<bool> {
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The subalgebra generated by `g`: repeatedly adjoins all pairwise products
/// of the current basis until the dimension stops growing.
pub fn close_generators(g: &GeneratorSet) -> Result<SubalgebraBasis> {
    g.ring.require_field("close_generators")?;
    if g.gens.is_empty() && !g.include_identity {
        return Err(Error::EmptyInput {
            op: "close_generators",
        });
    }
    let mut seed = g.gens.clone();
    if g.include_identity {
        seed.push(Matrix::identity(g.ring, g.n));
    }
    let mut current = SubalgebraBasis::span(g.ring, g.n, &seed)?;
    loop {
        let mut next = current.basis.clone();
        for u in &current.basis {
            for v in &current.basis {
                let p = u.mul(v)?;
                if !current.contains(&p)? {
                    next.push(p);
                }
            }
        }
        if next.len() == current.dim() {
            return Ok(current);
        }
        current = SubalgebraBasis::span(g.ring, g.n, &next)?;
    }
}

pub fn contains(a: &SubalgebraBasis, x: &Matrix) -> Result<bool> {
    a.contains(x)
}

/// Requires characteristic 0 or `p > n`.
fn check_radical_characteristic(a: &SubalgebraBasis) -> Result<()> {
    a.ring.require_field("jacobson_radical")?;
    let p = a.ring.characteristic();
    if p != 0 && p as usize <= a.n {
        return Err(Error::CharacteristicTooSmall { p, n: a.n });
    }
    Ok(())
}

/// `rad(a) = {x ∈ a : Tr(xy) = 0 for all y ∈ a}`, valid in characteristic 0
/// and for `p > n`.
pub fn jacobson_radical(a: &SubalgebraBasis) -> Result<SubalgebraBasis> {
    check_radical_characteristic(a)?;
    let d = a.dim();
    if d == 0 {
        return Ok(a.clone());
    }
    let mut gram = Vec::with_capacity(d * d);
    for u in &a.basis {
        for v in &a.basis {
            gram.push(u.mul(v)?.trace()?);
        }
    }
    let gram = Matrix::from_scalars(a.ring, d, d, &gram)?;
    let elements = gram
        .nullspace()?
        .iter()
        .map(|coeffs| Matrix::combination(coeffs, &a.basis))
        .collect::<Result<Vec<_>>>()?;
    SubalgebraBasis::span(a.ring, a.n, &elements)
}

pub fn is_semisimple(a: &SubalgebraBasis) -> Result<bool> {
    Ok(jacobson_radical(a)?.dim() == 0)
}
