//! Deciding whether `s_t` (or any multilinear polynomial of degree `t`)
//! vanishes on a subalgebra.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::SubalgebraBasis;
use crate::constructions::SpanningSet;
use crate::error::{Error, Result};
use crate::matrix::{IncrementalEchelon, Matrix, Storage};
use crate::ring::{RingSpec, Scalar};
use crate::sampling::{random_element, rng_from_seed};
use crate::standard::{
    eval_multilinear, eval_standard_dp, eval_standard_naive, permutations, subset_kernel, MultilinearPoly,
    DP_MAX_DEGREE, NAIVE_MAX_DEGREE,
};

/// Exhaustive sweeps refuse more index combinations than this.
pub const EXHAUSTIVE_MAX_TUPLES: u64 = 50_000_000;
/// Degree limit for [`multilinear_identity_space`].
pub const IDENTITY_SPACE_MAX_DEGREE: usize = 6;
/// Limit on `dim^t` for [`multilinear_identity_space`] and spanning-set sweeps.
pub const ALL_TUPLES_MAX: u64 = 1 << 22;

const CHUNK: u64 = 256;

const EXHAUSTIVE_RATIONALE: &str = "s_t is multilinear, so it vanishes on the algebra iff it vanishes on every t-tuple of basis \
elements; it is alternating, so tuples with a repeated element vanish and reordering a tuple only changes the sign. \
Strictly increasing index combinations therefore cover every case.";
const RANDOMIZED_RATIONALE: &str = "heuristic: s_t was evaluated on random algebra elements; finding no counterexample does \
not prove an identity and no failure bound is claimed.";
const SPANNING_RATIONALE: &str = "s_t is multilinear over the commutative coefficient ring, so every tuple of module \
generators was evaluated; no combination pruning is applied over rings with zero divisors.";
const VACUOUS_RATIONALE: &str = "t exceeds the dimension, so every t-tuple of elements is linearly dependent and the \
alternating multilinear s_t vanishes on it.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    /// Every increasing combination of basis elements.
    Exhaustive,
    /// `trials` tuples of random elements drawn from a seeded generator.
    Randomized { trials: usize, seed: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exhaustive => write!(f, "exhaustive"),
            Self::Randomized { trials, seed } => write!(f, "randomized({trials} trials, seed {seed})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Identity,
    NotIdentity,
}

/// A tuple on which `s_t` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// 0-based positions in the algebra's basis (or spanning set), when the
    /// arguments are basis elements.
    pub basis_indices: Option<Vec<usize>>,
    pub arguments: Vec<Matrix>,
    pub value: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub ring: RingSpec,
    pub n: usize,
    pub dim: usize,
    pub degree: usize,
    pub mode: Mode,
    pub verdict: Verdict,
    /// True when an identity verdict rests on random sampling.
    pub probabilistic: bool,
    pub witness: Option<Witness>,
    pub tuples_checked: u64,
    pub rationale: String,
    /// Not serialized, so that reports are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for IdentityReport {
    /// Ignores `elapsed`.
    fn eq(&self, o: &Self) -> bool {
        (self.ring, self.n, self.dim, self.degree, self.mode, self.verdict, self.probabilistic)
            == (o.ring, o.n, o.dim, o.degree, o.mode, o.verdict, o.probabilistic)
            && self.witness == o.witness
            && self.tuples_checked == o.tuples_checked
            && self.rationale == o.rationale
    }
}

impl Eq for IdentityReport {}

impl IdentityReport {
    pub fn is_identity(&self) -> bool {
        self.verdict == Verdict::Identity
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// The `rank`-th increasing `k`-combination of `0..n` in lexicographic order.
pub fn nth_combination(n: usize, k: usize, mut rank: u64) -> Option<Vec<usize>> {
    if rank >= binomial(n, k) {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let mut c = next;
        loop {
            let below = binomial(n - c - 1, k - slot - 1);
            if rank < below {
                break;
            }
            rank -= below;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    Some(out)
}

/// Advances to the next increasing combination of `0..n`; false at the end.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// `s_t` of the selected matrices, on raw storage.
fn eval_selected(mats: &[Matrix], idx: &[usize], n: usize) -> Matrix {
    fn go<A: Storage>(ar: A, mats: &[Matrix], idx: &[usize], n: usize) -> crate::matrix::Entries {
        let xs: Vec<&[A::E]> = idx.iter().map(|&i| A::slice(&mats[i])).collect();
        A::wrap(subset_kernel(ar, &xs, n))
    }
    let ring = mats[0].ring();
    Matrix::from_raw(ring, n, n, crate::matrix::dispatch!(ring, go(mats, idx, n)))
}

fn check_degree(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if t > DP_MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            op: "is_standard_identity",
            t,
            max: DP_MAX_DEGREE,
        });
    }
    Ok(())
}

/// Re-evaluates a witness with an independent evaluator.
fn confirm(w: &Witness) -> Result<()> {
    let again = if w.arguments.len() <= NAIVE_MAX_DEGREE {
        eval_standard_naive(&w.arguments)?
    } else {
        eval_standard_dp(&w.arguments)?
    };
    if again != w.value || again.is_zero() {
        return Err(Error::ContractViolation(format!(
            "witness of degree {} did not re-evaluate to its recorded nonzero value",
            w.arguments.len()
        )));
    }
    Ok(())
}

/// First `Some` in chunk order. With `full_sweep` every chunk runs even after
/// a hit, so evaluation counts stay exact.
fn first_hit<T: Send>(chunks: u64, full_sweep: bool, f: impl Fn(u64) -> Option<T> + Sync + Send) -> Option<T> {
    let hits = (0..chunks).into_par_iter().map(&f);
    if full_sweep {
        hits.collect::<Vec<_>>().into_iter().flatten().next()
    } else {
        hits.find_first(Option::is_some).flatten()
    }
}

fn exhaustive(a: &SubalgebraBasis, t: usize) -> Result<(u64, Option<Witness>)> {
    let dim = a.dim();
    if t > dim {
        return Ok((0, None));
    }
    let total = binomial(dim, t);
    if total > EXHAUSTIVE_MAX_TUPLES {
        return Err(Error::InvalidArgument(format!(
            "exhaustive check needs C({dim},{t}) = {total} evaluations (limit {EXHAUSTIVE_MAX_TUPLES}); use randomized mode"
        )));
    }
    let n = a.n();
    let basis = a.basis();
    let chunks = total.div_ceil(CHUNK);
    let hit = first_hit(chunks, true, |c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut idx = nth_combination(dim, t, start).expect("rank in range");
        let mut found = None;
        for r in start..end {
            let v = eval_selected(basis, &idx, n);
            if found.is_none() && !v.is_zero() {
                found = Some((idx.clone(), v));
            }
            if r + 1 < end {
                next_combination(&mut idx, dim);
            }
        }
        found
    });
    Ok((
        total,
        hit.map(|(idx, value)| Witness {
            arguments: idx.iter().map(|&i| basis[i].clone()).collect(),
            basis_indices: Some(idx),
            value,
        }),
    ))
}

fn randomized(a: &SubalgebraBasis, t: usize, trials: usize, seed: u64) -> Result<(u64, Option<Witness>)> {
    if let Some(order) = a.ring().order() {
        if order <= t as u64 {
            return Err(Error::FieldTooSmall { order, t });
        }
    }
    let n = a.n();
    let mut rng = rng_from_seed(seed);
    let tuples: Vec<Vec<Matrix>> = (0..trials)
        .map(|_| (0..t).map(|_| random_element(a, &mut rng)).collect())
        .collect();
    let idx: Vec<usize> = (0..t).collect();
    let chunks = (trials as u64).div_ceil(CHUNK);
    let hit = first_hit(chunks, false, |c| {
        let start = (c * CHUNK) as usize;
        let end = (start + CHUNK as usize).min(trials);
        (start..end).find_map(|k| {
            let v = eval_selected(&tuples[k], &idx, n);
            (!v.is_zero()).then_some((k, v))
        })
    });
    Ok(match hit {
        None => (trials as u64, None),
        Some((k, value)) => (
            k as u64 + 1,
            Some(Witness {
                basis_indices: None,
                arguments: tuples[k].clone(),
                value,
            }),
        ),
    })
}

/// Tests whether `s_t` vanishes on `a`.
///
/// Exhaustive mode sweeps all `C(dim, t)` increasing basis combinations and
/// reports the first nonzero one in combination order. For `t > dim` the
/// verdict is identity with nothing evaluated. Randomized mode evaluates
/// `trials` seeded tuples of random elements and stops at the first
/// counterexample; over GF(p) it needs `p > t`.
pub fn is_standard_identity(a: &SubalgebraBasis, t: usize, mode: Mode) -> Result<IdentityReport> {
    check_degree(t)?;
    a.ring().require_field("is_standard_identity")?;
    let started = Instant::now();
    let (tuples_checked, witness, rationale) = match mode {
        Mode::Exhaustive => {
            let (checked, w) = exhaustive(a, t)?;
            let why = if t > a.dim() {
                VACUOUS_RATIONALE
            } else {
                EXHAUSTIVE_RATIONALE
            };
            (checked, w, why)
        }
        Mode::Randomized { trials, seed } => {
            let (checked, w) = randomized(a, t, trials, seed)?;
            (checked, w, RANDOMIZED_RATIONALE)
        }
    };
    if let Some(w) = &witness {
        confirm(w)?;
    }
    let verdict = if witness.is_some() {
        Verdict::NotIdentity
    } else {
        Verdict::Identity
    };
    Ok(IdentityReport {
        ring: a.ring(),
        n: a.n(),
        dim: a.dim(),
        degree: t,
        mode,
        verdict,
        probabilistic: verdict == Verdict::Identity && matches!(mode, Mode::Randomized { .. }),
        witness,
        tuples_checked,
        rationale: rationale.to_string(),
        elapsed: started.elapsed(),
    })
}

/// Tests `s_t` on every `t`-tuple of a spanning set over any ring,
/// reporting the first nonzero tuple in lexicographic order.
pub fn is_standard_identity_on_spanning_set(set: &SpanningSet, t: usize) -> Result<IdentityReport> {
    check_degree(t)?;
    let k = set.elements.len();
    let total = (k as u64).checked_pow(t as u32).filter(|&x| x <= ALL_TUPLES_MAX);
    let Some(total) = total else {
        return Err(Error::InvalidArgument(format!(
            "{k}^{t} tuples exceed the limit {ALL_TUPLES_MAX}"
        )));
    };
    let started = Instant::now();
    let n = set.n;
    let chunks = total.div_ceil(CHUNK);
    let decode = |mut r: u64| -> Vec<usize> {
        let mut idx = vec![0; t];
        for slot in idx.iter_mut().rev() {
            *slot = (r % k as u64) as usize;
            r /= k as u64;
        }
        idx
    };
    let hit = first_hit(chunks, true, |c| {
        let start = c * CHUNK;
        let mut found = None;
        for r in start..(start + CHUNK).min(total) {
            let idx = decode(r);
            let distinct = (0..t).all(|i| (i + 1..t).all(|j| idx[i] != idx[j]));
            if !distinct {
                continue;
            }
            let v = eval_selected(&set.elements, &idx, n);
            if found.is_none() && !v.is_zero() {
                found = Some((idx, v));
            }
        }
        found
    });
    let witness = hit.map(|(idx, value)| Witness {
        arguments: idx.iter().map(|&i| set.elements[i].clone()).collect(),
        basis_indices: Some(idx),
        value,
    });
    if let Some(w) = &witness {
        confirm(w)?;
    }
    Ok(IdentityReport {
        ring: set.ring,
        n,
        dim: k,
        degree: t,
        mode: Mode::Exhaustive,
        verdict: if witness.is_some() {
            Verdict::NotIdentity
        } else {
            Verdict::Identity
        },
        probabilistic: false,
        witness,
        tuples_checked: total,
        rationale: SPANNING_RATIONALE.to_string(),
        elapsed: started.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinDegreeReport {
    /// Smallest `t ≤ t_max` with `s_t` an identity.
    pub degree: Option<usize>,
    /// One report per tested degree, starting at 2.
    pub reports: Vec<IdentityReport>,
    /// For unital algebras whose first identity has even degree `t`, the
    /// check that `s_{t+1}` is an identity as well.
    pub cross_check: Option<IdentityReport>,
}

/// Smallest `t` in `2..=t_max` for which `s_t` is an identity of `a`.
///
/// Both parities are tested. For unital algebras the first identity must
/// have even degree and `s_{t+1}` must vanish too; either failing is a
/// [`Error::ContractViolation`].
pub fn min_standard_degree(a: &SubalgebraBasis, t_max: usize, mode: Mode) -> Result<MinDegreeReport> {
    let mut reports = Vec::new();
    for t in 2..=t_max {
        let report = is_standard_identity(a, t, mode)?;
        let found = report.is_identity();
        reports.push(report);
        if !found {
            continue;
        }
        let mut cross_check = None;
        if a.is_unital() {
            if t % 2 == 1 {
                return Err(Error::ContractViolation(format!(
                    "unital algebra satisfies s_{t} but not s_{}",
                    t - 1
                )));
            }
            let next = is_standard_identity(a, t + 1, mode)?;
            if !next.is_identity() {
                return Err(Error::ContractViolation(format!(
                    "unital algebra satisfies s_{t} but not s_{}",
                    t + 1
                )));
            }
            cross_check = Some(next);
        }
        return Ok(MinDegreeReport {
            degree: Some(t),
            reports,
            cross_check,
        });
    }
    Ok(MinDegreeReport {
        degree: None,
        reports,
        cross_check: None,
    })
}

/// Multilinear identities of degree `t`, as coefficient vectors indexed by
/// lexicographic permutation rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySpace {
    pub ring: RingSpec,
    pub degree: usize,
    pub dimension: usize,
    /// Rows of a reduced echelon matrix; each starts with a leading 1.
    pub basis: Vec<Vec<Scalar>>,
    /// Basis tuples evaluated before the rank stabilized or the sweep ended.
    pub tuples_swept: u64,
}

impl IdentitySpace {
    pub fn polynomials(&self) -> Result<Vec<MultilinearPoly>> {
        self.basis
            .iter()
            .map(|v| MultilinearPoly::from_dense(self.ring, self.degree, v))
            .collect()
    }
}

fn tuple_of(mut r: u64, dim: usize, t: usize) -> Vec<usize> {
    let mut idx = vec![0; t];
    for slot in idx.iter_mut().rev() {
        *slot = (r % dim as u64) as usize;
        r /= dim as u64;
    }
    idx
}

/// All multilinear polynomials of degree `t ≤ 6` vanishing on `a`.
///
/// Each basis tuple (all `dim^t` of them, since a general multilinear
/// polynomial is not alternating) contributes one linear equation per
/// matrix entry on the `t!` coefficients. The sweep stops once the
/// equations have full rank.
pub fn multilinear_identity_space(a: &SubalgebraBasis, t: usize) -> Result<IdentitySpace> {
    if t == 0 || t > IDENTITY_SPACE_MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            op: "multilinear_identity_space",
            t,
            max: IDENTITY_SPACE_MAX_DEGREE,
        });
    }
    let ring = a.ring();
    ring.require_field("multilinear_identity_space")?;
    let dim = a.dim();
    let n = a.n();
    let words: Vec<Vec<usize>> = permutations(t).map(|p| p.word().to_vec()).collect();
    let cols = words.len();
    let total = (dim as u64).checked_pow(t as u32).filter(|&x| x <= ALL_TUPLES_MAX);
    let Some(total) = total else {
        return Err(Error::InvalidArgument(format!(
            "{dim}^{t} tuples exceed the limit {ALL_TUPLES_MAX}"
        )));
    };
    let mut eqs = IncrementalEchelon::new(ring, cols)?;
    let mut swept = 0;
    for r in 0..total {
        if eqs.rank() == cols {
            break;
        }
        swept += 1;
        let idx = tuple_of(r, dim, t);
        let monomials = words
            .iter()
            .map(|w| {
                w.iter()
                    .try_fold(Matrix::identity(ring, n), |acc, &k| acc.mul(&a.basis()[idx[k - 1]]))
            })
            .collect::<Result<Vec<_>>>()?;
        for p in 0..n {
            for q in 0..n {
                let row: Vec<Scalar> = monomials.iter().map(|m| m.get(p, q)).collect();
                eqs.insert(&Matrix::from_scalars(ring, 1, cols, &row)?)?;
            }
        }
    }
    let null = if eqs.rank() == 0 {
        (0..cols)
            .map(|i| (0..cols).map(|j| Scalar::from_i64(ring, (i == j) as i64)).collect())
            .collect()
    } else {
        eqs.to_matrix().nullspace()?
    };
    let basis = if null.is_empty() {
        Vec::new()
    } else {
        let flat: Vec<Scalar> = null.iter().flatten().cloned().collect();
        let e = Matrix::from_scalars(ring, null.len(), cols, &flat)?.rref()?;
        (0..e.rank)
            .map(|i| (0..cols).map(|j| e.echelon.get(i, j)).collect())
            .collect()
    };
    let space = IdentitySpace {
        ring,
        degree: t,
        dimension: basis.len(),
        basis,
        tuples_swept: swept,
    };
    verify_space(a, &space, total)?;
    Ok(space)
}

/// Every basis polynomial must vanish on every basis tuple.
fn verify_space(a: &SubalgebraBasis, space: &IdentitySpace, total: u64) -> Result<()> {
    let polys = space.polynomials()?;
    if polys.is_empty() {
        return Ok(());
    }
    let bad = (0..total).into_par_iter().find_any(|&r| {
        let args: Vec<&Matrix> = tuple_of(r, a.dim(), space.degree)
            .into_iter()
            .map(|i| &a.basis()[i])
            .collect();
        polys
            .iter()
            .any(|p| !eval_multilinear(p, &args).map(|v| v.is_zero()).unwrap_or(false))
    });
    match bad {
        Some(r) => Err(Error::ContractViolation(format!(
            "identity space member is nonzero on basis tuple {:?}",
            tuple_of(r, a.dim(), space.degree)
        ))),
        None => Ok(()),
    }
}
