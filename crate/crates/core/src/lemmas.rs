//! Randomized and exhaustive checks of the structural facts the
//! classification rests on: block assemblies, consecutive-factor sums, the
//! upper-right corner of repetition-shaped products, and the `ℤ/4` example
//! where the classification fails over a ring.

use serde::{Deserialize, Serialize};

use crate::algebra::SubalgebraBasis;
use crate::blocks::ur_corner;
use crate::constructions::{scaled_corner_algebra, repetition_algebra};
use crate::error::{Error, Result};
use crate::identity::{is_standard_identity, is_standard_identity_on_spanning_set, Mode, Witness};
use crate::matrix::Matrix;
use crate::ring::RingSpec;
use crate::sampling::{random_element, random_matrix, rng_from_seed, SeededRng};
use crate::standard::{consecutive_factor_sum, eval_standard_dp};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    /// Number of evaluated instances.
    pub trials: u64,
    pub violations: u64,
    pub detail: String,
    /// The first violating (or, for searches, the found) tuple.
    pub witness: Option<Witness>,
}

impl LemmaCheck {
    fn counted(name: String, trials: u64, violations: u64, witness: Option<Witness>, detail: String) -> Self {
        Self {
            name,
            passed: violations == 0,
            trials,
            violations,
            detail,
            witness,
        }
    }
}

/// `[[x, c], [0, y]]`.
fn assemble(x: &Matrix, c: &Matrix, y: &Matrix) -> Result<Matrix> {
    let (l, m) = (x.rows(), y.rows());
    Matrix::zeros(x.ring(), l + m, l + m)
        .with_block(0, 0, x)?
        .with_block(0, l, c)?
        .with_block(l, l, y)
}

/// Result of [`lemma_blocks_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BlocksCheck {
    /// The inputs do not meet the hypotheses; nothing was sampled.
    InvalidInstance { reason: String },
    Checked(LemmaCheck),
}

/// Samples block upper triangular matrices `[[x, c], [0, y]]` with
/// `x ∈ a_top`, `y ∈ a_bot` and arbitrary `c`, and evaluates `s_{q+r}` on
/// `trials` tuples of them.
///
/// The hypotheses (`a_top` satisfies `s_q`, `a_bot` satisfies `s_r`,
/// `q ≤ 2ℓ`, `r ≤ 2m`) are verified exhaustively first.
pub fn lemma_blocks_check(
    a_top: &SubalgebraBasis,
    a_bot: &SubalgebraBasis,
    q: usize,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<BlocksCheck> {
    if a_top.ring() != a_bot.ring() {
        return Err(Error::RingMismatch {
            left: a_top.ring(),
            right: a_bot.ring(),
        });
    }
    let (l, m) = (a_top.n(), a_bot.n());
    let invalid = |reason: String| Ok(BlocksCheck::InvalidInstance { reason });
    if q > 2 * l || r > 2 * m {
        return invalid(format!("need q ≤ 2ℓ and r ≤ 2m, got q={q}, ℓ={l}, r={r}, m={m}"));
    }
    if !is_standard_identity(a_top, q, Mode::Exhaustive)?.is_identity() {
        return invalid(format!("the top algebra does not satisfy s_{q}"));
    }
    if !is_standard_identity(a_bot, r, Mode::Exhaustive)?.is_identity() {
        return invalid(format!("the bottom algebra does not satisfy s_{r}"));
    }
    let ring = a_top.ring();
    let mut rng = rng_from_seed(seed);
    let t = q + r;
    let mut violations = 0;
    let mut first = None;
    for _ in 0..trials {
        let args = (0..t)
            .map(|_| {
                let x = random_element(a_top, &mut rng);
                let c = random_matrix(ring, l, m, &mut rng);
                let y = random_element(a_bot, &mut rng);
                assemble(&x, &c, &y)
            })
            .collect::<Result<Vec<_>>>()?;
        let value = eval_standard_dp(&args)?;
        if !value.is_zero() {
            violations += 1;
            first.get_or_insert(Witness {
                basis_indices: None,
                arguments: args,
                value,
            });
        }
    }
    Ok(BlocksCheck::Checked(LemmaCheck::counted(
        format!("blocks(ℓ={l}, m={m}, q={q}, r={r})"),
        trials as u64,
        violations,
        first,
        format!("s_{t} on assemblies with diagonal parts from the given algebras"),
    )))
}

/// Compares [`consecutive_factor_sum`] with `s_{m-r+1}` of the contracted
/// tuple, over every offset, on `trials` random tuples of `size × size`
/// matrices. `r` must be odd.
pub fn consecutive_factor_check(
    m: usize,
    r: usize,
    size: usize,
    ring: RingSpec,
    trials: usize,
    seed: u64,
) -> Result<LemmaCheck> {
    if r.is_multiple_of(2) || r > m {
        return Err(Error::InvalidArgument(format!(
            "window length {r} must be odd and at most {m}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut violations = 0;
    let mut evaluations = 0;
    let mut first = None;
    for _ in 0..trials {
        let xs: Vec<Matrix> = (0..m).map(|_| random_matrix(ring, size, size, &mut rng)).collect();
        for offset in 0..=m - r {
            evaluations += 1;
            let lhs = consecutive_factor_sum(&xs, offset, r)?;
            let y = xs[offset + 1..offset + r].iter().try_fold(xs[offset].clone(), |acc, x| acc.mul(x))?;
            let mut contracted: Vec<Matrix> = xs[..offset].to_vec();
            contracted.push(y);
            contracted.extend_from_slice(&xs[offset + r..]);
            let rhs = eval_standard_dp(&contracted)?;
            if lhs != rhs {
                violations += 1;
                first.get_or_insert(Witness {
                    basis_indices: None,
                    arguments: xs.clone(),
                    value: lhs.sub(&rhs)?,
                });
            }
        }
    }
    Ok(LemmaCheck::counted(
        format!("consecutive_factor(m={m}, r={r})"),
        evaluations,
        violations,
        first,
        format!("terms of s_{m} containing a run of {r} consecutive variables equal s_{} of the contracted tuple", m - r + 1),
    ))
}

/// `[[a, b, 0], [0, e, d], [0, 0, a]]` with random blocks.
pub fn random_zero_corner<R: rand::Rng>(l: usize, m: usize, ring: RingSpec, rng: &mut R) -> Result<Matrix> {
    let a = random_matrix(ring, l, l, rng);
    let b = random_matrix(ring, l, m, rng);
    let e = random_matrix(ring, m, m, rng);
    let d = random_matrix(ring, m, l, rng);
    Matrix::zeros(ring, 2 * l + m, 2 * l + m)
        .with_block(0, 0, &a)?
        .with_block(0, l, &b)?
        .with_block(l, l, &e)?
        .with_block(l, l + m, &d)?
        .with_block(l + m, l + m, &a)
}

/// `ur(s_{2(ℓ+m)}(M_1, …))` must vanish when every `M_k` has the
/// repetition shape with a zero upper-right block.
pub fn ur_vanishing_check(l: usize, m: usize, ring: RingSpec, trials: usize, seed: u64) -> Result<LemmaCheck> {
    let t = 2 * (l + m);
    let mut rng: SeededRng = rng_from_seed(seed);
    let mut violations = 0;
    let mut first = None;
    for _ in 0..trials {
        let args = (0..t)
            .map(|_| random_zero_corner(l, m, ring, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let value = eval_standard_dp(&args)?;
        let corner = ur_corner(&value, l, m)?;
        if !corner.is_zero() {
            violations += 1;
            first.get_or_insert(Witness {
                basis_indices: None,
                arguments: args,
                value: corner,
            });
        }
    }
    Ok(LemmaCheck::counted(
        format!("ur_vanishing(ℓ={l}, m={m})"),
        trials as u64,
        violations,
        first,
        format!("upper-right ℓ×ℓ block of s_{t} on zero-corner repetition-shaped matrices"),
    ))
}

/// Exhaustive check that the repetition algebra satisfies `s_{2(ℓ+m)}`.
pub fn repetition_identity_check(l: usize, m: usize, ring: RingSpec) -> Result<LemmaCheck> {
    let a = repetition_algebra(l, m, ring)?;
    let t = 2 * (l + m);
    let rep = is_standard_identity(&a, t, Mode::Exhaustive)?;
    Ok(LemmaCheck::counted(
        format!("repetition_identity(ℓ={l}, m={m})"),
        rep.tuples_checked,
        u64::from(!rep.is_identity()),
        rep.witness,
        format!("s_{t} on all C({}, {t}) basis combinations of the dimension-{} repetition algebra", a.dim(), a.dim()),
    ))
}

/// Searches the upper triangular algebra over `ℤ/4` with `(1,2)` entry in
/// `(2)` for a tuple on which `s_{2n-2}` is nonzero.
pub fn scaled_corner_witness_search(n: usize) -> Result<LemmaCheck> {
    let set = scaled_corner_algebra(n, 4, 2)?;
    let t = 2 * n - 2;
    let rep = is_standard_identity_on_spanning_set(&set, t)?;
    let found = !rep.is_identity();
    Ok(LemmaCheck {
        name: format!("scaled_corner_witness(n={n})"),
        passed: found,
        trials: rep.tuples_checked,
        violations: 0,
        detail: if found {
            format!("s_{t} is nonzero on a proper subalgebra of U_{n}(Z/4)")
        } else {
            format!("no tuple of spanning elements gives a nonzero s_{t}")
        },
        witness: rep.witness,
    })
}

/// Trial counts for [`run_lemma_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub blocks_trials: usize,
    pub consecutive_trials: usize,
    pub ur_trials: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            blocks_trials: 500,
            consecutive_trials: 100,
            ur_trials: 200,
        }
    }
}

/// Block assemblies `(top, bottom, q, r)`: scalars/scalars, scalars/`M_2`,
/// diagonal `2×2`/scalars.
pub fn blocks_configurations(ring: RingSpec) -> Result<Vec<(SubalgebraBasis, SubalgebraBasis, usize, usize)>> {
    use crate::blocks::BlockShape;
    use crate::constructions::{block_diagonal, full_block_algebra};
    let scalars = full_block_algebra(&BlockShape::new(vec![1])?, ring)?;
    let m2 = full_block_algebra(&BlockShape::new(vec![2])?, ring)?;
    let diag2 = block_diagonal(&BlockShape::ones(2)?, ring)?;
    Ok(vec![
        (scalars.clone(), scalars.clone(), 2, 2),
        (scalars.clone(), m2, 2, 4),
        (diag2, scalars, 2, 2),
    ])
}

/// Every block-structure check with seeded randomness over `ring`.
///
/// Sub-seeds are `config.seed + k` for the `k`-th randomized check.
pub fn run_lemma_suite(ring: RingSpec, config: SuiteConfig) -> Result<Vec<LemmaCheck>> {
    let mut out = Vec::new();
    let mut seeds = (0u64..).map(|k| config.seed.wrapping_add(k));
    let mut next_seed = || seeds.next().expect("unbounded");

    for (top, bot, q, r) in blocks_configurations(ring)? {
        match lemma_blocks_check(&top, &bot, q, r, config.blocks_trials, next_seed())? {
            BlocksCheck::Checked(c) => out.push(c),
            BlocksCheck::InvalidInstance { reason } => out.push(LemmaCheck {
                name: format!("blocks(q={q}, r={r})"),
                passed: false,
                trials: 0,
                violations: 0,
                detail: format!("invalid instance: {reason}"),
                witness: None,
            }),
        }
    }
    for (m, r) in [(4, 3), (5, 3), (6, 3), (6, 5)] {
        out.push(consecutive_factor_check(m, r, 3, ring, config.consecutive_trials, next_seed())?);
    }
    for (l, m) in [(1, 1), (1, 2), (2, 1)] {
        out.push(ur_vanishing_check(l, m, ring, config.ur_trials, next_seed())?);
    }
    for (l, m) in [(1, 1), (1, 2), (2, 1)] {
        out.push(repetition_identity_check(l, m, ring)?);
    }
    for n in [2, 3] {
        out.push(scaled_corner_witness_search(n)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{gf, unit};

    #[test]
    fn blocks_check_small() {
        let r = gf(101);
        for (top, bot, q, rr) in blocks_configurations(r).unwrap() {
            match lemma_blocks_check(&top, &bot, q, rr, 20, 1).unwrap() {
                BlocksCheck::Checked(c) => assert!(c.passed, "{c:?}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn blocks_check_rejects_bad_hypotheses() {
        let r = gf(101);
        let cfg = blocks_configurations(r).unwrap();
        let (_, m2, _, _) = &cfg[1];
        // M_2 does not satisfy s_2
        assert!(matches!(
            lemma_blocks_check(m2, m2, 2, 4, 5, 0).unwrap(),
            BlocksCheck::InvalidInstance { .. }
        ));
        assert!(matches!(
            lemma_blocks_check(m2, m2, 5, 4, 5, 0).unwrap(),
            BlocksCheck::InvalidInstance { .. }
        ));
    }

    #[test]
    fn consecutive_factor_small() {
        let c = consecutive_factor_check(4, 3, 2, gf(7), 10, 3).unwrap();
        assert!(c.passed);
        assert_eq!(c.trials, 20);
        assert!(consecutive_factor_check(4, 2, 2, gf(7), 1, 0).is_err());
    }

    #[test]
    fn zero_corner_shape() {
        let r = gf(101);
        let mut rng = rng_from_seed(5);
        let x = random_zero_corner(1, 2, r, &mut rng).unwrap();
        assert_eq!(x.get(0, 0), x.get(3, 3));
        assert!(ur_corner(&x, 1, 2).unwrap().is_zero());
        assert!(ur_vanishing_check(1, 1, r, 20, 9).unwrap().passed);
    }

    #[test]
    fn scaled_corner_witnesses() {
        let c = scaled_corner_witness_search(2).unwrap();
        assert!(c.passed);
        let w = c.witness.unwrap();
        let z4 = w.value.ring();
        assert_eq!(w.value, unit(z4, 2, 1, 2).scale(&crate::ring::Scalar::from_i64(z4, 2)));
        assert!(scaled_corner_witness_search(3).unwrap().passed);
    }
}
