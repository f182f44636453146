//! The subcommands. Each returns a [`RunReport`]; a report that is not
//! `consistent` means some expected result did not come out.

use std::time::{Duration, Instant};

use matpi::algebra::SubalgebraBasis;
use matpi::blocks::classify;
use matpi::constructions::{full_block_algebra, staircase};
use matpi::identity::{
    is_standard_identity_on_spanning_set, min_standard_degree, multilinear_identity_space, MinDegreeReport,
};
use matpi::lemmas::{run_lemma_suite, SuiteConfig};
use matpi::sampling::{random_matrix, rng_from_seed};
use matpi::standard::permutations;
use matpi::{
    eval_standard_dp, eval_standard_naive, is_standard_identity, BlockShape, ClassificationVerdict, IdentityReport,
    Matrix, Mode, RingSpec, Scalar,
};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::report::{BenchRow, Check, CheckResult, RunReport};
use crate::spec::{parse_spec, AlgebraSpec, Source, SpecError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{label}: {source}")]
    Spec {
        label: String,
        #[source]
        source: SpecError,
    },

    #[error(transparent)]
    Library(#[from] matpi::Error),
}

impl CliError {
    /// 2 when the library detected an internal contradiction, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Library(matpi::Error::ContractViolation(_)) => 2,
            _ => 1,
        }
    }
}

/// Where the algebra comes from: a spec file, or the full matrix algebra.
#[derive(Clone, Debug)]
pub enum Input {
    Spec { label: String, text: String },
    Full { n: usize, ring: RingSpec },
}

struct Resolved {
    echo: String,
    digest: Option<String>,
    n: usize,
    full: bool,
    source: Source,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn full_matrix_algebra(n: usize, ring: RingSpec) -> Result<SubalgebraBasis, CliError> {
    Ok(full_block_algebra(&BlockShape::new(vec![n])?, ring)?)
}

fn load(label: &str, text: &str) -> Result<AlgebraSpec, CliError> {
    parse_spec(text).map_err(|source| CliError::Spec {
        label: label.to_string(),
        source,
    })
}

impl Input {
    fn resolve(&self) -> Result<Resolved, CliError> {
        match self {
            Self::Spec { label, text } => {
                let spec = load(label, text)?;
                Ok(Resolved {
                    echo: format!("spec={label}"),
                    digest: Some(sha256_hex(text.as_bytes())),
                    n: spec.n,
                    full: false,
                    source: spec.source,
                })
            }
            Self::Full { n, ring } => Ok(Resolved {
                echo: format!("n={n} ring={ring}"),
                digest: None,
                n: *n,
                full: true,
                source: Source::Algebra(full_matrix_algebra(*n, *ring)?),
            }),
        }
    }
}

fn finish(echo: String, digest: Option<String>, seed: Option<u64>, checks: Vec<Check>) -> RunReport {
    let digest = digest.unwrap_or_else(|| sha256_hex(echo.as_bytes()));
    RunReport::new(echo, digest, seed, checks)
}

fn mode_seed(mode: Mode) -> Option<u64> {
    match mode {
        Mode::Exhaustive => None,
        Mode::Randomized { seed, .. } => Some(seed),
    }
}

fn describe(r: &IdentityReport) -> String {
    let counted = match (r.mode, r.tuples_checked) {
        (Mode::Exhaustive, 1) => "combination",
        (Mode::Exhaustive, _) => "combinations",
        (Mode::Randomized { .. }, 1) => "random tuple",
        (Mode::Randomized { .. }, _) => "random tuples",
    };
    match &r.witness {
        None if r.degree > r.dim => format!("identity (degree exceeds dimension {})", r.dim),
        None if r.probabilistic => format!("no counterexample in {} {counted}", r.tuples_checked),
        None => format!("identity, {} {counted}", r.tuples_checked),
        Some(w) => format!("not an identity, value {} (after {} {counted})", w.value, r.tuples_checked),
    }
}

fn identity_check(name: String, r: IdentityReport, expect_identity: bool) -> Check {
    Check {
        name,
        expectation: if expect_identity { "identity" } else { "not an identity" }.to_string(),
        passed: r.is_identity() == expect_identity,
        summary: describe(&r),
        result: CheckResult::Identity(r),
    }
}

/// `s_2n` on `M_n`, the failures of `s_{2n-2}` and `s_{2n-1}`, and the
/// staircase value `e_1n`.
pub fn verify_al(n: usize, ring: RingSpec, mode: Mode) -> Result<RunReport, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if mode == Mode::Exhaustive && n > 4 {
        return Err(CliError::Usage(format!(
            "exhaustive mode is limited to n <= 4 (C({}, {}) combinations for n = {n}); use --mode randomized",
            n * n,
            2 * n
        )));
    }
    let mn = full_matrix_algebra(n, ring)?;
    let mut checks = Vec::new();

    let stairs = staircase(n, ring)?;
    let value = eval_standard_dp(&stairs)?;
    let expected = Matrix::unit(ring, n, 1, n)?;
    checks.push(Check {
        name: format!("s_{} of the staircase", 2 * n - 1),
        expectation: format!("e_1{n}"),
        passed: value == expected,
        summary: format!("value {value}"),
        result: CheckResult::Value { value, expected },
    });

    checks.push(identity_check(
        format!("s_{} on M_{n}", 2 * n),
        is_standard_identity(&mn, 2 * n, mode)?,
        true,
    ));
    for t in [2 * n - 2, 2 * n - 1] {
        if t >= 2 {
            checks.push(identity_check(format!("s_{t} on M_{n}"), is_standard_identity(&mn, t, mode)?, false));
        }
    }
    let echo = format!("verify-al n={n} ring={ring} mode={mode}");
    Ok(finish(echo, None, mode_seed(mode), checks))
}

/// Classifies the spec's algebra with its shape and cross-checks the
/// verdict against `s_{2n-2}`.
pub fn classify_spec(label: &str, text: &str) -> Result<RunReport, CliError> {
    let spec = load(label, text)?;
    let shape = spec
        .shape
        .clone()
        .ok_or_else(|| CliError::Usage(format!("{label}: classify needs a 'shape' field")))?;
    let a = match &spec.source {
        Source::Algebra(a) => a,
        Source::Spanning(_) => {
            return Err(CliError::Usage(format!(
                "{label}: classification needs a field, not {}",
                spec.ring
            )))
        }
        Source::Sequence(_) => return Err(CliError::Usage(format!("{label}: the source is not an algebra"))),
    };
    if spec.n < 2 {
        return Err(CliError::Usage(format!("{label}: classify needs n >= 2")));
    }
    let verdict = classify(a, &shape)?;
    let t = 2 * spec.n - 2;
    let cross = is_standard_identity(a, t, Mode::Exhaustive)?;
    let (expectation, passed) = match &verdict {
        ClassificationVerdict::FullBlockTriangular { .. } => (format!("s_{t} is not an identity"), !cross.is_identity()),
        ClassificationVerdict::SatisfiesLowDegree { .. } => (format!("s_{t} is an identity"), cross.is_identity()),
        ClassificationVerdict::NotCanonical { .. } => ("none".to_string(), true),
    };
    let summary = format!("{verdict}; s_{t} {}", describe(&cross));
    let check = Check {
        name: format!("classify with shape {shape}"),
        expectation,
        passed,
        summary,
        result: CheckResult::Classification {
            verdict,
            cross_check: cross,
        },
    };
    let echo = format!("classify spec={label}");
    Ok(finish(echo, Some(sha256_hex(text.as_bytes())), None, vec![check]))
}

fn spanning_min_degree(set: &matpi::constructions::SpanningSet, t_max: usize) -> Result<MinDegreeReport, CliError> {
    let mut reports = Vec::new();
    for t in 2..=t_max {
        let r = is_standard_identity_on_spanning_set(set, t)?;
        let found = r.is_identity();
        reports.push(r);
        if found {
            return Ok(MinDegreeReport {
                degree: Some(t),
                reports,
                cross_check: None,
            });
        }
    }
    Ok(MinDegreeReport {
        degree: None,
        reports,
        cross_check: None,
    })
}

/// Smallest standard degree, testing `t = 2..=t_max` (default `2n`).
///
/// Unital algebras are expected to have an identity of degree at most
/// `2n`, and `M_n` exactly `2n`.
pub fn min_degree(input: &Input, t_max: Option<usize>, mode: Mode) -> Result<RunReport, CliError> {
    let r = input.resolve()?;
    let t_max = t_max.unwrap_or(2 * r.n).max(2);
    let (report, unital) = match &r.source {
        Source::Algebra(a) => (min_standard_degree(a, t_max, mode)?, a.is_unital()),
        Source::Spanning(set) => (spanning_min_degree(set, t_max)?, false),
        Source::Sequence(_) => return Err(CliError::Usage("the source is not an algebra".into())),
    };
    let n = r.n;
    let (expectation, passed) = if r.full {
        (format!("{}", 2 * n), report.degree == Some(2 * n))
    } else if unital && t_max >= 2 * n {
        (format!("at most {}", 2 * n), report.degree.is_some_and(|d| d <= 2 * n))
    } else {
        ("none".to_string(), true)
    };
    let summary = match report.degree {
        Some(d) => format!("s_{d} is the first standard identity"),
        None => format!("no standard identity of degree <= {t_max}"),
    };
    let check = Check {
        name: "minimal standard degree".into(),
        expectation,
        passed,
        summary,
        result: CheckResult::MinDegree(report),
    };
    let echo = format!("min-degree {} t_max={t_max} mode={mode}", r.echo);
    Ok(finish(echo, r.digest, mode_seed(mode), vec![check]))
}

/// Multilinear identities of degree `t` (default `2n`).
///
/// For `M_n`, degree `2n` must be spanned by `s_2n` and lower degrees must
/// have none.
pub fn identity_space(input: &Input, t: Option<usize>) -> Result<RunReport, CliError> {
    let r = input.resolve()?;
    let t = t.unwrap_or(2 * r.n);
    let Source::Algebra(a) = &r.source else {
        return Err(CliError::Usage("identity-space needs an algebra over a field".into()));
    };
    let space = multilinear_identity_space(a, t)?;
    let (expectation, passed) = if !r.full || t > 2 * r.n {
        ("none".to_string(), true)
    } else if t == 2 * r.n {
        let signs: Vec<Scalar> = permutations(t).map(|p| Scalar::from_i64(a.ring(), p.sign() as i64)).collect();
        (
            format!("dimension 1 spanned by s_{t}"),
            space.dimension == 1 && space.basis[0] == signs,
        )
    } else {
        ("dimension 0".to_string(), space.dimension == 0)
    };
    let check = Check {
        name: format!("multilinear identities of degree {t}"),
        expectation,
        passed,
        summary: format!("dimension {} after {} tuples", space.dimension, space.tuples_swept),
        result: CheckResult::IdentitySpace(space),
    };
    let echo = format!("identity-space {} t={t}", r.echo);
    Ok(finish(echo, r.digest, None, vec![check]))
}

/// Every seeded block-structure check.
pub fn lemma_suite(ring: RingSpec, config: SuiteConfig) -> Result<RunReport, CliError> {
    let checks = run_lemma_suite(ring, config)?
        .into_iter()
        .map(|c| Check {
            name: c.name.clone(),
            expectation: "passes".into(),
            passed: c.passed,
            summary: format!("{} ({} instances, {} violations)", c.detail, c.trials, c.violations),
            result: CheckResult::Lemma(c),
        })
        .collect();
    let echo = format!(
        "lemma-suite ring={ring} seed={} blocks_trials={} consecutive_trials={} ur_trials={}",
        config.seed, config.blocks_trials, config.consecutive_trials, config.ur_trials
    );
    Ok(finish(echo, None, Some(config.seed), checks))
}

fn throughput(budget: Duration, f: impl Fn() -> Result<Matrix, matpi::Error>) -> Result<f64, CliError> {
    let start = Instant::now();
    let mut k = 0u64;
    while k == 0 || start.elapsed() < budget {
        std::hint::black_box(f()?);
        k += 1;
    }
    Ok(k as f64 / start.elapsed().as_secs_f64())
}

/// Evaluations per second of the naive and subset-DP evaluators on random
/// `size × size` matrices. The rates depend on the host, so bench reports
/// are not reproducible byte for byte.
pub fn bench(ring: RingSpec, size: usize, degrees: &[usize], budget: Duration, seed: u64) -> Result<RunReport, CliError> {
    if size == 0 || degrees.is_empty() || degrees.contains(&0) {
        return Err(CliError::Usage("bench needs --n >= 1 and degrees >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut rows = Vec::new();
    let mut agree = true;
    for &t in degrees {
        let xs: Vec<Matrix> = (0..t).map(|_| random_matrix(ring, size, size, &mut rng)).collect();
        agree &= eval_standard_naive(&xs)? == eval_standard_dp(&xs)?;
        for (name, dp) in [("naive", false), ("dp", true)] {
            let rate = throughput(budget, || if dp { eval_standard_dp(&xs) } else { eval_standard_naive(&xs) })?;
            rows.push(BenchRow {
                evaluator: name.into(),
                t,
                size,
                field: ring,
                evals_per_sec: rate,
            });
        }
    }
    let check = Check {
        name: "standard polynomial evaluators".into(),
        expectation: "naive and dp agree".into(),
        passed: agree,
        summary: if agree { "naive and dp agree on every benchmark tuple" } else { "naive and dp disagree" }.into(),
        result: CheckResult::Bench { rows },
    };
    let list: Vec<String> = degrees.iter().map(|t| t.to_string()).collect();
    let echo = format!(
        "bench ring={ring} n={size} t={} millis={} seed={seed}",
        list.join(","),
        budget.as_millis()
    );
    Ok(finish(echo, None, Some(seed), vec![check]))
}
