use std::path::PathBuf;

use matpi::blocks::LowDegreeReason;
use matpi::lemmas::SuiteConfig;
use matpi::{ClassificationVerdict, Mode, RingSpec};
use matpi_cli::commands::{classify_spec, identity_space, lemma_suite, min_degree, verify_al};
use matpi_cli::{parse_spec, CheckResult, CliError, Input, RunReport, SpecError};

fn gf101() -> RingSpec {
    RingSpec::prime_field(101).unwrap()
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(name)
}

fn spec(name: &str) -> Input {
    let path = spec_path(&format!("specs/{name}"));
    Input::Spec {
        label: name.to_string(),
        text: std::fs::read_to_string(path).unwrap(),
    }
}

fn classify_named(name: &str) -> RunReport {
    let Input::Spec { label, text } = spec(name) else { unreachable!() };
    classify_spec(&label, &text).unwrap()
}

fn verdict(r: &RunReport) -> &ClassificationVerdict {
    match &r.checks[0].result {
        CheckResult::Classification { verdict, .. } => verdict,
        other => panic!("{other:?}"),
    }
}

fn identity_counts(r: &RunReport) -> Vec<(usize, bool, u64)> {
    r.checks
        .iter()
        .filter_map(|c| match &c.result {
            CheckResult::Identity(rep) => Some((rep.degree, rep.is_identity(), rep.tuples_checked)),
            _ => None,
        })
        .collect()
}

#[test]
fn verify_al_n3_exhaustive() {
    let r = verify_al(3, gf101(), Mode::Exhaustive).unwrap();
    assert!(r.consistent);
    assert_eq!(r.checks.len(), 4);
    let counts = identity_counts(&r);
    assert!(counts.contains(&(6, true, 84)), "{counts:?}");
    assert!(counts.iter().any(|&(t, id, _)| t == 4 && !id));
    assert!(counts.iter().any(|&(t, id, _)| t == 5 && !id));
}

#[test]
fn verify_al_n2_rationals_staircase() {
    let r = verify_al(2, RingSpec::rationals(), Mode::Exhaustive).unwrap();
    assert!(r.consistent);
    match &r.checks[0].result {
        CheckResult::Value { value, expected } => {
            assert_eq!(value, expected);
            assert_eq!(value.to_string(), "[0 1; 0 0]");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn verify_al_exhaustive_guard() {
    let e = verify_al(5, gf101(), Mode::Exhaustive).unwrap_err();
    assert!(matches!(e, CliError::Usage(_)));
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn classify_examples() {
    let r = classify_named("full_block_1_2.toml");
    assert!(r.consistent);
    assert!(verdict(&r).is_full_block_triangular());

    let r = classify_named("repetition_1_1.toml");
    assert!(r.consistent);
    assert_eq!(
        verdict(&r),
        &ClassificationVerdict::SatisfiesLowDegree {
            reason: LowDegreeReason::Repetition { i: 1, j: 3 }
        }
    );

    // both diagonal blocks are all of M_2 and the identity intertwines them
    let r = classify_named("diagonal_embedding_2_2.toml");
    assert!(r.consistent);
    assert_eq!(
        verdict(&r),
        &ClassificationVerdict::SatisfiesLowDegree {
            reason: LowDegreeReason::Repetition { i: 1, j: 2 }
        }
    );

    let r = classify_named("generators_u2.toml");
    assert!(r.consistent && verdict(&r).is_full_block_triangular());
}

#[test]
fn min_degree_examples() {
    let r = min_degree(&spec("upper_triangular_3.toml"), None, Mode::Exhaustive).unwrap();
    assert!(r.consistent);
    match &r.checks[0].result {
        CheckResult::MinDegree(m) => {
            assert_eq!(m.degree, Some(6));
            assert!(m.cross_check.as_ref().unwrap().is_identity());
        }
        other => panic!("{other:?}"),
    }
    let r = min_degree(&Input::Full { n: 2, ring: gf101() }, None, Mode::Exhaustive).unwrap();
    assert!(r.consistent);
}

#[test]
fn identity_space_of_m2() {
    let r = identity_space(&Input::Full { n: 2, ring: gf101() }, None).unwrap();
    assert!(r.consistent);
    match &r.checks[0].result {
        CheckResult::IdentitySpace(s) => assert_eq!((s.degree, s.dimension), (4, 1)),
        other => panic!("{other:?}"),
    }
    let r = identity_space(&Input::Full { n: 2, ring: gf101() }, Some(3)).unwrap();
    assert!(r.consistent);
}

#[test]
fn lemma_suite_default_seed() {
    let r = lemma_suite(gf101(), SuiteConfig::default()).unwrap();
    assert!(r.consistent);
    assert_eq!(r.seed, Some(42));
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    assert!(names.contains(&"scaled_corner_witness(n=2)") && names.contains(&"scaled_corner_witness(n=3)"), "{names:?}");
}

#[test]
fn reports_round_trip() {
    let reports = [
        verify_al(3, gf101(), Mode::Exhaustive).unwrap(),
        verify_al(3, gf101(), Mode::Randomized { trials: 50, seed: 9 }).unwrap(),
        classify_named("repetition_1_1.toml"),
        min_degree(&spec("scaled_corner_z4_3.toml"), None, Mode::Exhaustive).unwrap(),
        identity_space(&Input::Full { n: 2, ring: RingSpec::rationals() }, None).unwrap(),
        lemma_suite(gf101(), SuiteConfig::default()).unwrap(),
    ];
    for r in reports {
        let json = r.to_json();
        let back: RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r, "{}", r.command);
        assert_eq!(back.to_json(), json);
    }
}

#[test]
fn reports_are_byte_stable() {
    let a = verify_al(4, gf101(), Mode::Randomized { trials: 200, seed: 7 }).unwrap().to_json();
    let b = verify_al(4, gf101(), Mode::Randomized { trials: 200, seed: 7 }).unwrap().to_json();
    assert_eq!(a, b);
    let a = lemma_suite(gf101(), SuiteConfig::default()).unwrap().to_json();
    let b = lemma_suite(gf101(), SuiteConfig::default()).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn digest_tracks_spec_bytes() {
    let a = classify_named("full_block_1_2.toml");
    let Input::Spec { label, mut text } = spec("full_block_1_2.toml") else { unreachable!() };
    text.push_str("\n# trailing comment\n");
    let b = classify_spec(&label, &text).unwrap();
    assert_ne!(a.input_digest, b.input_digest);
    assert_eq!(a.checks, b.checks);
}

fn malformed(name: &str) -> SpecError {
    let text = std::fs::read_to_string(spec_path(&format!("tests/data/malformed/{name}"))).unwrap();
    parse_spec(&text).unwrap_err()
}

#[test]
fn malformed_specs_have_distinct_diagnostics() {
    let bad_prime = malformed("bad_prime.toml");
    assert!(
        matches!(&bad_prime, SpecError::Field { line: 5, field, .. } if field == "ring.p"),
        "{bad_prime}"
    );
    assert!(bad_prime.to_string().contains("not prime"));

    let non_square = malformed("non_square.toml");
    assert!(
        matches!(&non_square, SpecError::NotSquare { line: 10, rows: 2, row: 1, cols: 3, .. }),
        "{non_square}"
    );

    let fraction = malformed("fraction_in_gf.toml");
    assert!(
        matches!(&fraction, SpecError::Entry { line: 9, field, .. } if field == "source.generators[0][0][1]"),
        "{fraction}"
    );
    assert!(fraction.to_string().contains("fractions are only accepted over the rationals"));

    let kinds = [
        malformed("unknown_ring.toml").to_string(),
        malformed("size_mismatch.toml").to_string(),
        malformed("syntax.toml").to_string(),
        bad_prime.to_string(),
        non_square.to_string(),
        fraction.to_string(),
    ];
    assert!(kinds[2].contains("line 2"), "{}", kinds[2]);
    for (i, a) in kinds.iter().enumerate() {
        for b in &kinds[i + 1..] {
            assert_ne!(a, b);
        }
    }
}
