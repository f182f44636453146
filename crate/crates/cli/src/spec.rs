//! Algebra spec files.
//!
//! A spec is a TOML document:
//!
//! ```toml
//! n = 3
//! include_identity = true
//! shape = [1, 2]
//!
//! [ring]
//! kind = "prime_field"
//! p = 101
//!
//! [source]
//! construction = { kind = "full_block", shape = [1, 2] }
//! # or: generators = [[["0", "1/2"], ["0", "0"]]]
//! ```
//!
//! Scalars are always strings (`"3"`, `"-2/7"`, `"2 mod 4"`) so that no
//! entry ever passes through a float.

use std::ops::Range;

use matpi::algebra::{close_generators, GeneratorSet, SubalgebraBasis};
use matpi::constructions::{Constructed, NamedConstruction, SpanningSet};
use matpi::{BlockShape, Matrix, RingSpec, Scalar};
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{0}")]
    Syntax(String),

    #[error("line {line}: {field}: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },

    #[error("line {line}: {field}: generator is not square ({rows} rows, row {row} has {cols} entries)")]
    NotSquare {
        line: usize,
        field: String,
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("line {line}: {field}: {message}")]
    Entry {
        line: usize,
        field: String,
        message: String,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    ring: Spanned<RawRing>,
    n: Spanned<usize>,
    source: Spanned<RawSource>,
    shape: Option<Spanned<Vec<usize>>>,
    #[serde(default)]
    include_identity: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    kind: Spanned<String>,
    p: Option<Spanned<u64>>,
    m: Option<Spanned<u64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    construction: Option<Spanned<NamedConstruction>>,
    generators: Option<Vec<Spanned<Rows>>>,
}

/// One generator: rows of scalar strings, with source positions.
type Rows = Vec<Spanned<Vec<Spanned<String>>>>;

/// What a spec describes, resolved in its ring.
#[derive(Clone, Debug)]
pub enum Source {
    Algebra(SubalgebraBasis),
    /// A spanning set over a ring that is not a field.
    Spanning(SpanningSet),
    /// A matrix sequence such as the staircase; not an algebra.
    Sequence(Vec<Matrix>),
}

#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub ring: RingSpec,
    pub n: usize,
    pub source: Source,
    pub shape: Option<BlockShape>,
    pub include_identity: bool,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

pub fn parse_spec(text: &str) -> Result<AlgebraSpec, SpecError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| SpecError::Syntax(e.to_string().trim_end().to_string()))?;
    let field = |span: Range<usize>, name: &str, message: String| SpecError::Field {
        line: line_of(text, span),
        field: name.to_string(),
        message,
    };

    let ring = resolve_ring(text, &raw.ring)?;
    let n = *raw.n.get_ref();
    if n == 0 {
        return Err(field(raw.n.span(), "n", "must be at least 1".into()));
    }

    let shape = match &raw.shape {
        None => None,
        Some(s) => {
            let shape = BlockShape::new(s.get_ref().clone()).map_err(|e| field(s.span(), "shape", e.to_string()))?;
            if shape.n() != n {
                return Err(field(s.span(), "shape", format!("parts sum to {} but n = {n}", shape.n())));
            }
            Some(shape)
        }
    };

    let src = raw.source.get_ref();
    let source = match (&src.construction, &src.generators) {
        (Some(c), None) => {
            let kind = c.get_ref();
            if kind.n() != n {
                return Err(field(
                    c.span(),
                    "source.construction",
                    format!("builds {}×{} matrices but n = {n}", kind.n(), kind.n()),
                ));
            }
            let built = kind
                .build(ring)
                .map_err(|e| field(c.span(), "source.construction", e.to_string()))?;
            match built {
                Constructed::Algebra(a) if raw.include_identity => {
                    let g = GeneratorSet::new(ring, n, a.basis().to_vec(), true)
                        .map_err(|e| field(c.span(), "source.construction", e.to_string()))?;
                    Source::Algebra(
                        close_generators(&g).map_err(|e| field(c.span(), "source.construction", e.to_string()))?,
                    )
                }
                Constructed::Algebra(a) => Source::Algebra(a),
                Constructed::Spanning(s) => Source::Spanning(s),
                Constructed::Sequence(s) => Source::Sequence(s),
            }
        }
        (None, Some(gens)) => {
            let mats = gens
                .iter()
                .enumerate()
                .map(|(k, g)| parse_generator(text, ring, n, k, g))
                .collect::<Result<Vec<_>, _>>()?;
            let span = raw.source.span();
            let g = GeneratorSet::new(ring, n, mats, raw.include_identity)
                .map_err(|e| field(span.clone(), "source.generators", e.to_string()))?;
            Source::Algebra(close_generators(&g).map_err(|e| field(span, "source.generators", e.to_string()))?)
        }
        _ => {
            return Err(field(
                raw.source.span(),
                "source",
                "exactly one of 'construction' or 'generators' is required".into(),
            ))
        }
    };

    Ok(AlgebraSpec {
        ring,
        n,
        source,
        shape,
        include_identity: raw.include_identity,
    })
}

fn resolve_ring(text: &str, raw: &Spanned<RawRing>) -> Result<RingSpec, SpecError> {
    let r = raw.get_ref();
    let err = |span: Range<usize>, name: &str, message: String| SpecError::Field {
        line: line_of(text, span),
        field: name.to_string(),
        message,
    };
    let param = |p: &Option<Spanned<u64>>, name: &str| {
        p.as_ref()
            .map(|v| (*v.get_ref(), v.span()))
            .ok_or_else(|| err(raw.span(), name, "missing".into()))
    };
    match r.kind.get_ref().as_str() {
        "prime_field" => {
            let (p, span) = param(&r.p, "ring.p")?;
            RingSpec::prime_field(p).map_err(|e| err(span, "ring.p", e.to_string()))
        }
        "integers_mod" => {
            let (m, span) = param(&r.m, "ring.m")?;
            RingSpec::integers_mod(m).map_err(|e| err(span, "ring.m", e.to_string()))
        }
        "rationals" => Ok(RingSpec::rationals()),
        other => Err(err(
            r.kind.span(),
            "ring.kind",
            format!("unknown ring kind '{other}' (expected prime_field, rationals or integers_mod)"),
        )),
    }
}

fn parse_generator(
    text: &str,
    ring: RingSpec,
    n: usize,
    k: usize,
    g: &Spanned<Rows>,
) -> Result<Matrix, SpecError> {
    let rows = g.get_ref();
    let name = format!("source.generators[{k}]");
    for (r, row) in rows.iter().enumerate() {
        if row.get_ref().len() != rows.len() {
            return Err(SpecError::NotSquare {
                line: line_of(text, row.span()),
                field: name,
                rows: rows.len(),
                row: r,
                cols: row.get_ref().len(),
            });
        }
    }
    if rows.len() != n {
        return Err(SpecError::Field {
            line: line_of(text, g.span()),
            field: name,
            message: format!("generator is {0}×{0} but n = {n}", rows.len()),
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        for (c, e) in row.get_ref().iter().enumerate() {
            let s = Scalar::parse(ring, e.get_ref()).map_err(|err| SpecError::Entry {
                line: line_of(text, e.span()),
                field: format!("{name}[{r}][{c}]"),
                message: err.to_string(),
            })?;
            entries.push(s);
        }
    }
    Ok(Matrix::from_scalars(ring, n, n, &entries).expect("square entries checked above"))
}
