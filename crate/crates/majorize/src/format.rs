//! JSON file formats for vectors, operators, injections, preserver specs,
//! and certificates.
//!
//! Every rational is serialized as an exact `"num/den"` string (integers
//! without the slash) so files round-trip with no precision loss. Vectors
//! are objects mapping label strings to value strings, and zero values are
//! rejected on load — zeros are implicit everywhere in this crate.
//! Rendering is deterministic: objects are emitted with sorted keys.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::label::IndexLabel;
use crate::majorization::{MajorizationCertificate, PermutationWitness, Refutation};
use crate::preserver::{OperatorColumns, PreserverError, PreserverSpec};
use crate::scalar::{PNorm, PNormError, Scalar, ScalarError};
use crate::sparse::SparseVec;
use crate::stochastic::{
    IndexInjection, InjectionError, OperatorError, StochasticVerdict, Tail, WindowOperator,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("at {location}: {source}")]
    Scalar {
        location: String,
        source: ScalarError,
    },
    #[error("at {location}: zero values are implicit and may not be stored")]
    ZeroValue { location: String },
    #[error("at {location}: {problem}")]
    Invalid { location: String, problem: String },
    #[error("operator is malformed: {0}")]
    Operator(#[from] OperatorError),
    #[error("injection is malformed: {0}")]
    Injection(#[from] InjectionError),
    #[error("norm exponent is invalid: {0}")]
    Norm(#[from] PNormError),
    #[error("preserver spec is invalid: {0}")]
    Preserver(#[from] PreserverError),
}

fn scalar_at(text: &str, location: impl Fn() -> String) -> Result<Scalar, FormatError> {
    text.parse().map_err(|source| FormatError::Scalar {
        location: location(),
        source,
    })
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON trees serialize")
}

// ---------------------------------------------------------------- vectors

/// Parses `{"2": "1/2", "3": "1/4"}`. Zero values are rejected.
pub fn parse_vector(text: &str) -> Result<SparseVec, FormatError> {
    let raw: BTreeMap<String, String> = serde_json::from_str(text)?;
    let mut vector = SparseVec::new();
    for (label, value) in raw {
        let value = scalar_at(&value, || format!("entry \"{label}\""))?;
        if value.is_zero() {
            return Err(FormatError::ZeroValue {
                location: format!("entry \"{label}\""),
            });
        }
        vector.set(IndexLabel::parse(&label), value);
    }
    Ok(vector)
}

pub fn vector_value(f: &SparseVec) -> Value {
    Value::Object(
        f.iter()
            .map(|(label, value)| (label.to_string(), Value::String(value.to_string())))
            .collect(),
    )
}

pub fn render_vector(f: &SparseVec) -> String {
    pretty(&vector_value(f))
}

// -------------------------------------------------------------- operators

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    rows: Vec<String>,
    cols: Vec<String>,
    block: Vec<Vec<String>>,
    tail: Option<String>,
}

fn parse_raw_operator(text: &str) -> Result<(Vec<IndexLabel>, Vec<IndexLabel>, Vec<Vec<Scalar>>, Option<Tail>), FormatError> {
    let raw: RawOperator = serde_json::from_str(text)?;
    let rows: Vec<IndexLabel> = raw.rows.iter().map(|l| IndexLabel::parse(l)).collect();
    let cols: Vec<IndexLabel> = raw.cols.iter().map(|l| IndexLabel::parse(l)).collect();
    let mut block = Vec::with_capacity(raw.block.len());
    for (r, raw_row) in raw.block.iter().enumerate() {
        let mut row = Vec::with_capacity(raw_row.len());
        for (c, entry) in raw_row.iter().enumerate() {
            row.push(scalar_at(entry, || format!("block[{r}][{c}]"))?);
        }
        block.push(row);
    }
    let tail = match raw.tail.as_deref() {
        None => None,
        Some("identity") => Some(Tail::Identity),
        Some("zero") => Some(Tail::Zero),
        Some(other) => {
            return Err(FormatError::Invalid {
                location: "tail".to_string(),
                problem: format!("expected \"identity\" or \"zero\", found \"{other}\""),
            })
        }
    };
    Ok((rows, cols, block, tail))
}

/// Parses `{"rows": [...], "cols": [...], "block": [[...]], "tail": ...}`.
/// The tail field is required here; see [`parse_coefficients`] for the
/// tail-free construction form.
pub fn parse_operator(text: &str) -> Result<WindowOperator, FormatError> {
    let (rows, cols, block, tail) = parse_raw_operator(text)?;
    let tail = tail.ok_or_else(|| FormatError::Invalid {
        location: "tail".to_string(),
        problem: "operator files must declare \"identity\" or \"zero\"".to_string(),
    })?;
    Ok(WindowOperator::new(rows, cols, block, tail)?)
}

/// Parses the same object shape as [`parse_operator`] but routes it
/// through the strict doubly stochastic constructor, which checks all row
/// and column sums and fixes the identity tail. A \"zero\" tail is
/// rejected.
pub fn parse_coefficients(text: &str) -> Result<WindowOperator, FormatError> {
    let (rows, cols, block, tail) = parse_raw_operator(text)?;
    if tail == Some(Tail::Zero) {
        return Err(FormatError::Invalid {
            location: "tail".to_string(),
            problem: "coefficient files build identity-tail operators".to_string(),
        });
    }
    Ok(WindowOperator::from_coefficients(rows, cols, block)?)
}

pub fn operator_value(op: &WindowOperator) -> Value {
    json!({
        "rows": op.row_labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "cols": op.col_labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "block": op
            .block()
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "tail": match op.tail() {
            Tail::Identity => "identity",
            Tail::Zero => "zero",
        },
    })
}

pub fn render_operator(op: &WindowOperator) -> String {
    pretty(&operator_value(op))
}

pub fn verdict_value(verdict: &StochasticVerdict) -> Value {
    json!({
        "row_stochastic": verdict.row_stochastic,
        "column_stochastic": verdict.column_stochastic,
        "doubly_stochastic": verdict.doubly_stochastic,
        "permutation": verdict.permutation,
        "violations": verdict
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>(),
    })
}

// ------------------------------------------------------------- injections

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAffine {
    k: i64,
    c: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum RawInjection {
    Map(BTreeMap<String, String>),
    Affine(RawAffine),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawInjectionFile {
    Many(Vec<RawInjection>),
    One(RawInjection),
}

fn injection_from_raw(raw: RawInjection) -> Result<IndexInjection, FormatError> {
    match raw {
        RawInjection::Map(map) => Ok(IndexInjection::from_map(
            map.iter()
                .map(|(from, to)| (IndexLabel::parse(from), IndexLabel::parse(to)))
                .collect(),
        )?),
        RawInjection::Affine(RawAffine { k, c }) => Ok(IndexInjection::affine(k, c)?),
    }
}

/// Parses `{"map": {"1": "2"}}`, `{"affine": {"k": 2, "c": 0}}`, or an
/// array of such objects.
pub fn parse_injections(text: &str) -> Result<Vec<IndexInjection>, FormatError> {
    let raw: RawInjectionFile = serde_json::from_str(text)?;
    match raw {
        RawInjectionFile::One(one) => Ok(vec![injection_from_raw(one)?]),
        RawInjectionFile::Many(many) => {
            many.into_iter().map(injection_from_raw).collect()
        }
    }
}

pub fn injection_value(sigma: &IndexInjection) -> Value {
    match sigma {
        IndexInjection::Map(map) => json!({
            "map": map
                .iter()
                .map(|(from, to)| (from.to_string(), Value::String(to.to_string())))
                .collect::<serde_json::Map<_, _>>(),
        }),
        IndexInjection::Affine { scale, offset } => json!({
            "affine": {"k": scale, "c": offset},
        }),
    }
}

// -------------------------------------------------------------- preservers

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    alpha: String,
    sigma: RawInjection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    p: String,
    terms: Vec<RawTerm>,
}

/// Parses `{"p": "2", "terms": [{"alpha": "1", "sigma": {...}}, ...]}`.
pub fn parse_preserver_spec(text: &str) -> Result<PreserverSpec, FormatError> {
    let raw: RawSpec = serde_json::from_str(text)?;
    let p = PNorm::new(scalar_at(&raw.p, || "p".to_string())?)?;
    let mut terms = Vec::with_capacity(raw.terms.len());
    for (i, term) in raw.terms.into_iter().enumerate() {
        let alpha = scalar_at(&term.alpha, || format!("terms[{i}].alpha"))?;
        terms.push((alpha, injection_from_raw(term.sigma)?));
    }
    Ok(PreserverSpec::new(terms, p)?)
}

pub fn preserver_spec_value(spec: &PreserverSpec) -> Value {
    json!({
        "p": spec.p().value().to_string(),
        "terms": spec
            .terms()
            .iter()
            .map(|(alpha, sigma)| json!({
                "alpha": alpha.to_string(),
                "sigma": injection_value(sigma),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn render_preserver_spec(spec: &PreserverSpec) -> String {
    pretty(&preserver_spec_value(spec))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawColumns {
    columns: BTreeMap<String, BTreeMap<String, String>>,
}

/// Parses `{"columns": {"1": {"2": "1"}, ...}}`; each column is a vector
/// object, so zero entries are rejected (a zero column is an empty
/// object).
pub fn parse_columns(text: &str) -> Result<OperatorColumns, FormatError> {
    let raw: RawColumns = serde_json::from_str(text)?;
    let mut columns = BTreeMap::new();
    for (col, raw_col) in raw.columns {
        let mut column = SparseVec::new();
        for (row, value) in raw_col {
            let location = || format!("columns[\"{col}\"][\"{row}\"]");
            let value = scalar_at(&value, location)?;
            if value.is_zero() {
                return Err(FormatError::ZeroValue {
                    location: location(),
                });
            }
            column.set(IndexLabel::parse(&row), value);
        }
        columns.insert(IndexLabel::parse(&col), column);
    }
    Ok(OperatorColumns::from_columns(columns))
}

pub fn columns_value(operator: &OperatorColumns) -> Value {
    json!({
        "columns": operator
            .iter()
            .map(|(label, col)| (label.to_string(), vector_value(col)))
            .collect::<serde_json::Map<_, _>>(),
    })
}

pub fn render_columns(operator: &OperatorColumns) -> String {
    pretty(&columns_value(operator))
}

// ------------------------------------------------------------ certificates

pub fn refutation_value(refutation: &Refutation) -> Value {
    match refutation {
        Refutation::TraceMismatch { f_trace, g_trace } => json!({
            "kind": "trace_mismatch",
            "f_trace": f_trace.to_string(),
            "g_trace": g_trace.to_string(),
        }),
        Refutation::ConvexGap {
            cut,
            side,
            lhs,
            rhs,
        } => json!({
            "kind": "convex_gap",
            "c": cut.to_string(),
            "side": side.to_string(),
            "lhs": lhs.to_string(),
            "rhs": rhs.to_string(),
        }),
    }
}

pub fn certificate_value(certificate: &MajorizationCertificate) -> Value {
    match certificate {
        MajorizationCertificate::Majorized { witness } => json!({
            "verdict": "majorized",
            "witness": operator_value(witness),
            "refutation": null,
        }),
        MajorizationCertificate::NotMajorized { refutation } => json!({
            "verdict": "not_majorized",
            "witness": null,
            "refutation": refutation_value(refutation),
        }),
    }
}

pub fn render_certificate(certificate: &MajorizationCertificate) -> String {
    pretty(&certificate_value(certificate))
}

pub fn permutation_value(witness: &PermutationWitness) -> Value {
    json!({
        "equivalent": true,
        "bijection": witness
            .iter()
            .map(|(from, to)| (from.to_string(), Value::String(to.to_string())))
            .collect::<serde_json::Map<_, _>>(),
    })
}
