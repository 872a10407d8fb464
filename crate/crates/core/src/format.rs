//! JSON documents for algebras, monomial quotients and S-pairs.
//!
//! Rationals are written as strings `"p/q"` (or `"p"`); integers are also
//! accepted on input.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{local_view, AlgebraError, AlgebraTable};
use crate::exactlin::{parse_rational, zero_vec, LinAlgError, Rational};
use crate::monomial::{MonomialError, MonomialQuotient};
use crate::spair::{SPair, SPairError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document is neither an algebra (\"mult\") nor a monomial quotient (\"ideal\")")]
    UnknownDocument,
    #[error("\"dim\" is {dim} but {labels} basis labels were given")]
    LabelCount { dim: usize, labels: usize },
    #[error("structure constant for e{i}*e{j} on e{k} is listed twice")]
    DuplicateConstant { i: usize, j: usize, k: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error(transparent)]
    Rational(#[from] LinAlgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    SPair(#[from] SPairError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn to_rational(&self) -> Result<Rational, LinAlgError> {
        match self {
            Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
            Scalar::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Deserialize)]
struct AlgebraDoc {
    dim: usize,
    basis: Option<Vec<String>>,
    unit: usize,
    mult: Vec<(usize, usize, usize, Scalar)>,
}

#[derive(Debug, Deserialize)]
struct MonomialDoc {
    vars: Vec<String>,
    ideal: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Algebra(AlgebraTable),
    Monomial(MonomialQuotient),
}

impl Document {
    pub fn table(&self) -> AlgebraTable {
        match self {
            Document::Algebra(t) => t.clone(),
            Document::Monomial(q) => q.to_algebra_table(),
        }
    }
}

pub fn rational_to_string(c: &Rational) -> String {
    c.to_string()
}

pub fn vector_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(rational_to_string(c))).collect())
}

pub fn vector_from_json(value: &Value) -> Result<Vec<Rational>, FormatError> {
    let scalars: Vec<Scalar> = serde_json::from_value(value.clone())?;
    Ok(scalars.iter().map(Scalar::to_rational).collect::<Result<_, _>>()?)
}

pub fn algebra_to_json(table: &AlgebraTable) -> Value {
    let mult: Vec<Value> = table
        .nonzero_constants()
        .into_iter()
        .map(|(i, j, k, c)| json!([i, j, k, rational_to_string(&c)]))
        .collect();
    json!({
        "dim": table.dim(),
        "basis": table.basis_labels(),
        "unit": table.unit_index(),
        "mult": mult,
    })
}

fn algebra_from_doc(doc: AlgebraDoc) -> Result<AlgebraTable, FormatError> {
    let labels = doc.basis.unwrap_or_else(|| (0..doc.dim).map(|i| format!("e{i}")).collect());
    if labels.len() != doc.dim {
        return Err(FormatError::LabelCount { dim: doc.dim, labels: labels.len() });
    }
    let mut entries: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, j, k, c) in doc.mult {
        for index in [i, j, k] {
            if index >= doc.dim {
                return Err(FormatError::IndexOutOfRange { index, dim: doc.dim });
            }
        }
        if !seen.insert((i, j, k)) {
            return Err(FormatError::DuplicateConstant { i, j, k });
        }
        entries.entry((i, j)).or_insert_with(|| zero_vec(doc.dim))[k] = c.to_rational()?;
    }
    Ok(AlgebraTable::new(labels, doc.unit, &entries)?)
}

pub fn monomial_to_json(q: &MonomialQuotient) -> Value {
    json!({ "vars": q.vars(), "ideal": q.generators() })
}

pub fn parse_document(value: &Value) -> Result<Document, FormatError> {
    if value.get("mult").is_some() {
        let doc: AlgebraDoc = serde_json::from_value(value.clone())?;
        Ok(Document::Algebra(algebra_from_doc(doc)?))
    } else if value.get("ideal").is_some() {
        let doc: MonomialDoc = serde_json::from_value(value.clone())?;
        Ok(Document::Monomial(MonomialQuotient::from_generators(doc.vars, &doc.ideal)?))
    } else {
        Err(FormatError::UnknownDocument)
    }
}

pub fn parse_document_str(text: &str) -> Result<Document, FormatError> {
    parse_document(&serde_json::from_str(text)?)
}

/// An algebra or monomial document with `"U"` rows in its basis. A monomial
/// document without `"U"` takes the variables.
pub fn parse_spair(value: &Value) -> Result<SPair, FormatError> {
    let document = parse_document(value)?;
    match (value.get("U"), &document) {
        (None, Document::Monomial(q)) => Ok(SPair::from_monomial(q)?),
        (u, _) => {
            let rows = match u {
                Some(Value::Array(rows)) => rows.iter().map(vector_from_json).collect::<Result<Vec<_>, _>>()?,
                Some(other) => return Err(FormatError::Json(serde::de::Error::custom(format!("\"U\" must be an array, got {other}")))),
                None => Vec::new(),
            };
            let view = local_view(&document.table())?;
            Ok(SPair::new(view, rows)?)
        }
    }
}

pub fn spair_to_json(p: &SPair) -> Value {
    let mut doc = algebra_to_json(p.algebra());
    doc["U"] = Value::Array(p.u_basis().iter().map(|u| vector_to_json(u)).collect());
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio};

    #[test]
    fn algebra_round_trip() {
        let t = AlgebraTable::truncated_polynomial(3);
        let doc = algebra_to_json(&t);
        assert_eq!(doc["mult"].as_array().unwrap().len(), 4);
        let back = parse_document(&doc).unwrap();
        assert_eq!(back, Document::Algebra(t));
    }

    #[test]
    fn symmetric_pairs_and_conflicts() {
        let once = r#"{"dim":2,"basis":["1","x"],"unit":0,"mult":[[0,0,0,1],[0,1,1,"1"]]}"#;
        let table = parse_document_str(once).unwrap().table();
        assert_eq!(table.structure(1, 0), &[rat(0), rat(1)]);
        let conflict = r#"{"dim":2,"unit":0,"mult":[[0,0,0,1],[0,1,1,1],[1,0,1,"2"]]}"#;
        assert!(matches!(parse_document_str(conflict), Err(FormatError::Algebra(AlgebraError::ConflictingProduct { .. }))));
        let twice = r#"{"dim":2,"unit":0,"mult":[[0,0,0,1],[0,0,0,1]]}"#;
        assert!(matches!(parse_document_str(twice), Err(FormatError::DuplicateConstant { .. })));
        let bad = r#"{"dim":2,"unit":0,"mult":[[0,0,0,"1/0"]]}"#;
        assert!(matches!(parse_document_str(bad), Err(FormatError::Rational(_))));
    }

    #[test]
    fn monomial_and_spair_documents() {
        let text = r#"{"vars":["x","y"],"ideal":[[4,0],[1,1],[0,2]]}"#;
        let Document::Monomial(q) = parse_document_str(text).unwrap() else { panic!("expected monomial") };
        assert_eq!(q.dim(), 5);
        let value: Value = serde_json::from_str(text).unwrap();
        let p = parse_spair(&value).unwrap();
        assert_eq!(p.u_basis().len(), 2);
        let round = parse_spair(&spair_to_json(&p)).unwrap();
        assert_eq!(round.u_basis(), p.u_basis());
        let with_u = r#"{"dim":3,"unit":0,"mult":[[0,0,0,1],[0,1,1,1],[0,2,2,1],[1,1,2,"1/2"]],"U":[[0,"2",0]]}"#;
        let p = parse_spair(&serde_json::from_str(with_u).unwrap()).unwrap();
        assert_eq!(p.algebra().structure(1, 1)[2], ratio(1, 2));
        assert!(matches!(parse_document_str(r#"{"dim":1}"#), Err(FormatError::UnknownDocument)));
    }
}
