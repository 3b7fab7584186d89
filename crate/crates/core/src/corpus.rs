//! Fixture schemes shipped with the crate. An entry is
//! `{"name", "scheme", "geometry"?, "lambdas": ["1,0,-1", ...]}` with the
//! scheme and geometry in their usual JSON forms.

use std::fs;
use std::path::Path;

use serde_json::Value;
use thiserror::Error;

use crate::geom::{geometry_from_value, GeomError, Geometry};
use crate::ideals::{parse_scheme_json, IdealError, SchemeData};
use crate::weights::{OneParameterSubgroup, WeightError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {msg}")]
    Read { path: String, msg: String },
    #[error("invalid corpus entry: {0}")]
    Invalid(String),
    #[error("no corpus entries found at {0}")]
    Empty(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub scheme: SchemeData,
    pub geometry: Option<Geometry>,
    pub lambdas: Vec<OneParameterSubgroup>,
}

const BUILTIN: [&str; 8] = [
    include_str!("../../../corpus/conic.json"),
    include_str!("../../../corpus/perturbed_conic.json"),
    include_str!("../../../corpus/twisted_cubic.json"),
    include_str!("../../../corpus/rational_normal_quartic.json"),
    include_str!("../../../corpus/p1.json"),
    include_str!("../../../corpus/p2.json"),
    include_str!("../../../corpus/two_lines.json"),
    include_str!("../../../corpus/line_with_embedded_point.json"),
];

pub fn entry_from_value(v: &Value) -> Result<CorpusEntry, CorpusError> {
    let name = v
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| CorpusError::Invalid("missing string field \"name\"".into()))?
        .to_string();
    let scheme = parse_scheme_json(
        &v.get("scheme").ok_or_else(|| CorpusError::Invalid(format!("{name}: missing \"scheme\"")))?.to_string(),
    )?;
    let geometry = match v.get("geometry") {
        None | Some(Value::Null) => None,
        Some(g) => Some(geometry_from_value(g)?),
    };
    if let Some(g) = &geometry {
        if g.ambient_vars() != scheme.vars() {
            return Err(CorpusError::Invalid(format!(
                "{name}: geometry lives in {} coordinates, scheme in {}",
                g.ambient_vars(),
                scheme.vars()
            )));
        }
    }
    let lambdas = v
        .get("lambdas")
        .and_then(Value::as_array)
        .ok_or_else(|| CorpusError::Invalid(format!("{name}: missing array \"lambdas\"")))?
        .iter()
        .map(|l| {
            let s = l.as_str().ok_or_else(|| CorpusError::Invalid(format!("{name}: λ must be a string")))?;
            let lam: OneParameterSubgroup = s.parse()?;
            if lam.len() != scheme.vars() {
                return Err(WeightError::DimensionMismatch { expected: scheme.vars(), got: lam.len() }.into());
            }
            Ok(lam)
        })
        .collect::<Result<Vec<_>, CorpusError>>()?;
    Ok(CorpusEntry { name, scheme, geometry, lambdas })
}

/// One entry, or an array of entries.
pub fn parse_corpus_json(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CorpusError::Invalid(format!("JSON: {e}")))?;
    match &v {
        Value::Array(items) => items.iter().map(entry_from_value).collect(),
        _ => Ok(vec![entry_from_value(&v)?]),
    }
}

pub fn builtin() -> Vec<CorpusEntry> {
    BUILTIN.iter().flat_map(|t| parse_corpus_json(t).expect("shipped corpus parses")).collect()
}

pub fn builtin_entry(name: &str) -> Option<CorpusEntry> {
    builtin().into_iter().find(|e| e.name == name)
}

/// A JSON file, or every `*.json` file of a directory in name order.
pub fn load_path(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let read_err = |e: std::io::Error| CorpusError::Read { path: path.display().to_string(), msg: e.to_string() };
    let mut out = Vec::new();
    if path.is_dir() {
        let mut files: Vec<_> = fs::read_dir(path)
            .map_err(read_err)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for f in files {
            let text = fs::read_to_string(&f)
                .map_err(|e| CorpusError::Read { path: f.display().to_string(), msg: e.to_string() })?;
            out.extend(parse_corpus_json(&text)?);
        }
    } else {
        out = parse_corpus_json(&fs::read_to_string(path).map_err(read_err)?)?;
    }
    if out.is_empty() {
        return Err(CorpusError::Empty(path.display().to_string()));
    }
    Ok(out)
}
