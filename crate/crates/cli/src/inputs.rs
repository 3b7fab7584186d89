use std::fs;

use gitenergy::corpus::{builtin, builtin_entry, CorpusEntry};
use gitenergy::geom::{parse_geometry_json, Geometry};
use gitenergy::ideals::{parse_scheme_json, SchemeData};
use gitenergy::weights::OneParameterSubgroup;

use crate::config::Settings;
use crate::error::{usage, CliError};

pub fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_string(), msg: e.to_string() })
}

pub fn entry(name: &str) -> Result<CorpusEntry, CliError> {
    builtin_entry(name).ok_or_else(|| {
        let names: Vec<String> = builtin().into_iter().map(|e| e.name).collect();
        usage(format!("unknown entry {name:?}; built-in entries are {}", names.join(", ")))
    })
}

pub fn lambda(s: &Settings, fallback: Option<&CorpusEntry>) -> Result<OneParameterSubgroup, CliError> {
    match (&s.lambda, fallback) {
        (Some(text), _) => Ok(text.parse()?),
        (None, Some(e)) if !e.lambdas.is_empty() => Ok(e.lambdas[0].clone()),
        _ => Err(usage("--lambda is required")),
    }
}

/// The scheme from `--scheme` or `--entry`, with the entry if one was named.
pub fn scheme(s: &Settings) -> Result<(SchemeData, Option<CorpusEntry>), CliError> {
    match (&s.scheme, &s.entry) {
        (Some(_), Some(_)) => Err(usage("give either --scheme or --entry, not both")),
        (Some(path), None) => Ok((parse_scheme_json(&read(path)?)?, None)),
        (None, Some(name)) => {
            let e = entry(name)?;
            Ok((e.scheme.clone(), Some(e)))
        }
        (None, None) => Err(usage("one of --scheme or --entry is required")),
    }
}

pub fn geometry(s: &Settings) -> Result<(Geometry, Option<CorpusEntry>), CliError> {
    match (&s.geometry, &s.entry) {
        (Some(_), Some(_)) => Err(usage("give either --geometry or --entry, not both")),
        (Some(path), None) => Ok((parse_geometry_json(&read(path)?)?, None)),
        (None, Some(name)) => {
            let e = entry(name)?;
            let g = e.geometry.clone().ok_or_else(|| usage(format!("entry {name:?} has no geometry")))?;
            Ok((g, Some(e)))
        }
        (None, None) => Err(usage("one of --geometry or --entry is required")),
    }
}
