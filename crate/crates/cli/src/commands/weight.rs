use gitenergy::weights::{hilbert_weight, normalized_weight, weight_polynomial};
use serde_json::json;

use super::poly;
use crate::config::RunConfig;
use crate::error::{usage, CliError};
use crate::inputs;
use crate::output::{emit, Table};

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let s = &config.settings;
    let (scheme, entry) = inputs::scheme(s)?;
    let lambda = inputs::lambda(s, entry.as_ref())?;
    let w = weight_polynomial(&scheme, &lambda, None)?;
    let mmin = s.mmin.unwrap_or(w.stable_from);
    let mmax = s.mmax.unwrap_or(mmin + 5);
    if mmin > mmax {
        return Err(usage(format!("--mmin {mmin} exceeds --mmax {mmax}")));
    }
    let mut rows = Vec::new();
    for m in mmin..=mmax {
        let raw = hilbert_weight(&scheme, &lambda, m)?;
        let normalized = normalized_weight(&scheme, &lambda, m)?;
        rows.push(vec![json!(m), json!(raw), json!(normalized.to_string())]);
    }
    let table = Table { header: vec!["m", "raw", "normalized"], rows };
    let body = json!({
        "lambda": lambda.to_string(),
        "weight_polynomial": {
            "raw": poly(&w.raw),
            "normalized": poly(&w.normalized),
            "stable_from": w.stable_from,
            "samples": w.samples,
            "hilbert": { "poly": poly(&w.hilbert.poly), "stable_from": w.hilbert.stable_from },
        },
    });
    emit(config, body, Some(&table))
}
