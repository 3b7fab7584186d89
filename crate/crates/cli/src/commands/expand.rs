use gitenergy::exact::{parse_rat, QPoly, Rat};
use gitenergy::expansion::{c_matrix, expand_f, prop1_scalar, solve_q, virtual_bundle_from, Sign};
use gitenergy::weights::weight_polynomial;
use serde_json::{json, Map, Value};

use super::{poly, rats};
use crate::config::RunConfig;
use crate::error::{usage, CliError};
use crate::inputs;
use crate::output::emit;

pub const DEFAULT_M: i64 = 10;

fn parse_chi(text: &str) -> Result<QPoly, CliError> {
    let coeffs = text
        .split(',')
        .map(|c| parse_rat(c.trim()).map_err(|e| usage(format!("--chi: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QPoly::new(coeffs))
}

pub fn run(config: &RunConfig, sign: Sign) -> Result<(), CliError> {
    let s = &config.settings;
    let mut body = Map::new();
    let (chi, weights) = if let Some(text) = &s.chi {
        if s.scheme.is_some() || s.entry.is_some() {
            return Err(usage("give either --chi or a scheme, not both"));
        }
        (parse_chi(text)?, None)
    } else {
        let (scheme, entry) = inputs::scheme(s)?;
        let lambda = inputs::lambda(s, entry.as_ref())?;
        body.insert("lambda".into(), Value::String(lambda.to_string()));
        let w = weight_polynomial(&scheme, &lambda, None)?;
        (w.hilbert.poly.clone(), Some(w))
    };
    let n = chi.degree().ok_or_else(|| usage("Hilbert polynomial is zero"))?;
    body.insert("n".into(), json!(n));
    body.insert("chi".into(), poly(&chi));
    match &weights {
        Some(w) => {
            let table = expand_f(w, &chi, n)?;
            body.insert("normalized_weight".into(), poly(&w.normalized));
            body.insert("coefficients".into(), serde_json::to_value(&table).unwrap());
        }
        None => {
            let c = c_matrix(&chi, n)?;
            body.insert("coefficients".into(), json!({ "c": c.iter().map(|r| rats(r)).collect::<Vec<_>>() }));
        }
    }
    let m = s.m.unwrap_or(DEFAULT_M);
    if m < 0 {
        return Err(usage(format!("m must be a natural number, got {m}")));
    }
    let levels: Vec<usize> = match s.level {
        Some(l) => vec![l],
        None => (0..=n + 1).collect(),
    };
    let mut out = Vec::new();
    for l in levels {
        let sol = solve_q(&chi, n, l)?;
        let q: Vec<Value> = (0..=l)
            .map(|j| json!({ "K": n + 1 - j, "q": sol.q[j].to_string() }))
            .collect();
        let vb = virtual_bundle_from(&sol, m, sign)?;
        let mut level = json!({
            "l": l,
            "q": q,
            "virtual_bundle": vb,
            "prop1": prop1_scalar(&chi, n, l, m, sign)?.to_string(),
        });
        if let Some(w) = &weights {
            let pairing = vb.pair(|x| w.normalized.eval(&Rat::from_integer(x.into())));
            level["pairing"] = Value::String(pairing.to_string());
        }
        out.push(level);
    }
    body.insert("m".into(), json!(m));
    body.insert("sign".into(), json!(sign.as_i8()));
    body.insert("levels".into(), Value::Array(out));
    emit(config, Value::Object(body), None)
}
