//! JSON form of scheme data:
//! `{"vars": N+1, "kind": "monomial" | "hypersurface" | "kernel_generators", "generators": [...]}`.
//! Monomial generators are exponent arrays; polynomial terms are
//! `{"coeff": "-1/2", "exp": [0, 2, 0]}`.

use serde_json::{json, Value};

use super::{
    HomogeneousPoly, HypersurfaceData, IdealError, KernelGeneratorsData, MonomialIdealData,
    MultiIndex, SchemeData,
};
use crate::exact::{parse_rat, Rat};

fn invalid(msg: impl Into<String>) -> IdealError {
    IdealError::Invalid(msg.into())
}

fn parse_exponents(v: &Value) -> Result<MultiIndex, IdealError> {
    let arr = v.as_array().ok_or_else(|| invalid(format!("expected exponent array, got {v}")))?;
    let exps = arr
        .iter()
        .map(|e| {
            e.as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| invalid(format!("bad exponent {e}")))
        })
        .collect::<Result<Vec<u32>, _>>()?;
    Ok(MultiIndex::new(exps))
}

/// One `{"coeff": ..., "exp": [...]}` term. The coefficient may be a string
/// (parsed exactly) or a JSON integer.
pub fn parse_term(v: &Value) -> Result<(MultiIndex, Rat), IdealError> {
    let exp = v.get("exp").ok_or_else(|| invalid(format!("term without \"exp\": {v}")))?;
    let coeff = match v.get("coeff") {
        None => Rat::from_integer(1.into()),
        Some(Value::String(s)) => parse_rat(s)?,
        Some(Value::Number(n)) if n.is_i64() => Rat::from_integer(n.as_i64().unwrap().into()),
        Some(other) => return Err(invalid(format!("coefficient must be a decimal string, got {other}"))),
    };
    Ok((parse_exponents(exp)?, coeff))
}

fn parse_poly(vars: usize, v: &Value) -> Result<HomogeneousPoly, IdealError> {
    let terms = match v {
        Value::Array(items) => items.iter().map(parse_term).collect::<Result<Vec<_>, _>>()?,
        Value::Object(_) => vec![parse_term(v)?],
        _ => return Err(invalid(format!("expected a list of terms, got {v}"))),
    };
    HomogeneousPoly::new(vars, terms)
}

pub fn parse_scheme_json(text: &str) -> Result<SchemeData, IdealError> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid(format!("JSON: {e}")))?;
    let vars = v
        .get("vars")
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid("missing integer field \"vars\""))? as usize;
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid("missing string field \"kind\""))?;
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing array field \"generators\""))?;
    match kind {
        "monomial" => {
            let g = gens.iter().map(parse_exponents).collect::<Result<Vec<_>, _>>()?;
            Ok(SchemeData::Monomial(MonomialIdealData::new(vars, g)?))
        }
        "hypersurface" => {
            // either a flat list of terms or a single-element list holding one
            let poly = match gens.as_slice() {
                [Value::Array(_)] => parse_poly(vars, &gens[0])?,
                _ => parse_poly(vars, &Value::Array(gens.clone()))?,
            };
            Ok(SchemeData::Hypersurface(HypersurfaceData::new(poly)?))
        }
        "kernel_generators" => {
            let polys = gens
                .iter()
                .map(|g| parse_poly(vars, g))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SchemeData::KernelGenerators(KernelGeneratorsData::new(vars, polys)?))
        }
        other => Err(invalid(format!("unknown kind {other:?}"))),
    }
}

fn poly_json(p: &HomogeneousPoly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(mi, c)| json!({"coeff": c.to_string(), "exp": mi.exponents()}))
            .collect(),
    )
}

pub fn scheme_to_json(s: &SchemeData) -> Value {
    let generators = match s {
        SchemeData::Monomial(d) => d.generators().iter().map(|g| json!(g.exponents())).collect(),
        SchemeData::Hypersurface(h) => match poly_json(h.poly()) {
            Value::Array(terms) => terms,
            _ => unreachable!(),
        },
        SchemeData::KernelGenerators(k) => k.generators().iter().map(poly_json).collect(),
    };
    json!({"vars": s.vars(), "kind": s.kind(), "generators": generators})
}
