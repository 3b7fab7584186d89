pub mod energy;
pub mod expand;
pub mod verify;
pub mod weight;

use gitenergy::exact::{QPoly, Rat};
use serde_json::{json, Value};

pub fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(r.to_string())).collect())
}

/// Ascending coefficients plus a readable form.
pub fn poly(p: &QPoly) -> Value {
    json!({ "coeffs": rats(p.coeffs()), "display": p.to_string() })
}
