//! `{"kind":"curve","sections":[...]}` with each section a term
//! `{"coeff":"1","exp":[a,b]}` or a list of terms (empty for a zero section),
//! and `{"kind":"projective","dim":n}`.

use serde_json::Value;

use super::{Curve, GeomError};
use crate::ideals::parse_term;

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    Curve(Curve),
    Projective { dim: usize },
}

impl Geometry {
    pub fn dim(&self) -> usize {
        match self {
            Geometry::Curve(_) => 1,
            Geometry::Projective { dim } => *dim,
        }
    }

    /// Number of homogeneous coordinates of the ambient space.
    pub fn ambient_vars(&self) -> usize {
        match self {
            Geometry::Curve(c) => c.sections().len(),
            Geometry::Projective { dim } => dim + 1,
        }
    }

    /// Degree of the embedding, i.e. the ratio of the Kähler class used for
    /// the energies to the hyperplane class.
    pub fn degree(&self) -> u32 {
        match self {
            Geometry::Curve(c) => c.degree(),
            Geometry::Projective { .. } => 1,
        }
    }
}

fn invalid(msg: impl Into<String>) -> GeomError {
    GeomError::Invalid(msg.into())
}

pub fn geometry_from_value(v: &Value) -> Result<Geometry, GeomError> {
    match v.get("kind").and_then(Value::as_str) {
        Some("curve") => {
            let sections = v
                .get("sections")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid("curve needs an array \"sections\""))?;
            let parsed = sections
                .iter()
                .map(|s| match s {
                    Value::Array(terms) => terms.iter().map(parse_term).collect::<Result<Vec<_>, _>>(),
                    Value::Object(_) => parse_term(s).map(|t| vec![t]),
                    _ => Err(crate::ideals::IdealError::Invalid(format!("bad section {s}"))),
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| invalid(e.to_string()))?;
            Ok(Geometry::Curve(Curve::from_terms(parsed)?))
        }
        Some("projective") => {
            let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| invalid("projective needs \"dim\""))? as usize;
            if !(1..=2).contains(&dim) {
                return Err(GeomError::UnsupportedDimension(dim));
            }
            Ok(Geometry::Projective { dim })
        }
        Some(k) => Err(invalid(format!("unknown geometry kind {k:?}"))),
        None => Err(invalid("missing string field \"kind\"")),
    }
}

pub fn parse_geometry_json(text: &str) -> Result<Geometry, GeomError> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid(format!("JSON: {e}")))?;
    geometry_from_value(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_curves_and_spaces() {
        let g = parse_geometry_json(
            r#"{"kind":"curve","sections":[{"coeff":"1","exp":[3,0]},{"exp":[2,1]},{"exp":[1,2]},{"coeff":1,"exp":[0,3]}]}"#,
        )
        .unwrap();
        assert_eq!((g.dim(), g.degree(), g.ambient_vars()), (1, 3, 4));
        let pc = parse_geometry_json(
            r#"{"kind":"curve","sections":[{"exp":[2,0]},{"exp":[1,1]},[{"exp":[2,0]},{"exp":[0,2]}]]}"#,
        )
        .unwrap();
        assert_eq!(pc.ambient_vars(), 3);
        let line = parse_geometry_json(r#"{"kind":"curve","sections":[{"exp":[1,0]},{"exp":[0,1]},[]]}"#).unwrap();
        assert_eq!(line.degree(), 1);
        assert_eq!(parse_geometry_json(r#"{"kind":"projective","dim":2}"#).unwrap(), Geometry::Projective { dim: 2 });
        assert!(parse_geometry_json(r#"{"kind":"projective","dim":3}"#).is_err());
        assert!(parse_geometry_json(r#"{"kind":"curve","sections":[{"exp":[2,0]},{"exp":[0,1]}]}"#).is_err());
        assert!(parse_geometry_json(r#"{"kind":"curve","sections":[1,2]}"#).is_err());
        assert!(parse_geometry_json("[").is_err());
    }
}
