use gitenergy::exact::{factorial, rat_int, rat_to_f64, QPoly, Rat};
use gitenergy::expansion::{c_matrix, expand_f};
use gitenergy::geom::{
    asymptotic_trace, CurveGrid, CurveRay, F2Coefficients, Family, Functional, Geometry, ProjectiveRay,
    ToricGrid,
};
use gitenergy::ideals::parse_scheme_json;
use gitenergy::weights::weight_polynomial;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{usage, CliError};
use crate::inputs;
use crate::output::{emit, Table};

pub const DEFAULT_TMIN: f64 = 1.0 / 1_048_576.0;
pub const DEFAULT_TMAX: f64 = 1.0;
pub const DEFAULT_SAMPLES: usize = 21;

/// Geometric grid from tmax down to tmin.
pub fn t_grid(tmin: f64, tmax: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    if samples < 4 {
        return Err(usage(format!("--samples must be at least 4, got {samples}")));
    }
    if !(tmin > 0.0 && tmin < tmax && tmax <= 1.0) {
        return Err(usage(format!("need 0 < tmin < tmax ≤ 1, got tmin = {tmin}, tmax = {tmax}")));
    }
    let ratio = (tmin / tmax).ln();
    Ok((0..samples)
        .map(|k| if k + 1 == samples { tmin } else { tmax * (ratio * k as f64 / (samples - 1) as f64).exp() })
        .collect())
}

fn parse_grid(text: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || usage(format!("--grid expects \"radial,angular\", got {text:?}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let r: usize = parts[0].parse().map_err(|_| bad())?;
    let a: usize = parts[1].parse().map_err(|_| bad())?;
    if r < 2 || a < 1 {
        return Err(bad());
    }
    Ok((r, a))
}

/// Hilbert polynomial of the polarized geometry: dm+1 for a degree d curve,
/// C(m+n, n) for P^n.
pub fn geometry_chi(g: &Geometry) -> QPoly {
    match g {
        Geometry::Curve(c) => QPoly::from_ints(&[1, c.degree() as i64]),
        Geometry::Projective { dim } => {
            let mut p = QPoly::one();
            for k in 1..=*dim as i64 {
                p = &p * &QPoly::from_ints(&[k, 1]);
            }
            p.scale(&(rat_int(1) / Rat::from_integer(factorial(*dim))))
        }
    }
}

fn default_level(f: Functional) -> usize {
    match f {
        Functional::Aubin | Functional::I | Functional::J => 0,
        Functional::KEnergy => 1,
        Functional::F2 => 2,
    }
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let s = &config.settings;
    let (geometry, entry) = inputs::geometry(s)?;
    let lambda = inputs::lambda(s, entry.as_ref())?;
    if lambda.len() != geometry.ambient_vars() {
        return Err(usage(format!(
            "lambda has {} weights but the geometry spans {} coordinates",
            lambda.len(),
            geometry.ambient_vars()
        )));
    }
    let name = s.functional.as_deref().unwrap_or("aubin");
    let functional: Functional = name
        .parse()
        .map_err(|_| usage(format!("unknown functional {name:?}; expected aubin, I, J, kenergy or f2")))?;
    let grid_t = t_grid(s.tmin.unwrap_or(DEFAULT_TMIN), s.tmax.unwrap_or(DEFAULT_TMAX), s.samples.unwrap_or(DEFAULT_SAMPLES))?;
    let grid = s.grid.as_deref().map(parse_grid).transpose()?;
    let n = geometry.dim();
    let d = geometry.degree() as f64;
    let chi = geometry_chi(&geometry);
    let f2 = match functional {
        Functional::F2 => Some(F2Coefficients::new(&c_matrix(&chi, n)?[2], d)),
        _ => None,
    };
    let family: Box<dyn Family> = match &geometry {
        Geometry::Curve(c) => {
            let mut g = CurveGrid::default();
            if let Some((r, a)) = grid {
                g.radial = r;
                g.angular = a;
            }
            Box::new(CurveRay::new(c, &lambda, &g)?)
        }
        Geometry::Projective { dim } => {
            // torus invariant, so the angular count is not used
            let mut g = ToricGrid::default();
            if let Some((r, _)) = grid {
                g.radial = r;
            }
            Box::new(ProjectiveRay::new(*dim, &lambda, &g)?)
        }
    };
    let trace = asymptotic_trace(family.as_ref(), functional, &grid_t, f2.as_ref())?;
    let rows = trace
        .samples
        .iter()
        .map(|p| vec![json!(p.t), json!(p.log_t2), json!(p.value)])
        .collect();
    let table = Table { header: vec!["t", "log_t2", "value"], rows };
    let mut body = json!({
        "functional": functional.name(),
        "lambda": lambda.to_string(),
        "slope": trace.fit.slope,
        "intercept": trace.fit.intercept,
        "r2": trace.fit.r2,
        "fit_points": trace.fit_points,
        "dimension": n,
        "degree": geometry.degree(),
    });
    if let Some(flag) = trace.fit.flag {
        body["r2_flag"] = Value::String(flag.into());
    }
    if let Some(f2) = &f2 {
        body["f2_coefficients"] = serde_json::to_value(f2).unwrap();
    }
    let scheme = match (&s.ideal, &entry) {
        (Some(path), _) => Some(parse_scheme_json(&inputs::read(path)?)?),
        (None, Some(e)) => Some(e.scheme.clone()),
        (None, None) => None,
    };
    if let Some(scheme) = scheme {
        let w = weight_polynomial(&scheme, &lambda, None)?;
        let sn = w.hilbert.dimension().unwrap_or(0);
        let table = expand_f(&w, &w.hilbert.poly, sn)?;
        let l = s.level.unwrap_or(default_level(functional));
        let f = table.f.get(l).ok_or_else(|| usage(format!("level {l} exceeds n + 1 = {}", sn + 1)))?;
        let fl = rat_to_f64(f);
        let ratio = |x: f64| if *f == rat_int(0) { Value::Null } else { json!(x / fl) };
        body["level"] = json!(l);
        body["F"] = Value::String(f.to_string());
        body["ratio"] = ratio(-d * trace.fit.slope);
        body["ratio_d_n1"] = ratio(trace.fit.slope * d * (n as f64 + 1.0));
    }
    emit(config, body, Some(&table))
}
