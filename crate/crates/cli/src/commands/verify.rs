use std::path::Path;

use gitenergy::corpus::{builtin, load_path, CorpusEntry};
use gitenergy::exact::{factorial, p_poly, rat_int, QPoly, Rat};
use gitenergy::expansion::{expand_f, prop1_scalar, sheaf_exponents, virtual_bundle, ExpansionError, Sign};
use gitenergy::geom::{
    energy_f2, energy_kenergy, td2_pointwise_check, FdOptions, F2Coefficients, Family, HermForm, PotentialPath,
    ProjectiveGrid, Reparam, Term, C64,
};
use gitenergy::ideals::hilbert_polynomial;
use gitenergy::weights::weight_polynomial;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::emit;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, anchor: &'static str, result: Result<String, String>) -> Check {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check { name: name.into(), anchor, passed, detail }
}

const PROP1: &str = "Σ_i mult_i (m+i)χ(m+i) = δ_{l,0}";
const P_TABLE_MAX: usize = 8;
const M_SAMPLES: usize = 3;
const TD2_POINTS: usize = 4;
const TD2_TOL: f64 = 1e-4;
const PATH_TOL: f64 = 1e-6;

fn p_table() -> Check {
    let mut bad = Vec::new();
    for k in 0..=P_TABLE_MAX {
        for l in 0..=P_TABLE_MAX {
            let p = p_poly(k, l);
            let ok = match l.cmp(&k) {
                std::cmp::Ordering::Less => p.is_zero(),
                std::cmp::Ordering::Equal => p == QPoly::constant(Rat::from_integer(factorial(k))),
                std::cmp::Ordering::Greater => p.degree() == Some(l - k),
            };
            if !ok {
                bad.push(format!("P_{{{k},{l}}} = {p}"));
            }
        }
    }
    let result = if bad.is_empty() {
        Ok(format!("k, l ≤ {P_TABLE_MAX}"))
    } else {
        Err(bad.join("; "))
    };
    check("p_table", "P_{k,l} = Δ^k m^l: zero for l < k, k! for l = k, degree l−k above", result)
}

/// The first few m ≥ 1 at which the q_K have no pole.
fn regular_points(chi: &QPoly, n: usize, l: usize, sign: Sign) -> Result<Vec<i64>, ExpansionError> {
    let mut out = Vec::new();
    for m in 1..=64 {
        match virtual_bundle(chi, n, l, m, sign) {
            Ok(_) => out.push(m),
            Err(ExpansionError::PoleAtM { .. }) => continue,
            Err(e) => return Err(e),
        }
        if out.len() == M_SAMPLES {
            break;
        }
    }
    Ok(out)
}

fn scheme_checks(entry: &CorpusEntry, sign: Sign, out: &mut Vec<Check>) {
    let name = &entry.name;
    let chi = match hilbert_polynomial(&entry.scheme) {
        Ok(h) => h.poly,
        Err(e) => {
            out.push(check(format!("hilbert/{name}"), "Hilbert polynomial", Err(e.to_string())));
            return;
        }
    };
    let n = match chi.degree() {
        Some(n) if n <= 2 => n,
        _ => return,
    };
    let weights: Vec<_> = entry
        .lambdas
        .iter()
        .map(|lam| {
            let table = weight_polynomial(&entry.scheme, lam, None)
                .map_err(|e| e.to_string())
                .and_then(|w| expand_f(&w, &chi, n).map(|t| (w, t)).map_err(|e| e.to_string()));
            (lam, table)
        })
        .collect();
    for l in 0..=n + 1 {
        let ms = match regular_points(&chi, n, l, sign) {
            Ok(ms) => ms,
            Err(e) => {
                out.push(check(format!("prop1/{name}/l={l}"), PROP1, Err(e.to_string())));
                continue;
            }
        };
        let expected = if l == 0 { rat_int(1) } else { rat_int(0) };
        let prop1: Result<String, String> = ms
            .iter()
            .map(|&m| prop1_scalar(&chi, n, l, m, sign).map_err(|e| e.to_string()).map(|v| (m, v)))
            .collect::<Result<Vec<_>, _>>()
            .and_then(|vals| {
                let text = vals.iter().map(|(m, v)| format!("m={m}: {v}")).collect::<Vec<_>>().join(", ");
                if vals.iter().all(|(_, v)| *v == expected) {
                    Ok(text)
                } else {
                    Err(format!("expected {expected}; {text}"))
                }
            });
        out.push(check(
            format!("prop1/{name}/l={l}"),
            PROP1,
            prop1,
        ));
        let sheaf = sheaf_exponents(&chi, n, l, sign)
            .map(|ex| ex.iter().map(|e| format!("k={}: {}", e.k, e.exponent)).collect::<Vec<_>>().join(", "))
            .map_err(|e| e.to_string());
        out.push(check(
            format!("sheaf_exponents/{name}/l={l}"),
            "closed-form exponent of M_k = sign × exponent from the q_K",
            sheaf,
        ));
        for (lam, table) in &weights {
            let result = match table {
                Err(e) => Err(e.clone()),
                Ok((w, t)) => {
                    let mut vals = Vec::new();
                    let mut err = None;
                    for &m in &ms {
                        match virtual_bundle(&chi, n, l, m, sign) {
                            Ok(vb) => vals.push(vb.pair(|x| w.normalized.eval(&rat_int(x)))),
                            Err(e) => err = Some(e.to_string()),
                        }
                    }
                    match err {
                        Some(e) => Err(e),
                        None if vals.iter().all(|v| *v == t.f[l]) => Ok(format!("F_{l} = {}", t.f[l])),
                        None => Err(format!(
                            "F_{l} = {}, pairings {}",
                            t.f[l],
                            vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
                        )),
                    }
                }
            };
            out.push(check(
                format!("pairing/{name}/{lam}/l={l}"),
                "Σ_i mult_i w̃_λ(m+i) = F_l for every m",
                result,
            ));
        }
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_form(rng: &mut StdRng, dim: usize) -> HermForm {
    let p: Vec<C64> = (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    HermForm::projector(&p)
}

fn td2_checks(rng: &mut StdRng, out: &mut Vec<Check>) {
    let grid = ProjectiveGrid { radial: 2, angular: 1 };
    let paths = [
        ("fubini_study", PotentialPath::linear(2, &grid, vec![])),
        ("bump", PotentialPath::linear(2, &grid, vec![Term::Bump { amp: 0.15, form: random_form(rng, 3) }])),
    ];
    for (label, path) in paths {
        let result = path.map_err(|e| e.to_string()).and_then(|path| {
            let mut worst: f64 = 0.0;
            for _ in 0..TD2_POINTS {
                let chart = rng.gen_range(0..3);
                let z = [c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)), c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7))];
                let r = td2_pointwise_check(&path, chart, z, 1.0, &FdOptions::default()).map_err(|e| e.to_string())?;
                let rel = r.residual / (1.0 + r.rhs.abs());
                if rel > TD2_TOL {
                    return Err(format!("chart {chart}, z = {z:?}: lhs {} rhs {}", r.lhs, r.rhs));
                }
                worst = worst.max(rel);
            }
            Ok(format!("{TD2_POINTS} points, worst relative residual {worst:e}"))
        });
        out.push(check(
            format!("td2/{label}"),
            "pointwise second Todd form = (3S² − 4|Ric|² + |R|²)/2",
            result,
        ));
    }
}

fn compare(fam: &PotentialPath, f: impl Fn(&dyn Family) -> Result<f64, String>) -> Result<String, String> {
    let a = f(fam)?;
    let quad = Reparam::new(fam, 1.0, 2);
    let b = f(&quad)?;
    if (a - b).abs() <= PATH_TOL * a.abs().max(1e-3) {
        Ok(format!("linear {a:e}, quadratic {b:e}"))
    } else {
        Err(format!("linear {a:e}, quadratic {b:e}"))
    }
}

fn path_checks(rng: &mut StdRng, out: &mut Vec<Check>) {
    let anchor = "path integral depends only on the endpoints";
    let p1 = PotentialPath::linear(
        1,
        &ProjectiveGrid { radial: 32, angular: 32 },
        vec![Term::Bump { amp: 0.3, form: random_form(rng, 2) }],
    );
    let weights: Vec<f64> = (0..3).map(|_| rng.gen_range(0.5..2.0)).collect();
    let p2 = PotentialPath::linear(
        2,
        &ProjectiveGrid { radial: 16, angular: 1 },
        vec![Term::Ratio { coef: 0.2, num: HermForm::diagonal(&weights), den: HermForm::identity(3) }],
    );
    let f2_p1 = F2Coefficients::new(&[rat_int(0), rat_int(1), rat_int(-1)], 1.0);
    for (label, path) in [("p1_bump", p1), ("p2_toric", p2)] {
        let path = match path {
            Ok(p) => p,
            Err(e) => {
                out.push(check(format!("path/{label}"), anchor, Err(e.to_string())));
                continue;
            }
        };
        out.push(check(
            format!("path/{label}/kenergy"),
            anchor,
            compare(&path, |f| energy_kenergy(f, 1.0).map_err(|e| e.to_string())),
        ));
        if path.dim() == 1 {
            out.push(check(
                format!("path/{label}/f2"),
                anchor,
                compare(&path, |f| energy_f2(f, 1.0, &f2_p1).map_err(|e| e.to_string())),
            ));
        }
    }
}

pub fn run(config: &RunConfig, sign: Sign) -> Result<(), CliError> {
    let s = &config.settings;
    let corpus = match &s.corpus {
        Some(p) => load_path(Path::new(p))?,
        None => builtin(),
    };
    let mut checks = vec![p_table()];
    for e in &corpus {
        scheme_checks(e, sign, &mut checks);
    }
    let mut rng = StdRng::seed_from_u64(s.seed.unwrap_or(0));
    td2_checks(&mut rng, &mut checks);
    path_checks(&mut rng, &mut checks);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let body = json!({
        "sign": sign.as_i8(),
        "passed": failed == 0,
        "failed": failed,
        "total": checks.len(),
        "entries": checks,
    });
    emit(config, body, None)?;
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}
