//! Energy functionals of a family φ_s with φ_0 = 0, and their rates.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::herm;
use super::quadrature::{accumulate, gauss_legendre_on};
use super::{Family, GeomError, PathSample};
use crate::exact::{rat_to_f64, Rat};

/// Gauss–Legendre nodes per path segment.
pub const PATH_NODES: usize = 16;
/// Points of the t grid used for the slope fit.
pub const FIT_POINTS: usize = 7;

fn factorial(n: usize) -> f64 {
    (1..=n).product::<usize>() as f64
}

/// ∫ω_0^n.
pub fn volume<F: Family + ?Sized>(fam: &F) -> Result<f64, GeomError> {
    let nodes = fam.nodes();
    let [v] = accumulate::<1, _>(nodes.len(), |i| Ok([nodes[i].weight * fam.sample(i, 0.0, false)?.vol]))?;
    Ok(v)
}

/// [V, ∫φ ω^n, ∫φ ω_φ^n, J-integrand] at parameter s.
fn endpoint_integrals<F: Family + ?Sized>(fam: &F, s: f64) -> Result<[f64; 4], GeomError> {
    let n = fam.dim();
    let nf = factorial(n);
    let nodes = fam.nodes();
    accumulate::<4, _>(nodes.len(), |i| {
        let w = nodes[i].weight;
        let e = fam.endpoint(i, s)?;
        let (d0, d1) = (nf * herm::det(&e.g0, n).re, nf * herm::det(&e.g, n).re);
        let j = if n == 1 {
            0.5 * e.dphi[0].norm_sqr()
        } else {
            let mut p = herm::ZERO;
            for a in 0..2 {
                for b in 0..2 {
                    p[a][b] = e.dphi[a] * e.dphi[b].conj();
                }
            }
            let mix = herm::add(&herm::scale(&e.g, 1.0 / 3.0), &herm::scale(&e.g0, 2.0 / 3.0));
            herm::wedge(&p, &mix).re
        };
        Ok([w * d0, w * e.phi * d0, w * e.phi * d1, w * j])
    })
}

/// I(φ_s) = (1/V)∫φ(ω^n − ω_φ^n).
pub fn energy_i<F: Family + ?Sized>(fam: &F, s: f64) -> Result<f64, GeomError> {
    let [v, a, b, _] = endpoint_integrals(fam, s)?;
    Ok((a - b) / v)
}

/// J(φ_s) = (1/V) Σ_i (i+1)/(n+1) ∫ i∂φ∧∂̄φ∧ω^i∧ω_φ^{n−1−i}.
pub fn energy_j<F: Family + ?Sized>(fam: &F, s: f64) -> Result<f64, GeomError> {
    let [v, _, _, j] = endpoint_integrals(fam, s)?;
    Ok(j / v)
}

/// Aubin's functional J − (1/V)∫φ ω^n.
pub fn energy_aubin<F: Family + ?Sized>(fam: &F, s: f64) -> Result<f64, GeomError> {
    let [v, a, _, j] = endpoint_integrals(fam, s)?;
    Ok((j - a) / v)
}

/// Integrals over X at parameter s, each against ω_s^n.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RateIntegrals {
    pub vol: f64,
    pub phidot: f64,
    pub lap_scal: f64,
    pub phidot_scal: f64,
    pub lap: f64,
    pub ric_a: f64,
    pub phidot_td2: f64,
    pub phidot_ric2: f64,
    pub ric2: f64,
    /// ∫φ̇(|R|² − |Ric|²)
    pub phidot_rmr: f64,
    /// ∫(|R|² − |Ric|²)
    pub rmr: f64,
    pub scal: f64,
}

pub fn rate_integrals<F: Family + ?Sized>(fam: &F, s: f64, curvature: bool) -> Result<RateIntegrals, GeomError> {
    let nodes = fam.nodes();
    let t = accumulate::<12, _>(nodes.len(), |i| {
        let p: PathSample = fam.sample(i, s, curvature)?;
        let w = nodes[i].weight * p.vol;
        let rmr = p.norm_r2 - p.norm_ric2;
        Ok([
            w,
            w * p.phidot,
            w * p.lap_phidot * p.scal,
            w * p.phidot * p.scal,
            w * p.lap_phidot,
            w * p.ric_a,
            w * p.phidot * p.td2,
            w * p.phidot * p.ric2,
            w * p.ric2,
            w * p.phidot * rmr,
            w * rmr,
            w * p.scal,
        ])
    })?;
    Ok(RateIntegrals {
        vol: t[0],
        phidot: t[1],
        lap_scal: t[2],
        phidot_scal: t[3],
        lap: t[4],
        ric_a: t[5],
        phidot_td2: t[6],
        phidot_ric2: t[7],
        ric2: t[8],
        phidot_rmr: t[9],
        rmr: t[10],
        scal: t[11],
    })
}

/// Coefficients c_{l,k}, k = 0..=n+1, of one row of the expansion, and the
/// factor κ by which the Kähler class exceeds the hyperplane class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct F2Coefficients {
    pub row: Vec<f64>,
    pub kappa: f64,
}

impl F2Coefficients {
    pub fn new(row: &[Rat], kappa: f64) -> Self {
        F2Coefficients { row: row.iter().map(rat_to_f64).collect(), kappa }
    }
}

/// Rates of the functionals along the family, given the average scalar
/// curvature μ of the background.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Rates {
    aubin: f64,
    kenergy: f64,
    f2: f64,
}

fn f2_rate(n: usize, c: &F2Coefficients, r: &RateIntegrals) -> Result<f64, GeomError> {
    if c.row.len() != n + 2 {
        return Err(GeomError::Invalid(format!("expected {} coefficients, got {}", n + 2, c.row.len())));
    }
    let ck = |k: usize| c.kappa.powi(k as i32) * c.row[k] / factorial(k);
    let nf = n as f64;
    // transgression terms: ∫ T_k ω_s^n
    let mut total = 0.0;
    for k in 0..=n {
        if c.row[k] == 0.0 {
            continue;
        }
        let t = if k == n {
            r.lap / 2.0
        } else if k + 1 == n {
            (3.0 * r.lap_scal - r.ric_a) / (12.0 * nf)
        } else {
            return Err(GeomError::UnsupportedLevel);
        };
        total += ck(k) * t;
    }
    // −Σ κ^k k c_k/k! ∫φ̇ U_k ω_s^n
    for k in 1..=n + 1 {
        if c.row[k] == 0.0 {
            continue;
        }
        let u = if k == n + 1 {
            r.phidot
        } else if k == n {
            r.phidot_scal / (2.0 * nf)
        } else {
            r.phidot_td2
        };
        total -= ck(k) * k as f64 * u;
    }
    Ok(total)
}

fn rates_at<F: Family + ?Sized>(
    fam: &F,
    s: f64,
    v: f64,
    mu: f64,
    f2: Option<&F2Coefficients>,
    curvature: bool,
) -> Result<Rates, GeomError> {
    let r = rate_integrals(fam, s, curvature)?;
    Ok(Rates {
        aubin: -r.phidot / v,
        kenergy: -(r.phidot_scal - mu * r.phidot) / v,
        f2: match f2 {
            Some(c) => f2_rate(fam.dim(), c, &r)?,
            None => 0.0,
        },
    })
}

/// (V, μ) of the background metric.
fn background<F: Family + ?Sized>(fam: &F, curvature: bool) -> Result<(f64, f64), GeomError> {
    let r = rate_integrals(fam, 0.0, curvature)?;
    Ok((r.vol, r.scal / r.vol))
}

fn integrate<F: Family + ?Sized>(
    fam: &F,
    a: f64,
    b: f64,
    v: f64,
    mu: f64,
    f2: Option<&F2Coefficients>,
    curvature: bool,
) -> Result<Rates, GeomError> {
    let mut acc = Rates { aubin: 0.0, kenergy: 0.0, f2: 0.0 };
    if a == b {
        return Ok(acc);
    }
    for (s, w) in gauss_legendre_on(a, b, PATH_NODES) {
        let r = rates_at(fam, s, v, mu, f2, curvature)?;
        acc.aubin += w * r.aubin;
        acc.kenergy += w * r.kenergy;
        acc.f2 += w * r.f2;
    }
    Ok(acc)
}

/// Aubin's functional as −(1/V)∫₀^s∫φ̇ ω_u^n du.
pub fn energy_aubin_path<F: Family + ?Sized>(fam: &F, s: f64) -> Result<f64, GeomError> {
    let v = volume(fam)?;
    Ok(integrate(fam, 0.0, s, v, 0.0, None, false)?.aubin)
}

/// Mabuchi's K-energy −(1/V)∫₀^s∫φ̇(Scal − μ) ω_u^n du.
pub fn energy_kenergy<F: Family + ?Sized>(fam: &F, s: f64) -> Result<f64, GeomError> {
    let (v, mu) = background(fam, true)?;
    Ok(integrate(fam, 0.0, s, v, mu, None, true)?.kenergy)
}

/// The functional whose rate is the transgression formula with the given
/// coefficient row; terms above the dimension of X are absent.
pub fn energy_f2<F: Family + ?Sized>(fam: &F, s: f64, coeffs: &F2Coefficients) -> Result<f64, GeomError> {
    let (v, mu) = background(fam, true)?;
    Ok(integrate(fam, 0.0, s, v, mu, Some(coeffs), true)?.f2)
}

/// Both sides of the comparison between dF₂/ds and dE₁/ds on a surface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonTerms {
    pub df2: f64,
    pub de1: f64,
    pub rhs: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub dnu: f64,
    /// (1/V)∫φ̇ ω_s^n, the direction a misnormalized constant would move the RHS
    pub phidot_mean: f64,
}

pub fn comparison_terms<F: Family + ?Sized>(fam: &F, s: f64, coeffs: &F2Coefficients) -> Result<ComparisonTerms, GeomError> {
    if fam.dim() != 2 {
        return Err(GeomError::UnsupportedDimension(fam.dim()));
    }
    let r0 = rate_integrals(fam, 0.0, true)?;
    let v = r0.vol;
    let mu = r0.scal / v;
    let alpha = r0.ric2 / (2.0 * v);
    let beta = r0.rmr / (2.0 * v);
    let r = rate_integrals(fam, s, true)?;
    let dnu = -(r.phidot_scal - mu * r.phidot) / v;
    let de1 = 2.0 * r.lap_scal / v - 2.0 * (r.phidot_ric2 - r.phidot) / v;
    let rhs = 2.0 * r.lap_scal / v
        - 3.0 * (r.phidot_ric2 - alpha * r.phidot) / v
        - (r.phidot_rmr - beta * r.phidot) / v
        - 3.0 * mu * dnu;
    Ok(ComparisonTerms { df2: f2_rate(2, coeffs, &r)?, de1, rhs, alpha, beta, mu, dnu, phidot_mean: r.phidot / v })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Functional {
    #[serde(rename = "aubin")]
    Aubin,
    #[serde(rename = "I")]
    I,
    #[serde(rename = "J")]
    J,
    #[serde(rename = "kenergy")]
    KEnergy,
    #[serde(rename = "f2")]
    F2,
}

impl Functional {
    pub fn name(&self) -> &'static str {
        match self {
            Functional::Aubin => "aubin",
            Functional::I => "I",
            Functional::J => "J",
            Functional::KEnergy => "kenergy",
            Functional::F2 => "f2",
        }
    }

    fn needs_curvature(&self) -> bool {
        matches!(self, Functional::KEnergy | Functional::F2)
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, GeomError> {
        match s {
            "aubin" => Ok(Functional::Aubin),
            "I" => Ok(Functional::I),
            "J" => Ok(Functional::J),
            "kenergy" => Ok(Functional::KEnergy),
            "f2" => Ok(Functional::F2),
            _ => Err(GeomError::Invalid(format!("unknown functional {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Set to [`DEGENERATE_CONSTANT`] when the values are constant to
    /// within rounding, in which case `r2` carries no information.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<&'static str>,
}

pub const DEGENERATE_CONSTANT: &str = "degenerate-constant";

impl SlopeFit {
    pub fn is_degenerate(&self) -> bool {
        self.flag.is_some()
    }
}

/// Least squares y = slope·x + intercept.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Result<SlopeFit, GeomError> {
    if x.len() != y.len() {
        return Err(GeomError::Invalid("x and y differ in length".into()));
    }
    if x.len() < 4 {
        return Err(GeomError::TooFewSamples(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(GeomError::Invalid("sample abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let r2 = if syy <= f64::EPSILON * f64::EPSILON * n { 1.0 } else { 1.0 - ss_res / syy };
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let flag = (hi - lo <= 1e-9 * (1.0 + my.abs())).then_some(DEGENERATE_CONSTANT);
    Ok(SlopeFit { slope, intercept, r2, flag })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub log_t2: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyTrace {
    pub functional: Functional,
    pub samples: Vec<TraceSample>,
    #[serde(flatten)]
    pub fit: SlopeFit,
    pub fit_points: usize,
}

/// Values of a functional at φ_{λ(t)} for a family parameterized by
/// τ = −log t, and the slope against log t² over the smallest t.
pub fn asymptotic_trace<F: Family + ?Sized>(
    fam: &F,
    functional: Functional,
    t_grid: &[f64],
    f2: Option<&F2Coefficients>,
) -> Result<EnergyTrace, GeomError> {
    if t_grid.len() < 4 {
        return Err(GeomError::TooFewSamples(t_grid.len()));
    }
    if t_grid.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) || t_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(GeomError::Invalid("t grid must be strictly decreasing within (0, 1]".into()));
    }
    if functional == Functional::F2 && f2.is_none() {
        return Err(GeomError::Invalid("f2 needs a coefficient row".into()));
    }
    let curvature = functional.needs_curvature();
    let (v, mu) = background(fam, curvature)?;
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut tau_prev = 0.0;
    let mut acc = 0.0;
    for &t in t_grid {
        let tau = -t.ln();
        let value = match functional {
            Functional::Aubin => energy_aubin(fam, tau)?,
            Functional::I => energy_i(fam, tau)?,
            Functional::J => energy_j(fam, tau)?,
            Functional::KEnergy | Functional::F2 => {
                let r = integrate(fam, tau_prev, tau, v, mu, f2, true)?;
                acc += if functional == Functional::F2 { r.f2 } else { r.kenergy };
                tau_prev = tau;
                acc
            }
        };
        samples.push(TraceSample { t, log_t2: -2.0 * tau, value });
    }
    let k = FIT_POINTS.min(samples.len());
    let tail = &samples[samples.len() - k..];
    let x: Vec<f64> = tail.iter().map(|s| s.log_t2).collect();
    let y: Vec<f64> = tail.iter().map(|s| s.value).collect();
    Ok(EnergyTrace { functional, samples, fit: fit_slope(&x, &y)?, fit_points: k })
}

/// t = 2^0, 2^−1, …, 2^−octaves.
pub fn dyadic_grid(octaves: u32) -> Vec<f64> {
    (0..=octaves).map(|k| 0.5f64.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use crate::geom::{Curve, CurveGrid, CurveRay, HermForm, PotentialPath, ProjectiveGrid, Reparam, Term, C64};
    use crate::weights::OneParameterSubgroup;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn p1_path(amp: f64) -> PotentialPath {
        let p = [c(1.0, 0.0), c(0.5, 0.3)];
        PotentialPath::linear(
            1,
            &ProjectiveGrid { radial: 32, angular: 32 },
            vec![
                Term::Bump { amp, form: HermForm::projector(&p) },
                Term::Ratio { coef: 0.1, num: HermForm::diagonal(&[0.0, 1.0]), den: HermForm::diagonal(&[1.0, 2.0]) },
            ],
        )
        .unwrap()
    }

    #[test]
    fn constant_potentials() {
        let grid = ProjectiveGrid { radial: 12, angular: 8 };
        let path = PotentialPath::linear(1, &grid, vec![Term::Constant { value: 0.7 }]).unwrap();
        assert!((volume(&path).unwrap() - 1.0).abs() < 1e-12);
        assert!(energy_i(&path, 1.0).unwrap().abs() < 1e-12);
        assert!(energy_j(&path, 1.0).unwrap().abs() < 1e-12);
        assert!((energy_aubin(&path, 1.0).unwrap() + 0.7).abs() < 1e-12);
        assert!(energy_kenergy(&path, 1.0).unwrap().abs() < 1e-6);
        let zero = PotentialPath::linear(1, &grid, vec![]).unwrap();
        assert_eq!(energy_aubin(&zero, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn i_dominates_j() {
        let path = p1_path(0.15);
        let (i, j) = (energy_i(&path, 1.0).unwrap(), energy_j(&path, 1.0).unwrap());
        assert!(i >= j && j >= 0.0, "I = {i}, J = {j}");
        // on a curve I = 2J
        assert!((i - 2.0 * j).abs() < 1e-8 * i, "I = {i}, J = {j}");
    }

    #[test]
    fn aubin_endpoint_matches_path_integral() {
        let path = p1_path(0.15);
        let a = energy_aubin(&path, 1.0).unwrap();
        let b = energy_aubin_path(&path, 1.0).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn f2_reduces_on_p1() {
        let path = p1_path(0.3);
        let c0 = F2Coefficients::new(&[rat_int(0), rat_int(0), rat_int(1)], 1.0);
        let c1 = F2Coefficients::new(&[rat_int(0), rat_int(1), rat_int(-1)], 1.0);
        let aubin = energy_aubin(&path, 1.0).unwrap();
        let k = energy_kenergy(&path, 1.0).unwrap();
        assert!((energy_f2(&path, 1.0, &c0).unwrap() - aubin).abs() < 1e-8);
        assert!((energy_f2(&path, 1.0, &c1).unwrap() - 0.5 * k).abs() < 1e-6 * k.abs().max(1e-3));
    }

    #[test]
    fn reparameterized_path_gives_same_energy() {
        let path = p1_path(0.3);
        let quad = Reparam::new(&path, 1.0, 2);
        let a = energy_kenergy(&path, 1.0).unwrap();
        let b = energy_kenergy(&quad, 1.0).unwrap();
        assert!((a - b).abs() < 1e-8 * a.abs().max(1e-3), "{a} vs {b}");
    }

    #[test]
    fn fit_is_exact_on_lines() {
        let x = [0.0, -1.0, -2.0, -3.0, -4.0];
        let y: Vec<f64> = x.iter().map(|v| 0.25 * v + 1.5).collect();
        let f = fit_slope(&x, &y).unwrap();
        assert!((f.slope - 0.25).abs() < 1e-14 && (f.intercept - 1.5).abs() < 1e-14 && f.r2 > 0.999_999);
        assert_eq!(fit_slope(&x[..3], &y[..3]), Err(GeomError::TooFewSamples(3)));
        assert!("kenergy".parse::<Functional>().is_ok() && "K".parse::<Functional>().is_err());
    }

    #[test]
    fn curve_slopes() {
        let grid = CurveGrid { radial: 401, angular: 32, s_max: 40.0 };
        let grid_t = dyadic_grid(20);
        let cubic = CurveRay::new(&Curve::rational_normal(3), &OneParameterSubgroup::new(vec![1, 0, 0, -1]), &grid).unwrap();
        let tr = asymptotic_trace(&cubic, Functional::Aubin, &grid_t, None).unwrap();
        assert!((tr.fit.slope - 1.0 / 18.0).abs() < 1e-3, "{:?}", tr.fit);
        let id = CurveRay::new(&Curve::rational_normal(2), &OneParameterSubgroup::new(vec![0, 0, 0]), &grid).unwrap();
        let tr = asymptotic_trace(&id, Functional::KEnergy, &dyadic_grid(5), None).unwrap();
        assert!(tr.samples.iter().all(|s| s.value.abs() < 1e-12));
    }
}
