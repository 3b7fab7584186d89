//! Curvature of a chart metric from finite differences of the metric itself.

use serde::Serialize;

use super::herm::{self, Mat};
use super::projective::{ChartFamily, PotentialPath};
use super::{GeomError, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FdOptions {
    /// base step, scaled by 1 + |z|
    pub h: f64,
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions { h: 1e-2, richardson: true }
    }
}

/// Metric and curvature at a point. Tensors carrying a `frame` suffix are
/// components in the unitary frame M with M·g·M† = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvaturePointData {
    pub n: usize,
    pub g: [[C64; 2]; 2],
    pub scal: f64,
    pub norm_ric2: f64,
    pub norm_r2: f64,
    /// Λ-contraction of the full curvature tensor
    pub ric_frame: [[C64; 2]; 2],
    /// −∂∂̄ log det g
    pub ric_logdet_frame: [[C64; 2]; 2],
    /// r_frame[c][d][a][b] = R_{ab̄cd̄}
    pub r_frame: [[[[C64; 2]; 2]; 2]; 2],
}

impl CurvaturePointData {
    fn theta_trace(&self) -> f64 {
        // Σ_{a,b} D(Θ_a^b, Θ_b^a) where (Θ_a^b)_{cd̄} = R_{ab̄cd̄}
        let theta = |a: usize, b: usize| -> Mat {
            let mut m = herm::ZERO;
            for (c, row) in m.iter_mut().enumerate() {
                for (d, x) in row.iter_mut().enumerate() {
                    *x = self.r_frame[c][d][a][b];
                }
            }
            m
        };
        let mut s = C64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                s += herm::wedge(&theta(a, b), &theta(b, a));
            }
        }
        s.re
    }

    /// Td₂∧ω^{n−2}/ω^n on a surface.
    pub fn td2_ratio(&self) -> f64 {
        let ric = herm::wedge(&self.ric_frame, &self.ric_frame).re;
        (1.5 * ric - 0.5 * self.theta_trace()) / 24.0
    }

    /// Ric∧Ric/ω² on a surface.
    pub fn ric2_ratio(&self) -> f64 {
        herm::wedge(&self.ric_frame, &self.ric_frame).re / 2.0
    }

    /// 12·n!·Td₂∧ω^{n−2}/ω^n with Ric taken as −∂∂̄ log det g.
    pub fn td2_lhs(&self) -> f64 {
        let ric = herm::wedge(&self.ric_logdet_frame, &self.ric_logdet_frame).re;
        1.5 * ric - 0.5 * self.theta_trace()
    }

    /// (3S² − 4|Ric|² + |R|²)/(n(n−1)).
    pub fn td2_rhs(&self) -> f64 {
        (3.0 * self.scal * self.scal - 4.0 * self.norm_ric2 + self.norm_r2) / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Td2Residual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

type Vals = [C64; 5];

fn eval<M>(metric: &M, z: &[C64; 2], n: usize) -> Result<Vals, GeomError>
where
    M: Fn(&[C64; 2]) -> Result<Mat, GeomError> + ?Sized,
{
    let g = metric(z)?;
    herm::frame(&g, n).ok_or_else(|| GeomError::NonPositiveMetric { chart: 0, z: format!("{z:?}") })?;
    let ld = herm::det(&g, n).re.ln();
    Ok([g[0][0], g[0][1], g[1][0], g[1][1], C64::new(ld, 0.0)])
}

fn lin(a: &Vals, ca: C64, b: &Vals, cb: C64) -> Vals {
    std::array::from_fn(|i| a[i] * ca + b[i] * cb)
}

fn directions(n: usize) -> Vec<[C64; 2]> {
    let o = C64::new(0.0, 0.0);
    let r = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    if n == 1 {
        vec![[r, o], [i, o]]
    } else {
        vec![[r, o], [i, o], [o, r], [o, i], [r, r], [i, i], [r, i], [i, -r]]
    }
}

struct Derivs {
    d: [Vals; 2],
    h: [[Vals; 2]; 2],
}

fn derivs<M>(metric: &M, z: &[C64; 2], n: usize, h: f64) -> Result<Derivs, GeomError>
where
    M: Fn(&[C64; 2]) -> Result<Mat, GeomError> + ?Sized,
{
    let f0 = eval(metric, z, n)?;
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for v in directions(n) {
        let at = |t: f64| eval(metric, &[z[0] + v[0] * t, z[1] + v[1] * t], n);
        let (m2, m1, p1, p2) = (at(-2.0 * h)?, at(-h)?, at(h)?, at(2.0 * h)?);
        d1.push(std::array::from_fn::<C64, 5, _>(|k| (-p2[k] + p1[k] * 8.0 - m1[k] * 8.0 + m2[k]) / (12.0 * h)));
        d2.push(std::array::from_fn::<C64, 5, _>(|k| {
            (-p2[k] + p1[k] * 16.0 - f0[k] * 30.0 + m1[k] * 16.0 - m2[k]) / (12.0 * h * h)
        }));
    }
    let half = C64::new(0.5, 0.0);
    let quarter = C64::new(0.25, 0.0);
    let mi = C64::new(0.0, -0.5);
    let zero = [C64::new(0.0, 0.0); 5];
    let mut out = Derivs { d: [zero; 2], h: [[zero; 2]; 2] };
    for k in 0..n {
        out.d[k] = lin(&d1[2 * k], half, &d1[2 * k + 1], mi);
        out.h[k][k] = lin(&d2[2 * k], quarter, &d2[2 * k + 1], quarter);
    }
    if n == 2 {
        let l1 = lin(&d2[4], quarter, &d2[5], quarter);
        let l2 = lin(&d2[6], quarter, &d2[7], quarter);
        let diag = lin(&out.h[0][0], C64::new(1.0, 0.0), &out.h[1][1], C64::new(1.0, 0.0));
        let p = lin(&l1, C64::new(1.0, 0.0), &diag, C64::new(-1.0, 0.0));
        let q = lin(&l2, C64::new(1.0, 0.0), &diag, C64::new(-1.0, 0.0));
        out.h[0][1] = lin(&p, half, &q, C64::new(0.0, 0.5));
        out.h[1][0] = lin(&p, half, &q, C64::new(0.0, -0.5));
    }
    Ok(out)
}

fn to_mat(v: &Vals) -> Mat {
    [[v[0], v[1]], [v[2], v[3]]]
}

pub(crate) fn curvature_at<M>(metric: &M, z: &[C64; 2], n: usize, opts: &FdOptions) -> Result<CurvaturePointData, GeomError>
where
    M: Fn(&[C64; 2]) -> Result<Mat, GeomError> + ?Sized,
{
    if !(1..=2).contains(&n) {
        return Err(GeomError::UnsupportedDimension(n));
    }
    let h = opts.h * (1.0 + (z[0].norm_sqr() + z[1].norm_sqr()).sqrt());
    let mut dv = derivs(metric, z, n, h)?;
    if opts.richardson {
        let fine = derivs(metric, z, n, h / 2.0)?;
        let (a, b) = (C64::new(16.0 / 15.0, 0.0), C64::new(-1.0 / 15.0, 0.0));
        for k in 0..2 {
            dv.d[k] = lin(&fine.d[k], a, &dv.d[k], b);
            for l in 0..2 {
                dv.h[k][l] = lin(&fine.h[k][l], a, &dv.h[k][l], b);
            }
        }
    }
    let g = metric(z)?;
    let m = herm::frame(&g, n).ok_or_else(|| GeomError::NonPositiveMetric { chart: 0, z: format!("{z:?}") })?;
    let ginv = herm::inverse(&g, n);

    // chart components R[k][l] = (R_{ij̄kl̄})_{ij}
    let mut r = [[herm::ZERO; 2]; 2];
    let mut ricld = herm::ZERO;
    for k in 0..n {
        for l in 0..n {
            let dk = to_mat(&dv.d[k]);
            let dl = to_mat(&dv.d[l]);
            let quad = herm::mul(&herm::mul(&dk, &ginv, n), &herm::adjoint(&dl), n);
            r[k][l] = herm::sub(&quad, &to_mat(&dv.h[k][l]));
            ricld[k][l] = -dv.h[k][l][4];
        }
    }
    let inner: [[Mat; 2]; 2] = std::array::from_fn(|k| std::array::from_fn(|l| herm::congruence(&m, &r[k][l], n)));
    let mut rf = [[herm::ZERO; 2]; 2];
    for c in 0..n {
        for d in 0..n {
            let mut acc = herm::ZERO;
            for k in 0..n {
                for l in 0..n {
                    acc = herm::add(&acc, &herm::cscale(&inner[k][l], m[c][k] * m[d][l].conj()));
                }
            }
            rf[c][d] = acc;
        }
    }
    let mut ric = herm::ZERO;
    let mut norm_r2 = 0.0;
    for c in 0..n {
        for d in 0..n {
            ric[c][d] = herm::trace(&rf[c][d], n);
            norm_r2 += herm::norm_sqr(&rf[c][d], n);
        }
    }
    Ok(CurvaturePointData {
        n,
        g,
        scal: herm::trace(&ric, n).re,
        norm_ric2: herm::norm_sqr(&ric, n),
        norm_r2,
        ric_frame: ric,
        ric_logdet_frame: herm::congruence(&m, &ricld, n),
        r_frame: rf,
    })
}

/// Metric g_s = g_FS + ∂∂̄φ_s of a potential path and its curvature at z in
/// the given chart.
pub fn metric_and_curvature(
    path: &PotentialPath,
    chart: usize,
    z: [C64; 2],
    s: f64,
    opts: &FdOptions,
) -> Result<CurvaturePointData, GeomError> {
    let n = path.dim();
    if chart > n {
        return Err(GeomError::Invalid(format!("chart {chart} on P^{n}")));
    }
    curvature_at(&|w: &[C64; 2]| Ok(path.metric(chart, w, s)), &z, n, opts)
        .map_err(|_| GeomError::NonPositiveMetric { chart, z: format!("{z:?}") })
}

/// Both sides of 12·n!·Td₂∧ω^{n−2} = (3S² − 4|Ric|² + |R|²)/(n(n−1))·ω^n
/// on a surface, the left side with Ric from log det g.
pub fn td2_pointwise_check(
    path: &PotentialPath,
    chart: usize,
    z: [C64; 2],
    s: f64,
    opts: &FdOptions,
) -> Result<Td2Residual, GeomError> {
    if path.dim() != 2 {
        return Err(GeomError::UnsupportedDimension(path.dim()));
    }
    let cp = metric_and_curvature(path, chart, z, s, opts)?;
    let (lhs, rhs) = (cp.td2_lhs(), cp.td2_rhs());
    Ok(Td2Residual { lhs, rhs, residual: (lhs - rhs).abs() })
}
