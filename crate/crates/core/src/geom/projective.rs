//! Potentials on P^n (n = 1, 2) built from Hermitian forms in the homogeneous
//! coordinates, with analytic first derivatives and complex Hessians.

use serde::Serialize;

use super::curvature::{curvature_at, FdOptions};
use super::herm::{self, Mat};
use super::quadrature::{projective_nodes, toric_nodes, Node, ProjectiveGrid, ToricGrid};
use super::{EndpointSample, Family, GeomError, PathSample, C64};
use crate::weights::OneParameterSubgroup;

/// Value, ∂_i f and ∂_i∂_j̄ f of a real function in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Jet {
    pub v: f64,
    pub d: [C64; 2],
    pub h: Mat,
}

impl Jet {
    pub fn zero() -> Jet {
        Jet { v: 0.0, d: [C64::new(0.0, 0.0); 2], h: herm::ZERO }
    }

    pub fn constant(c: f64) -> Jet {
        Jet { v: c, ..Jet::zero() }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet { v: self.v + o.v, d: [self.d[0] + o.d[0], self.d[1] + o.d[1]], h: herm::add(&self.h, &o.h) }
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet { v: self.v * c, d: [self.d[0] * c, self.d[1] * c], h: herm::scale(&self.h, c) }
    }

    /// f∘self for a real function f with f(v), f'(v), f''(v) = f0, f1, f2.
    pub fn map(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let mut h = herm::scale(&self.h, f1);
        for i in 0..2 {
            for j in 0..2 {
                h[i][j] += self.d[i] * self.d[j].conj() * f2;
            }
        }
        Jet { v: f0, d: [self.d[0] * f1, self.d[1] * f1], h }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut h = herm::add(&herm::scale(&self.h, o.v), &herm::scale(&o.h, self.v));
        for i in 0..2 {
            for j in 0..2 {
                h[i][j] += self.d[i] * o.d[j].conj() + o.d[i] * self.d[j].conj();
            }
        }
        Jet { v: self.v * o.v, d: [self.d[0] * o.v + o.d[0] * self.v, self.d[1] * o.v + o.d[1] * self.v], h }
    }

    pub fn recip(&self) -> Jet {
        let v = self.v;
        self.map(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.map(e, e, e)
    }

    pub fn ln(&self) -> Jet {
        let v = self.v;
        self.map(v.ln(), 1.0 / v, -1.0 / (v * v))
    }
}

/// Hermitian (n+1)×(n+1) matrix acting on homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HermForm {
    dim: usize,
    #[serde(serialize_with = "ser_entries")]
    entries: Vec<C64>,
}

fn ser_entries<S: serde::Serializer>(e: &[C64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for c in e {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

impl HermForm {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self, GeomError> {
        if entries.len() != dim * dim {
            return Err(GeomError::Invalid(format!("form needs {} entries", dim * dim)));
        }
        for i in 0..dim {
            for j in 0..dim {
                if (entries[i * dim + j] - entries[j * dim + i].conj()).norm() > 1e-12 {
                    return Err(GeomError::Invalid("form is not Hermitian".into()));
                }
            }
        }
        Ok(HermForm { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        HermForm::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let dim = d.len();
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, x) in d.iter().enumerate() {
            entries[i * dim + i] = C64::new(*x, 0.0);
        }
        HermForm { dim, entries }
    }

    /// p·p†/|p|², so that Z†QZ/Z†Z is the squared cosine of the angle to p.
    pub fn projector(p: &[C64]) -> Self {
        let dim = p.len();
        let n2: f64 = p.iter().map(|c| c.norm_sqr()).sum();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in p {
            for b in p {
                entries.push(a * b.conj() / n2);
            }
        }
        HermForm { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    /// Z†QZ in the chart X_chart = 1.
    pub(crate) fn jet(&self, chart: usize, z: &[C64; 2]) -> Jet {
        let x = homogeneous(self.dim, chart, z);
        let idx = chart_indices(self.dim, chart);
        let n = self.dim - 1;
        let mut v = C64::new(0.0, 0.0);
        for a in 0..self.dim {
            for b in 0..self.dim {
                v += x[a].conj() * self.at(a, b) * x[b];
            }
        }
        let mut jet = Jet::constant(v.re);
        for i in 0..n {
            jet.d[i] = (0..self.dim).map(|a| x[a].conj() * self.at(a, idx[i])).sum();
            for j in 0..n {
                jet.h[i][j] = self.at(idx[j], idx[i]);
            }
        }
        jet
    }
}

pub(crate) fn homogeneous(dim: usize, chart: usize, z: &[C64; 2]) -> Vec<C64> {
    let mut x = Vec::with_capacity(dim);
    let mut k = 0;
    for j in 0..dim {
        if j == chart {
            x.push(C64::new(1.0, 0.0));
        } else {
            x.push(z[k]);
            k += 1;
        }
    }
    x
}

fn chart_indices(dim: usize, chart: usize) -> Vec<usize> {
    (0..dim).filter(|&j| j != chart).collect()
}

/// log(1 + |z|²), the Fubini–Study potential of the chart.
pub(crate) fn background(n: usize, z: &[C64; 2]) -> Jet {
    let mut d = Jet::constant(1.0 + z.iter().take(n).map(|c| c.norm_sqr()).sum::<f64>());
    for i in 0..n {
        d.d[i] = z[i].conj();
        d.h[i][i] = C64::new(1.0, 0.0);
    }
    d.ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Term {
    Constant { value: f64 },
    /// amp·exp(Z†QZ / Z†Z)
    Bump { amp: f64, form: HermForm },
    /// coef·log(Z†AZ / Z†BZ)
    LogRatio { coef: f64, num: HermForm, den: HermForm },
    /// coef·Z†AZ / Z†BZ
    Ratio { coef: f64, num: HermForm, den: HermForm },
}

impl Term {
    fn forms(&self) -> Vec<&HermForm> {
        match self {
            Term::Constant { .. } => vec![],
            Term::Bump { form, .. } => vec![form],
            Term::LogRatio { num, den, .. } | Term::Ratio { num, den, .. } => vec![num, den],
        }
    }

    pub(crate) fn jet(&self, n: usize, chart: usize, z: &[C64; 2]) -> Jet {
        match self {
            Term::Constant { value } => Jet::constant(*value),
            Term::Bump { amp, form } => {
                let u = form.jet(chart, z).mul(&HermForm::identity(n + 1).jet(chart, z).recip());
                u.exp().scale(*amp)
            }
            Term::LogRatio { coef, num, den } => {
                num.jet(chart, z).ln().add(&den.jet(chart, z).ln().scale(-1.0)).scale(*coef)
            }
            Term::Ratio { coef, num, den } => num.jet(chart, z).mul(&den.jet(chart, z).recip()).scale(*coef),
        }
    }
}

/// Families of relative potentials on P^n evaluated chartwise.
pub(crate) trait ChartFamily: Sync {
    fn dim(&self) -> usize;
    /// (φ_s, ∂_s φ_s)
    fn jets(&self, chart: usize, z: &[C64; 2], s: f64) -> (Jet, Jet);

    fn metric(&self, chart: usize, z: &[C64; 2], s: f64) -> Mat {
        herm::add(&background(self.dim(), z).h, &self.jets(chart, z, s).0.h)
    }
}

fn nonpositive(node: &Node) -> GeomError {
    GeomError::NonPositiveMetric { chart: node.chart, z: format!("{:?}", &node.z) }
}

pub(crate) fn chart_sample<F: ChartFamily + ?Sized>(
    fam: &F,
    node: &Node,
    s: f64,
    curvature: bool,
) -> Result<PathSample, GeomError> {
    let n = fam.dim();
    let (_, phidot) = fam.jets(node.chart, &node.z, s);
    let g = fam.metric(node.chart, &node.z, s);
    let m = herm::frame(&g, n).ok_or_else(|| nonpositive(node))?;
    let nfact = if n == 2 { 2.0 } else { 1.0 };
    let a = herm::congruence(&m, &phidot.h, n);
    let mut out = PathSample {
        vol: nfact * herm::det(&g, n).re,
        phidot: phidot.v,
        lap_phidot: herm::trace(&a, n).re,
        ..PathSample::default()
    };
    if curvature {
        let cp = curvature_at(&|w: &[C64; 2]| Ok(fam.metric(node.chart, w, s)), &node.z, n, &FdOptions::default())
            .map_err(|_| nonpositive(node))?;
        out.scal = cp.scal;
        out.norm_r2 = cp.norm_r2;
        out.norm_ric2 = cp.norm_ric2;
        out.ric_a = herm::trace(&herm::mul(&cp.ric_frame, &a, n), n).re;
        if n == 2 {
            out.td2 = cp.td2_ratio();
            out.ric2 = cp.ric2_ratio();
        }
    }
    Ok(out)
}

pub(crate) fn chart_endpoint<F: ChartFamily + ?Sized>(fam: &F, node: &Node, s: f64) -> Result<EndpointSample, GeomError> {
    let n = fam.dim();
    let (phi, _) = fam.jets(node.chart, &node.z, s);
    let g0 = background(n, &node.z).h;
    let g = fam.metric(node.chart, &node.z, s);
    herm::frame(&g, n).ok_or_else(|| nonpositive(node))?;
    Ok(EndpointSample { phi: phi.v, dphi: phi.d, g0, g })
}

/// φ_s = Σ_i h_i(s)·ψ_i with polynomial profiles h_i, h_i(0) = 0.
#[derive(Clone, Debug)]
pub struct PotentialPath {
    n: usize,
    nodes: Vec<Node>,
    terms: Vec<(Vec<f64>, Term)>,
}

fn poly_and_derivative(c: &[f64], s: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &a in c.iter().rev() {
        dp = dp * s + p;
        p = p * s + a;
    }
    (p, dp)
}

impl PotentialPath {
    pub fn new(n: usize, grid: &ProjectiveGrid, terms: Vec<(Vec<f64>, Term)>) -> Result<Self, GeomError> {
        if !(1..=2).contains(&n) {
            return Err(GeomError::UnsupportedDimension(n));
        }
        for (profile, term) in &terms {
            if profile.first().copied().unwrap_or(0.0) != 0.0 {
                return Err(GeomError::Invalid("path profiles must vanish at s = 0".into()));
            }
            if term.forms().iter().any(|f| f.dim() != n + 1) {
                return Err(GeomError::Invalid(format!("forms must be {}×{}", n + 1, n + 1)));
            }
        }
        Ok(PotentialPath { n, nodes: projective_nodes(n, grid)?, terms })
    }

    /// s ↦ s·ψ.
    pub fn linear(n: usize, grid: &ProjectiveGrid, terms: Vec<Term>) -> Result<Self, GeomError> {
        PotentialPath::new(n, grid, terms.into_iter().map(|t| (vec![0.0, 1.0], t)).collect())
    }

    /// Same potentials with new profiles; useful for comparing paths with equal endpoints.
    pub fn with_profiles(&self, profiles: Vec<Vec<f64>>) -> Result<Self, GeomError> {
        if profiles.len() != self.terms.len() {
            return Err(GeomError::Invalid("one profile per term".into()));
        }
        let terms = profiles.into_iter().zip(self.terms.iter().map(|(_, t)| t.clone())).collect();
        Ok(PotentialPath { n: self.n, nodes: self.nodes.clone(), terms })
    }

    pub fn with_grid(&self, grid: &ProjectiveGrid) -> Result<Self, GeomError> {
        Ok(PotentialPath { n: self.n, nodes: projective_nodes(self.n, grid)?, terms: self.terms.clone() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<f64>, Term)] {
        &self.terms
    }

    pub fn potential_value(&self, chart: usize, z: &[C64; 2], s: f64) -> f64 {
        self.jets(chart, z, s).0.v
    }
}

impl ChartFamily for PotentialPath {
    fn dim(&self) -> usize {
        self.n
    }

    fn jets(&self, chart: usize, z: &[C64; 2], s: f64) -> (Jet, Jet) {
        let mut phi = Jet::zero();
        let mut phidot = Jet::zero();
        for (profile, term) in &self.terms {
            let (h, dh) = poly_and_derivative(profile, s);
            if h == 0.0 && dh == 0.0 {
                continue;
            }
            let j = term.jet(self.n, chart, z);
            phi = phi.add(&j.scale(h));
            phidot = phidot.add(&j.scale(dh));
        }
        (phi, phidot)
    }
}

impl Family for PotentialPath {
    fn dim(&self) -> usize {
        self.n
    }

    fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    fn sample(&self, node: usize, s: f64, curvature: bool) -> Result<PathSample, GeomError> {
        chart_sample(self, &self.nodes[node], s, curvature)
    }

    fn endpoint(&self, node: usize, s: f64) -> Result<EndpointSample, GeomError> {
        chart_endpoint(self, &self.nodes[node], s)
    }
}

/// The Bergman ray of P^n under λ with the coordinate sections:
/// φ_τ = log Σ|t^{r_k}X_k|² − log Σ|X_k|², t = e^{−τ}.
#[derive(Clone, Debug)]
pub struct ProjectiveRay {
    n: usize,
    shifted: Vec<f64>,
    r_min: f64,
    nodes: Vec<Node>,
}

impl ProjectiveRay {
    pub fn new(n: usize, lambda: &OneParameterSubgroup, grid: &ToricGrid) -> Result<Self, GeomError> {
        if lambda.len() != n + 1 {
            return Err(GeomError::Invalid(format!("λ needs {} weights", n + 1)));
        }
        let r_min = *lambda.r.iter().min().unwrap() as f64;
        Ok(ProjectiveRay {
            n,
            shifted: lambda.r.iter().map(|&r| r as f64 - r_min).collect(),
            r_min,
            nodes: toric_nodes(n, grid)?,
        })
    }

    fn weights(&self, tau: f64) -> Vec<f64> {
        self.shifted.iter().map(|r| (-2.0 * r * tau).exp()).collect()
    }

    /// (e_i, e_i|x_i|², Q = Σ e_i|x_i|²) at a node.
    fn moved(&self, nd: &Node, tau: f64) -> (Vec<f64>, Vec<f64>, f64) {
        let e = self.weights(tau);
        let x = homogeneous(self.n + 1, nd.chart, &nd.z);
        let y: Vec<f64> = e.iter().zip(&x).map(|(w, xi)| w * xi.norm_sqr()).collect();
        let q = y.iter().sum();
        (e, y, q)
    }
}

impl ChartFamily for ProjectiveRay {
    fn dim(&self) -> usize {
        self.n
    }

    fn jets(&self, chart: usize, z: &[C64; 2], tau: f64) -> (Jet, Jet) {
        let e = self.weights(tau);
        let de: Vec<f64> = self.shifted.iter().zip(&e).map(|(r, x)| -2.0 * r * x).collect();
        let q = HermForm::diagonal(&e).jet(chart, z);
        let id = HermForm::identity(self.n + 1).jet(chart, z);
        let phi = q.ln().add(&id.ln().scale(-1.0)).add(&Jet::constant(-2.0 * self.r_min * tau));
        let phidot = HermForm::diagonal(&de).jet(chart, z).mul(&q.recip()).add(&Jet::constant(-2.0 * self.r_min));
        (phi, phidot)
    }

    /// ∂∂̄ log Z†E_τZ directly: the background and φ cancel to many digits
    /// where the moved metric is small.
    fn metric(&self, chart: usize, z: &[C64; 2], tau: f64) -> Mat {
        HermForm::diagonal(&self.weights(tau)).jet(chart, z).ln().h
    }
}

impl Family for ProjectiveRay {
    fn dim(&self) -> usize {
        self.n
    }

    fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// ω_τ is the pullback of the Fubini–Study form by a diagonal
    /// automorphism, so with p_i = e_i|x_i|²/Q every quantity has a closed
    /// form free of cancellation: φ̇ = −2Σ r_i p_i, Δφ̇ = −2Σ r_i (1 − (n+1)p_i)
    /// and the curvature is that of Fubini–Study.
    fn sample(&self, node: usize, tau: f64, curvature: bool) -> Result<PathSample, GeomError> {
        let nd = &self.nodes[node];
        let (e, y, q) = self.moved(nd, tau);
        let n = self.n as f64;
        let nfact = if self.n == 2 { 2.0 } else { 1.0 };
        let r = |i: usize| self.shifted[i] + self.r_min;
        let mean_r: f64 = (0..=self.n).map(|i| r(i) * y[i] / q).sum();
        let sum_r: f64 = (0..=self.n).map(r).sum();
        let mut out = PathSample {
            vol: nfact * e.iter().product::<f64>() / q.powi(self.n as i32 + 1),
            phidot: -2.0 * mean_r,
            lap_phidot: -2.0 * (sum_r - (n + 1.0) * mean_r),
            ..PathSample::default()
        };
        if curvature {
            out.scal = n * (n + 1.0);
            out.norm_ric2 = n * (n + 1.0) * (n + 1.0);
            out.norm_r2 = 2.0 * n * (n + 1.0);
            out.ric_a = (n + 1.0) * out.lap_phidot;
            if self.n == 2 {
                out.td2 = 1.0;
                out.ric2 = 9.0;
            }
        }
        Ok(out)
    }

    fn endpoint(&self, node: usize, tau: f64) -> Result<EndpointSample, GeomError> {
        let nd = &self.nodes[node];
        let (e, y, q) = self.moved(nd, tau);
        let idx = chart_indices(self.n + 1, nd.chart);
        let d = 1.0 + nd.z.iter().take(self.n).map(|c| c.norm_sqr()).sum::<f64>();
        let mut dphi = [C64::new(0.0, 0.0); 2];
        let mut g = herm::ZERO;
        for (a, &i) in idx.iter().enumerate() {
            let za = nd.z[a];
            dphi[a] = za.conj() * (e[i] / q - 1.0 / d);
            for (b, &j) in idx.iter().enumerate() {
                g[a][b] = if a == b {
                    C64::new(e[i] * (q - y[i]) / (q * q), 0.0)
                } else {
                    -za.conj() * nd.z[b] * (e[i] * e[j] / (q * q))
                };
            }
        }
        Ok(EndpointSample {
            phi: (q / d).ln() - 2.0 * self.r_min * tau,
            dphi,
            g0: background(self.n, &nd.z).h,
            g,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Central differences of the value, compared with the analytic jet.
    fn check_jet(term: &Term, n: usize, chart: usize, z: [C64; 2]) {
        let f = |w: &[C64; 2]| term.jet(n, chart, w).v;
        let j = term.jet(n, chart, &z);
        let h = 1e-4;
        for i in 0..n {
            let mut e = [c(0.0, 0.0); 2];
            e[i] = c(1.0, 0.0);
            let shift = |t: C64| [z[0] + e[0] * t, z[1] + e[1] * t];
            let dx = (f(&shift(c(h, 0.0))) - f(&shift(c(-h, 0.0)))) / (2.0 * h);
            let dy = (f(&shift(c(0.0, h))) - f(&shift(c(0.0, -h)))) / (2.0 * h);
            let d = c(dx, -dy) * 0.5;
            assert!((d - j.d[i]).norm() < 1e-6, "∂{i}: {d} vs {}", j.d[i]);
            let lap = (f(&shift(c(h, 0.0))) + f(&shift(c(-h, 0.0))) + f(&shift(c(0.0, h))) + f(&shift(c(0.0, -h)))
                - 4.0 * f(&z))
                / (h * h);
            assert!((lap / 4.0 - j.h[i][i].re).abs() < 1e-5, "H{i}{i}");
        }
    }

    #[test]
    fn jets_match_differences() {
        let p = [c(1.0, 0.0), c(0.3, -0.2), c(-0.5, 0.4)];
        let z = [c(0.2, 0.1), c(-0.4, 0.3)];
        for chart in 0..3 {
            check_jet(&Term::Bump { amp: 0.3, form: HermForm::projector(&p) }, 2, chart, z);
            check_jet(
                &Term::LogRatio { coef: 0.7, num: HermForm::diagonal(&[1.0, 2.0, 0.5]), den: HermForm::identity(3) },
                2,
                chart,
                z,
            );
            check_jet(
                &Term::Ratio {
                    coef: 1.3,
                    num: HermForm::projector(&p),
                    den: HermForm::diagonal(&[1.0, 3.0, 2.0]),
                },
                2,
                chart,
                z,
            );
        }
        check_jet(&Term::Bump { amp: -0.2, form: HermForm::diagonal(&[0.0, 1.5]) }, 1, 1, [c(0.6, -0.3), c(0.0, 0.0)]);
    }

    #[test]
    fn bumps_are_chart_independent() {
        let p = [c(0.4, 0.1), c(1.0, 0.0), c(0.2, -0.7)];
        let t = Term::Bump { amp: 1.0, form: HermForm::projector(&p) };
        let x = [c(0.5, 0.5), c(1.0, 0.0), c(-0.3, 0.2)];
        let in_chart = |k: usize| {
            let others: Vec<C64> = (0..3).filter(|&j| j != k).map(|j| x[j] / x[k]).collect();
            t.jet(2, k, &[others[0], others[1]]).v
        };
        assert!((in_chart(0) - in_chart(1)).abs() < 1e-14);
        assert!((in_chart(2) - in_chart(1)).abs() < 1e-14);
    }

    #[test]
    fn ray_curvature_matches_finite_differences() {
        for n in [1, 2] {
            let lam = OneParameterSubgroup::new(if n == 1 { vec![1, -1] } else { vec![2, 0, -1] });
            let ray = ProjectiveRay::new(n, &lam, &ToricGrid { radial: 5, depth: 2.0, reach: 2.0 }).unwrap();
            for node in 0..ray.nodes().len() {
                let nd = ray.nodes[node];
                let exact = ray.sample(node, 0.4, true).unwrap();
                let fd = chart_sample(&ray, &nd, 0.4, true).unwrap();
                let pairs = [
                    (exact.vol, fd.vol),
                    (exact.phidot, fd.phidot),
                    (exact.lap_phidot, fd.lap_phidot),
                    (exact.scal, fd.scal),
                    (exact.norm_r2, fd.norm_r2),
                    (exact.ric_a, fd.ric_a),
                    (exact.td2, fd.td2),
                    (exact.ric2, fd.ric2),
                ];
                for (a, b) in pairs {
                    assert!((a - b).abs() < 1e-5 * (1.0 + a.abs()), "n={n} node {node}: {a} vs {b}");
                }
                let (ea, eb) = (ray.endpoint(node, 0.4).unwrap(), chart_endpoint(&ray, &nd, 0.4).unwrap());
                assert!((ea.phi - eb.phi).abs() < 1e-12);
                for a in 0..n {
                    assert!((ea.dphi[a] - eb.dphi[a]).norm() < 1e-12);
                    for b in 0..n {
                        assert!((ea.g[a][b] - eb.g[a][b]).norm() < 1e-12, "{:?} {:?}", ea.g, eb.g);
                    }
                }
            }
        }
    }

    #[test]
    fn ray_keeps_unit_volume_deep_in_the_degeneration() {
        for (n, r) in [(1, vec![1, -1]), (2, vec![1, 0, -1])] {
            let ray = ProjectiveRay::new(n, &OneParameterSubgroup::new(r), &ToricGrid::default()).unwrap();
            for tau in [0.0, 5.0, 14.0] {
                let vol: f64 = (0..ray.nodes().len())
                    .map(|i| ray.nodes()[i].weight * ray.sample(i, tau, false).unwrap().vol)
                    .sum();
                assert!((vol - 1.0).abs() < 1e-9, "n={n} τ={tau}: {vol}");
            }
        }
    }

    #[test]
    fn ray_velocity_is_the_tau_derivative() {
        let ray = ProjectiveRay::new(2, &OneParameterSubgroup::new(vec![1, 0, -1]), &ToricGrid::default()).unwrap();
        let z = [c(0.3, 0.2), c(-0.5, 0.1)];
        let h = 1e-5;
        let fd = (ray.jets(0, &z, 1.0 + h).0.v - ray.jets(0, &z, 1.0 - h).0.v) / (2.0 * h);
        assert!((fd - ray.jets(0, &z, 1.0).1.v).abs() < 1e-8);
        assert_eq!(ray.jets(1, &z, 0.0).0.v.abs() < 1e-15, true);
    }

    #[test]
    fn rejects_bad_input() {
        let grid = ProjectiveGrid::default();
        assert!(PotentialPath::new(3, &grid, vec![]).is_err());
        assert!(PotentialPath::new(1, &grid, vec![(vec![1.0], Term::Constant { value: 1.0 })]).is_err());
        assert!(HermForm::new(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]).is_err());
        let t = Term::Bump { amp: 1.0, form: HermForm::identity(3) };
        assert!(PotentialPath::linear(1, &grid, vec![t]).is_err());
    }
}
