//! Numerical side: Bergman potentials along one-parameter degenerations,
//! metrics and curvature on charts of P¹ and P², the energy functionals and
//! the slopes of their logarithmic asymptotics.
//!
//! Kähler forms are normalized as ω = (i/2π) Σ g_{ij̄} dz_i∧dz̄_j, so the
//! Fubini–Study form of P^n has volume one and ω^n = n!·det g·dLeb/πⁿ.

mod curvature;
mod curve;
mod energy;
mod herm;
mod io;
mod projective;
mod quadrature;
mod roots;

use num_complex::Complex64;
use thiserror::Error;

pub use curvature::{metric_and_curvature, td2_pointwise_check, CurvaturePointData, FdOptions, Td2Residual};
pub use curve::{bergman_potential, bergman_potential_direct, Curve, CurveRay};
pub use energy::{
    asymptotic_trace, comparison_terms, dyadic_grid, energy_aubin, energy_aubin_path, energy_f2, energy_i,
    energy_j, energy_kenergy, fit_slope, rate_integrals, volume, ComparisonTerms, EnergyTrace, F2Coefficients,
    Functional, RateIntegrals, SlopeFit, TraceSample, DEGENERATE_CONSTANT, FIT_POINTS, PATH_NODES,
};
pub use io::{geometry_from_value, parse_geometry_json, Geometry};
pub use projective::{HermForm, PotentialPath, ProjectiveRay, Term};
pub use quadrature::{CurveGrid, Node, ProjectiveGrid, ToricGrid};
pub use roots::poly_roots;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("metric is not positive definite at chart {chart}, z = {z}")]
    NonPositiveMetric { chart: usize, z: String },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("F_l is only evaluated for l ≤ 2 here (coefficient c_{{l,0}} is nonzero)")]
    UnsupportedLevel,
    #[error("need at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("invalid geometry: {0}")]
    Invalid(String),
}

/// Quantities at one quadrature node along a path, as multiples of ω_s^n.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PathSample {
    /// ω_s^n divided by the node's dLeb/πⁿ
    pub vol: f64,
    pub phidot: f64,
    /// Δ_s φ̇
    pub lap_phidot: f64,
    pub scal: f64,
    /// Λ tr(Θ·A), A = ∂∂̄φ̇·g⁻¹
    pub ric_a: f64,
    /// Td₂∧ω^{n−2}/ω^n (zero on curves)
    pub td2: f64,
    /// Ric²∧ω^{n−2}/ω^n (zero on curves)
    pub ric2: f64,
    pub norm_r2: f64,
    pub norm_ric2: f64,
}

/// Potential-level quantities at a node, for the endpoint functionals I and J.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointSample {
    pub phi: f64,
    pub dphi: [C64; 2],
    pub g0: [[C64; 2]; 2],
    pub g: [[C64; 2]; 2],
}

/// A family of potentials φ_s on a fixed quadrature, φ_0 = 0.
pub trait Family: Sync {
    fn dim(&self) -> usize;
    fn nodes(&self) -> &[Node];
    fn sample(&self, node: usize, s: f64, curvature: bool) -> Result<PathSample, GeomError>;
    fn endpoint(&self, node: usize, s: f64) -> Result<EndpointSample, GeomError>;
}

/// The family s ↦ φ_{τ(s)} with τ(s) = τ_end·s^power.
pub struct Reparam<'a, F: Family + ?Sized> {
    inner: &'a F,
    tau_end: f64,
    power: i32,
}

impl<'a, F: Family + ?Sized> Reparam<'a, F> {
    pub fn new(inner: &'a F, tau_end: f64, power: i32) -> Self {
        Reparam { inner, tau_end, power }
    }

    fn tau(&self, s: f64) -> (f64, f64) {
        let p = self.power;
        (self.tau_end * s.powi(p), self.tau_end * p as f64 * s.powi(p - 1))
    }
}

impl<F: Family + ?Sized> Family for Reparam<'_, F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn nodes(&self) -> &[Node] {
        self.inner.nodes()
    }

    fn sample(&self, node: usize, s: f64, curvature: bool) -> Result<PathSample, GeomError> {
        let (tau, rate) = self.tau(s);
        let mut p = self.inner.sample(node, tau, curvature)?;
        p.phidot *= rate;
        p.lap_phidot *= rate;
        p.ric_a *= rate;
        Ok(p)
    }

    fn endpoint(&self, node: usize, s: f64) -> Result<EndpointSample, GeomError> {
        self.inner.endpoint(node, self.tau(s).0)
    }
}
