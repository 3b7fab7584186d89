use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use super::{GeomError, C64};

/// A quadrature point in the affine chart X_chart = 1; `weight` is the
/// Lebesgue measure of that chart divided by πⁿ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub chart: usize,
    pub z: [C64; 2],
    pub weight: f64,
}

/// Log-polar charts centred on foci of P¹: ζ = e^{s+iθ}, s ∈ [−s_max, s_max].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveGrid {
    pub radial: usize,
    pub angular: usize,
    pub s_max: f64,
}

impl Default for CurveGrid {
    fn default() -> Self {
        CurveGrid { radial: 801, angular: 64, s_max: 40.0 }
    }
}

impl CurveGrid {
    pub fn doubled(&self) -> Self {
        CurveGrid { radial: 2 * self.radial - 1, angular: 2 * self.angular, s_max: self.s_max }
    }
}

/// Moment-map coordinates on P^n: Gauss–Legendre in the radial angles,
/// trapezoid in the torus angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectiveGrid {
    pub radial: usize,
    pub angular: usize,
}

impl Default for ProjectiveGrid {
    fn default() -> Self {
        ProjectiveGrid { radial: 24, angular: 24 }
    }
}

impl ProjectiveGrid {
    pub fn doubled(&self) -> Self {
        ProjectiveGrid { radial: 2 * self.radial, angular: if self.angular == 1 { 1 } else { 2 * self.angular } }
    }
}

/// Torus-invariant integrands on P^n: trapezoid in s_j = log|z_j| over
/// [−depth, reach] in every chart, glued by ρ_k ∝ |x_k|⁴. Angles integrate
/// exactly, so only integrands invariant under the diagonal torus are
/// supported.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ToricGrid {
    pub radial: usize,
    pub depth: f64,
    pub reach: f64,
}

impl Default for ToricGrid {
    fn default() -> Self {
        ToricGrid { radial: 209, depth: 40.0, reach: 12.0 }
    }
}

impl ToricGrid {
    pub fn doubled(&self) -> Self {
        ToricGrid { radial: 2 * self.radial - 1, ..*self }
    }
}

pub(crate) fn toric_nodes(n: usize, grid: &ToricGrid) -> Result<Vec<Node>, GeomError> {
    if !(1..=2).contains(&n) {
        return Err(GeomError::UnsupportedDimension(n));
    }
    if grid.radial < 2 {
        return Err(GeomError::Invalid("toric grid needs at least 2 radial points".into()));
    }
    let h = (grid.depth + grid.reach) / (grid.radial - 1) as f64;
    let line: Vec<(f64, f64)> = (0..grid.radial)
        .map(|i| {
            let s = -grid.depth + h * i as f64;
            let end = if i == 0 || i + 1 == grid.radial { 0.5 } else { 1.0 };
            (s, end * h * 2.0 * (2.0 * s).exp())
        })
        .collect();
    let mut nodes = Vec::new();
    for chart in 0..=n {
        if n == 1 {
            for &(s, w) in &line {
                let z = s.exp();
                nodes.push(Node { chart, z: [C64::new(z, 0.0), C64::new(0.0, 0.0)], weight: w / (1.0 + z.powi(4)) });
            }
        } else {
            for &(s1, w1) in &line {
                for &(s2, w2) in &line {
                    let (z1, z2) = (s1.exp(), s2.exp());
                    let rho = 1.0 / (1.0 + z1.powi(4) + z2.powi(4));
                    nodes.push(Node { chart, z: [C64::new(z1, 0.0), C64::new(z2, 0.0)], weight: w1 * w2 * rho });
                }
            }
        }
    }
    Ok(nodes)
}

pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
    rule.iter().map(|&(x, w)| (x, w)).collect()
}

/// Nodes and weights on [a, b].
pub(crate) fn gauss_legendre_on(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    gauss_legendre(n)
        .into_iter()
        .map(|(x, w)| (0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w))
        .collect()
}

fn chord2(x: [C64; 2], q: [C64; 2]) -> f64 {
    let cross = x[0] * q[1] - x[1] * q[0];
    cross.norm_sqr() / ((x[0].norm_sqr() + x[1].norm_sqr()) * (q[0].norm_sqr() + q[1].norm_sqr()))
}

fn homogeneous(chart: usize, x: C64) -> [C64; 2] {
    let one = C64::new(1.0, 0.0);
    if chart == 0 {
        [one, x]
    } else {
        [x, one]
    }
}

/// Deduplicate points of P¹ closer than `tol` in chordal distance.
pub(crate) fn dedup_points(points: Vec<[C64; 2]>, tol: f64) -> Vec<[C64; 2]> {
    let mut out: Vec<[C64; 2]> = Vec::new();
    for p in points {
        if !out.iter().any(|q| chord2(p, *q) < tol * tol) {
            out.push(p);
        }
    }
    out
}

const PARTITION_EXPONENT: i32 = 2;

/// Quadrature for P¹ with one log-polar chart per focus, glued by the
/// partition of unity ρ_p ∝ chord²(·, p)^{−2}.
pub(crate) fn curve_nodes(foci: &[[C64; 2]], grid: &CurveGrid) -> Vec<Node> {
    let h = 2.0 * grid.s_max / (grid.radial - 1) as f64;
    let dtheta = 2.0 * PI / grid.angular as f64;
    let mut nodes = Vec::new();
    for p in foci {
        // chart in which the focus has coordinate |c| ≤ 1
        let (chart, c) = if p[0].norm() <= p[1].norm() { (1, p[0] / p[1]) } else { (0, p[1] / p[0]) };
        let jac0 = (1.0 + c.norm_sqr()).powi(2);
        for i in 0..grid.radial {
            let s = -grid.s_max + h * i as f64;
            let base = h * dtheta * (2.0 * s).exp() / PI;
            for j in 0..grid.angular {
                let zeta = C64::from_polar(s.exp(), dtheta * j as f64);
                let num = zeta + c;
                let den = C64::new(1.0, 0.0) - c.conj() * zeta;
                let (node_chart, x, w) = if num.norm() <= den.norm() {
                    (chart, num / den, base * jac0 / den.norm_sqr().powi(2))
                } else {
                    (1 - chart, den / num, base * jac0 / num.norm_sqr().powi(2))
                };
                let pt = homogeneous(node_chart, x);
                let own = chord2(pt, *p);
                let mut total = 0.0;
                let mut hit_other = false;
                for q in foci {
                    let cq = chord2(pt, *q);
                    if cq == 0.0 && q != p {
                        hit_other = true;
                    }
                    if cq > 0.0 {
                        total += (own / cq).powi(PARTITION_EXPONENT);
                    }
                }
                let pw = if own == 0.0 {
                    1.0
                } else if hit_other {
                    0.0
                } else {
                    1.0 / total
                };
                if pw > 1e-14 {
                    nodes.push(Node { chart: node_chart, z: [x, C64::new(0.0, 0.0)], weight: w * pw });
                }
            }
        }
    }
    nodes
}

/// Nodes on P^n (n = 1, 2), each placed in the chart of its largest
/// homogeneous coordinate.
pub(crate) fn projective_nodes(n: usize, grid: &ProjectiveGrid) -> Result<Vec<Node>, GeomError> {
    let na = grid.angular.max(1);
    let dtheta = 2.0 * PI / na as f64;
    let mut nodes = Vec::new();
    let mut push = |x: &[C64], w_fs: f64| {
        let chart = (0..x.len())
            .max_by(|&a, &b| x[a].norm().partial_cmp(&x[b].norm()).unwrap())
            .unwrap();
        let mut z = [C64::new(0.0, 0.0); 2];
        let mut k = 0;
        for (j, xj) in x.iter().enumerate() {
            if j != chart {
                z[k] = xj / x[chart];
                k += 1;
            }
        }
        let d = 1.0 + z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let nfact = if n == 2 { 2.0 } else { 1.0 };
        nodes.push(Node { chart, z, weight: w_fs * d.powi(n as i32 + 1) / nfact });
    };
    match n {
        1 => {
            for (beta, wb) in gauss_legendre_on(0.0, PI, grid.radial) {
                for j in 0..na {
                    let x = [
                        C64::new((beta / 2.0).cos(), 0.0),
                        C64::from_polar((beta / 2.0).sin(), dtheta * j as f64),
                    ];
                    push(&x, wb * beta.sin() / (2.0 * na as f64));
                }
            }
        }
        2 => {
            let gl = gauss_legendre_on(0.0, PI / 2.0, grid.radial);
            for &(a, wa) in &gl {
                for &(b, wb) in &gl {
                    let jac = 8.0 * a.sin().powi(3) * a.cos() * b.sin() * b.cos();
                    for j1 in 0..na {
                        for j2 in 0..na {
                            let x = [
                                C64::new(a.cos(), 0.0),
                                C64::from_polar(a.sin() * b.cos(), dtheta * j1 as f64),
                                C64::from_polar(a.sin() * b.sin(), dtheta * j2 as f64),
                            ];
                            push(&x, wa * wb * jac / (na * na) as f64);
                        }
                    }
                }
            }
        }
        _ => return Err(GeomError::UnsupportedDimension(n)),
    }
    Ok(nodes)
}

const CHUNK: usize = 256;

/// Σ_i f(i) componentwise, evaluated in parallel and summed in a fixed order.
pub(crate) fn accumulate<const K: usize, F>(len: usize, f: F) -> Result<[f64; K], GeomError>
where
    F: Fn(usize) -> Result<[f64; K], GeomError> + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<[f64; K]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = [0.0; K];
            for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
                let v = f(i)?;
                for k in 0..K {
                    acc[k] += v[k];
                }
            }
            Ok(acc)
        })
        .collect::<Result<_, GeomError>>()?;
    let mut total = [0.0; K];
    for p in partial {
        for k in 0..K {
            total[k] += p[k];
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs_density(node: &Node) -> f64 {
        let d = 1.0 + node.z[0].norm_sqr() + node.z[1].norm_sqr();
        d.powi(-2)
    }

    #[test]
    fn curve_nodes_integrate_fubini_study_area() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let foci = vec![[zero, one], [one, zero], [C64::new(0.0, 1.0), one]];
        let grid = CurveGrid::default();
        let nodes = curve_nodes(&foci, &grid);
        let area: f64 = nodes.iter().map(|n| n.weight * fs_density(n)).sum();
        assert!((area - 1.0).abs() < 1e-10, "{area}");
    }

    #[test]
    fn projective_nodes_total_volume() {
        for n in [1, 2] {
            let nodes = projective_nodes(n, &ProjectiveGrid { radial: 12, angular: 6 }).unwrap();
            let vol: f64 = nodes
                .iter()
                .map(|nd| {
                    let d = 1.0 + nd.z[0].norm_sqr() + nd.z[1].norm_sqr();
                    let nf = if n == 2 { 2.0 } else { 1.0 };
                    nd.weight * nf * d.powi(-(n as i32 + 1))
                })
                .sum();
            assert!((vol - 1.0).abs() < 1e-12, "n={n}: {vol}");
            assert!(nodes.iter().all(|nd| nd.z.iter().all(|c| c.norm() <= 1.0 + 1e-12)));
        }
        assert!(projective_nodes(3, &ProjectiveGrid::default()).is_err());
    }

    #[test]
    fn toric_nodes_total_volume() {
        for n in [1, 2] {
            let nodes = toric_nodes(n, &ToricGrid::default()).unwrap();
            let vol: f64 = nodes
                .iter()
                .map(|nd| {
                    let d = 1.0 + nd.z[0].norm_sqr() + nd.z[1].norm_sqr();
                    let nf = if n == 2 { 2.0 } else { 1.0 };
                    nd.weight * nf * d.powi(-(n as i32 + 1))
                })
                .sum();
            assert!((vol - 1.0).abs() < 1e-12, "n={n}: {vol}");
        }
    }

    #[test]
    fn accumulate_is_order_fixed() {
        let f = |i: usize| Ok([1.0 / (1.0 + i as f64), i as f64]);
        let a = accumulate::<2, _>(10_000, f).unwrap();
        let b = accumulate::<2, _>(10_000, f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[1], (0..10_000).sum::<usize>() as f64);
    }
}
