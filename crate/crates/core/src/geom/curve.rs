//! Rational curves P¹ → P^N and their Bergman rays, with every field along
//! the ray in closed form.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::quadrature::{curve_nodes, dedup_points, CurveGrid, Node};
use super::roots::poly_roots;
use super::{EndpointSample, Family, GeomError, PathSample, C64};
use crate::exact::{rat_to_f64, QPoly, Rat};
use crate::ideals::MultiIndex;
use crate::weights::OneParameterSubgroup;

/// Sections of O(d) on P¹; `sections[k].coeff(a)` multiplies u^a·v^{d−a}.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    degree: u32,
    sections: Vec<QPoly>,
}

fn derivative(p: &QPoly) -> QPoly {
    QPoly::new(p.coeffs().iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer((k as i64).into())).collect())
}

fn wronskian(a: &QPoly, b: &QPoly) -> QPoly {
    &(a * &derivative(b)) - &(b * &derivative(a))
}

fn to_f64(p: &QPoly) -> Vec<f64> {
    p.coeffs().iter().map(rat_to_f64).collect()
}

fn horner(c: &[f64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

impl Curve {
    pub fn new(degree: u32, sections: Vec<QPoly>) -> Result<Self, GeomError> {
        if degree == 0 {
            return Err(GeomError::Invalid("sections must have positive degree".into()));
        }
        if sections.iter().any(|s| s.degree().is_some_and(|k| k > degree as usize)) {
            return Err(GeomError::Invalid(format!("section of degree above {degree}")));
        }
        let curve = Curve { degree, sections };
        if curve.chart_wronskians(1).iter().all(|(_, w)| w.is_zero()) {
            return Err(GeomError::Invalid("sections do not define an immersion".into()));
        }
        Ok(curve)
    }

    /// Sections given as lists of (exponent of (u, v), coefficient); an
    /// empty list is the zero section.
    pub fn from_terms(sections: Vec<Vec<(MultiIndex, Rat)>>) -> Result<Self, GeomError> {
        let degree = sections
            .iter()
            .flatten()
            .map(|(m, _)| m.degree())
            .next()
            .ok_or_else(|| GeomError::Invalid("all sections are zero".into()))?;
        let mut polys = Vec::with_capacity(sections.len());
        for terms in sections {
            let mut c = vec![Rat::zero(); degree as usize + 1];
            for (m, coeff) in terms {
                if m.vars() != 2 || m.degree() != degree {
                    return Err(GeomError::Invalid(format!("term {m} is not a binary form of degree {degree}")));
                }
                c[m.exponents()[0] as usize] += coeff;
            }
            polys.push(QPoly::new(c));
        }
        Curve::new(degree, polys)
    }

    /// The rational normal curve of degree d.
    pub fn rational_normal(d: u32) -> Self {
        let sections =
            (0..=d as usize).rev().map(|a| QPoly::monomial(Rat::from_integer(1.into()), a)).collect();
        Curve { degree: d, sections }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn sections(&self) -> &[QPoly] {
        &self.sections
    }

    /// Sections in the chart `chart` of P¹: chart 1 is v = 1 (coordinate u),
    /// chart 0 is u = 1 (coordinate v).
    fn chart_sections(&self, chart: usize) -> Vec<QPoly> {
        let d = self.degree as usize;
        self.sections
            .iter()
            .map(|s| if chart == 1 { s.clone() } else { QPoly::new((0..=d).map(|a| s.coeff(d - a)).collect()) })
            .collect()
    }

    fn chart_wronskians(&self, chart: usize) -> Vec<((usize, usize), QPoly)> {
        let s = self.chart_sections(chart);
        let mut out = Vec::new();
        for j in 0..s.len() {
            for k in j + 1..s.len() {
                out.push(((j, k), wronskian(&s[j], &s[k])));
            }
        }
        out
    }

    /// S_k at a point (u, v) of C².
    pub fn eval(&self, point: [C64; 2]) -> Vec<C64> {
        let d = self.degree as i32;
        self.sections
            .iter()
            .map(|s| {
                s.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(a, c)| point[0].powi(a as i32) * point[1].powi(d - a as i32) * rat_to_f64(c))
                    .sum()
            })
            .collect()
    }

    /// Points where the integrands are least smooth: 0, ∞, zeros of the
    /// sections and of their pairwise Wronskians.
    pub fn foci(&self) -> Vec<[C64; 2]> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let mut pts = vec![[zero, one], [one, zero]];
        let polys = self.chart_sections(1).into_iter().chain(self.chart_wronskians(1).into_iter().map(|(_, w)| w));
        for p in polys {
            if p.is_zero() {
                continue;
            }
            pts.extend(poly_roots(&to_f64(&p)).into_iter().filter(|r| r.is_finite()).map(|r| [r, one]));
        }
        dedup_points(pts, 1e-6)
    }
}

fn log_terms(curve: &Curve, lambda: &OneParameterSubgroup, t: f64, point: [C64; 2]) -> Result<Vec<(f64, f64)>, GeomError> {
    if lambda.len() != curve.sections.len() {
        return Err(GeomError::Invalid(format!("λ needs {} weights", curve.sections.len())));
    }
    if !(t > 0.0) {
        return Err(GeomError::Invalid(format!("t must be positive, got {t}")));
    }
    Ok(curve
        .eval(point)
        .into_iter()
        .zip(&lambda.r)
        .filter(|(s, _)| s.norm_sqr() > 0.0)
        .map(|(s, &r)| (s.norm_sqr().ln(), 2.0 * r as f64 * t.ln()))
        .collect())
}

fn log_sum_exp(x: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = x.clone().fold(f64::NEG_INFINITY, f64::max);
    m + x.map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// (1/d)·[log Σ|t^{r_k}S_k|² − log Σ|S_k|²], factoring out the largest term.
pub fn bergman_potential(curve: &Curve, lambda: &OneParameterSubgroup, t: f64, point: [C64; 2]) -> Result<f64, GeomError> {
    let terms = log_terms(curve, lambda, t, point)?;
    if terms.is_empty() {
        return Err(GeomError::Invalid("all sections vanish at the point".into()));
    }
    let moved = log_sum_exp(terms.iter().map(|(a, b)| a + b));
    let fixed = log_sum_exp(terms.iter().map(|(a, _)| *a));
    Ok((moved - fixed) / curve.degree as f64)
}

/// The same potential summed without rescaling; underflows for small t.
pub fn bergman_potential_direct(
    curve: &Curve,
    lambda: &OneParameterSubgroup,
    t: f64,
    point: [C64; 2],
) -> Result<f64, GeomError> {
    let _ = log_terms(curve, lambda, t, point)?;
    let s = curve.eval(point);
    let moved: f64 = s.iter().zip(&lambda.r).map(|(s, &r)| t.powi(2 * r as i32) * s.norm_sqr()).sum();
    let fixed: f64 = s.iter().map(|s| s.norm_sqr()).sum();
    Ok((moved.ln() - fixed.ln()) / curve.degree as f64)
}

/// Per-node sums Σ_{e(k)=e} (…) grouped by integer exponent e, so that the
/// value at τ is Σ_e e^{−2eτ}·(group e).
#[derive(Clone, Debug)]
struct Groups {
    exps: Vec<i64>,
    index: BTreeMap<i64, usize>,
}

impl Groups {
    fn new(exps: impl Iterator<Item = i64>) -> Self {
        let index: BTreeMap<i64, usize> = exps.map(|e| (e, 0)).collect();
        let exps: Vec<i64> = index.keys().copied().collect();
        let index = exps.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Groups { exps, index }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }
}

/// φ_τ for a rational curve under λ(e^{−τ}), with the Kähler class of
/// (1/d)·(Fubini–Study pulled back).
#[derive(Clone, Debug)]
pub struct CurveRay {
    d: f64,
    r_min: f64,
    nodes: Vec<Node>,
    f: Groups,
    w: Groups,
    ww: Groups,
    f_val: Vec<f64>,
    g_val: Vec<C64>,
    w_val: Vec<f64>,
    ww_val: Vec<f64>,
}

struct Fields {
    f: f64,
    fdot: f64,
    g: C64,
    w: f64,
    wdot: f64,
    ww: f64,
}

impl CurveRay {
    pub fn new(curve: &Curve, lambda: &OneParameterSubgroup, grid: &CurveGrid) -> Result<Self, GeomError> {
        if lambda.len() != curve.sections.len() {
            return Err(GeomError::Invalid(format!("λ needs {} weights", curve.sections.len())));
        }
        let r_min = *lambda.r.iter().min().unwrap();
        let r: Vec<i64> = lambda.r.iter().map(|&x| x - r_min).collect();
        let live: Vec<usize> = (0..r.len()).filter(|&k| !curve.sections[k].is_zero()).collect();
        let f = Groups::new(live.iter().map(|&k| r[k]));

        let per_chart: Vec<_> = (0..2)
            .map(|chart| {
                let s: Vec<Vec<f64>> = curve.chart_sections(chart).iter().map(to_f64).collect();
                let ds: Vec<Vec<f64>> = curve.chart_sections(chart).iter().map(|p| to_f64(&derivative(p))).collect();
                let wr = curve.chart_wronskians(chart);
                let mut ww = Vec::new();
                for a in 0..wr.len() {
                    for b in a + 1..wr.len() {
                        let (ja, ka) = wr[a].0;
                        let (jb, kb) = wr[b].0;
                        ww.push((r[ja] + r[ka] + r[jb] + r[kb], to_f64(&wronskian(&wr[a].1, &wr[b].1))));
                    }
                }
                let wr: Vec<(i64, Vec<f64>)> = wr.iter().map(|((j, k), p)| (r[*j] + r[*k], to_f64(p))).collect();
                (s, ds, wr, ww)
            })
            .collect();
        let w = Groups::new(per_chart[1].2.iter().map(|(e, _)| *e));
        let ww = Groups::new(per_chart[1].3.iter().map(|(e, _)| *e));

        let nodes = curve_nodes(&curve.foci(), grid);
        let mut ray = CurveRay {
            d: curve.degree as f64,
            r_min: r_min as f64,
            f_val: vec![0.0; nodes.len() * f.len()],
            g_val: vec![C64::new(0.0, 0.0); nodes.len() * f.len()],
            w_val: vec![0.0; nodes.len() * w.len()],
            ww_val: vec![0.0; nodes.len() * ww.len()],
            nodes,
            f,
            w,
            ww,
        };
        for (i, node) in ray.nodes.iter().enumerate() {
            let (s, ds, wr, wwp) = &per_chart[node.chart];
            let z = node.z[0];
            for &k in &live {
                let sk = horner(&s[k], z);
                let slot = i * ray.f.len() + ray.f.index[&r[k]];
                ray.f_val[slot] += sk.norm_sqr();
                ray.g_val[slot] += horner(&ds[k], z) * sk.conj();
            }
            for (e, p) in wr {
                ray.w_val[i * ray.w.len() + ray.w.index[e]] += horner(p, z).norm_sqr();
            }
            for (e, p) in wwp {
                ray.ww_val[i * ray.ww.len() + ray.ww.index[e]] += horner(p, z).norm_sqr();
            }
        }
        for i in 0..ray.nodes.len() {
            let fl = ray.fields(i, 0.0);
            if !(fl.w > 0.0 && fl.f > 0.0) {
                let node = &ray.nodes[i];
                return Err(GeomError::NonPositiveMetric { chart: node.chart, z: format!("{:?}", node.z[0]) });
            }
        }
        Ok(ray)
    }

    fn fields(&self, i: usize, tau: f64) -> Fields {
        let q = (-2.0 * tau).exp();
        let mut out = Fields { f: 0.0, fdot: 0.0, g: C64::new(0.0, 0.0), w: 0.0, wdot: 0.0, ww: 0.0 };
        let nf = self.f.len();
        for (k, &e) in self.f.exps.iter().enumerate() {
            let fac = q.powi(e as i32);
            out.f += fac * self.f_val[i * nf + k];
            out.fdot += -2.0 * e as f64 * fac * self.f_val[i * nf + k];
            out.g += self.g_val[i * nf + k] * fac;
        }
        let nw = self.w.len();
        for (k, &e) in self.w.exps.iter().enumerate() {
            let fac = q.powi(e as i32);
            out.w += fac * self.w_val[i * nw + k];
            out.wdot += -2.0 * e as f64 * fac * self.w_val[i * nw + k];
        }
        let nww = self.ww.len();
        for (k, &e) in self.ww.exps.iter().enumerate() {
            out.ww += q.powi(e as i32) * self.ww_val[i * nww + k];
        }
        out
    }

    fn metric(&self, fl: &Fields) -> f64 {
        fl.w / (fl.f * fl.f * self.d)
    }

    fn check(&self, i: usize, g: f64) -> Result<(), GeomError> {
        if g > 0.0 && g.is_finite() {
            Ok(())
        } else {
            let node = &self.nodes[i];
            Err(GeomError::NonPositiveMetric { chart: node.chart, z: format!("{:?}", node.z[0]) })
        }
    }
}

impl Family for CurveRay {
    fn dim(&self) -> usize {
        1
    }

    fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    fn sample(&self, i: usize, tau: f64, _curvature: bool) -> Result<PathSample, GeomError> {
        let fl = self.fields(i, tau);
        let g = self.metric(&fl);
        self.check(i, g)?;
        let scal = (2.0 * fl.w / (fl.f * fl.f) - fl.ww / (fl.w * fl.w)) / g;
        let lap = fl.wdot / fl.w - 2.0 * fl.fdot / fl.f;
        Ok(PathSample {
            vol: g,
            phidot: (fl.fdot / fl.f - 2.0 * self.r_min) / self.d,
            lap_phidot: lap,
            scal,
            ric_a: scal * lap,
            td2: 0.0,
            ric2: 0.0,
            norm_r2: scal * scal,
            norm_ric2: scal * scal,
        })
    }

    fn endpoint(&self, i: usize, tau: f64) -> Result<EndpointSample, GeomError> {
        let f0 = self.fields(i, 0.0);
        let ft = self.fields(i, tau);
        let (g0, g) = (self.metric(&f0), self.metric(&ft));
        self.check(i, g)?;
        let zero = C64::new(0.0, 0.0);
        let m = |x: f64| [[C64::new(x, 0.0), zero], [zero, zero]];
        Ok(EndpointSample {
            phi: ((ft.f / f0.f).ln() - 2.0 * self.r_min * tau) / self.d,
            dphi: [(ft.g / ft.f - f0.g / f0.f) / self.d, zero],
            g0: m(g0),
            g: m(g),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn conic() -> Curve {
        // (u², uv, v²)
        Curve::new(2, vec![QPoly::from_ints(&[0, 0, 1]), QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1])]).unwrap()
    }

    #[test]
    fn potential_two_ways() {
        let lam = OneParameterSubgroup::new(vec![1, 0, -1]);
        let p = [C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let a = bergman_potential(&conic(), &lam, 0.5, p).unwrap();
        let b = bergman_potential_direct(&conic(), &lam, 0.5, p).unwrap();
        assert!((a - b).abs() < 1e-12);
        // (1/2)·log((1/4 + 1 + 4)/3)
        assert!((a - 0.5 * (5.25f64 / 3.0).ln()).abs() < 1e-12);
        let id = OneParameterSubgroup::new(vec![0, 0, 0]);
        assert_eq!(bergman_potential(&conic(), &id, 0.3, p).unwrap(), 0.0);
        // shifting λ shifts the potential by a constant
        let shifted = OneParameterSubgroup::new(vec![2, 1, 0]);
        let q = [C64::new(0.3, 0.2), C64::new(1.0, 0.0)];
        let d1 = bergman_potential(&conic(), &shifted, 0.5, p).unwrap() - a;
        let d2 = bergman_potential(&conic(), &shifted, 0.5, q).unwrap()
            - bergman_potential(&conic(), &lam, 0.5, q).unwrap();
        assert!((d1 - d2).abs() < 1e-12 && (d1 - 0.5f64.ln()).abs() < 1e-12);
        assert!(bergman_potential(&conic(), &lam, 0.0, p).is_err());
    }

    #[test]
    fn ray_matches_potential_and_its_derivative() {
        let lam = OneParameterSubgroup::new(vec![1, 0, -1]);
        let ray = CurveRay::new(&conic(), &lam, &CurveGrid { radial: 41, angular: 4, s_max: 5.0 }).unwrap();
        for i in (0..ray.nodes().len()).step_by(17) {
            let node = ray.nodes()[i];
            let pt = if node.chart == 1 { [node.z[0], C64::new(1.0, 0.0)] } else { [C64::new(1.0, 0.0), node.z[0]] };
            let tau = 0.7;
            let e = ray.endpoint(i, tau).unwrap();
            let direct = bergman_potential(&conic(), &lam, (-tau).exp(), pt).unwrap();
            assert!((e.phi - direct).abs() < 1e-12);
            let h = 1e-5;
            let fd = (ray.endpoint(i, tau + h).unwrap().phi - ray.endpoint(i, tau - h).unwrap().phi) / (2.0 * h);
            assert!((fd - ray.sample(i, tau, true).unwrap().phidot).abs() < 1e-7);
        }
    }

    #[test]
    fn line_is_a_round_sphere() {
        let line = Curve::new(1, vec![QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1])]).unwrap();
        let ray = CurveRay::new(&line, &OneParameterSubgroup::new(vec![0, 0]), &CurveGrid::default()).unwrap();
        for i in (0..ray.nodes().len()).step_by(997) {
            let s = ray.sample(i, 0.0, true).unwrap();
            let z = ray.nodes()[i].z[0];
            assert!((s.vol - (1.0 + z.norm_sqr()).powi(-2)).abs() < 1e-12 * (1.0 + s.vol));
            assert!((s.scal - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn foci_and_validation() {
        let f = conic().foci();
        assert_eq!(f.len(), 2);
        let pconic = Curve::new(2, vec![QPoly::from_ints(&[0, 0, 1]), QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, 0, 1])])
            .unwrap();
        assert!(pconic.foci().len() > 2);
        assert!(Curve::new(2, vec![QPoly::from_ints(&[1]), QPoly::from_ints(&[2])]).is_err());
        assert!(Curve::new(1, vec![QPoly::from_ints(&[0, 0, 1]), QPoly::from_ints(&[1])]).is_err());
        let terms = vec![
            vec![(MultiIndex::new(vec![1, 0]), rat_int(1))],
            vec![(MultiIndex::new(vec![0, 1]), rat_int(1))],
            vec![],
        ];
        let line = Curve::from_terms(terms).unwrap();
        assert_eq!(line.degree(), 1);
        assert!(Curve::from_terms(vec![vec![(MultiIndex::new(vec![1, 1, 0]), rat_int(1))]]).is_err());
        assert_eq!(Curve::rational_normal(3).sections().len(), 4);
    }
}
