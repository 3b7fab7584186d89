use super::C64;

fn eval_with_derivative(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots, with multiplicity, of Σ c_k z^k (ascending coefficients)
/// by Aberth–Ehrlich iteration. Roots at zero are split off exactly.
pub fn poly_roots(coeffs: &[f64]) -> Vec<C64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let zeros = c.iter().take_while(|&&x| x == 0.0).count();
    let mut out = vec![C64::new(0.0, 0.0); zeros];
    let lead = *c.last().unwrap();
    let a: Vec<C64> = c[zeros..].iter().map(|&x| C64::new(x / lead, 0.0)).collect();
    let deg = a.len() - 1;
    if deg == 0 {
        return out;
    }
    // Fujiwara-style bound for the initial circle
    let radius = (0..deg)
        .map(|k| a[k].norm().powf(1.0 / (deg - k) as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-3);
    let mut z: Vec<C64> = (0..deg)
        .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(&a, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    out.extend(z);
    out
}
