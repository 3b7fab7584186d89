//! 1×1 and 2×2 complex matrices stored in a fixed 2×2 array; entries beyond
//! the active dimension are zero.

use super::C64;

pub(crate) type Mat = [[C64; 2]; 2];

pub(crate) const ZERO: Mat = [[C64::new(0.0, 0.0); 2]; 2];

pub(crate) fn add(a: &Mat, b: &Mat) -> Mat {
    let mut c = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][j] + b[i][j];
        }
    }
    c
}

pub(crate) fn sub(a: &Mat, b: &Mat) -> Mat {
    add(a, &scale(b, -1.0))
}

pub(crate) fn scale(a: &Mat, s: f64) -> Mat {
    let mut c = *a;
    c.iter_mut().flatten().for_each(|x| *x *= s);
    c
}

pub(crate) fn cscale(a: &Mat, s: C64) -> Mat {
    let mut c = *a;
    c.iter_mut().flatten().for_each(|x| *x *= s);
    c
}

pub(crate) fn mul(a: &Mat, b: &Mat, n: usize) -> Mat {
    let mut c = ZERO;
    for i in 0..n {
        for j in 0..n {
            c[i][j] = (0..n).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub(crate) fn adjoint(a: &Mat) -> Mat {
    let mut c = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[j][i].conj();
        }
    }
    c
}

pub(crate) fn trace(a: &Mat, n: usize) -> C64 {
    (0..n).map(|i| a[i][i]).sum()
}

pub(crate) fn det(a: &Mat, n: usize) -> C64 {
    match n {
        1 => a[0][0],
        _ => a[0][0] * a[1][1] - a[0][1] * a[1][0],
    }
}

pub(crate) fn inverse(a: &Mat, n: usize) -> Mat {
    let d = det(a, n);
    match n {
        1 => [[d.inv(), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0); 2]],
        _ => [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]],
    }
}

/// Lower triangular M with M·g·M† = 1, or None unless g is positive definite.
pub(crate) fn frame(g: &Mat, n: usize) -> Option<Mat> {
    let l00 = g[0][0].re;
    if !(l00 > 0.0) {
        return None;
    }
    let l00 = l00.sqrt();
    if n == 1 {
        return Some([[C64::new(1.0 / l00, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0); 2]]);
    }
    let l10 = g[1][0] / l00;
    let rest = g[1][1].re - l10.norm_sqr();
    if !(rest > 0.0) {
        return None;
    }
    let l11 = rest.sqrt();
    Some([
        [C64::new(1.0 / l00, 0.0), C64::new(0.0, 0.0)],
        [-l10 / (l00 * l11), C64::new(1.0 / l11, 0.0)],
    ])
}

/// M·a·M†.
pub(crate) fn congruence(m: &Mat, a: &Mat, n: usize) -> Mat {
    mul(&mul(m, a, n), &adjoint(m), n)
}

/// α∧β = D(α, β)·dLeb/π² for (1,1)-forms on a surface.
pub(crate) fn wedge(a: &Mat, b: &Mat) -> C64 {
    a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1]
}

pub(crate) fn norm_sqr(a: &Mat, n: usize) -> f64 {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[i][j].norm_sqr()).sum()
}
