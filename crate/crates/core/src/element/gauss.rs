//! Collapsed Gauss–Legendre quadrature on triangles.
//!
//! The unit square is mapped onto the reference triangle with the Duffy
//! transform `L2 = u (1 − v)`, `L3 = v`, whose Jacobian `(1 − v)` raises the
//! polynomial degree in `v` by one. With `n` Legendre points per direction
//! the rule is exact for total degree `2n − 2`.

use nalgebra::DMatrix;

use super::{shape_gradients, shape_values, ElementGeometry, MatrixKind, Order};

/// Gauss–Legendre nodes and weights on `[0, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre_01(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Points `(L1, L2, L3)` and weights summing to 1 (the reference area is
/// normalised out; multiply by `Δ` for physical integrals).
pub fn triangle_rule(points_per_direction: usize) -> Vec<([f64; 3], f64)> {
    let gl = gauss_legendre_01(points_per_direction);
    let mut rule = Vec::with_capacity(gl.len() * gl.len());
    for &(u, wu) in &gl {
        for &(v, wv) in &gl {
            let l2 = u * (1.0 - v);
            let l3 = v;
            rule.push(([1.0 - l2 - l3, l2, l3], 2.0 * wu * wv * (1.0 - v)));
        }
    }
    rule
}

/// Elemental matrix by quadrature; exact because integrands are polynomials
/// of degree at most 6.
pub fn elemental_by_gauss(geom: &ElementGeometry, order: Order, kind: MatrixKind) -> DMatrix<f64> {
    let n = order.nodes_per_element();
    let mut m = DMatrix::zeros(n, n);
    for (l, w) in triangle_rule(5) {
        let w = w * geom.area;
        let val = shape_values(order, l);
        let grad = shape_gradients(order, geom, l);
        for i in 0..n {
            for j in 0..n {
                let f = match kind {
                    MatrixKind::B => val[i] * val[j],
                    MatrixKind::Ax => grad[i][0] * grad[j][0],
                    MatrixKind::Ay => grad[i][1] * grad[j][1],
                    MatrixKind::Cxy => grad[i][0] * grad[j][1],
                    MatrixKind::Dx => val[i] * grad[j][0],
                    MatrixKind::Dy => val[i] * grad[j][1],
                };
                m[(i, j)] += w * f;
            }
        }
    }
    m
}
