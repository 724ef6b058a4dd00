//! Closed-form elemental matrices of the cubic (10-node) triangle.
//!
//! Every entry is stored as an exact rational combination of the geometric
//! coefficients, then evaluated once in floating point:
//!
//! * mass: integers (and ninths) times `3Δ/2240`
//! * `Ax`: combinations of `b_m b_n` times `81/(8Δ)`; `Ay` swaps `b` for `c`
//! * `Cxy`: combinations of `p_mn = b_m c_n` times `81/(16Δ)`
//! * `Dx`: combinations of `b_m` times `27/140`; `Dy` swaps `b` for `c`
//!
//! Indices in the tables are 1-based to match the usual node labels.

use nalgebra::DMatrix;
use num_rational::Ratio;

use super::ElementGeometry;

const N: usize = 10;

/// `Σ coef · u_m v_n / den`
#[derive(Debug, Clone, Copy)]
struct Bilinear {
    terms: &'static [(i64, usize, usize)],
    den: i64,
}

/// `Σ coef · u_m / den`
#[derive(Debug, Clone, Copy)]
struct Linear {
    terms: &'static [(i64, usize)],
    den: i64,
}

const fn bl(terms: &'static [(i64, usize, usize)], den: i64) -> Bilinear {
    Bilinear { terms, den }
}

const fn li(terms: &'static [(i64, usize)], den: i64) -> Linear {
    Linear { terms, den }
}

const ZB: Bilinear = bl(&[], 1);

impl Bilinear {
    fn eval(&self, u: &[f64; 3], v: &[f64; 3]) -> f64 {
        let s: f64 = self.terms.iter().map(|&(c, m, n)| c as f64 * u[m - 1] * v[n - 1]).sum();
        s / self.den as f64
    }
}

impl Linear {
    fn eval(&self, u: &[f64; 3]) -> f64 {
        let s: f64 = self.terms.iter().map(|&(c, m)| c as f64 * u[m - 1]).sum();
        s / self.den as f64
    }
}

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

/// Mass matrix in units of `3Δ/2240`.
fn mass_table() -> [[Ratio<i64>; N]; N] {
    let a = r(76, 9);
    let b = r(11, 9);
    let i = |v: i64| r(v, 1);
    [
        [a, b, b, i(2), i(0), i(3), i(3), i(0), i(2), i(4)],
        [b, a, b, i(0), i(2), i(2), i(0), i(3), i(3), i(4)],
        [b, b, a, i(3), i(3), i(0), i(2), i(2), i(0), i(4)],
        [i(2), i(0), i(3), i(60), i(-21), i(-15), i(-6), i(-15), i(30), i(18)],
        [i(0), i(2), i(3), i(-21), i(60), i(30), i(-15), i(-6), i(-15), i(18)],
        [i(3), i(2), i(0), i(-15), i(30), i(60), i(-21), i(-15), i(-6), i(18)],
        [i(3), i(0), i(2), i(-6), i(-15), i(-21), i(60), i(30), i(-15), i(18)],
        [i(0), i(3), i(2), i(-15), i(-6), i(-15), i(30), i(60), i(-21), i(18)],
        [i(2), i(3), i(0), i(30), i(-15), i(-6), i(-15), i(-21), i(60), i(18)],
        [i(4), i(4), i(4), i(18), i(18), i(18), i(18), i(18), i(18), i(216)],
    ]
}

/// Upper triangle of the `Ax` table in units of `81/(8Δ)`; row-major, `(i, j)`
/// with `j ≥ i`. Entries are in `b_m b_n`.
#[rustfmt::skip]
const STIFFNESS_UPPER: [Bilinear; 55] = [
    // row 1
    bl(&[(17, 1, 1)], 810), bl(&[(7, 1, 2)], 1620), bl(&[(7, 1, 3)], 1620),
    bl(&[(18, 1, 2), (-1, 1, 3)], 540), bl(&[(-1, 1, 3), (-9, 1, 2)], 540),
    bl(&[(-1, 1, 1)], 540), bl(&[(-1, 1, 1)], 540),
    bl(&[(-1, 1, 2), (-9, 1, 3)], 540), bl(&[(18, 1, 3), (-1, 1, 2)], 540), ZB,
    // row 2
    bl(&[(17, 2, 2)], 810), bl(&[(7, 2, 3)], 1620),
    bl(&[(-1, 2, 3), (-9, 1, 2)], 540), bl(&[(18, 1, 2), (-1, 2, 3)], 540),
    bl(&[(18, 2, 3), (-1, 1, 2)], 540), bl(&[(-1, 1, 2), (-9, 2, 3)], 540),
    bl(&[(-1, 2, 2)], 540), bl(&[(-1, 2, 2)], 540), ZB,
    // row 3
    bl(&[(17, 3, 3)], 810), bl(&[(-1, 3, 3)], 540), bl(&[(-1, 3, 3)], 540),
    bl(&[(-1, 1, 3), (-9, 2, 3)], 540), bl(&[(18, 2, 3), (-1, 1, 3)], 540),
    bl(&[(18, 1, 3), (-1, 2, 3)], 540), bl(&[(-1, 2, 3), (-9, 1, 3)], 540), ZB,
    // row 4
    bl(&[(1, 3, 3), (-1, 1, 2)], 12), bl(&[(-1, 1, 1), (2, 1, 2), (-1, 2, 2)], 60),
    bl(&[(-1, 1, 3)], 60), bl(&[(-1, 1, 3)], 60), bl(&[(-1, 2, 3)], 60),
    bl(&[(1, 2, 3)], 12), bl(&[(1, 1, 3)], 10),
    // row 5
    bl(&[(1, 3, 3), (-1, 1, 2)], 12), bl(&[(1, 1, 3)], 12), bl(&[(-1, 1, 3)], 60),
    bl(&[(-1, 2, 3)], 60), bl(&[(-1, 2, 3)], 60), bl(&[(1, 2, 3)], 10),
    // row 6
    bl(&[(1, 1, 1), (-1, 2, 3)], 12), bl(&[(-1, 2, 2), (2, 2, 3), (-1, 3, 3)], 60),
    bl(&[(-1, 1, 2)], 60), bl(&[(-1, 1, 2)], 60), bl(&[(1, 1, 2)], 10),
    // row 7
    bl(&[(1, 1, 1), (-1, 2, 3)], 12), bl(&[(1, 1, 2)], 12), bl(&[(-1, 1, 2)], 60),
    bl(&[(1, 1, 3)], 10),
    // row 8
    bl(&[(1, 2, 2), (-1, 1, 3)], 12), bl(&[(-1, 1, 1), (2, 1, 3), (-1, 3, 3)], 60),
    bl(&[(1, 2, 3)], 10),
    // row 9
    bl(&[(1, 2, 2), (-1, 1, 3)], 12), bl(&[(1, 1, 2)], 10),
    // row 10
    bl(&[(1, 1, 1), (-1, 2, 3)], 5),
];

/// Full `Cxy` table in units of `81/(16Δ)`; entries in `p_mn = b_m c_n`.
#[rustfmt::skip]
const CROSS: [[Bilinear; N]; N] = [
    [
        bl(&[(17, 1, 1)], 405), bl(&[(7, 1, 2)], 810), bl(&[(7, 1, 3)], 810),
        bl(&[(18, 1, 2), (-1, 1, 3)], 270), bl(&[(-1, 1, 3), (-9, 1, 2)], 270),
        bl(&[(-1, 1, 1)], 270), bl(&[(-1, 1, 1)], 270),
        bl(&[(-1, 1, 2), (-9, 1, 3)], 270), bl(&[(18, 1, 3), (-1, 1, 2)], 270), ZB,
    ],
    [
        bl(&[(7, 2, 1)], 810), bl(&[(17, 2, 2)], 405), bl(&[(7, 2, 3)], 810),
        bl(&[(-1, 2, 3), (-9, 2, 1)], 270), bl(&[(18, 2, 1), (-1, 2, 3)], 270),
        bl(&[(18, 2, 3), (-1, 2, 1)], 270), bl(&[(-1, 2, 1), (-9, 2, 3)], 270),
        bl(&[(-1, 2, 2)], 270), bl(&[(-1, 2, 2)], 270), ZB,
    ],
    [
        bl(&[(7, 3, 1)], 810), bl(&[(7, 3, 2)], 810), bl(&[(17, 3, 3)], 405),
        bl(&[(-1, 3, 3)], 270), bl(&[(-1, 3, 3)], 270),
        bl(&[(-1, 3, 1), (-9, 3, 2)], 270), bl(&[(18, 3, 2), (-1, 3, 1)], 270),
        bl(&[(18, 3, 1), (-1, 3, 2)], 270), bl(&[(-1, 3, 2), (-9, 3, 1)], 270), ZB,
    ],
    [
        bl(&[(18, 2, 1), (-1, 3, 1)], 270), bl(&[(-1, 3, 2), (-9, 1, 2)], 270), bl(&[(-1, 3, 3)], 270),
        bl(&[(1, 1, 1), (1, 2, 2), (1, 3, 3)], 12),
        bl(&[(5, 1, 2), (-1, 2, 1), (-2, 1, 1), (-2, 2, 2)], 60),
        bl(&[(-1, 1, 3), (-1, 3, 1)], 60), bl(&[(-1, 1, 3), (-1, 3, 1)], 60),
        bl(&[(-1, 2, 3), (-1, 3, 2)], 60), bl(&[(1, 2, 3), (1, 3, 2)], 12),
        bl(&[(1, 1, 3), (1, 3, 1)], 10),
    ],
    [
        bl(&[(-1, 3, 1), (-9, 2, 1)], 270), bl(&[(18, 1, 2), (-1, 3, 2)], 270), bl(&[(-1, 3, 3)], 270),
        bl(&[(5, 2, 1), (-1, 1, 2), (-2, 1, 1), (-2, 2, 2)], 60),
        bl(&[(1, 1, 1), (1, 2, 2), (1, 3, 3)], 12),
        bl(&[(1, 1, 3), (1, 3, 1)], 12), bl(&[(-1, 1, 3), (-1, 3, 1)], 60),
        bl(&[(-1, 2, 3), (-1, 3, 2)], 60), bl(&[(-1, 2, 3), (-1, 3, 2)], 60),
        bl(&[(1, 2, 3), (1, 3, 2)], 10),
    ],
    [
        bl(&[(-1, 1, 1)], 270), bl(&[(18, 3, 2), (-1, 1, 2)], 270), bl(&[(-1, 1, 3), (-9, 2, 3)], 270),
        bl(&[(-1, 1, 3), (-1, 3, 1)], 60), bl(&[(1, 1, 3), (1, 3, 1)], 12),
        bl(&[(1, 1, 1), (1, 2, 2), (1, 3, 3)], 12),
        bl(&[(5, 2, 3), (-1, 3, 2), (-2, 2, 2), (-2, 3, 3)], 60),
        bl(&[(-1, 1, 2), (-1, 2, 1)], 60), bl(&[(-1, 1, 2), (-1, 2, 1)], 60),
        bl(&[(1, 1, 2), (1, 2, 1)], 10),
    ],
    [
        bl(&[(-1, 1, 1)], 270), bl(&[(-1, 1, 2), (-9, 3, 2)], 270), bl(&[(18, 2, 3), (-1, 1, 3)], 270),
        bl(&[(-1, 1, 3), (-1, 3, 1)], 60), bl(&[(-1, 1, 3), (-1, 3, 1)], 60),
        bl(&[(5, 3, 2), (-1, 2, 3), (-2, 2, 2), (-2, 3, 3)], 60),
        bl(&[(1, 1, 1), (1, 2, 2), (1, 3, 3)], 12),
        bl(&[(1, 1, 2), (1, 2, 1)], 12), bl(&[(-1, 1, 2), (-1, 2, 1)], 60),
        bl(&[(1, 1, 3), (1, 3, 1)], 10),
    ],
    [
        bl(&[(-1, 2, 1), (-9, 3, 1)], 270), bl(&[(-1, 2, 2)], 270), bl(&[(18, 1, 3), (-1, 2, 3)], 270),
        bl(&[(-1, 2, 3), (-1, 3, 2)], 60), bl(&[(-1, 2, 3), (-1, 3, 2)], 60),
        bl(&[(-1, 1, 2), (-1, 2, 1)], 60), bl(&[(1, 1, 2), (1, 2, 1)], 12),
        bl(&[(1, 1, 1), (1, 2, 2), (1, 3, 3)], 12),
        bl(&[(5, 3, 1), (-1, 1, 3), (-2, 1, 1), (-2, 3, 3)], 60),
        bl(&[(1, 2, 3), (1, 3, 2)], 10),
    ],
    [
        bl(&[(18, 3, 1), (-1, 2, 1)], 270), bl(&[(-1, 2, 2)], 270), bl(&[(-1, 2, 3), (-9, 1, 3)], 270),
        bl(&[(1, 2, 3), (1, 3, 2)], 12), bl(&[(-1, 2, 3), (-1, 3, 2)], 60),
        bl(&[(-1, 1, 2), (-1, 2, 1)], 60), bl(&[(-1, 1, 2), (-1, 2, 1)], 60),
        bl(&[(5, 1, 3), (-1, 3, 1), (-2, 1, 1), (-2, 3, 3)], 60),
        bl(&[(1, 1, 1), (1, 2, 2), (1, 3, 3)], 12),
        bl(&[(1, 1, 2), (1, 2, 1)], 10),
    ],
    [
        ZB, ZB, ZB,
        bl(&[(1, 1, 3), (1, 3, 1)], 10), bl(&[(1, 2, 3), (1, 3, 2)], 10),
        bl(&[(1, 1, 2), (1, 2, 1)], 10), bl(&[(1, 1, 3), (1, 3, 1)], 10),
        bl(&[(1, 2, 3), (1, 3, 2)], 10), bl(&[(1, 1, 2), (1, 2, 1)], 10),
        bl(&[(1, 1, 1), (1, 2, 2), (1, 3, 3)], 5),
    ],
];

/// Full `Dx` table in units of `27/140`; entries in `b_m`.
#[rustfmt::skip]
const CONVECTION: [[Linear; N]; N] = [
    [
        li(&[(16, 1)], 81), li(&[(19, 2)], 324), li(&[(19, 3)], 324),
        li(&[(22, 2), (-1, 1)], 72), li(&[(5, 1), (-8, 2)], 72), li(&[(-5, 1)], 72), li(&[(-5, 1)], 72),
        li(&[(5, 1), (-8, 3)], 72), li(&[(22, 3), (-1, 1)], 72), li(&[(1, 1)], 12),
    ],
    [
        li(&[(19, 1)], 324), li(&[(16, 2)], 81), li(&[(19, 3)], 324),
        li(&[(5, 2), (-8, 1)], 72), li(&[(22, 1), (-1, 2)], 72), li(&[(22, 3), (-1, 2)], 72),
        li(&[(5, 2), (-8, 3)], 72), li(&[(-5, 2)], 72), li(&[(-5, 2)], 72), li(&[(1, 2)], 12),
    ],
    [
        li(&[(19, 1)], 324), li(&[(19, 2)], 324), li(&[(16, 3)], 81),
        li(&[(-5, 3)], 72), li(&[(-5, 3)], 72), li(&[(5, 3), (-8, 2)], 72), li(&[(22, 2), (-1, 3)], 72),
        li(&[(22, 1), (-1, 3)], 72), li(&[(5, 3), (-8, 1)], 72), li(&[(1, 3)], 12),
    ],
    [
        li(&[(23, 1)], 72), li(&[(-13, 2)], 72), li(&[(5, 3)], 72),
        li(&[(-1, 3)], 1), li(&[(1, 2), (-3, 1)], 8), li(&[(2, 1), (-1, 3)], 8), li(&[(1, 1), (-1, 3)], 8),
        li(&[(1, 2), (-2, 3)], 8), li(&[(1, 3), (-1, 2)], 2), li(&[(2, 3), (-3, 1)], 4),
    ],
    [
        li(&[(-13, 1)], 72), li(&[(23, 2)], 72), li(&[(5, 3)], 72),
        li(&[(1, 1), (-3, 2)], 8), li(&[(-1, 3)], 1), li(&[(1, 3), (-1, 1)], 2), li(&[(1, 1), (-2, 3)], 8),
        li(&[(1, 2), (-1, 3)], 8), li(&[(2, 2), (-1, 3)], 8), li(&[(2, 3), (-3, 2)], 4),
    ],
    [
        li(&[(5, 1)], 72), li(&[(23, 2)], 72), li(&[(-13, 3)], 72),
        li(&[(1, 3), (-2, 1)], 8), li(&[(1, 1), (-1, 3)], 2), li(&[(-1, 1)], 1), li(&[(1, 3), (-3, 2)], 8),
        li(&[(2, 2), (-1, 1)], 8), li(&[(1, 2), (-1, 1)], 8), li(&[(2, 1), (-3, 2)], 4),
    ],
    [
        li(&[(5, 1)], 72), li(&[(-13, 2)], 72), li(&[(23, 3)], 72),
        li(&[(1, 3), (-1, 1)], 8), li(&[(2, 3), (-1, 1)], 8), li(&[(1, 2), (-3, 3)], 8), li(&[(-1, 1)], 1),
        li(&[(1, 1), (-1, 2)], 2), li(&[(1, 2), (-2, 1)], 8), li(&[(2, 1), (-3, 3)], 4),
    ],
    [
        li(&[(-13, 1)], 72), li(&[(5, 2)], 72), li(&[(23, 3)], 72),
        li(&[(2, 3), (-1, 2)], 8), li(&[(1, 3), (-1, 2)], 8), li(&[(1, 1), (-2, 2)], 8), li(&[(1, 2), (-1, 1)], 2),
        li(&[(-1, 2)], 1), li(&[(1, 1), (-3, 3)], 8), li(&[(2, 2), (-3, 3)], 4),
    ],
    [
        li(&[(23, 1)], 72), li(&[(5, 2)], 72), li(&[(-13, 3)], 72),
        li(&[(1, 2), (-1, 3)], 2), li(&[(1, 3), (-2, 2)], 8), li(&[(1, 1), (-1, 2)], 8), li(&[(2, 1), (-1, 2)], 8),
        li(&[(1, 3), (-3, 1)], 8), li(&[(-1, 2)], 1), li(&[(2, 2), (-3, 1)], 4),
    ],
    [
        li(&[(-1, 1)], 12), li(&[(-1, 2)], 12), li(&[(-1, 3)], 12),
        li(&[(3, 1), (-2, 3)], 4), li(&[(3, 2), (-2, 3)], 4), li(&[(3, 2), (-2, 1)], 4),
        li(&[(3, 3), (-2, 1)], 4), li(&[(3, 3), (-2, 2)], 4), li(&[(3, 1), (-2, 2)], 4), li(&[], 1),
    ],
];

pub fn mass(geom: &ElementGeometry) -> DMatrix<f64> {
    let table = mass_table();
    let scale = 3.0 * geom.area / 2240.0;
    DMatrix::from_fn(N, N, |i, j| {
        scale * (*table[i][j].numer() as f64) / (*table[i][j].denom() as f64)
    })
}

fn stiffness(u: &[f64; 3], area: f64) -> DMatrix<f64> {
    let scale = 81.0 / (8.0 * area);
    DMatrix::from_fn(N, N, |i, j| {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        scale * STIFFNESS_UPPER[packed(lo, hi)].eval(u, u)
    })
}

/// Row-major index into a packed upper triangle (diagonal included).
fn packed(i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    i * (2 * N - i + 1) / 2 + (j - i)
}

pub fn stiffness_x(geom: &ElementGeometry) -> DMatrix<f64> {
    stiffness(&geom.b, geom.area)
}

pub fn stiffness_y(geom: &ElementGeometry) -> DMatrix<f64> {
    stiffness(&geom.c, geom.area)
}

pub fn cross_xy(geom: &ElementGeometry) -> DMatrix<f64> {
    let scale = 81.0 / (16.0 * geom.area);
    DMatrix::from_fn(N, N, |i, j| scale * CROSS[i][j].eval(&geom.b, &geom.c))
}

fn convection(u: &[f64; 3]) -> DMatrix<f64> {
    let scale = 27.0 / 140.0;
    DMatrix::from_fn(N, N, |i, j| scale * CONVECTION[i][j].eval(u))
}

pub fn convection_x(geom: &ElementGeometry) -> DMatrix<f64> {
    convection(&geom.b)
}

pub fn convection_y(geom: &ElementGeometry) -> DMatrix<f64> {
    convection(&geom.c)
}
