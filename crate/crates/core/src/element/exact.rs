//! Exact integration of elemental integrands.
//!
//! Shape functions are expanded into polynomials in the area coordinates with
//! rational coefficients. Products and partial derivatives stay exact, and
//! every monomial is integrated with `∫ L1^i L2^j L3^k = i! j! k! 2Δ / (i+j+k+2)!`.
//! The geometry enters only at the end: gradient integrands are sums of
//! `b_m b_n`, `b_m c_n`, ... products weighted by exact reference integrals.
//!
//! This path shares nothing with the closed-form tables and serves as their
//! oracle.

use nalgebra::DMatrix;
use num_rational::Ratio;

use super::{ElementGeometry, MatrixKind, Order};

pub type Q = Ratio<i64>;

/// Polynomial in `(L1, L2, L3)` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    terms: Vec<(Q, [u32; 3])>,
}

impl Poly {
    pub fn constant(c: Q) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: Q, exps: [u32; 3]) -> Self {
        let mut p = Self::default();
        p.push(c, exps);
        p
    }

    /// `c · L_m`
    pub fn var(m: usize, c: Q) -> Self {
        let mut e = [0; 3];
        e[m] = 1;
        Self::monomial(c, e)
    }

    fn push(&mut self, c: Q, exps: [u32; 3]) {
        if c == Q::from_integer(0) {
            return;
        }
        match self.terms.iter_mut().find(|(_, e)| *e == exps) {
            Some((coef, _)) => *coef += c,
            None => self.terms.push((c, exps)),
        }
        self.terms.retain(|(c, _)| *c != Q::from_integer(0));
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for &(c, e) in &other.terms {
            out.push(c, e);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for &(c1, e1) in &self.terms {
            for &(c2, e2) in &other.terms {
                out.push(c1 * c2, [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]]);
            }
        }
        out
    }

    pub fn derivative(&self, m: usize) -> Poly {
        let mut out = Poly::default();
        for &(c, e) in &self.terms {
            if e[m] > 0 {
                let mut e2 = e;
                e2[m] -= 1;
                out.push(c * Q::from_integer(e[m] as i64), e2);
            }
        }
        out
    }

    pub fn eval(&self, l: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                (*c.numer() as f64 / *c.denom() as f64)
                    * l[0].powi(e[0] as i32)
                    * l[1].powi(e[1] as i32)
                    * l[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// `∫_T p dΩ / (2Δ)`, exactly.
    pub fn integral_over_twice_area(&self) -> Q {
        self.terms.iter().fold(Q::from_integer(0), |acc, &(c, e)| {
            acc + c * monomial_integral_ratio(e[0], e[1], e[2])
        })
    }
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// `i! j! k! / (i+j+k+2)!`
pub fn monomial_integral_ratio(i: u32, j: u32, k: u32) -> Q {
    Q::new(factorial(i) * factorial(j) * factorial(k), factorial(i + j + k + 2))
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// `(p·L_m − s)` as a polynomial
fn affine(m: usize, p: i64, s: i64) -> Poly {
    Poly::var(m, q(p, 1)).add(&Poly::constant(q(-s, 1)))
}

/// Shape functions as polynomials, built from their product forms.
pub fn shape_polynomials(order: Order) -> Vec<Poly> {
    let l = |m: usize| Poly::var(m, q(1, 1));
    match order {
        Order::Quadratic => {
            let vertex = |m: usize| l(m).mul(&affine(m, 2, 1));
            let edge = |m: usize, n: usize| Poly::constant(q(4, 1)).mul(&l(m)).mul(&l(n));
            vec![vertex(0), vertex(1), vertex(2), edge(0, 1), edge(1, 2), edge(2, 0)]
        }
        Order::Cubic => {
            let vertex = |m: usize| {
                Poly::constant(q(1, 2))
                    .mul(&l(m))
                    .mul(&affine(m, 3, 1))
                    .mul(&affine(m, 3, 2))
            };
            // 9/2 L_m L_n (3 L_s - 1)
            let edge =
                |m: usize, n: usize, s: usize| Poly::constant(q(9, 2)).mul(&l(m)).mul(&l(n)).mul(&affine(s, 3, 1));
            vec![
                vertex(0),
                vertex(1),
                vertex(2),
                edge(0, 1, 0),
                edge(0, 1, 1),
                edge(1, 2, 1),
                edge(1, 2, 2),
                edge(0, 2, 2),
                edge(0, 2, 0),
                Poly::constant(q(27, 1)).mul(&l(0)).mul(&l(1)).mul(&l(2)),
            ]
        }
    }
}

/// Geometry-free integrals of one element order, divided by `2Δ`:
///
/// * `mass[i][j] = ∫ N_i N_j`
/// * `grad[m][n][i][j] = ∫ ∂_m N_i ∂_n N_j`
/// * `mixed[n][i][j] = ∫ N_i ∂_n N_j`
///
/// where `∂_m` differentiates with respect to `L_m`.
#[derive(Debug, Clone)]
pub struct ReferenceIntegrals {
    pub order: Order,
    pub mass: Vec<Vec<Q>>,
    pub grad: [[Vec<Vec<Q>>; 3]; 3],
    pub mixed: [Vec<Vec<Q>>; 3],
}

impl ReferenceIntegrals {
    pub fn for_order(order: Order) -> Self {
        let n = order.nodes_per_element();
        let shapes = shape_polynomials(order);
        let derivs: Vec<[Poly; 3]> = shapes
            .iter()
            .map(|p| [p.derivative(0), p.derivative(1), p.derivative(2)])
            .collect();
        let table = |f: &dyn Fn(usize, usize) -> Q| (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();

        let mass = table(&|i, j| shapes[i].mul(&shapes[j]).integral_over_twice_area());
        let grad = [0, 1, 2]
            .map(|m| [0, 1, 2].map(|k| table(&|i, j| derivs[i][m].mul(&derivs[j][k]).integral_over_twice_area())));
        let mixed = [0, 1, 2].map(|k| table(&|i, j| shapes[i].mul(&derivs[j][k]).integral_over_twice_area()));
        Self {
            order,
            mass,
            grad,
            mixed,
        }
    }

    /// Assemble the requested matrix for a concrete triangle.
    pub fn matrix(&self, geom: &ElementGeometry, kind: MatrixKind) -> DMatrix<f64> {
        let n = self.order.nodes_per_element();
        let f = |r: &Q| *r.numer() as f64 / *r.denom() as f64;
        let two_area = 2.0 * geom.area;
        // ∂L_m/∂x = b_m / 2Δ, so a product of two gradients carries 1/(4Δ²)
        // and the integral contributes 2Δ.
        let grad_pair = |u: &[f64; 3], v: &[f64; 3]| {
            DMatrix::from_fn(n, n, |i, j| {
                let s: f64 = (0..3)
                    .flat_map(|m| (0..3).map(move |k| (m, k)))
                    .map(|(m, k)| u[m] * v[k] * f(&self.grad[m][k][i][j]))
                    .sum();
                s / two_area
            })
        };
        let mixed = |u: &[f64; 3]| DMatrix::from_fn(n, n, |i, j| (0..3).map(|k| u[k] * f(&self.mixed[k][i][j])).sum());
        match kind {
            MatrixKind::B => DMatrix::from_fn(n, n, |i, j| two_area * f(&self.mass[i][j])),
            MatrixKind::Ax => grad_pair(&geom.b, &geom.b),
            MatrixKind::Ay => grad_pair(&geom.c, &geom.c),
            MatrixKind::Cxy => grad_pair(&geom.b, &geom.c),
            MatrixKind::Dx => mixed(&geom.b),
            MatrixKind::Dy => mixed(&geom.c),
        }
    }
}
