//! Lagrange triangles: area coordinates, shape functions and elemental
//! matrices.
//!
//! Six elemental matrices are produced per triangle, with `N` the vector of
//! shape functions:
//!
//! | kind  | integrand                 |
//! |-------|---------------------------|
//! | `B`   | `N_i N_j`                 |
//! | `Ax`  | `∂N_i/∂x ∂N_j/∂x`         |
//! | `Ay`  | `∂N_i/∂y ∂N_j/∂y`         |
//! | `Cxy` | `∂N_i/∂x ∂N_j/∂y`         |
//! | `Dx`  | `N_i ∂N_j/∂x`             |
//! | `Dy`  | `N_i ∂N_j/∂y`             |
//!
//! Cubic matrices come from closed-form tables ([`closed_form`]); quadratic
//! ones, and the cross-check for the cubic tables, come from exact
//! integration of the expanded polynomial integrands ([`exact`]) or a
//! collapsed Gauss rule ([`gauss`]).

pub mod closed_form;
pub mod exact;
pub mod gauss;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mesh::Point2;

/// Polynomial order of the Lagrange element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Quadratic,
    Cubic,
}

impl Order {
    pub fn degree(self) -> usize {
        match self {
            Order::Quadratic => 2,
            Order::Cubic => 3,
        }
    }

    pub fn nodes_per_element(self) -> usize {
        match self {
            Order::Quadratic => 6,
            Order::Cubic => 10,
        }
    }

    pub fn from_degree(degree: usize) -> Result<Self> {
        match degree {
            2 => Ok(Order::Quadratic),
            3 => Ok(Order::Cubic),
            d => Err(Error::InvalidArgument(format!("element order must be 2 or 3, got {d}"))),
        }
    }

    /// Area coordinates of the element nodes, scaled by the degree so they are
    /// integers. Local ordering: vertices, edge nodes counterclockwise from
    /// vertex 1, then the bubble.
    pub fn node_pattern(self) -> &'static [[usize; 3]] {
        const QUADRATIC: [[usize; 3]; 6] = [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [0, 1, 1], [1, 0, 1]];
        const CUBIC: [[usize; 3]; 10] = [
            [3, 0, 0],
            [0, 3, 0],
            [0, 0, 3],
            [2, 1, 0],
            [1, 2, 0],
            [0, 2, 1],
            [0, 1, 2],
            [1, 0, 2],
            [2, 0, 1],
            [1, 1, 1],
        ];
        match self {
            Order::Quadratic => &QUADRATIC,
            Order::Cubic => &CUBIC,
        }
    }

    /// Node `k` as a barycentric triple.
    pub fn node_barycentric(self, k: usize) -> [f64; 3] {
        let p = self.degree() as f64;
        let w = self.node_pattern()[k];
        [w[0] as f64 / p, w[1] as f64 / p, w[2] as f64 / p]
    }
}

/// Coefficients of the linear area coordinates of a triangle,
/// `L_j = (a_j + b_j x + c_j y) / (2Δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
    pub area: f64,
}

/// Relative area threshold below which a triangle counts as degenerate.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-14;

impl ElementGeometry {
    pub fn from_vertices(v: [Point2; 3]) -> Result<Self> {
        let [p1, p2, p3] = v;
        let a = [
            p2.x * p3.y - p2.y * p3.x,
            p3.x * p1.y - p3.y * p1.x,
            p1.x * p2.y - p1.y * p2.x,
        ];
        let b = [p2.y - p3.y, p3.y - p1.y, p1.y - p2.y];
        let c = [p3.x - p2.x, p1.x - p3.x, p2.x - p1.x];
        let area = 0.5 * (b[0] * c[1] - b[1] * c[0]);

        let longest = (0..3).map(|j| b[j] * b[j] + c[j] * c[j]).fold(0.0_f64, f64::max);
        let threshold = DEGENERATE_AREA_RATIO * longest;
        if area.is_nan() || area <= threshold {
            return Err(Error::DegenerateElement { area, threshold });
        }
        Ok(Self { a, b, c, area })
    }

    /// Barycentric coordinates of a Cartesian point.
    pub fn area_coordinates(&self, p: Point2) -> [f64; 3] {
        let s = 0.5 / self.area;
        [0, 1, 2].map(|j| (self.a[j] + self.b[j] * p.x + self.c[j] * p.y) * s)
    }

    /// Gradient of `L_j`: `(b_j, c_j) / (2Δ)`.
    pub fn area_coordinate_gradient(&self, j: usize) -> [f64; 2] {
        let s = 0.5 / self.area;
        [self.b[j] * s, self.c[j] * s]
    }
}

/// Shape function values at barycentric point `l`.
pub fn shape_values(order: Order, l: [f64; 3]) -> Vec<f64> {
    let [l1, l2, l3] = l;
    match order {
        Order::Quadratic => vec![
            l1 * (2.0 * l1 - 1.0),
            l2 * (2.0 * l2 - 1.0),
            l3 * (2.0 * l3 - 1.0),
            4.0 * l1 * l2,
            4.0 * l2 * l3,
            4.0 * l3 * l1,
        ],
        Order::Cubic => vec![
            0.5 * l1 * (3.0 * l1 - 1.0) * (3.0 * l1 - 2.0),
            0.5 * l2 * (3.0 * l2 - 1.0) * (3.0 * l2 - 2.0),
            0.5 * l3 * (3.0 * l3 - 1.0) * (3.0 * l3 - 2.0),
            4.5 * l1 * l2 * (3.0 * l1 - 1.0),
            4.5 * l1 * l2 * (3.0 * l2 - 1.0),
            4.5 * l2 * l3 * (3.0 * l2 - 1.0),
            4.5 * l2 * l3 * (3.0 * l3 - 1.0),
            4.5 * l1 * l3 * (3.0 * l3 - 1.0),
            4.5 * l1 * l3 * (3.0 * l1 - 1.0),
            27.0 * l1 * l2 * l3,
        ],
    }
}

/// Partial derivatives `∂N_k/∂L_m`, treating the three area coordinates as
/// independent variables. Row `k`, column `m`.
pub fn shape_barycentric_derivatives(order: Order, l: [f64; 3]) -> Vec<[f64; 3]> {
    let [l1, l2, l3] = l;
    match order {
        Order::Quadratic => vec![
            [4.0 * l1 - 1.0, 0.0, 0.0],
            [0.0, 4.0 * l2 - 1.0, 0.0],
            [0.0, 0.0, 4.0 * l3 - 1.0],
            [4.0 * l2, 4.0 * l1, 0.0],
            [0.0, 4.0 * l3, 4.0 * l2],
            [4.0 * l3, 0.0, 4.0 * l1],
        ],
        Order::Cubic => {
            // d/dL [L(3L-1)(3L-2)/2] = (27L^2 - 18L + 2)/2
            let vertex = |t: f64| 0.5 * (27.0 * t * t - 18.0 * t + 2.0);
            // 9/2 * p * q * (3p - 1): d/dp and d/dq
            let edge = |p: f64, q: f64| (4.5 * q * (6.0 * p - 1.0), 4.5 * p * (3.0 * p - 1.0));
            let (e4p, e4q) = edge(l1, l2);
            let (e5p, e5q) = edge(l2, l1);
            let (e6p, e6q) = edge(l2, l3);
            let (e7p, e7q) = edge(l3, l2);
            let (e8p, e8q) = edge(l3, l1);
            let (e9p, e9q) = edge(l1, l3);
            vec![
                [vertex(l1), 0.0, 0.0],
                [0.0, vertex(l2), 0.0],
                [0.0, 0.0, vertex(l3)],
                [e4p, e4q, 0.0],
                [e5q, e5p, 0.0],
                [0.0, e6p, e6q],
                [0.0, e7q, e7p],
                [e8q, 0.0, e8p],
                [e9p, 0.0, e9q],
                [27.0 * l2 * l3, 27.0 * l1 * l3, 27.0 * l1 * l2],
            ]
        }
    }
}

/// Cartesian gradients `(∂N_k/∂x, ∂N_k/∂y)` at barycentric point `l`.
pub fn shape_gradients(order: Order, geom: &ElementGeometry, l: [f64; 3]) -> Vec<[f64; 2]> {
    let grad_l = [0, 1, 2].map(|j| geom.area_coordinate_gradient(j));
    shape_barycentric_derivatives(order, l)
        .into_iter()
        .map(|d| {
            let mut g = [0.0; 2];
            for m in 0..3 {
                g[0] += d[m] * grad_l[m][0];
                g[1] += d[m] * grad_l[m][1];
            }
            g
        })
        .collect()
}

/// `∫_T L1^i L2^j L3^k dΩ = i! j! k! / (i+j+k+2)! · 2Δ`.
pub fn integrate_monomial(i: u32, j: u32, k: u32, area: f64) -> f64 {
    let r = exact::monomial_integral_ratio(i, j, k);
    2.0 * area * (*r.numer() as f64) / (*r.denom() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    B,
    Ax,
    Ay,
    Cxy,
    Dx,
    Dy,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 6] = [
        MatrixKind::B,
        MatrixKind::Ax,
        MatrixKind::Ay,
        MatrixKind::Cxy,
        MatrixKind::Dx,
        MatrixKind::Dy,
    ];
}

/// The six local matrices of one triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementMatrices {
    pub b: DMatrix<f64>,
    pub ax: DMatrix<f64>,
    pub ay: DMatrix<f64>,
    pub cxy: DMatrix<f64>,
    pub dx: DMatrix<f64>,
    pub dy: DMatrix<f64>,
}

impl ElementMatrices {
    /// Closed-form tables for cubic elements, exact integration for quadratic.
    pub fn compute(geom: &ElementGeometry, order: Order) -> Self {
        match order {
            Order::Cubic => Self {
                b: closed_form::mass(geom),
                ax: closed_form::stiffness_x(geom),
                ay: closed_form::stiffness_y(geom),
                cxy: closed_form::cross_xy(geom),
                dx: closed_form::convection_x(geom),
                dy: closed_form::convection_y(geom),
            },
            Order::Quadratic => Self::by_quadrature(geom, order),
        }
    }

    /// All six matrices from exact monomial integration.
    pub fn by_quadrature(geom: &ElementGeometry, order: Order) -> Self {
        let ints = exact::ReferenceIntegrals::for_order(order);
        Self {
            b: ints.matrix(geom, MatrixKind::B),
            ax: ints.matrix(geom, MatrixKind::Ax),
            ay: ints.matrix(geom, MatrixKind::Ay),
            cxy: ints.matrix(geom, MatrixKind::Cxy),
            dx: ints.matrix(geom, MatrixKind::Dx),
            dy: ints.matrix(geom, MatrixKind::Dy),
        }
    }

    pub fn get(&self, kind: MatrixKind) -> &DMatrix<f64> {
        match kind {
            MatrixKind::B => &self.b,
            MatrixKind::Ax => &self.ax,
            MatrixKind::Ay => &self.ay,
            MatrixKind::Cxy => &self.cxy,
            MatrixKind::Dx => &self.dx,
            MatrixKind::Dy => &self.dy,
        }
    }
}

/// Elemental matrix from the closed-form path for cubics, exact integration
/// otherwise.
pub fn elemental(geom: &ElementGeometry, order: Order, kind: MatrixKind) -> DMatrix<f64> {
    match order {
        Order::Cubic => match kind {
            MatrixKind::B => closed_form::mass(geom),
            MatrixKind::Ax => closed_form::stiffness_x(geom),
            MatrixKind::Ay => closed_form::stiffness_y(geom),
            MatrixKind::Cxy => closed_form::cross_xy(geom),
            MatrixKind::Dx => closed_form::convection_x(geom),
            MatrixKind::Dy => closed_form::convection_y(geom),
        },
        Order::Quadratic => elemental_by_quadrature(geom, order, kind),
    }
}

/// Elemental matrix by exact integration of the expanded integrand.
pub fn elemental_by_quadrature(geom: &ElementGeometry, order: Order, kind: MatrixKind) -> DMatrix<f64> {
    exact::ReferenceIntegrals::for_order(order).matrix(geom, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(p: [(f64, f64); 3]) -> ElementGeometry {
        ElementGeometry::from_vertices(p.map(|(x, y)| Point2::new(x, y))).unwrap()
    }

    #[test]
    fn geometry_of_reference_triangles() {
        let g = tri([(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)]);
        assert_eq!(g.area, 0.5);
        assert_eq!(g.b, [-1.0, 1.0, 0.0]);
        assert_eq!(g.c, [-1.0, 0.0, 1.0]);
        let g0 = tri([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!((g0.area, g0.b, g0.c), (0.5, g.b, g.c));
        let g2 = tri([(2.0, 2.0), (4.0, 2.0), (2.0, 4.0)]);
        assert_eq!(g2.area, 4.0 * g.area);
        assert_eq!(g2.b, g.b.map(|v| 2.0 * v));
        assert_eq!(g2.c, g.c.map(|v| 2.0 * v));
    }

    #[test]
    fn degenerate_triangles_rejected() {
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)].map(|(x, y)| Point2::new(x, y));
        assert!(matches!(
            ElementGeometry::from_vertices(pts),
            Err(Error::DegenerateElement { .. })
        ));
        let cw = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)].map(|(x, y)| Point2::new(x, y));
        assert!(ElementGeometry::from_vertices(cw).is_err());
        let sliver = [(0.0, 0.0), (1.0, 0.0), (0.5, 1e-15)].map(|(x, y)| Point2::new(x, y));
        assert!(ElementGeometry::from_vertices(sliver).is_err());
    }

    #[test]
    fn area_coordinates_examples() {
        let g = tri([(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)]);
        assert_eq!(g.area_coordinates(Point2::new(1.0, 1.0)), [1.0, 0.0, 0.0]);
        let l = g.area_coordinates(Point2::new(1.5, 1.5));
        assert!((l[0]).abs() < 1e-15 && (l[1] - 0.5).abs() < 1e-15 && (l[2] - 0.5).abs() < 1e-15);
        let l = g.area_coordinates(Point2::new(4.0 / 3.0, 4.0 / 3.0));
        for v in l {
            assert!((v - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn kronecker_property_at_nodes() {
        for order in [Order::Quadratic, Order::Cubic] {
            for k in 0..order.nodes_per_element() {
                let n = shape_values(order, order.node_barycentric(k));
                for (j, v) in n.iter().enumerate() {
                    let expected = if j == k { 1.0 } else { 0.0 };
                    assert!((v - expected).abs() < 1e-14, "order {order:?} node {k} fn {j}: {v}");
                }
            }
        }
    }

    #[test]
    fn node_four_value() {
        let n = shape_values(Order::Cubic, [2.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert!((n[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn integrate_monomial_examples() {
        assert!((integrate_monomial(0, 0, 0, 0.7) - 0.7).abs() < 1e-15);
        assert!((integrate_monomial(1, 0, 0, 0.7) - 0.7 / 3.0).abs() < 1e-15);
        assert!((integrate_monomial(1, 1, 1, 0.7) - 0.7 / 60.0).abs() < 1e-15);
        assert!((integrate_monomial(2, 0, 0, 1.0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let g = tri([(0.2, -0.1), (1.3, 0.4), (0.1, 0.9)]);
        let v = [Point2::new(0.2, -0.1), Point2::new(1.3, 0.4), Point2::new(0.1, 0.9)];
        let diam = 1.2;
        let h = 1e-6 * diam;
        let pts = [[0.2, 0.3, 0.5], [0.6, 0.2, 0.2], [0.1, 0.1, 0.8], [0.34, 0.33, 0.33]];
        for order in [Order::Quadratic, Order::Cubic] {
            for l in pts {
                let p = Point2::new(
                    l[0] * v[0].x + l[1] * v[1].x + l[2] * v[2].x,
                    l[0] * v[0].y + l[1] * v[1].y + l[2] * v[2].y,
                );
                let at = |q: Point2| shape_values(order, g.area_coordinates(q));
                let grad = shape_gradients(order, &g, l);
                let (xp, xm) = (at(Point2::new(p.x + h, p.y)), at(Point2::new(p.x - h, p.y)));
                let (yp, ym) = (at(Point2::new(p.x, p.y + h)), at(Point2::new(p.x, p.y - h)));
                for k in 0..order.nodes_per_element() {
                    assert!((grad[k][0] - (xp[k] - xm[k]) / (2.0 * h)).abs() < 1e-6);
                    assert!((grad[k][1] - (yp[k] - ym[k]) / (2.0 * h)).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn linear_field_reproduced() {
        let v = [Point2::new(0.0, 0.0), Point2::new(2.0, 0.5), Point2::new(0.3, 1.5)];
        let g = ElementGeometry::from_vertices(v).unwrap();
        for order in [Order::Quadratic, Order::Cubic] {
            let nodal: Vec<f64> = crate::mesh::element_node_coords(order, &v)
                .iter()
                .map(|p| p.x)
                .collect();
            let grad = shape_gradients(order, &g, [0.3, 0.3, 0.4]);
            let dudx: f64 = grad.iter().zip(&nodal).map(|(g, u)| g[0] * u).sum();
            let dudy: f64 = grad.iter().zip(&nodal).map(|(g, u)| g[1] * u).sum();
            assert!((dudx - 1.0).abs() < 1e-13 && dudy.abs() < 1e-13);
        }
    }

    #[test]
    fn order_from_degree() {
        assert_eq!(Order::from_degree(3).unwrap(), Order::Cubic);
        assert!(Order::from_degree(5).is_err());
    }
}
