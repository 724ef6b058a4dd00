//! Structured triangulations of a rectangle with Lagrange node numbering.
//!
//! Every rectangular cell of an `nx × ny` grid is split by a diagonal of the
//! same orientation. Global nodes live on the fine grid obtained by
//! subdividing every cell edge into `order` intervals, numbered row-major from
//! the lower-left corner. Element-local nodes follow the counterclockwise
//! convention: the three vertices, then the edge nodes walking 1→2→3→1, then
//! (cubic only) the interior bubble node.

use crate::element::Order;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Orientation of the diagonal that splits each rectangular cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Diagonal {
    /// Lower-left to upper-right.
    #[default]
    Rising,
    /// Lower-right to upper-left.
    Falling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub order: Order,
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    /// Cell corner coordinates, row-major over `(nx + 1) × (ny + 1)`.
    pub vertices: Vec<Point2>,
    /// Counterclockwise vertex triples indexing [`TriMesh::vertices`].
    pub triangles: Vec<[usize; 3]>,
    pub region_id: Vec<usize>,
    /// Global node indices per element, `order.nodes_per_element()` each.
    pub element_nodes: Vec<Vec<usize>>,
    pub node_coords: Vec<Point2>,
    pub boundary_node: Vec<bool>,
}

impl TriMesh {
    pub fn num_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.node_coords.len()
    }

    pub fn element_vertices(&self, e: usize) -> [Point2; 3] {
        let t = self.triangles[e];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    /// Largest cell diagonal; the length scale for coordinate tolerances.
    pub fn diameter(&self) -> f64 {
        (self.width * self.width + self.height * self.height).sqrt()
    }

    /// Geometry coefficients of element `e`.
    pub fn element_geometry(&self, e: usize) -> Result<crate::element::ElementGeometry> {
        if e >= self.num_elements() {
            return Err(Error::InvalidArgument(format!(
                "element index {e} out of range (mesh has {})",
                self.num_elements()
            )));
        }
        crate::element::ElementGeometry::from_vertices(self.element_vertices(e))
    }

    /// Element containing `p` and its barycentric coordinates there. Points on
    /// shared edges resolve to the lower-index cell; points slightly outside
    /// the rectangle are clamped to it.
    pub fn locate(&self, p: Point2) -> Option<(usize, [f64; 3])> {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return None;
        }
        let hx = self.width / self.nx as f64;
        let hy = self.height / self.ny as f64;
        let ci = ((p.x / hx).floor().max(0.0) as usize).min(self.nx - 1);
        let cj = ((p.y / hy).floor().max(0.0) as usize).min(self.ny - 1);
        let first = 2 * (cj * self.nx + ci);
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for e in [first, first + 1] {
            let geom = self.element_geometry(e).ok()?;
            let l = geom.area_coordinates(p);
            let worst = l.iter().copied().fold(f64::INFINITY, f64::min);
            if best.is_none_or(|b| worst > b.2) {
                best = Some((e, l, worst));
            }
        }
        best.map(|(e, l, _)| (e, l))
    }

    /// Distinct region tags in ascending order.
    pub fn regions(&self) -> Vec<usize> {
        let mut r = self.region_id.clone();
        r.sort_unstable();
        r.dedup();
        r
    }
}

/// Builds the one-directional structured mesh of a `width × height` rectangle
/// with the lower-left corner at the origin.
///
/// `region_fn` is evaluated once per cell at the cell centroid; both triangles
/// of a cell share its tag.
pub fn generate_rect_mesh<F>(
    width: f64,
    height: f64,
    nx: usize,
    ny: usize,
    order: Order,
    diagonal: Diagonal,
    region_fn: F,
) -> Result<TriMesh>
where
    F: Fn(Point2) -> usize,
{
    if !(width.is_finite() && width > 0.0) || !(height.is_finite() && height > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rectangle dimensions must be positive and finite, got {width} x {height}"
        )));
    }
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument(format!(
            "cell counts must be at least 1, got {nx} x {ny}"
        )));
    }

    let p = order.degree();
    let fine_cols = p * nx + 1;
    let fine_rows = p * ny + 1;
    let hx = width / nx as f64;
    let hy = height / ny as f64;
    let fine_hx = hx / p as f64;
    let fine_hy = hy / p as f64;

    let vertices = (0..=ny)
        .flat_map(|j| (0..=nx).map(move |i| Point2::new(i as f64 * hx, j as f64 * hy)))
        .collect::<Vec<_>>();
    let vid = |i: usize, j: usize| j * (nx + 1) + i;

    let node_coords = (0..fine_rows)
        .flat_map(|j| (0..fine_cols).map(move |i| Point2::new(i as f64 * fine_hx, j as f64 * fine_hy)))
        .collect::<Vec<_>>();
    let boundary_node = (0..fine_rows)
        .flat_map(|j| (0..fine_cols).map(move |i| i == 0 || j == 0 || i + 1 == fine_cols || j + 1 == fine_rows))
        .collect::<Vec<_>>();

    let pattern = order.node_pattern();
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    let mut region_id = Vec::with_capacity(2 * nx * ny);
    let mut element_nodes = Vec::with_capacity(2 * nx * ny);

    for cj in 0..ny {
        for ci in 0..nx {
            let centroid = Point2::new((ci as f64 + 0.5) * hx, (cj as f64 + 0.5) * hy);
            let tag = region_fn(centroid);
            // corners as (cell-grid i, j)
            let bl = (ci, cj);
            let br = (ci + 1, cj);
            let tr = (ci + 1, cj + 1);
            let tl = (ci, cj + 1);
            let tris = match diagonal {
                Diagonal::Rising => [[bl, br, tr], [bl, tr, tl]],
                Diagonal::Falling => [[bl, br, tl], [br, tr, tl]],
            };
            for tri in tris {
                triangles.push([
                    vid(tri[0].0, tri[0].1),
                    vid(tri[1].0, tri[1].1),
                    vid(tri[2].0, tri[2].1),
                ]);
                region_id.push(tag);
                // Fine-grid integer coordinates: barycentric weights are k/p and
                // vertex fine coordinates are multiples of p, so the sum is exact.
                let nodes = pattern
                    .iter()
                    .map(|w| {
                        let fi: usize = (0..3).map(|v| w[v] * tri[v].0).sum();
                        let fj: usize = (0..3).map(|v| w[v] * tri[v].1).sum();
                        fj * fine_cols + fi
                    })
                    .collect();
                element_nodes.push(nodes);
            }
        }
    }

    Ok(TriMesh {
        order,
        width,
        height,
        nx,
        ny,
        vertices,
        triangles,
        region_id,
        element_nodes,
        node_coords,
        boundary_node,
    })
}

/// Cartesian positions of the element nodes, in local order.
pub fn element_node_coords(order: Order, vertices: &[Point2; 3]) -> Vec<Point2> {
    let p = order.degree() as f64;
    order
        .node_pattern()
        .iter()
        .map(|w| {
            let l = [w[0] as f64 / p, w[1] as f64 / p, w[2] as f64 / p];
            Point2::new(
                l[0] * vertices[0].x + l[1] * vertices[1].x + l[2] * vertices[2].x,
                l[0] * vertices[0].y + l[1] * vertices[1].y + l[2] * vertices[2].y,
            )
        })
        .collect()
}
