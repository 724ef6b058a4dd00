//! Global matrix assembly.
//!
//! Two systems are built from the elemental matrices:
//!
//! * the scalar operator `−∂x(αx ∂x φ) − ∂y(αy ∂y φ) + β φ` with homogeneous
//!   Neumann boundaries, `K = Σ αx Ax + αy Ay + β B`;
//! * the transverse-plus-longitudinal magnetic field system `A h = k0² B h`
//!   for `h = [Hx | Hy | hz]`, where `hz = −j Hz` makes the problem real.
//!
//! The gyrotropic permeability `[[μ, 0, jκ], [0, μy, 0], [−jκ, 0, μ]]` maps under
//! the same substitution to a real symmetric mass with an `Hx`–`hz` coupling
//! of `−κ B`. The electric-wall condition is natural, so no degrees of freedom
//! are constrained.

use nalgebra::DMatrix;

use crate::eigen::cholesky;
use crate::element::{shape_gradients, shape_values, ElementMatrices, Order};
use crate::error::{Error, Result};
use crate::mesh::TriMesh;

/// Relative permittivity and gyrotropic relative permeability of one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    pub eps_r: f64,
    pub mu: f64,
    pub mu_y: f64,
    pub kappa: f64,
}

impl MaterialSpec {
    pub const VACUUM: MaterialSpec = MaterialSpec {
        eps_r: 1.0,
        mu: 1.0,
        mu_y: 1.0,
        kappa: 0.0,
    };

    pub fn isotropic(eps_r: f64, mu_r: f64) -> Self {
        Self {
            eps_r,
            mu: mu_r,
            mu_y: mu_r,
            kappa: 0.0,
        }
    }

    pub fn dielectric(eps_r: f64) -> Self {
        Self::isotropic(eps_r, 1.0)
    }

    pub fn gyrotropic(eps_r: f64, mu: f64, mu_y: f64, kappa: f64) -> Self {
        Self { eps_r, mu, mu_y, kappa }
    }

    pub fn validate(&self, region: usize) -> Result<()> {
        let fail = |reason: String| Err(Error::Material { region, reason });
        if !(self.eps_r > 0.0 && self.eps_r.is_finite()) {
            return fail(format!("eps_r must be positive, got {}", self.eps_r));
        }
        if !(self.mu_y > 0.0 && self.mu_y.is_finite()) {
            return fail(format!("mu_y must be positive, got {}", self.mu_y));
        }
        if !(self.kappa.is_finite() && self.mu > self.kappa.abs()) {
            return fail(format!(
                "need mu > |kappa|, got mu = {}, kappa = {}",
                self.mu, self.kappa
            ));
        }
        Ok(())
    }
}

/// Scalar Helmholtz-type system.
#[derive(Debug, Clone)]
pub struct ScalarSystem {
    /// `Σ αx Ax + αy Ay + β B`
    pub k: DMatrix<f64>,
    /// `Σ αx Ax + αy Ay`
    pub a: DMatrix<f64>,
    /// `Σ B`
    pub m: DMatrix<f64>,
}

/// Three-component field system, blocks ordered `[Hx | Hy | hz]`.
#[derive(Debug, Clone)]
pub struct VectorSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    /// Nodes per field component.
    pub n: usize,
    pub kz: f64,
}

/// Field component blocks of a [`VectorSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Hx = 0,
    Hy = 1,
    Hz = 2,
}

impl VectorSystem {
    pub fn dim(&self) -> usize {
        3 * self.n
    }

    pub fn a_block(&self, row: Component, col: Component) -> DMatrix<f64> {
        self.a
            .view((row as usize * self.n, col as usize * self.n), (self.n, self.n))
            .into_owned()
    }

    pub fn b_block(&self, row: Component, col: Component) -> DMatrix<f64> {
        self.b
            .view((row as usize * self.n, col as usize * self.n), (self.n, self.n))
            .into_owned()
    }
}

/// Adds `scale · local` into `global` at rows `block_row·n + nodes[i]` and
/// columns `block_col·n + nodes[j]`, where `n` is the block size.
pub fn scatter_add(
    global: &mut DMatrix<f64>,
    nodes: &[usize],
    local: &DMatrix<f64>,
    scale: f64,
    block: (usize, usize),
    block_size: usize,
) -> Result<()> {
    if local.nrows() != nodes.len() || local.ncols() != nodes.len() {
        return Err(Error::Dimension(format!(
            "local matrix is {}x{} for {} nodes",
            local.nrows(),
            local.ncols(),
            nodes.len()
        )));
    }
    let (r0, c0) = (block.0 * block_size, block.1 * block_size);
    let limit = global.nrows().min(global.ncols());
    if let Some(&bad) = nodes
        .iter()
        .find(|&&g| g >= block_size || r0 + g >= limit || c0 + g >= limit)
    {
        return Err(Error::Dimension(format!(
            "node index {bad} outside block of size {block_size}"
        )));
    }
    for (i, &gi) in nodes.iter().enumerate() {
        for (j, &gj) in nodes.iter().enumerate() {
            global[(r0 + gi, c0 + gj)] += scale * local[(i, j)];
        }
    }
    Ok(())
}

fn region_value<T: Copy>(values: &[T], region: usize) -> Result<T> {
    values.get(region).copied().ok_or(Error::MissingMaterial(region))
}

/// Per-element elemental matrices in element order.
pub fn element_matrices(mesh: &TriMesh) -> Result<Vec<ElementMatrices>> {
    (0..mesh.num_elements())
        .map(|e| Ok(ElementMatrices::compute(&mesh.element_geometry(e)?, mesh.order)))
        .collect()
}

/// Assembles the scalar system with per-region coefficients indexed by region
/// tag.
pub fn assemble_scalar(mesh: &TriMesh, alpha_x: &[f64], alpha_y: &[f64], beta: &[f64]) -> Result<ScalarSystem> {
    let n = mesh.num_nodes();
    let mut k = DMatrix::zeros(n, n);
    let mut a = DMatrix::zeros(n, n);
    let mut m = DMatrix::zeros(n, n);
    for (e, em) in element_matrices(mesh)?.iter().enumerate() {
        let region = mesh.region_id[e];
        let ax = region_value(alpha_x, region)?;
        let ay = region_value(alpha_y, region)?;
        let bt = region_value(beta, region)?;
        let nodes = &mesh.element_nodes[e];
        scatter_add(&mut a, nodes, &em.ax, ax, (0, 0), n)?;
        scatter_add(&mut a, nodes, &em.ay, ay, (0, 0), n)?;
        scatter_add(&mut m, nodes, &em.b, 1.0, (0, 0), n)?;
        scatter_add(&mut k, nodes, &em.ax, ax, (0, 0), n)?;
        scatter_add(&mut k, nodes, &em.ay, ay, (0, 0), n)?;
        scatter_add(&mut k, nodes, &em.b, bt, (0, 0), n)?;
    }
    Ok(ScalarSystem { k, a, m })
}

/// Assembles the magnetic-field system for propagation constant `kz` with
/// materials indexed by region tag.
pub fn assemble_vector(mesh: &TriMesh, materials: &[MaterialSpec], kz: f64) -> Result<VectorSystem> {
    if !(kz.is_finite() && kz >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "kz must be finite and non-negative, got {kz}"
        )));
    }
    for region in mesh.regions() {
        region_value(materials, region)?.validate(region)?;
    }

    use Component::{Hx, Hy, Hz};
    let n = mesh.num_nodes();
    let mut a = DMatrix::zeros(3 * n, 3 * n);
    let mut b = DMatrix::zeros(3 * n, 3 * n);
    let blk = |r: Component, c: Component| (r as usize, c as usize);

    for (e, em) in element_matrices(mesh)?.iter().enumerate() {
        let mat = materials[mesh.region_id[e]];
        let nodes = &mesh.element_nodes[e];
        let inv_eps = 1.0 / mat.eps_r;
        let kz2 = kz * kz;

        let axx = &em.ay + &em.b * kz2;
        let ayy = &em.ax + &em.b * kz2;
        let azz = &em.ax + &em.ay;
        // (Hx, Hy) entry ij integrates ∂N_i/∂y ∂N_j/∂x
        let axy = em.cxy.transpose();
        let ayz = &em.dy;
        let azx = em.dx.transpose();

        scatter_add(&mut a, nodes, &axx, inv_eps, blk(Hx, Hx), n)?;
        scatter_add(&mut a, nodes, &ayy, inv_eps, blk(Hy, Hy), n)?;
        scatter_add(&mut a, nodes, &azz, inv_eps, blk(Hz, Hz), n)?;
        scatter_add(&mut a, nodes, &axy, -inv_eps, blk(Hx, Hy), n)?;
        scatter_add(&mut a, nodes, &em.cxy, -inv_eps, blk(Hy, Hx), n)?;
        if kz != 0.0 {
            scatter_add(&mut a, nodes, ayz, kz * inv_eps, blk(Hy, Hz), n)?;
            scatter_add(&mut a, nodes, &ayz.transpose(), kz * inv_eps, blk(Hz, Hy), n)?;
            scatter_add(&mut a, nodes, &azx, kz * inv_eps, blk(Hz, Hx), n)?;
            scatter_add(&mut a, nodes, &em.dx, kz * inv_eps, blk(Hx, Hz), n)?;
        }

        scatter_add(&mut b, nodes, &em.b, mat.mu, blk(Hx, Hx), n)?;
        scatter_add(&mut b, nodes, &em.b, mat.mu_y, blk(Hy, Hy), n)?;
        scatter_add(&mut b, nodes, &em.b, mat.mu, blk(Hz, Hz), n)?;
        if mat.kappa != 0.0 {
            scatter_add(&mut b, nodes, &em.b, -mat.kappa, blk(Hx, Hz), n)?;
            scatter_add(&mut b, nodes, &em.b, -mat.kappa, blk(Hz, Hx), n)?;
        }
    }

    if let Err(Error::NotPositiveDefinite { pivot, value }) = cholesky(&b) {
        return Err(Error::Material {
            region: mesh.region_id.first().copied().unwrap_or(0),
            reason: format!("assembled mass is not positive definite (pivot {pivot} = {value:e})"),
        });
    }
    Ok(VectorSystem { a, b, n, kz })
}

/// Interpolates a nodal field at barycentric point `l` of element `e`.
pub fn interpolate(mesh: &TriMesh, e: usize, l: [f64; 3], field: &[f64]) -> f64 {
    shape_values(mesh.order, l)
        .iter()
        .zip(&mesh.element_nodes[e])
        .map(|(n, &g)| n * field[g])
        .sum()
}

/// Ratio `‖∇·(μ H)‖² / (λ ‖μ H‖²)` of a field-system eigenvector, in the
/// real `hz` representation. Physical modes are divergence-free, so this is
/// small for them and O(1) for spurious solutions.
pub fn divergence_indicator(
    mesh: &TriMesh,
    materials: &[MaterialSpec],
    kz: f64,
    lambda: f64,
    vector: &[f64],
) -> Result<f64> {
    let n = mesh.num_nodes();
    if vector.len() != 3 * n {
        return Err(Error::Dimension(format!(
            "field vector has {} entries, expected {}",
            vector.len(),
            3 * n
        )));
    }
    let (hx, rest) = vector.split_at(n);
    let (hy, hz) = rest.split_at(n);
    let rule = crate::element::gauss::triangle_rule(match mesh.order {
        Order::Quadratic => 4,
        Order::Cubic => 5,
    });
    let mut div2 = 0.0;
    let mut flux2 = 0.0;
    for e in 0..mesh.num_elements() {
        let geom = mesh.element_geometry(e)?;
        let mat = region_value(materials, mesh.region_id[e])?;
        let nodes = &mesh.element_nodes[e];
        for (l, w) in &rule {
            let w = w * geom.area;
            let val = shape_values(mesh.order, *l);
            let grad = shape_gradients(mesh.order, &geom, *l);
            let (mut fx, mut fy, mut fz) = (0.0, 0.0, 0.0);
            let mut div = 0.0;
            for (k, &g) in nodes.iter().enumerate() {
                // μH in the real representation: x: μHx − κhz, y: μy Hy, z (÷j): μhz − κHx
                let bx = mat.mu * hx[g] - mat.kappa * hz[g];
                let by = mat.mu_y * hy[g];
                let bz = mat.mu * hz[g] - mat.kappa * hx[g];
                fx += val[k] * bx;
                fy += val[k] * by;
                fz += val[k] * bz;
                div += grad[k][0] * bx + grad[k][1] * by;
            }
            div += kz * fz;
            div2 += w * div * div;
            flux2 += w * (fx * fx + fy * fy + fz * fz);
        }
    }
    if flux2 == 0.0 || lambda <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(div2 / (lambda * flux2))
}
