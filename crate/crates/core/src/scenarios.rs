//! Benchmark guides, their reference solutions and the comparison runner.
//!
//! Three cross sections are provided: an empty 1×1 cm square guide, a 1×1 cm
//! guide partially filled with an `ε_r = 6` dielectric, and a 2×1 cm guide
//! filled with a transversely magnetised ferrite. Wave numbers are in cm⁻¹.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::assembly::{assemble_vector, divergence_indicator, interpolate, MaterialSpec};
use crate::eigen::{filter_modes, solve_gen_sym, DistinctMode, GeneralizedEigenProblem, ModeSet};
use crate::eigen::{DEFAULT_MERGE_TOL, DEFAULT_TOL, DEFAULT_ZERO_CUTOFF_RATIO};
use crate::element::Order;
use crate::error::{Error, Result};
use crate::mesh::{generate_rect_mesh, Diagonal, Point2, TriMesh};

/// Relative window for pairing a computed mode with an analytic one.
pub const MATCH_WINDOW: f64 = 0.05;

/// Permittivity of the dielectric in the partially filled guide.
pub const LOADED_EPS: f64 = 6.0;

/// Step of the wave-number grid used to bracket dispersion-relation roots.
pub const ROOT_GRID_STEP: f64 = 0.01;

/// The ferrite of the filled guide: `ε_r = 2`, `μ = 3`, `μ_y = 1`, `κ = 0.8`.
pub fn ferrite() -> MaterialSpec {
    MaterialSpec::gyrotropic(2.0, 3.0, 1.0, 0.8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    HollowSquare,
    DielectricLoaded,
    FerriteFilled,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [Self::HollowSquare, Self::DielectricLoaded, Self::FerriteFilled];

    pub fn name(self) -> &'static str {
        match self {
            Self::HollowSquare => "hollow_square",
            Self::DielectricLoaded => "dielectric_loaded",
            Self::FerriteFilled => "ferrite_filled",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario '{s}'")))
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` in cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillRect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl FillRect {
    pub const fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    pub order: Order,
    pub kz: f64,
    pub diagonal: Diagonal,
    /// Material per region tag. Region 1 is the fill; region 0 the rest.
    pub materials: Vec<MaterialSpec>,
    pub fill: Option<FillRect>,
}

impl Scenario {
    /// The reference setup of each guide: 3×3 cells for the hollow and ferrite
    /// guides, 3×4 cells for the dielectric guide so that the default
    /// lower-half fill lies on cell boundaries.
    pub fn new(kind: ScenarioKind, order: Order) -> Self {
        let base = Scenario {
            kind,
            width: 1.0,
            height: 1.0,
            nx: 3,
            ny: 3,
            order,
            kz: 0.0,
            diagonal: Diagonal::Rising,
            materials: vec![MaterialSpec::VACUUM],
            fill: None,
        };
        match kind {
            ScenarioKind::HollowSquare => base,
            ScenarioKind::FerriteFilled => Scenario {
                width: 2.0,
                materials: vec![ferrite()],
                ..base
            },
            ScenarioKind::DielectricLoaded => Scenario {
                ny: 4,
                materials: vec![MaterialSpec::VACUUM, MaterialSpec::dielectric(LOADED_EPS)],
                fill: Some(FillRect::new(0.0, 0.0, 1.0, 0.5)),
                ..base
            },
        }
    }

    pub fn with_kz(mut self, kz: f64) -> Self {
        self.kz = kz;
        self
    }

    pub fn with_cells(mut self, nx: usize, ny: usize) -> Self {
        self.nx = nx;
        self.ny = ny;
        self
    }

    pub fn with_diagonal(mut self, diagonal: Diagonal) -> Self {
        self.diagonal = diagonal;
        self
    }

    /// Replaces the fill rectangle and, when given, its permittivity.
    pub fn with_fill(mut self, fill: FillRect, eps_r: Option<f64>) -> Self {
        self.fill = Some(fill);
        let eps = eps_r.unwrap_or_else(|| self.materials.get(1).map_or(LOADED_EPS, |m| m.eps_r));
        self.materials.truncate(1);
        self.materials.push(MaterialSpec::dielectric(eps));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite() && self.height > 0.0 && self.height.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "guide dimensions must be positive, got {} x {}",
                self.width, self.height
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidArgument(format!(
                "cell counts must be at least 1, got {} x {}",
                self.nx, self.ny
            )));
        }
        if !(self.kz >= 0.0 && self.kz.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "kz must be finite and non-negative, got {}",
                self.kz
            )));
        }
        for (r, m) in self.materials.iter().enumerate() {
            m.validate(r)?;
        }
        if let Some(f) = self.fill {
            if self.materials.len() < 2 {
                return Err(Error::MissingMaterial(1));
            }
            if !(f.x0 < f.x1 && f.y0 < f.y1) || f.x0 < 0.0 || f.y0 < 0.0 || f.x1 > self.width || f.y1 > self.height {
                return Err(Error::InvalidArgument(format!(
                    "fill rectangle [{}, {}] x [{}, {}] must be non-empty and inside the guide",
                    f.x0, f.x1, f.y0, f.y1
                )));
            }
            let hx = self.width / self.nx as f64;
            let hy = self.height / self.ny as f64;
            let aligned = |v: f64, h: f64| ((v / h) - (v / h).round()).abs() < 1e-9;
            if !(aligned(f.x0, hx) && aligned(f.x1, hx) && aligned(f.y0, hy) && aligned(f.y1, hy)) {
                return Err(Error::InvalidArgument(format!(
                    "fill rectangle [{}, {}] x [{}, {}] is not aligned to the {}x{} cell grid",
                    f.x0, f.x1, f.y0, f.y1, self.nx, self.ny
                )));
            }
        }
        Ok(())
    }

    pub fn region_of(&self, p: Point2) -> usize {
        match self.fill {
            Some(f) if f.contains(p) => 1,
            _ => 0,
        }
    }

    pub fn mesh(&self) -> Result<TriMesh> {
        self.validate()?;
        generate_rect_mesh(
            self.width,
            self.height,
            self.nx,
            self.ny,
            self.order,
            self.diagonal,
            |p| self.region_of(p),
        )
    }

    /// First `count` distinct reference wave numbers for this guide.
    pub fn analytic_modes(&self, count: usize) -> Result<Vec<f64>> {
        self.validate()?;
        match self.kind {
            ScenarioKind::HollowSquare => Ok(analytic_hollow_modes(self.width, self.height, count)
                .into_iter()
                .map(|kc| (kc * kc + self.kz * self.kz).sqrt())
                .collect()),
            ScenarioKind::FerriteFilled => {
                let mat = self.materials[0];
                Ok(gyrotropic_slab_modes(self.width, &mat, self.kz, count))
            }
            ScenarioKind::DielectricLoaded => {
                let fill = self
                    .fill
                    .ok_or_else(|| Error::UnsupportedScenario("dielectric guide without a fill rectangle".into()))?;
                let geometry = LoadedGeometry {
                    width: self.width,
                    height: self.height,
                    fill,
                };
                analytic_loaded_modes(&geometry, self.materials[1].eps_r, self.kz, count)
            }
        }
    }
}

/// Distinct cutoff wave numbers `√((mπ/a)² + (nπ/b)²)` of an empty
/// perfectly conducting `a × b` guide, ascending.
pub fn analytic_hollow_modes(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 0 || !(a > 0.0 && b > 0.0) {
        return Vec::new();
    }
    // Enough indices that the first `count` distinct values are all present.
    let mmax = count;
    let mut all = Vec::new();
    for m in 0..=mmax {
        for n in 0..=mmax {
            if m + n > 0 {
                all.push(PI * ((m as f64 / a).powi(2) + (n as f64 / b).powi(2)).sqrt());
            }
        }
    }
    distinct_ascending(all, count)
}

/// Cutoffs of the hollow guide with their multiplicity across TE and TM
/// families, in ascending order.
pub fn hollow_mode_multiplicities(a: f64, b: f64, count: usize) -> Vec<(f64, usize)> {
    let values = analytic_hollow_modes(a, b, count);
    let mmax = count + 1;
    values
        .into_iter()
        .map(|k| {
            let mut mult = 0;
            for m in 0..=mmax {
                for n in 0..=mmax {
                    let kc = PI * ((m as f64 / a).powi(2) + (n as f64 / b).powi(2)).sqrt();
                    if m + n > 0 && (kc - k).abs() <= 1e-9 * k {
                        // TE exists for all (m, n) ≠ (0, 0); TM needs m, n ≥ 1
                        mult += if m >= 1 && n >= 1 { 2 } else { 1 };
                    }
                }
            }
            (k, mult)
        })
        .collect()
}

/// `k_n = √((3/16.72)(kz² + (nπ/2)²))`, `n = 1..=count`: the modes of the
/// 2×1 cm ferrite guide that vary only across its width.
pub fn analytic_ferrite_modes(kz: f64, count: usize) -> Vec<f64> {
    gyrotropic_slab_modes(2.0, &ferrite(), kz, count)
}

/// Modes of a gyrotropic guide of width `a` with no variation along `y`:
/// `k² ε μ_e = kz² + (nπ/a)²` with `μ_e = (μ² − κ²)/μ`.
pub fn gyrotropic_slab_modes(a: f64, mat: &MaterialSpec, kz: f64, count: usize) -> Vec<f64> {
    let mu_e = (mat.mu * mat.mu - mat.kappa * mat.kappa) / mat.mu;
    (1..=count)
        .map(|n| ((kz * kz + (n as f64 * PI / a).powi(2)) / (mat.eps_r * mu_e)).sqrt())
        .collect()
}

/// Cross section of a guide with one dielectric block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadedGeometry {
    pub width: f64,
    pub height: f64,
    pub fill: FillRect,
}

/// A stack of homogeneous layers between two conducting walls, with the
/// remaining walls a distance `span` apart.
#[derive(Debug, Clone, PartialEq)]
struct LayerStack {
    span: f64,
    /// `(thickness, ε_r)` from one wall to the other.
    layers: Vec<(f64, f64)>,
}

impl LoadedGeometry {
    /// Reduces the block to a layer stack; only fills spanning the whole guide
    /// in one direction are layered.
    fn layers(&self, eps_r: f64) -> Result<LayerStack> {
        let tol = 1e-12 * self.width.max(self.height);
        let f = self.fill;
        let full_x = f.x0.abs() <= tol && (f.x1 - self.width).abs() <= tol;
        let full_y = f.y0.abs() <= tol && (f.y1 - self.height).abs() <= tol;
        let stack = |lo: f64, hi: f64, extent: f64, span: f64| {
            let layers = [(lo, 1.0), (hi - lo, eps_r), (extent - hi, 1.0)]
                .into_iter()
                .filter(|&(d, _)| d > tol)
                .collect();
            LayerStack { span, layers }
        };
        if full_x {
            Ok(stack(f.y0, f.y1, self.height, self.width))
        } else if full_y {
            Ok(stack(f.x0, f.x1, self.width, self.height))
        } else {
            Err(Error::UnsupportedScenario(format!(
                "fill [{}, {}] x [{}, {}] does not span the guide in either direction; \
                 no separable dispersion relation exists for it",
                f.x0, f.x1, f.y0, f.y1
            )))
        }
    }
}

/// Transfer of `(u, u')` across a homogeneous layer of thickness `d` where
/// `u'' + k2 u = 0`. Returns `(cos, sin/k, −k sin)` or their hyperbolic forms.
fn layer_transfer(k2: f64, d: f64) -> (f64, f64, f64) {
    if k2 > 0.0 {
        let k = k2.sqrt();
        ((k * d).cos(), (k * d).sin() / k, -k * (k * d).sin())
    } else if k2 < 0.0 {
        let q = (-k2).sqrt();
        ((q * d).cosh(), (q * d).sinh() / q, q * (q * d).sinh())
    } else {
        (1.0, d, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LayerFamily {
    /// Electric potential along the layering normal: `u = 0` on both walls,
    /// `u` and `u'` continuous.
    Te,
    /// Magnetic potential along the layering normal: `ψ' = 0` on both walls,
    /// `ψ` and `ψ'/ε` continuous.
    Tm,
}

/// Residual of the transverse-resonance condition at `k0`.
fn resonance(stack: &LayerStack, family: LayerFamily, k0: f64, beta: f64) -> f64 {
    let (mut u, mut q) = match family {
        LayerFamily::Te => (0.0, 1.0),
        LayerFamily::Tm => (1.0, 0.0),
    };
    for &(d, eps) in &stack.layers {
        let (c, s, ks) = layer_transfer(k0 * k0 * eps - beta * beta, d);
        match family {
            LayerFamily::Te => (u, q) = (c * u + s * q, ks * u + c * q),
            LayerFamily::Tm => {
                let du = q * eps;
                let (nu, ndu) = (c * u + s * du, ks * u + c * du);
                u = nu;
                q = ndu / eps;
            }
        }
    }
    match family {
        LayerFamily::Te => u,
        LayerFamily::Tm => q,
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn stack_roots(stack: &LayerStack, kz: f64, kmax: f64) -> Vec<f64> {
    let eps_max = stack.layers.iter().map(|l| l.1).fold(1.0, f64::max);
    let steps = (kmax / ROOT_GRID_STEP).ceil() as usize;
    let mut roots = Vec::new();
    let mut m = 0usize;
    loop {
        let beta = ((m as f64 * PI / stack.span).powi(2) + kz * kz).sqrt();
        // below β/√ε_max every layer is evanescent and no mode exists
        if beta / eps_max.sqrt() > kmax {
            break;
        }
        for family in [LayerFamily::Te, LayerFamily::Tm] {
            if family == LayerFamily::Tm && m == 0 {
                continue;
            }
            let f = |k0: f64| resonance(stack, family, k0, beta);
            let mut prev_k = 0.0;
            let mut prev_f = f(prev_k);
            for i in 1..=steps {
                let k = i as f64 * ROOT_GRID_STEP;
                let fk = f(k);
                if fk == 0.0 {
                    roots.push(k);
                } else if prev_f != 0.0 && (prev_f < 0.0) != (fk < 0.0) {
                    roots.push(bisect(f, prev_k, k));
                }
                prev_k = k;
                prev_f = fk;
            }
        }
        m += 1;
    }
    roots
}

/// First `count` distinct cutoff wave numbers of a guide loaded with a
/// dielectric block spanning it in one direction, from the transverse-resonance
/// condition of the layered cross section. Roots are bracketed on a uniform
/// `k0` grid and refined by bisection.
pub fn analytic_loaded_modes(geometry: &LoadedGeometry, eps_r: f64, kz: f64, count: usize) -> Result<Vec<f64>> {
    if !(eps_r >= 1.0 && eps_r.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "fill permittivity must be at least 1, got {eps_r}"
        )));
    }
    if !(kz >= 0.0 && kz.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "kz must be finite and non-negative, got {kz}"
        )));
    }
    let stack = geometry.layers(eps_r)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut kmax = 4.0f64.max(2.0 * kz);
    loop {
        let found = distinct_ascending(stack_roots(&stack, kz, kmax), usize::MAX);
        // roots near kmax may still be missing partners just above it
        let complete: Vec<f64> = found.into_iter().filter(|&k| k < kmax - ROOT_GRID_STEP).collect();
        if complete.len() >= count {
            return Ok(complete.into_iter().take(count).collect());
        }
        kmax *= 2.0;
    }
}

fn distinct_ascending(mut values: Vec<f64>, count: usize) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if out.last().is_none_or(|&l| v - l > 1e-9 * v.abs()) {
            out.push(v);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// Solver settings for a scenario run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Absolute eigenvalue cutoff; `None` selects a fraction of the largest.
    pub zero_cutoff: Option<f64>,
    pub merge_tol: f64,
    pub residual_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            zero_cutoff: None,
            merge_tol: DEFAULT_MERGE_TOL,
            residual_tol: DEFAULT_TOL,
        }
    }
}

/// One analytic mode and the computed mode paired with it, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeComparison {
    /// 1-based position in the analytic list.
    pub mode: usize,
    pub analytic_k0: f64,
    pub computed_k0: Option<f64>,
    /// Index into [`ScenarioRun::distinct`].
    pub distinct_index: Option<usize>,
}

impl ModeComparison {
    pub fn abs_err(&self) -> Option<f64> {
        self.computed_k0.map(|c| (c - self.analytic_k0).abs())
    }

    pub fn rel_err(&self) -> Option<f64> {
        self.abs_err().map(|e| e / self.analytic_k0.abs())
    }
}

/// Everything produced by solving one scenario at one order.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub mesh: TriMesh,
    pub modes: ModeSet,
    pub distinct: Vec<DistinctMode>,
    pub comparisons: Vec<ModeComparison>,
}

/// Pairs each analytic value, in ascending order, with the nearest unused
/// computed value within [`MATCH_WINDOW`] relative distance.
pub fn align_modes(analytic: &[f64], computed: &[f64]) -> Vec<(Option<usize>, f64)> {
    let mut used = vec![false; computed.len()];
    analytic
        .iter()
        .map(|&a| {
            let best = computed
                .iter()
                .enumerate()
                .filter(|&(i, &c)| !used[i] && (c - a).abs() <= MATCH_WINDOW * a.abs())
                .min_by(|x, y| (x.1 - a).abs().total_cmp(&(y.1 - a).abs()))
                .map(|(i, _)| i);
            if let Some(i) = best {
                used[i] = true;
            }
            (best, a)
        })
        .collect()
}

pub fn run_scenario(s: &Scenario, count: usize) -> Result<ScenarioRun> {
    run_scenario_with(s, count, &SolveOptions::default())
}

pub fn run_scenario_with(s: &Scenario, count: usize, opts: &SolveOptions) -> Result<ScenarioRun> {
    let mesh = s.mesh()?;
    let sys = assemble_vector(&mesh, &s.materials, s.kz)?;
    let prob = GeneralizedEigenProblem::new(sys.a, sys.b)?;
    let modes = solve_gen_sym(&prob, opts.residual_tol)?;
    let cutoff = opts
        .zero_cutoff
        .unwrap_or(DEFAULT_ZERO_CUTOFF_RATIO * modes.max_lambda());
    let distinct = filter_modes(&modes, cutoff, opts.merge_tol);
    let analytic = s.analytic_modes(count)?;
    let computed: Vec<f64> = distinct.iter().map(|d| d.k0).collect();
    let comparisons = align_modes(&analytic, &computed)
        .into_iter()
        .enumerate()
        .map(|(i, (idx, a))| ModeComparison {
            mode: i + 1,
            analytic_k0: a,
            computed_k0: idx.map(|j| computed[j]),
            distinct_index: idx,
        })
        .collect();
    Ok(ScenarioRun {
        scenario: s.clone(),
        mesh,
        modes,
        distinct,
        comparisons,
    })
}

/// Sampled field of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
}

impl ScenarioRun {
    pub fn computed_k0(&self) -> Vec<Option<f64>> {
        self.comparisons.iter().map(|c| c.computed_k0).collect()
    }

    /// Eigenvector of a distinct mode (the first of its cluster).
    pub fn mode_vector(&self, distinct_index: usize) -> Option<Vec<f64>> {
        let d = self.distinct.get(distinct_index)?;
        let col = *d.indices.first()?;
        Some(self.modes.vectors.column(col).iter().copied().collect())
    }

    /// Divergence indicator of a distinct mode; large values flag spurious
    /// solutions.
    pub fn divergence(&self, distinct_index: usize) -> Result<f64> {
        let d = self
            .distinct
            .get(distinct_index)
            .ok_or_else(|| Error::InvalidArgument(format!("no distinct mode {distinct_index}")))?;
        let v = self.mode_vector(distinct_index).unwrap_or_default();
        divergence_indicator(&self.mesh, &self.scenario.materials, self.scenario.kz, d.lambda, &v)
    }

    /// Field of a distinct mode on a uniform `nx × ny` point grid covering the
    /// guide, corners included. The field is scaled so that its largest
    /// component magnitude is 1 and that entry is positive.
    pub fn field_samples(&self, distinct_index: usize, nx: usize, ny: usize) -> Result<Vec<FieldSample>> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "sample grid must be at least 2x2, got {nx}x{ny}"
            )));
        }
        let v = self
            .mode_vector(distinct_index)
            .ok_or_else(|| Error::InvalidArgument(format!("no distinct mode {distinct_index}")))?;
        let n = self.mesh.num_nodes();
        let (hx, rest) = v.split_at(n);
        let (hy, hz) = rest.split_at(n);
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let p = Point2::new(
                    self.mesh.width * i as f64 / (nx - 1) as f64,
                    self.mesh.height * j as f64 / (ny - 1) as f64,
                );
                let (e, l) = self
                    .mesh
                    .locate(p)
                    .ok_or_else(|| Error::InvalidArgument(format!("sample point ({}, {}) outside mesh", p.x, p.y)))?;
                out.push(FieldSample {
                    x: p.x,
                    y: p.y,
                    hx: interpolate(&self.mesh, e, l, hx),
                    hy: interpolate(&self.mesh, e, l, hy),
                    hz: interpolate(&self.mesh, e, l, hz),
                });
            }
        }
        let peak = out
            .iter()
            .flat_map(|s| [s.hx, s.hy, s.hz])
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if peak != 0.0 {
            for s in &mut out {
                s.hx /= peak;
                s.hy /= peak;
                s.hz /= peak;
            }
        }
        Ok(out)
    }
}

/// One row of the side-by-side order comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub mode: usize,
    pub analytic_k0: f64,
    pub second_order: Option<f64>,
    pub third_order: Option<f64>,
}

impl ReportRow {
    pub fn second_order_error(&self) -> Option<f64> {
        self.second_order.map(|c| (c - self.analytic_k0).abs())
    }

    pub fn third_order_error(&self) -> Option<f64> {
        self.third_order.map(|c| (c - self.analytic_k0).abs())
    }
}

/// Analytic and computed wave numbers at both element orders.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub kind: ScenarioKind,
    pub kz: f64,
    pub rows: Vec<ReportRow>,
}

impl ComparisonReport {
    /// Runs `scenario` at second and third order on the same cells.
    pub fn build(scenario: &Scenario, count: usize) -> Result<Self> {
        let second = run_scenario(
            &Scenario {
                order: Order::Quadratic,
                ..scenario.clone()
            },
            count,
        )?;
        let third = run_scenario(
            &Scenario {
                order: Order::Cubic,
                ..scenario.clone()
            },
            count,
        )?;
        let rows = second
            .comparisons
            .iter()
            .zip(&third.comparisons)
            .map(|(a, b)| ReportRow {
                mode: a.mode,
                analytic_k0: a.analytic_k0,
                second_order: a.computed_k0,
                third_order: b.computed_k0,
            })
            .collect();
        Ok(Self {
            kind: scenario.kind,
            kz: scenario.kz,
            rows,
        })
    }
}
