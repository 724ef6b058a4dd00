//! Dense generalized symmetric-definite eigensolver.
//!
//! `A v = λ B v` is reduced to standard form with the Cholesky factor of `B`,
//! `C = L⁻¹ A L⁻ᵀ`, which is tridiagonalised with Householder reflections
//! (Martin–Reinsch–Wilkinson `tred2`) and diagonalised by the implicit-shift QL
//! iteration (`tql2`). Eigenvectors are mapped back with `v = L⁻ᵀ u`, which
//! makes them `B`-orthonormal.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default backward-error tolerance for returned eigenpairs.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative zero-mode threshold, as a fraction of the largest eigenvalue.
pub const DEFAULT_ZERO_CUTOFF_RATIO: f64 = 1e-6;
/// Relative tolerance below which two wavenumbers count as one mode.
pub const DEFAULT_MERGE_TOL: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct GeneralizedEigenProblem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

impl GeneralizedEigenProblem {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() || !b.is_square() || a.nrows() != b.nrows() {
            return Err(Error::Dimension(format!(
                "A is {}x{}, B is {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

/// Full spectrum of a generalized problem, ascending.
#[derive(Debug, Clone)]
pub struct ModeSet {
    pub lambdas: Vec<f64>,
    /// Column `i` is the `B`-normalised eigenvector of `lambdas[i]`.
    pub vectors: DMatrix<f64>,
    /// Normwise backward error `‖Av − λBv‖ / ((‖A‖ + |λ|‖B‖) ‖v‖)`, 1-norms.
    pub residuals: Vec<f64>,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn max_lambda(&self) -> f64 {
        self.lambdas.iter().copied().fold(0.0, f64::max)
    }

    pub fn default_zero_cutoff(&self) -> f64 {
        DEFAULT_ZERO_CUTOFF_RATIO * self.max_lambda()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(cholesky_upper(b)?.transpose())
}

/// `Lᵀ` of the Cholesky factor. Column `j` of the result is row `j` of `L`,
/// which keeps every inner product contiguous in column-major storage.
fn cholesky_upper(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = b.nrows();
    let mut u = DMatrix::zeros(n, n);
    let us = u.as_mut_slice();
    for j in 0..n {
        for i in 0..=j {
            let (head, tail) = us.split_at_mut(j * n);
            let col_j = &tail[..n];
            let col_i = if i == j { col_j } else { &head[i * n..i * n + n] };
            let s = b[(i, j)] - dot(&col_i[..i], &col_j[..i]);
            if i == j {
                if s.is_nan() || s <= 0.0 || s.is_infinite() {
                    return Err(Error::NotPositiveDefinite { pivot: j, value: s });
                }
                tail[j] = s.sqrt();
            } else {
                let uii = head[i * n + i];
                tail[i] = s / uii;
            }
        }
    }
    Ok(u)
}

fn singular_factor() -> Error {
    Error::NotPositiveDefinite { pivot: 0, value: 0.0 }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder reduction of symmetric `v` to tridiagonal form. On return `v`
/// holds the accumulated orthogonal transform, `d` the diagonal and `e` the
/// subdiagonal in `e[1..]`.
fn tridiagonalize(v: &mut DMatrix<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                let col = &v.as_slice()[j * n..j * n + i];
                g = e[j] + col[j] * f;
                for ((vk, dk), ek) in col[j + 1..].iter().zip(&d[j + 1..i]).zip(&mut e[j + 1..i]) {
                    g += vk * dk;
                    *ek += vk * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut v.as_mut_slice()[j * n + j..j * n + i];
                for ((vk, ek), dk) in col.iter_mut().zip(&e[j..i]).zip(&d[j..i]) {
                    *vk -= f * ek + g * dk;
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            let (head, tail) = v.as_mut_slice().split_at_mut((i + 1) * n);
            let pivot = &tail[..=i];
            for j in 0..=i {
                let col = &mut head[j * n..j * n + i + 1];
                let g = dot(pivot, col);
                for (ck, dk) in col.iter_mut().zip(&d[..=i]) {
                    *ck -= g * dk;
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    if n > 0 {
        v[(n - 1, n - 1)] = 1.0;
        e[0] = 0.0;
    }
}

/// Implicit-shift QL iteration on the tridiagonal `(d, e)`, rotating the
/// columns of `v`. At most `50 n` sweeps in total.
fn tridiagonal_ql(v: &mut DMatrix<f64>, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let max_iterations = 50 * n;
    let mut iterations = 0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] is zero so m < n always
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iterations {
                    return Err(Error::NoConvergence { index: l, iterations });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (vi, vi1) = v.as_mut_slice()[i * n..(i + 2) * n].split_at_mut(n);
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Eigen-decomposition of a symmetric matrix, ascending eigenvalues and
/// orthonormal eigenvectors in columns.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    let mut v = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    tridiagonal_ql(&mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `A v = λ B v` completely. Fails if `B` is not positive definite,
/// the QL iteration stalls, or any eigenpair's backward error exceeds `tol`.
pub fn solve_gen_sym(prob: &GeneralizedEigenProblem, tol: f64) -> Result<ModeSet> {
    let n = prob.dim();
    let u = cholesky_upper(&prob.b)?;
    let l = u.transpose();

    let x = l.solve_lower_triangular(&prob.a).ok_or_else(singular_factor)?;
    let c = l.solve_lower_triangular(&x.transpose()).ok_or_else(singular_factor)?;
    let c = (&c + c.transpose()) * 0.5;

    let (lambdas, y) = symmetric_eigen(&c)?;
    let vectors = u.solve_upper_triangular(&y).ok_or_else(singular_factor)?;

    let norm_a = norm1(&prob.a);
    let norm_b = norm1(&prob.b);
    let av = &prob.a * &vectors;
    let bv = &prob.b * &vectors;
    let mut residuals = Vec::with_capacity(n);
    for (i, &lambda) in lambdas.iter().enumerate() {
        let r: f64 = av
            .column(i)
            .iter()
            .zip(bv.column(i).iter())
            .map(|(a, b)| (a - lambda * b).abs())
            .sum();
        let denom = (norm_a + lambda.abs() * norm_b) * vectors.column(i).lp_norm(1);
        let res = if denom > 0.0 { r / denom } else { r };
        if res.is_nan() || res > tol {
            return Err(Error::Residual {
                index: i,
                residual: res,
                tol,
            });
        }
        residuals.push(res);
    }
    Ok(ModeSet {
        lambdas,
        vectors,
        residuals,
    })
}

/// A distinct wavenumber after merging near-degenerate eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinctMode {
    pub k0: f64,
    pub lambda: f64,
    pub multiplicity: usize,
    /// Indices into the originating [`ModeSet`].
    pub indices: Vec<usize>,
}

/// Drops eigenvalues at or below `zero_cutoff`, converts the rest to
/// `k0 = √λ` and merges runs whose relative spread to the run's first value is
/// within `merge_tol`.
pub fn filter_modes(modes: &ModeSet, zero_cutoff: f64, merge_tol: f64) -> Vec<DistinctMode> {
    let mut out: Vec<DistinctMode> = Vec::new();
    for (i, &lambda) in modes.lambdas.iter().enumerate() {
        if lambda <= zero_cutoff {
            continue;
        }
        let k0 = lambda.sqrt();
        if let Some(last) = out.last_mut() {
            let first_k0 = modes.lambdas[last.indices[0]].sqrt();
            if merge_tol > 0.0 && (k0 - first_k0) <= merge_tol * first_k0 {
                last.indices.push(i);
                last.multiplicity += 1;
                continue;
            }
        }
        out.push(DistinctMode {
            k0,
            lambda,
            multiplicity: 1,
            indices: vec![i],
        });
    }
    out
}
