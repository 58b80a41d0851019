//! Dense symmetric eigendecomposition and graph Laplacians.
//!
//! The eigensolver is a cyclic Jacobi iteration: it returns the full spectrum
//! together with an orthonormal eigenbasis, which the certificate and the
//! rounding step both need.

use crate::error::{Error, Result};
use crate::graph::{self, Graph};

/// Sweep cap for [`symmetric_eigen`].
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Convergence threshold on the largest off-diagonal entry, relative to `‖M‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-11;

/// Dense real symmetric matrix, stored row-major in full.
///
/// Every mutator writes `(i, j)` and `(j, i)` together, so the storage is
/// symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from the upper triangle: `f(i, j)` is called for `i <= j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from full rows, taking the upper triangle as authoritative.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix rows must be square".into()));
        }
        Ok(Self::from_upper(n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let v = self.get(i, j) + value;
        self.set(i, j, v);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Cholesky factorization succeeds with every pivot above
    /// `1e-12 · max|M_ii|`, i.e. the matrix is numerically positive definite.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.n;
        let floor = 1e-12 * (0..n).map(|i| self.get(i, i).abs()).fold(0.0, f64::max);
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d.is_nan() || d <= floor {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in (j + 1)..n {
                let (ri, rj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
                let s = self.get(i, j) - dot(ri, rj);
                l[i * n + j] = s / d;
            }
        }
        true
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps until the largest off-diagonal magnitude is at most
/// `1e-11 * ‖M‖_F`, or fails after [`JACOBI_MAX_SWEEPS`].
pub fn symmetric_eigen(m: &SymMatrix) -> Result<EigenSystem> {
    let n = m.n();
    if n == 0 {
        return Err(Error::InvalidSize(
            "eigendecomposition of an empty matrix".into(),
        ));
    }
    let mut a = m.data.clone();
    let mut v = SymMatrix::identity(n).data;
    let tol = JACOBI_REL_TOL * m.norm_frobenius();

    let max_off = |a: &[f64]| {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        off
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if max_off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, n, p, q, c, s);
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let residual = max_off(&a);
        if residual > tol {
            return Err(Error::NumericalFailure {
                sweeps: JACOBI_MAX_SWEEPS,
                residual,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    Ok(EigenSystem { values, vectors })
}

// A <- J^T A J for the plane rotation J acting on coordinates (p, q).
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
}

/// Combinatorial Laplacian `D - A`.
pub fn laplacian(g: &Graph) -> SymMatrix {
    let mut m = SymMatrix::zeros(g.n());
    for v in 0..g.n() {
        m.set(v, v, g.degree(v) as f64);
    }
    for &(i, j) in g.edges() {
        m.set(i, j, -1.0);
    }
    m
}

/// Signed Laplacian `D - diag(y) A diag(y)`.
///
/// Its quadratic form is `Σ_(i,j)∈E (y_i x_i - y_j x_j)^2` and `y` spans its
/// kernel on connected graphs.
pub fn signed_laplacian(g: &Graph, y: &[i8]) -> Result<SymMatrix> {
    check_signs(y, g.n())?;
    let mut m = SymMatrix::zeros(g.n());
    for v in 0..g.n() {
        m.set(v, v, g.degree(v) as f64);
    }
    for &(i, j) in g.edges() {
        m.set(i, j, -f64::from(y[i] * y[j]));
    }
    Ok(m)
}

pub(crate) fn check_signs(y: &[i8], n: usize) -> Result<()> {
    if y.len() != n {
        return Err(Error::InvalidLabeling(format!(
            "expected {n} labels, got {}",
            y.len()
        )));
    }
    if let Some(i) = y.iter().position(|&v| v != 1 && v != -1) {
        return Err(Error::InvalidLabeling(format!(
            "label {} at vertex {i} is not +1 or -1",
            y[i]
        )));
    }
    Ok(())
}

/// Rayleigh quotient `aᵀMa / aᵀa`.
pub fn rayleigh(m: &SymMatrix, a: &[f64]) -> Result<f64> {
    if a.len() != m.n() {
        return Err(Error::InvalidArgument(format!(
            "vector of length {} for a {}x{} matrix",
            a.len(),
            m.n(),
            m.n()
        )));
    }
    let norm2 = dot(a, a);
    if norm2 == 0.0 {
        return Err(Error::InvalidArgument(
            "Rayleigh quotient of the zero vector".into(),
        ));
    }
    Ok(m.quadratic_form(a) / norm2)
}

/// Evaluates both sides of `R_L(a∘y + δ1) <= R_M(a)` for `M` the signed
/// Laplacian of `(g, y)`. Requires `a ⊥ y`.
pub fn shifted_rayleigh_check(g: &Graph, y: &[i8], a: &[f64], delta: f64) -> Result<(f64, f64)> {
    let m = signed_laplacian(g, y)?;
    if a.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "vector of length {} for {} vertices",
            a.len(),
            g.n()
        )));
    }
    let inner: f64 = a.iter().zip(y).map(|(ai, &yi)| ai * f64::from(yi)).sum();
    let norm = dot(a, a).sqrt();
    if inner.abs() > 1e-9 * norm {
        return Err(Error::InvalidArgument(format!(
            "a must be orthogonal to y (<y, a> = {inner:e})"
        )));
    }
    let shifted: Vec<f64> = a
        .iter()
        .zip(y)
        .map(|(ai, &yi)| ai * f64::from(yi) + delta)
        .collect();
    let lhs = rayleigh(&laplacian(g), &shifted)?;
    let rhs = rayleigh(&m, a)?;
    Ok((lhs, rhs))
}

/// Returns `(φ_G² / (4 Δmax), λ2(M))` for the signed Laplacian `M` of `(g, y)`.
///
/// Needs exact expansion, so the graph must be connected and small.
pub fn signed_cheeger_bound(g: &Graph, y: &[i8]) -> Result<(f64, f64)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = signed_laplacian(g, y)?;
    let phi = graph::cheeger_exact(g)?.expansion();
    let bound = phi * phi / (4.0 * g.max_degree() as f64);
    let lambda2 = symmetric_eigen(&m)?.value(1);
    Ok((bound, lambda2))
}

/// Second-smallest Laplacian eigenvalue (algebraic connectivity).
pub fn fiedler_value(g: &Graph) -> Result<f64> {
    if g.n() < 2 {
        return Err(Error::InvalidSize(
            "algebraic connectivity needs two vertices".into(),
        ));
    }
    Ok(symmetric_eigen(&laplacian(g))?.value(1))
}

/// Decides `λ2(L) > threshold` by attempting a Cholesky factorization of
/// `L + 11ᵀ - threshold·I`. Requires `threshold < n`.
///
/// This costs one dense factorization, so it scales to graphs where a full
/// Jacobi decomposition is too slow.
pub fn fiedler_value_exceeds(g: &Graph, threshold: f64) -> Result<bool> {
    let n = g.n();
    if n < 2 || threshold >= n as f64 {
        return Err(Error::InvalidArgument(format!(
            "threshold {threshold} must be below n = {n} (n >= 2)"
        )));
    }
    let mut m = laplacian(g);
    for i in 0..n {
        for j in i..n {
            let shift = if i == j { 1.0 - threshold } else { 1.0 };
            m.add(i, j, shift);
        }
    }
    Ok(m.is_positive_definite())
}

/// Spectral sandwich `(λ2/2, 2·sqrt(λ2·Δmax))` around the edge expansion.
/// Disconnected graphs give `(0, 0)`.
pub fn cheeger_bounds_spectral(g: &Graph) -> Result<(f64, f64)> {
    if g.n() < 2 {
        return Err(Error::InvalidSize(
            "edge expansion needs at least two vertices".into(),
        ));
    }
    if !g.is_connected() {
        return Ok((0.0, 0.0));
    }
    let lambda2 = fiedler_value(g)?.max(0.0);
    let upper = 2.0 * (lambda2 * g.max_degree() as f64).sqrt();
    Ok((lambda2 / 2.0, upper))
}
