//! Dense complex matrices: singular values, pseudo-inverses, numerical rank
//! and spans of matrices under the trace inner product.
//!
//! Everything above this module treats a [`CMatrix`] as an immutable value.
//! Decompositions come from `nalgebra`; the orthonormalization used for
//! spans is a modified Gram-Schmidt with one re-orthogonalization pass.

use faer::{Mat, MatRef, Side};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Relative singular-value cutoff used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Matrix unit `e_{ij}` of the given shape.
pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(rows, cols);
    m[(i, j)] = ONE;
    m
}

pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut m = zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = C64::new(v, 0.0);
    }
    m
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(invalid("matrix has non-finite entries"))
    }
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance between two matrices of the same shape.
pub fn distance(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Trace inner product `tr(a* b)`.
pub fn inner(a: &CMatrix, b: &CMatrix) -> C64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(m: &CMatrix) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// `(m + m*) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `(m - m*) / 2i`, so that `m = re + i·im` with both parts Hermitian.
pub fn skew_part(m: &CMatrix) -> CMatrix {
    (m - m.adjoint()) * C64::new(0.0, -0.5)
}

/// Thin singular value decomposition with the empty cases handled.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub v_adjoint: CMatrix,
}

impl Svd {
    pub fn new(t: &CMatrix) -> Self {
        let (r, c) = t.shape();
        if r == 0 || c == 0 {
            return Svd {
                u: zeros(r, 0),
                singular_values: Vec::new(),
                v_adjoint: zeros(0, c),
            };
        }
        let svd = to_faer(t).thin_svd().expect("SVD of a finite matrix");
        let k = r.min(c);
        let u = from_faer(svd.U());
        let v_adjoint = from_faer(svd.V()).adjoint();
        let s = svd.S().column_vector();
        let singular_values = (0..k).map(|i| s[i].re).collect();
        Svd {
            u,
            singular_values,
            v_adjoint,
        }
    }

    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `cutoff`.
    pub fn rank_above(&self, cutoff: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    /// Pseudo-inverse keeping only singular values strictly above `cutoff`.
    pub fn pinv_above(&self, cutoff: f64) -> CMatrix {
        let (r, c) = (self.u.nrows(), self.v_adjoint.ncols());
        let mut out = zeros(c, r);
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s > cutoff {
                let v = self.v_adjoint.row(k).adjoint();
                let u = self.u.column(k).adjoint();
                out += (v * u).unscale(s);
            }
        }
        out
    }
}

/// Moore-Penrose pseudo-inverse; singular values `<= tol·σ_max` count as zero.
pub fn pinv(t: &CMatrix, tol: f64) -> Result<CMatrix> {
    check_tol(tol)?;
    check_finite(t)?;
    let svd = Svd::new(t);
    Ok(svd.pinv_above(tol * svd.max_singular_value()))
}

/// Number of singular values above `tol·σ_max`.
pub fn rank_tol(t: &CMatrix, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    check_finite(t)?;
    let svd = Svd::new(t);
    Ok(svd.rank_above(tol * svd.max_singular_value()))
}

pub fn spectral_norm(t: &CMatrix) -> f64 {
    Svd::new(t).max_singular_value()
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// Eigen-decomposition of the Hermitian part of `h`, eigenvalues ascending.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = to_faer(&hermitian_part(h))
        .self_adjoint_eigen(Side::Lower)
        .expect("eigendecomposition of a finite Hermitian matrix");
    let s = eig.S().column_vector();
    ((0..n).map(|i| s[i].re).collect(), from_faer(eig.U()))
}

fn to_faer(m: &CMatrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Orthonormal basis (as columns) of the range of a positive semidefinite
/// matrix, keeping eigenvalues above `tol·λ_max`.
pub fn psd_range(h: &CMatrix, tol: f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let top = vals.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > tol * top).collect();
    let mut out = zeros(h.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &vecs.column(src));
    }
    out
}

/// `count` orthonormal columns spanning the column space of `m`, chosen by
/// column-pivoted Gram-Schmidt. Deterministic: for a coordinate projection
/// the result is the corresponding standard basis vectors.
pub fn column_basis(m: &CMatrix, count: usize) -> CMatrix {
    let rows = m.nrows();
    let mut residual: Vec<nalgebra::DVector<C64>> =
        (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let mut out = zeros(rows, count);
    for k in 0..count {
        let (best, _) = residual
            .iter()
            .enumerate()
            .map(|(j, c)| (j, c.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let mut q = residual[best].clone();
        for _ in 0..2 {
            for prev in 0..k {
                let b = out.column(prev).into_owned();
                let c = b.dotc(&q);
                q -= b * c;
            }
        }
        let norm = q.norm();
        if norm > 0.0 {
            q.unscale_mut(norm);
        }
        out.set_column(k, &q);
        for col in residual.iter_mut() {
            let c = q.dotc(col);
            *col -= &q * c;
        }
    }
    out
}

/// Kronecker product with block-of-`b` layout: entry `(i·rb + k, j·cb + l)`
/// is `a[i,j]·b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// A linear span of equally-shaped matrices, stored as an orthonormal basis
/// under the trace inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    shape: (usize, usize),
    basis: Vec<CMatrix>,
}

impl Subspace {
    pub fn zero(shape: (usize, usize)) -> Self {
        Subspace {
            shape,
            basis: Vec::new(),
        }
    }

    /// Adopts `basis` unchanged when its Gram matrix is the identity up to
    /// `slack`.
    pub fn from_orthonormal(shape: (usize, usize), basis: Vec<CMatrix>, slack: f64) -> Option<Self> {
        if basis.iter().any(|b| b.shape() != shape || !is_finite(b)) {
            return None;
        }
        let s = Subspace { shape, basis };
        (s.orthonormality_defect() <= slack).then_some(s)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of the orthogonal projection of `v` onto the span.
    pub fn coordinates(&self, v: &CMatrix) -> Vec<C64> {
        self.basis.iter().map(|b| inner(b, v)).collect()
    }

    pub fn project(&self, v: &CMatrix) -> CMatrix {
        let mut out = zeros(self.shape.0, self.shape.1);
        for b in &self.basis {
            out += b * inner(b, v);
        }
        out
    }

    /// Frobenius distance from `v` to the span.
    pub fn residual(&self, v: &CMatrix) -> f64 {
        distance(v, &self.project(v))
    }

    /// Whether `v` lies in the span up to `tol` relative to its own norm.
    pub fn contains(&self, v: &CMatrix, tol: f64) -> bool {
        self.residual(v) <= tol * frobenius(v).max(f64::MIN_POSITIVE)
    }

    /// Deviation of the basis Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((inner(a, b) - target).norm());
            }
        }
        worst
    }

    /// Span of this subspace together with more vectors.
    pub fn extend(&self, more: &[CMatrix], tol: f64) -> Result<Subspace> {
        let scale = more.iter().map(frobenius).fold(1.0_f64, f64::max);
        let mut basis = self.basis.clone();
        for v in more {
            check_shape(self.shape, v)?;
            if let Some(b) = orthonormalized(&basis, v, tol * scale) {
                basis.push(b);
            }
        }
        Ok(Subspace {
            shape: self.shape,
            basis,
        })
    }
}

fn check_shape(shape: (usize, usize), v: &CMatrix) -> Result<()> {
    if v.shape() != shape {
        return Err(invalid(format!(
            "matrix of shape {:?} in a span of shape {:?}",
            v.shape(),
            shape
        )));
    }
    check_finite(v)
}

/// Component of `v` orthogonal to `basis`, normalized, or `None` if its norm
/// does not exceed `cutoff`.
fn orthonormalized(basis: &[CMatrix], v: &CMatrix, cutoff: f64) -> Option<CMatrix> {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = inner(b, &w);
            w -= b * c;
        }
    }
    let norm = frobenius(&w);
    if norm > cutoff && norm > 0.0 {
        Some(w.unscale(norm))
    } else {
        None
    }
}

/// Orthonormal basis of the linear span of `vectors`, all of shape `shape`.
///
/// A vector is kept when its component orthogonal to the vectors already
/// kept exceeds `tol` times the largest input norm.
pub fn onb_span(shape: (usize, usize), vectors: &[CMatrix], tol: f64) -> Result<Subspace> {
    check_tol(tol)?;
    Subspace::zero(shape).extend(vectors, tol)
}

/// Mutual containment of two spans.
pub fn subspace_equal(u: &Subspace, v: &Subspace, tol: f64) -> Result<bool> {
    if u.shape != v.shape {
        return Err(invalid(format!(
            "ambient shapes differ: {:?} vs {:?}",
            u.shape, v.shape
        )));
    }
    Ok(u.basis.iter().all(|b| v.contains(b, tol)) && v.basis.iter().all(|b| u.contains(b, tol)))
}
