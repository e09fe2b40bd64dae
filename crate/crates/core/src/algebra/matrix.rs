use std::ops::{Add, Mul, Neg, Sub};

use super::{Algebra, AlgebraElement};
use crate::error::{invalid, Result};
use crate::matrix::{self as cm, CMatrix, C64};

/// An `m × n` matrix with entries in a multi-matrix algebra.
///
/// Stored in reduced form: for every block `i` one complex matrix of size
/// `m·n_i × n·n_i` whose `(r, c)` sub-block of size `n_i × n_i` is block `i`
/// of entry `(r, c)`. Products, adjoints and direct sums act blockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraMatrix {
    algebra: Algebra,
    rows: usize,
    cols: usize,
    blocks: Vec<CMatrix>,
}

impl AlgebraMatrix {
    pub fn from_blocks(algebra: Algebra, rows: usize, cols: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(invalid(format!(
                "{} reduced blocks for an algebra with {}",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(algebra.block_sizes()).enumerate() {
            if b.shape() != (rows * n, cols * n) {
                return Err(invalid(format!(
                    "reduced block {i} should be {}x{}, got {:?}",
                    rows * n,
                    cols * n,
                    b.shape()
                )));
            }
            cm::check_finite(b)?;
        }
        Ok(AlgebraMatrix {
            algebra,
            rows,
            cols,
            blocks,
        })
    }

    pub fn zeros(algebra: &Algebra, rows: usize, cols: usize) -> Self {
        let blocks = algebra
            .block_sizes()
            .iter()
            .map(|&n| cm::zeros(rows * n, cols * n))
            .collect();
        AlgebraMatrix {
            algebra: algebra.clone(),
            rows,
            cols,
            blocks,
        }
    }

    pub fn identity(algebra: &Algebra, n: usize) -> Self {
        Self::scalar(algebra, &cm::identity(n))
    }

    /// `c ⊗ 1_A` for a complex matrix `c`.
    pub fn scalar(algebra: &Algebra, c: &CMatrix) -> Self {
        let blocks = algebra
            .block_sizes()
            .iter()
            .map(|&n| cm::kron(c, &cm::identity(n)))
            .collect();
        AlgebraMatrix {
            algebra: algebra.clone(),
            rows: c.nrows(),
            cols: c.ncols(),
            blocks,
        }
    }

    pub fn from_element(x: &AlgebraElement) -> Self {
        AlgebraMatrix {
            algebra: x.algebra().clone(),
            rows: 1,
            cols: 1,
            blocks: x.blocks().to_vec(),
        }
    }

    /// Builds a matrix from a grid of entries (row-major).
    pub fn from_entries(algebra: &Algebra, entries: &[Vec<AlgebraElement>]) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut out = Self::zeros(algebra, rows, cols);
        for (r, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(invalid(format!("row {r} has {} entries, expected {cols}", row.len())));
            }
            for (c, x) in row.iter().enumerate() {
                if x.algebra() != algebra {
                    return Err(invalid(format!("entry ({r},{c}) lives in another algebra")));
                }
                out.set_entry(r, c, x);
            }
        }
        Ok(out)
    }

    /// Column vector with the given entries.
    pub fn column(algebra: &Algebra, entries: &[AlgebraElement]) -> Result<Self> {
        let grid: Vec<Vec<AlgebraElement>> = entries.iter().map(|x| vec![x.clone()]).collect();
        if grid.is_empty() {
            return Ok(Self::zeros(algebra, 0, 1));
        }
        Self::from_entries(algebra, &grid)
    }

    /// Block matrix assembled from a grid of parts with compatible shapes.
    pub fn assemble(algebra: &Algebra, parts: &[Vec<&AlgebraMatrix>]) -> Result<Self> {
        let row_heights: Vec<usize> = parts
            .iter()
            .map(|row| row.first().map_or(0, |p| p.rows))
            .collect();
        let col_widths: Vec<usize> = parts
            .first()
            .map(|row| row.iter().map(|p| p.cols).collect())
            .unwrap_or_default();
        for (i, row) in parts.iter().enumerate() {
            if row.len() != col_widths.len() {
                return Err(invalid("ragged block grid"));
            }
            for (j, p) in row.iter().enumerate() {
                if p.algebra != *algebra {
                    return Err(invalid("block of another algebra"));
                }
                if p.rows != row_heights[i] || p.cols != col_widths[j] {
                    return Err(invalid(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        p.rows, p.cols, row_heights[i], col_widths[j]
                    )));
                }
            }
        }
        let rows = row_heights.iter().sum();
        let cols = col_widths.iter().sum();
        let mut out = Self::zeros(algebra, rows, cols);
        for (b, &n) in algebra.block_sizes().iter().enumerate() {
            let mut r0 = 0;
            for (i, row) in parts.iter().enumerate() {
                let mut c0 = 0;
                for (j, p) in row.iter().enumerate() {
                    out.blocks[b]
                        .view_mut((r0 * n, c0 * n), (row_heights[i] * n, col_widths[j] * n))
                        .copy_from(&p.blocks[b]);
                    c0 += col_widths[j];
                }
                r0 += row_heights[i];
            }
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Reduced form of block `i`.
    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn entry(&self, r: usize, c: usize) -> AlgebraElement {
        let blocks = self
            .algebra
            .block_sizes()
            .iter()
            .zip(&self.blocks)
            .map(|(&n, b)| b.view((r * n, c * n), (n, n)).into_owned())
            .collect();
        AlgebraElement::new(self.algebra.clone(), blocks).expect("entry shapes match")
    }

    pub fn set_entry(&mut self, r: usize, c: usize, x: &AlgebraElement) {
        for (i, &n) in self.algebra.block_sizes().iter().enumerate() {
            self.blocks[i]
                .view_mut((r * n, c * n), (n, n))
                .copy_from(x.block(i));
        }
    }

    /// Column `c` as an `rows × 1` matrix.
    pub fn column_at(&self, c: usize) -> AlgebraMatrix {
        self.sub_matrix(0, c, self.rows, 1)
    }

    pub fn sub_matrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> AlgebraMatrix {
        let blocks = self
            .algebra
            .block_sizes()
            .iter()
            .zip(&self.blocks)
            .map(|(&n, b)| b.view((r0 * n, c0 * n), (rows * n, cols * n)).into_owned())
            .collect();
        AlgebraMatrix {
            algebra: self.algebra.clone(),
            rows,
            cols,
            blocks,
        }
    }

    pub fn adjoint(&self) -> Self {
        AlgebraMatrix {
            algebra: self.algebra.clone(),
            rows: self.cols,
            cols: self.rows,
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|b| b * c)
    }

    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let blocks: Vec<CMatrix> = self.blocks.iter().map(f).collect();
        let out = AlgebraMatrix {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks,
        };
        debug_assert!(out
            .blocks
            .iter()
            .zip(out.algebra.block_sizes())
            .all(|(b, &n)| b.shape() == (out.rows * n, out.cols * n)));
        out
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.algebra != rhs.algebra {
            return Err(invalid("product of matrices over different algebras"));
        }
        if self.cols != rhs.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(AlgebraMatrix {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: rhs.cols,
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    fn try_combine(&self, rhs: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        if self.algebra != rhs.algebra || self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(invalid(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(AlgebraMatrix {
            algebra: self.algebra.clone(),
            rows: self.rows,
            cols: self.cols,
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.try_combine(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_combine(rhs, |a, b| a - b)
    }

    /// Block-diagonal direct sum `self ⊕ rhs`.
    pub fn dsum(&self, rhs: &Self) -> Result<Self> {
        if self.algebra != rhs.algebra {
            return Err(invalid("direct sum over different algebras"));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| {
                let mut out = cm::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
                out.view_mut((0, 0), a.shape()).copy_from(a);
                out.view_mut(a.shape(), b.shape()).copy_from(b);
                out
            })
            .collect();
        Ok(AlgebraMatrix {
            algebra: self.algebra.clone(),
            rows: self.rows + rhs.rows,
            cols: self.cols + rhs.cols,
            blocks,
        })
    }

    /// Frobenius norm with every block counted once.
    pub fn frobenius(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| cm::frobenius(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| cm::distance(a, b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// C*-norm of the matrix as an operator on `Aⁿ`.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(cm::spectral_norm)
            .fold(0.0, f64::max)
    }

    /// `max(‖p² − p‖, ‖p − p*‖)`; infinite for non-square matrices.
    pub fn projection_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .map(|b| cm::distance(&(b * b), b).max(cm::distance(b, &b.adjoint())))
            .fold(0.0, f64::max)
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.projection_defect() <= tol
    }

    /// The standard representation applied entrywise: a `rows·d × cols·d`
    /// complex matrix with `d` the ambient dimension.
    pub fn represent(&self) -> CMatrix {
        let d = self.algebra.ambient_dim();
        let mut out = cm::zeros(self.rows * d, self.cols * d);
        for (i, &n) in self.algebra.block_sizes().iter().enumerate() {
            let offsets = self.algebra.copy_offsets(i);
            for r in 0..self.rows {
                for c in 0..self.cols {
                    let src = self.blocks[i].view((r * n, c * n), (n, n));
                    for &o in &offsets {
                        out.view_mut((r * d + o, c * d + o), (n, n)).copy_from(&src);
                    }
                }
            }
        }
        out
    }

    /// Inverse of [`represent`](Self::represent) with a membership check:
    /// `None` when the matrix is not entrywise in the represented algebra up
    /// to `tol` relative to its norm.
    pub fn from_represented(
        algebra: &Algebra,
        rows: usize,
        cols: usize,
        m: &CMatrix,
        tol: f64,
    ) -> Result<Option<Self>> {
        let d = algebra.ambient_dim();
        if m.shape() != (rows * d, cols * d) {
            return Err(invalid(format!(
                "represented matrix should be {}x{}, got {:?}",
                rows * d,
                cols * d,
                m.shape()
            )));
        }
        let mut out = Self::zeros(algebra, rows, cols);
        let mut residual2 = 0.0;
        for r in 0..rows {
            for c in 0..cols {
                let sub = m.view((r * d, c * d), (d, d)).into_owned();
                let (x, res) = algebra.extract(&sub)?;
                residual2 += res * res;
                out.set_entry(r, c, &x);
            }
        }
        let ok = residual2.sqrt() <= tol * cm::frobenius(m).max(1.0);
        Ok(ok.then_some(out))
    }
}

impl Mul for &AlgebraMatrix {
    type Output = AlgebraMatrix;

    fn mul(self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        self.try_mul(rhs).expect("incompatible algebra matrices")
    }
}

impl Add for &AlgebraMatrix {
    type Output = AlgebraMatrix;

    fn add(self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        self.try_add(rhs).expect("incompatible algebra matrices")
    }
}

impl Sub for &AlgebraMatrix {
    type Output = AlgebraMatrix;

    fn sub(self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        self.try_sub(rhs).expect("incompatible algebra matrices")
    }
}

impl Neg for &AlgebraMatrix {
    type Output = AlgebraMatrix;

    fn neg(self) -> AlgebraMatrix {
        self.map(|b| -b)
    }
}
