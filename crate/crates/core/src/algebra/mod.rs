//! Finite-dimensional C*-algebras `⊕ M_{n_i}(ℂ)` in standard form.
//!
//! An [`Algebra`] carries its block sizes together with the multiplicities of
//! a faithful, unital block-diagonal representation: block `i` is repeated
//! `μ_i` times on the diagonal of an `Σ n_i μ_i`-dimensional space. Elements
//! are stored block by block; the representation is only materialized on
//! request.

mod decompose;
mod k0;
mod matrix;

use std::fmt;

pub use decompose::{central_decomposition, CentralDecomposition};
pub use k0::{
    idempotent_to_projection, k0_of_projection, minimal_projection, mv_partial_isometry,
    IdempotentReduction, K0Class, Unitization,
};
pub use matrix::AlgebraMatrix;

use crate::error::{invalid, Result};
use crate::matrix::{self as cm, CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    block_sizes: Vec<usize>,
    multiplicities: Vec<usize>,
}

impl Algebra {
    pub fn new(block_sizes: Vec<usize>, multiplicities: Vec<usize>) -> Result<Self> {
        if block_sizes.is_empty() {
            return Err(invalid("an algebra needs at least one block"));
        }
        if block_sizes.len() != multiplicities.len() {
            return Err(invalid(format!(
                "{} block sizes but {} multiplicities",
                block_sizes.len(),
                multiplicities.len()
            )));
        }
        if block_sizes.iter().chain(&multiplicities).any(|&x| x == 0) {
            return Err(invalid("block sizes and multiplicities must be positive"));
        }
        Ok(Algebra {
            block_sizes,
            multiplicities,
        })
    }

    /// Multiplicity-one representation of the given blocks.
    pub fn with_blocks(block_sizes: &[usize]) -> Result<Self> {
        Self::new(block_sizes.to_vec(), vec![1; block_sizes.len()])
    }

    /// `M_n(ℂ)` acting on `ℂⁿ`.
    pub fn full_matrix(n: usize) -> Self {
        Self::new(vec![n], vec![1]).expect("n must be positive")
    }

    /// `ℂ` acting on `ℂ`.
    pub fn complex() -> Self {
        Self::full_matrix(1)
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Dimension of the represented space, `Σ n_i μ_i`.
    pub fn ambient_dim(&self) -> usize {
        self.block_sizes
            .iter()
            .zip(&self.multiplicities)
            .map(|(n, m)| n * m)
            .sum()
    }

    /// Complex dimension of the algebra, `Σ n_i²`.
    pub fn dimension(&self) -> usize {
        self.block_sizes.iter().map(|n| n * n).sum()
    }

    /// Same blocks, represented with different multiplicities.
    pub fn with_multiplicities(&self, multiplicities: Vec<usize>) -> Result<Self> {
        Self::new(self.block_sizes.clone(), multiplicities)
    }

    /// Offsets in the ambient space of every copy of block `i`.
    pub fn copy_offsets(&self, i: usize) -> Vec<usize> {
        let start: usize = (0..i)
            .map(|j| self.block_sizes[j] * self.multiplicities[j])
            .sum();
        let n = self.block_sizes[i];
        (0..self.multiplicities[i]).map(|s| start + s * n).collect()
    }

    /// Blockwise tensor product: blocks `(i, j)` in lexicographic order with
    /// sizes `n_i m_j` and multiplicities `μ_i ν_j`.
    pub fn tensor(&self, other: &Algebra) -> Algebra {
        let mut sizes = Vec::new();
        let mut mults = Vec::new();
        for (n, mu) in self.block_sizes.iter().zip(&self.multiplicities) {
            for (m, nu) in other.block_sizes.iter().zip(&other.multiplicities) {
                sizes.push(n * m);
                mults.push(mu * nu);
            }
        }
        Algebra::new(sizes, mults).expect("tensor of valid algebras")
    }

    pub fn zero_element(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.block_sizes.iter().map(|&n| cm::zeros(n, n)).collect(),
        }
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.block_sizes.iter().map(|&n| cm::identity(n)).collect(),
        }
    }

    /// The element with `m` in block `i` and zero elsewhere.
    pub fn element_in_block(&self, i: usize, m: CMatrix) -> Result<AlgebraElement> {
        let mut x = self.zero_element();
        if i >= self.num_blocks() {
            return Err(invalid(format!("block index {i} out of range")));
        }
        if m.shape() != x.blocks[i].shape() {
            return Err(invalid(format!(
                "block {i} expects {n}x{n}, got {:?}",
                m.shape(),
                n = self.block_sizes[i]
            )));
        }
        x.blocks[i] = m;
        Ok(x)
    }

    /// Matrix units of every block: a linear basis of the algebra.
    pub fn matrix_units(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.dimension());
        for (i, &n) in self.block_sizes.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    out.push(
                        self.element_in_block(i, cm::unit(n, n, r, c))
                            .expect("unit fits its block"),
                    );
                }
            }
        }
        out
    }

    /// The standard representation of `x`.
    pub fn embed(&self, x: &AlgebraElement) -> CMatrix {
        debug_assert_eq!(&x.algebra, self);
        let d = self.ambient_dim();
        let mut out = cm::zeros(d, d);
        for (i, block) in x.blocks.iter().enumerate() {
            let n = self.block_sizes[i];
            for o in self.copy_offsets(i) {
                out.view_mut((o, o), (n, n)).copy_from(block);
            }
        }
        out
    }

    /// Orthogonal projection of an ambient matrix onto the represented
    /// algebra (average of the diagonal copies of each block), together with
    /// the Frobenius residual.
    pub fn extract(&self, m: &CMatrix) -> Result<(AlgebraElement, f64)> {
        let d = self.ambient_dim();
        if m.shape() != (d, d) {
            return Err(invalid(format!(
                "expected a {d}x{d} matrix, got {:?}",
                m.shape()
            )));
        }
        cm::check_finite(m)?;
        let blocks = (0..self.num_blocks())
            .map(|i| {
                let n = self.block_sizes[i];
                let offsets = self.copy_offsets(i);
                let mut acc = cm::zeros(n, n);
                for &o in &offsets {
                    acc += m.view((o, o), (n, n));
                }
                acc.unscale(offsets.len() as f64)
            })
            .collect();
        let x = AlgebraElement {
            algebra: self.clone(),
            blocks,
        };
        let residual = cm::distance(m, &self.embed(&x));
        Ok((x, residual))
    }

    /// `Some(x)` when `m` is the representation of `x` up to `tol` (relative
    /// to `max(1, ‖m‖)`).
    pub fn is_member(&self, m: &CMatrix, tol: f64) -> Result<Option<AlgebraElement>> {
        let (x, residual) = self.extract(m)?;
        Ok((residual <= tol * cm::frobenius(m).max(1.0)).then_some(x))
    }

    /// Class of the unit, `(n_1, …, n_k)`.
    pub fn unit_class(&self) -> K0Class {
        K0Class::new(
            self.clone(),
            self.block_sizes.iter().map(|&n| n as i64).collect(),
        )
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .block_sizes
            .iter()
            .zip(&self.multiplicities)
            .map(|(n, m)| {
                if *m == 1 {
                    format!("M{n}")
                } else {
                    format!("M{n}^({m})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// An element `(a_1, …, a_k)` of a multi-matrix algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    algebra: Algebra,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn new(algebra: Algebra, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(invalid(format!(
                "{} blocks given for an algebra with {}",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(algebra.block_sizes()).enumerate() {
            if b.shape() != (n, n) {
                return Err(invalid(format!(
                    "block {i} should be {n}x{n}, got {:?}",
                    b.shape()
                )));
            }
            cm::check_finite(b)?;
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn adjoint(&self) -> Self {
        self.map(|b| b.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|b| b * c)
    }

    fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        assert_eq!(self.algebra, other.algebra, "elements of different algebras");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// C*-norm: the largest block operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(cm::spectral_norm)
            .fold(0.0, f64::max)
    }

    /// Frobenius distance with every block counted once.
    pub fn distance(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| cm::distance(a, b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Smallest eigenvalue over all blocks of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|b| cm::hermitian_eigen(b).0.first().copied())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn as_matrix(&self) -> AlgebraMatrix {
        AlgebraMatrix::from_element(self)
    }
}
