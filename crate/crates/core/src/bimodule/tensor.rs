//! `M ⊗_A X` for a projective module `M = pAⁿ`, and `T ⊗ I_X`.
//!
//! The concrete space is `π(p)·Xⁿ`, columns of `n` elements of `X` stacked
//! into `(n·d_A) × d_B` matrices. It is converted back to the normal form
//! `qB^m` through a normalized tight frame `ξ₁, …, ξ_m`, `Σ ξ_k ξ_k* ξ = ξ`,
//! with `q_ij = ⟨ξ_i, ξ_j⟩`.

use super::Bimodule;
use crate::algebra::{Algebra, AlgebraElement, AlgebraMatrix};
use crate::error::{degenerate, invalid, Result};
use crate::fredholm::ModuleOperator;
use crate::matrix::{self as cm, onb_span, CMatrix, Subspace};
use crate::module::HilbertModule;

/// `M ⊗_A X` in both concrete and normal form.
#[derive(Debug, Clone)]
pub struct TensorModule {
    pub source: HilbertModule,
    /// Orthonormal basis of `π(p)·Xⁿ`.
    pub space: Subspace,
    pub frame: Vec<CMatrix>,
    /// `qB^m` with `q_ij = ⟨ξ_i, ξ_j⟩`.
    pub module: HilbertModule,
}

impl TensorModule {
    /// `⟨ξ, η⟩ = Σ ξ_i* η_i`.
    pub fn inner(&self, x: &Bimodule, xi: &CMatrix, eta: &CMatrix, tol: f64) -> Result<AlgebraElement> {
        let shape = self.space.shape();
        if xi.shape() != shape || eta.shape() != shape {
            return Err(invalid("tensor element has the wrong shape"));
        }
        x.right().extract(&(xi.adjoint() * eta), tol, 'd', "ξ*η")
    }

    /// Coordinates `(⟨ξ_i, ξ⟩)_i` of `ξ` in `qB^m`.
    pub fn coordinates(&self, x: &Bimodule, xi: &CMatrix, tol: f64) -> Result<AlgebraMatrix> {
        let entries: Vec<AlgebraElement> = self
            .frame
            .iter()
            .map(|f| self.inner(x, f, xi, tol))
            .collect::<Result<_>>()?;
        if entries.is_empty() {
            return Ok(AlgebraMatrix::zeros(x.right_algebra(), 0, 1));
        }
        AlgebraMatrix::column(x.right_algebra(), &entries)
    }
}

/// The same matrix with the algebra's representation replaced by `target`.
fn rehome(m: &AlgebraMatrix, target: &Algebra) -> Result<AlgebraMatrix> {
    if m.algebra().block_sizes() != target.block_sizes() {
        return Err(invalid(format!(
            "module over {} cannot be tensored with a bimodule over {}",
            m.algebra(),
            target
        )));
    }
    AlgebraMatrix::from_blocks(target.clone(), m.rows(), m.cols(), m.blocks().to_vec())
}

pub fn module_tensor(m: &HilbertModule, x: &Bimodule, tol: f64) -> Result<TensorModule> {
    cm::check_tol(tol)?;
    let p = rehome(m.projection(), x.left_algebra())?.represent();
    let n = m.ambient_rank();
    let (da, db) = x.shape();
    let shape = (n * da, db);
    let mut candidates = Vec::with_capacity(n * x.dim());
    for i in 0..n {
        for b in x.basis() {
            let mut v = cm::zeros(n * da, db);
            v.view_mut((i * da, 0), (da, db)).copy_from(b);
            let v = &p * v;
            if cm::frobenius(&v) > tol {
                candidates.push(v);
            }
        }
    }
    let space = onb_span(shape, &candidates, tol)?;

    let right_units: Vec<CMatrix> = x.right_algebra().matrix_units().iter().map(|u| x.right().embed(u)).collect();
    let mut generated = Subspace::zero(shape);
    let mut generators = Vec::new();
    for c in &candidates {
        if generated.dim() == space.dim() {
            break;
        }
        if generated.contains(c, tol.sqrt()) {
            continue;
        }
        let orbit: Vec<CMatrix> = right_units.iter().map(|u| c * u).collect();
        generated = generated.extend(&orbit, tol)?;
        generators.push(c.clone());
    }
    if generated.dim() != space.dim() {
        return Err(degenerate(format!(
            "right B-span of the generators has dimension {} instead of {}",
            generated.dim(),
            space.dim()
        )));
    }

    let mut g = cm::zeros(n * da, n * da);
    for c in &generators {
        g += c * c.adjoint();
    }
    let (vals, vecs) = cm::hermitian_eigen(&g);
    let top = vals.iter().copied().fold(0.0, f64::max);
    let mut root = cm::zeros(n * da, n * da);
    for (k, &l) in vals.iter().enumerate() {
        if l > tol * top {
            let v = vecs.column(k);
            root += (&v * v.adjoint()).unscale(l.sqrt());
        }
    }
    let frame: Vec<CMatrix> = generators.iter().map(|c| &root * c).collect();

    let b = x.right_algebra();
    let k = frame.len();
    let mut q = AlgebraMatrix::zeros(b, k, k);
    for (i, fi) in frame.iter().enumerate() {
        for (j, fj) in frame.iter().enumerate() {
            q.set_entry(i, j, &x.right().extract(&(fi.adjoint() * fj), tol.sqrt(), 'd', "ξ_i*ξ_j")?);
        }
    }
    let module = HilbertModule::new(q, tol.sqrt())?;
    Ok(TensorModule {
        source: m.clone(),
        space,
        frame,
        module,
    })
}

/// `T ⊗ I_X` between the tensor modules of the domain and codomain of `T`.
#[derive(Debug, Clone)]
pub struct TensorOperator {
    pub domain: TensorModule,
    pub codomain: TensorModule,
    pub operator: ModuleOperator,
}

pub fn op_tensor(t: &ModuleOperator, x: &Bimodule, tol: f64) -> Result<TensorOperator> {
    let domain = module_tensor(t.domain(), x, tol)?;
    let codomain = module_tensor(t.codomain(), x, tol)?;
    let r = rehome(t.matrix(), x.left_algebra())?.represent();
    let b = x.right_algebra();
    let mut m = AlgebraMatrix::zeros(b, codomain.frame.len(), domain.frame.len());
    for (i, fi) in codomain.frame.iter().enumerate() {
        let row = fi.adjoint() * &r;
        for (j, fj) in domain.frame.iter().enumerate() {
            m.set_entry(i, j, &x.right().extract(&(&row * fj), tol.sqrt(), 'd', "ξ'_i* T ξ_j")?);
        }
    }
    let operator = ModuleOperator::new(domain.module.clone(), codomain.module.clone(), m, tol.sqrt())?;
    let (lhs, rhs) = (operator.norm(), t.norm());
    if lhs > rhs * (1.0 + tol.sqrt()) + tol {
        return Err(degenerate(format!("‖T ⊗ I‖ = {lhs:.6e} exceeds ‖T‖ = {rhs:.6e}")));
    }
    Ok(TensorOperator {
        domain,
        codomain,
        operator,
    })
}
