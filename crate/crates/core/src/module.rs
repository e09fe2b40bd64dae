//! Projective Hilbert modules `pAⁿ` over a multi-matrix algebra.

use crate::algebra::{
    idempotent_to_projection, k0_of_projection, mv_partial_isometry, Algebra, AlgebraElement,
    AlgebraMatrix, K0Class, Unitization,
};
use crate::error::{invalid, Result};
use crate::fredholm::{pseudo_inverse, ModuleOperator};
use crate::matrix::{self as cm};

/// The right Hilbert module `M = pAⁿ` for a projection `p ∈ M_n(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertModule {
    projection: AlgebraMatrix,
}

impl HilbertModule {
    pub fn new(projection: AlgebraMatrix, tol: f64) -> Result<Self> {
        cm::check_tol(tol)?;
        if !projection.is_square() {
            return Err(invalid("module projection must be square"));
        }
        let defect = projection.projection_defect();
        if defect > tol {
            return Err(invalid(format!(
                "module projection is not a self-adjoint idempotent (defect {defect:.3e})"
            )));
        }
        Ok(HilbertModule { projection })
    }

    /// Module presented by a (not necessarily self-adjoint) idempotent,
    /// normalized to the similar range projection.
    pub fn from_idempotent(e: &AlgebraMatrix, tol: f64) -> Result<Self> {
        let red = idempotent_to_projection(e, tol)?;
        Self::new(red.projection, tol)
    }

    /// The free module `Aⁿ`.
    pub fn free(algebra: &Algebra, n: usize) -> Self {
        HilbertModule {
            projection: AlgebraMatrix::identity(algebra, n),
        }
    }

    /// The zero module presented inside `Aⁿ`.
    pub fn zero(algebra: &Algebra, n: usize) -> Self {
        HilbertModule {
            projection: AlgebraMatrix::zeros(algebra, n, n),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        self.projection.algebra()
    }

    pub fn ambient_rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn projection(&self) -> &AlgebraMatrix {
        &self.projection
    }

    /// Same algebra, same ambient rank and projections within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.algebra() == other.algebra()
            && self.ambient_rank() == other.ambient_rank()
            && self.projection.distance(&other.projection) <= tol
    }

    pub fn element(&self, vector: AlgebraMatrix, tol: f64) -> Result<ModuleElement> {
        ModuleElement::new(self.clone(), vector, tol)
    }

    /// The `i`-th column of `p`, an element of `M`.
    pub fn column(&self, i: usize) -> ModuleElement {
        ModuleElement {
            module: self.clone(),
            vector: self.projection.column_at(i),
        }
    }

    /// The same module viewed over the unitization `Ã`.
    pub fn unitize(&self, u: &Unitization) -> HilbertModule {
        HilbertModule {
            projection: u.embed_matrix(&self.projection),
        }
    }

    pub fn identity_operator(&self) -> ModuleOperator {
        ModuleOperator::compressed(self.clone(), self.clone(), self.projection.clone())
            .expect("identity has matching shapes")
    }
}

/// A vector `v ∈ Aⁿ` with `p·v = v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleElement {
    module: HilbertModule,
    vector: AlgebraMatrix,
}

impl ModuleElement {
    pub fn new(module: HilbertModule, vector: AlgebraMatrix, tol: f64) -> Result<Self> {
        if vector.algebra() != module.algebra() || vector.cols() != 1 || vector.rows() != module.ambient_rank() {
            return Err(invalid(format!(
                "expected an {}x1 column over {}, got {}x{}",
                module.ambient_rank(),
                module.algebra(),
                vector.rows(),
                vector.cols()
            )));
        }
        let residual = (&(module.projection() * &vector) - &vector).frobenius();
        if residual > tol * vector.frobenius().max(1.0) {
            return Err(invalid(format!("vector is not in the module (‖pv − v‖ = {residual:.3e})")));
        }
        Ok(ModuleElement { module, vector })
    }

    pub fn module(&self) -> &HilbertModule {
        &self.module
    }

    pub fn vector(&self) -> &AlgebraMatrix {
        &self.vector
    }

    /// Right action `v·a`.
    pub fn mul_right(&self, a: &AlgebraElement) -> ModuleElement {
        ModuleElement {
            module: self.module.clone(),
            vector: &self.vector * &a.as_matrix(),
        }
    }

    pub fn add(&self, other: &ModuleElement) -> Result<ModuleElement> {
        Ok(ModuleElement {
            module: self.module.clone(),
            vector: self.vector.try_add(&other.vector)?,
        })
    }
}

/// `⟨v, w⟩ = v*w`.
pub fn inner(v: &ModuleElement, w: &ModuleElement) -> Result<AlgebraElement> {
    if v.module != w.module {
        return Err(invalid("inner product of elements of different modules"));
    }
    Ok((&v.vector.adjoint() * &w.vector).entry(0, 0))
}

/// `Ω_μ: Aⁿ → M`, `(a_i) ↦ Σ μ_i a_i`; its matrix has the `μ_i` as columns.
pub fn omega(module: &HilbertModule, mu: &[ModuleElement]) -> Result<ModuleOperator> {
    let alg = module.algebra();
    let n = mu.len();
    let mut matrix = AlgebraMatrix::zeros(alg, module.ambient_rank(), n);
    for (i, m) in mu.iter().enumerate() {
        if m.module() != module {
            return Err(invalid(format!("element {i} belongs to another module")));
        }
        for r in 0..module.ambient_rank() {
            matrix.set_entry(r, i, &m.vector.entry(r, 0));
        }
    }
    ModuleOperator::compressed(HilbertModule::free(alg, n), module.clone(), matrix)
}

/// `rank(M)`: the `K₀` class of the presenting projection.
pub fn module_rank(module: &HilbertModule, tol: f64) -> Result<K0Class> {
    k0_of_projection(module.projection(), tol)
}

pub fn direct_sum(m: &HilbertModule, n: &HilbertModule) -> Result<HilbertModule> {
    if m.algebra() != n.algebra() {
        return Err(invalid("direct sum of modules over different algebras"));
    }
    Ok(HilbertModule {
        projection: m.projection.dsum(&n.projection)?,
    })
}

/// A unitary `U: M → N` when `rank(M) = rank(N)`, otherwise `None`.
pub fn construct_isomorphism(
    m: &HilbertModule,
    n: &HilbertModule,
    tol: f64,
) -> Result<Option<ModuleOperator>> {
    if m.algebra() != n.algebra() {
        return Err(invalid("modules over different algebras"));
    }
    if module_rank(m, tol)? != module_rank(n, tol)? {
        return Ok(None);
    }
    let v = mv_partial_isometry(m.projection(), n.projection(), tol)?;
    ModuleOperator::compressed(m.clone(), n.clone(), v).map(Some)
}

/// Outcome of [`check_quasi_stable`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiStableReport {
    pub invertible: bool,
    /// `‖ST − 1‖` and `‖TS − 1‖` for the pseudo-inverse `S`.
    pub left_residual: f64,
    pub right_residual: f64,
    /// `I_X − T_XX` is `A`-compact; every operator is, in finite dimensions.
    pub corner_compact: bool,
}

impl QuasiStableReport {
    pub fn holds(&self) -> bool {
        self.invertible && self.corner_compact
    }
}

/// Whether `t: M ⊕ X → N ⊕ X` witnesses a quasi-stable isomorphism between
/// `M` and `N`.
pub fn check_quasi_stable(
    t: &ModuleOperator,
    m: &HilbertModule,
    n: &HilbertModule,
    x: &HilbertModule,
    tol: f64,
) -> Result<QuasiStableReport> {
    let dom = direct_sum(m, x)?;
    let cod = direct_sum(n, x)?;
    if !t.domain().approx_eq(&dom, tol) || !t.codomain().approx_eq(&cod, tol) {
        return Err(invalid("operator does not map M ⊕ X to N ⊕ X for the given partition"));
    }
    let w = pseudo_inverse(t, tol)?;
    let st = w.pseudo_inverse.matrix() * t.matrix();
    let ts = t.matrix() * w.pseudo_inverse.matrix();
    let left_residual = st.distance(dom.projection());
    let right_residual = ts.distance(cod.projection());
    let bound = tol.sqrt();
    Ok(QuasiStableReport {
        invertible: left_residual <= bound && right_residual <= bound,
        left_residual,
        right_residual,
        corner_compact: true,
    })
}
