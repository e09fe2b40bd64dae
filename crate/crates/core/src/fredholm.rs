//! Adjointable operators between projective modules and their index in `K₀(A)`.

use crate::algebra::{k0_of_projection, AlgebraMatrix, K0Class, Unitization};
use crate::error::{degenerate, invalid, Result};
use crate::matrix::{self as cm, Svd};
use crate::module::{construct_isomorphism, direct_sum, module_rank, omega, HilbertModule, ModuleElement};

/// Singular values within this factor of the cutoff, on either side, make
/// the rank ambiguous.
pub const RANK_AMBIGUITY_BAND: f64 = 1e2;

/// `T ∈ L_A(M, N)` stored as an `n_N × n_M` matrix with `q t p = t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator {
    domain: HilbertModule,
    codomain: HilbertModule,
    matrix: AlgebraMatrix,
}

impl ModuleOperator {
    /// Validates shapes and the compression condition `‖q t p − t‖ ≤ tol·max(1, ‖t‖)`.
    pub fn new(domain: HilbertModule, codomain: HilbertModule, matrix: AlgebraMatrix, tol: f64) -> Result<Self> {
        cm::check_tol(tol)?;
        check_shape(&domain, &codomain, &matrix)?;
        let compressed = &(codomain.projection() * &matrix) * domain.projection();
        let residual = compressed.distance(&matrix);
        if residual > tol * matrix.frobenius().max(1.0) {
            return Err(invalid(format!(
                "operator matrix does not satisfy q·t·p = t (residual {residual:.3e})"
            )));
        }
        Ok(ModuleOperator {
            domain,
            codomain,
            matrix,
        })
    }

    /// Replaces `t` by `q t p`.
    pub fn compressed(domain: HilbertModule, codomain: HilbertModule, matrix: AlgebraMatrix) -> Result<Self> {
        check_shape(&domain, &codomain, &matrix)?;
        let matrix = &(codomain.projection() * &matrix) * domain.projection();
        Ok(ModuleOperator {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn zero(domain: &HilbertModule, codomain: &HilbertModule) -> Result<Self> {
        let m = AlgebraMatrix::zeros(domain.algebra(), codomain.ambient_rank(), domain.ambient_rank());
        Self::compressed(domain.clone(), codomain.clone(), m)
    }

    pub fn domain(&self) -> &HilbertModule {
        &self.domain
    }

    pub fn codomain(&self) -> &HilbertModule {
        &self.codomain
    }

    pub fn matrix(&self) -> &AlgebraMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> ModuleOperator {
        ModuleOperator {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleOperator, tol: f64) -> Result<ModuleOperator> {
        if !first.codomain.approx_eq(&self.domain, tol) {
            return Err(invalid("composition of operators with mismatched modules"));
        }
        Self::compressed(
            first.domain.clone(),
            self.codomain.clone(),
            self.matrix.try_mul(&first.matrix)?,
        )
    }

    /// `T ⊕ T₁: M ⊕ M₁ → N ⊕ N₁`.
    pub fn dsum(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        Ok(ModuleOperator {
            domain: direct_sum(&self.domain, &other.domain)?,
            codomain: direct_sum(&self.codomain, &other.codomain)?,
            matrix: self.matrix.dsum(&other.matrix)?,
        })
    }

    pub fn try_add(&self, other: &ModuleOperator, tol: f64) -> Result<ModuleOperator> {
        self.same_modules(other, tol)?;
        Self::compressed(self.domain.clone(), self.codomain.clone(), self.matrix.try_add(&other.matrix)?)
    }

    pub fn try_sub(&self, other: &ModuleOperator, tol: f64) -> Result<ModuleOperator> {
        self.same_modules(other, tol)?;
        Self::compressed(self.domain.clone(), self.codomain.clone(), self.matrix.try_sub(&other.matrix)?)
    }

    /// C*-norm of the matrix.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// The Fredholm witness: every operator here is regular, so this always
    /// returns the Moore–Penrose data.
    pub fn fredholm_witness(&self, tol: f64) -> Result<IndexWitness> {
        pseudo_inverse(self, tol)
    }

    pub fn is_fredholm(&self, tol: f64) -> bool {
        self.fredholm_witness(tol).is_ok()
    }

    fn same_modules(&self, other: &ModuleOperator, tol: f64) -> Result<()> {
        if self.domain.approx_eq(&other.domain, tol) && self.codomain.approx_eq(&other.codomain, tol) {
            Ok(())
        } else {
            Err(invalid("operators act between different modules"))
        }
    }
}

fn check_shape(domain: &HilbertModule, codomain: &HilbertModule, matrix: &AlgebraMatrix) -> Result<()> {
    if domain.algebra() != codomain.algebra() || matrix.algebra() != domain.algebra() {
        return Err(invalid("operator modules and matrix must share one algebra"));
    }
    if matrix.rows() != codomain.ambient_rank() || matrix.cols() != domain.ambient_rank() {
        return Err(invalid(format!(
            "operator matrix is {}x{}, expected {}x{}",
            matrix.rows(),
            matrix.cols(),
            codomain.ambient_rank(),
            domain.ambient_rank()
        )));
    }
    Ok(())
}

/// `S` with `TST = T`, `STS = S`, and the kernel and cokernel projections.
#[derive(Debug, Clone)]
pub struct IndexWitness {
    pub operator: ModuleOperator,
    pub pseudo_inverse: ModuleOperator,
    /// `p − ST`.
    pub kernel_projection: AlgebraMatrix,
    /// `q − TS`.
    pub cokernel_projection: AlgebraMatrix,
    pub index: K0Class,
    /// Relative `‖TST − T‖` and `‖STS − S‖`.
    pub residuals: (f64, f64),
}

/// Moore–Penrose pseudo-inverse computed block by block on the reduced form.
pub fn pseudo_inverse(t: &ModuleOperator, tol: f64) -> Result<IndexWitness> {
    cm::check_tol(tol)?;
    for b in t.matrix.blocks() {
        cm::check_finite(b)?;
    }
    let svds: Vec<Svd> = t.matrix.blocks().iter().map(Svd::new).collect();
    let sigma_max = svds.iter().map(Svd::max_singular_value).fold(0.0, f64::max);
    let cutoff = tol * sigma_max;
    let (lo, hi) = (cutoff / RANK_AMBIGUITY_BAND, cutoff * RANK_AMBIGUITY_BAND);
    for (i, svd) in svds.iter().enumerate() {
        if let Some(s) = svd.singular_values.iter().find(|&&s| s > lo && s <= hi) {
            return Err(degenerate(format!(
                "block {i} has singular value {s:.3e} near the rank cutoff {cutoff:.3e}"
            )));
        }
    }
    let blocks: Vec<_> = svds.iter().map(|s| s.pinv_above(cutoff)).collect();
    let alg = t.matrix.algebra().clone();
    let s = AlgebraMatrix::from_blocks(alg, t.matrix.cols(), t.matrix.rows(), blocks)?;
    let s = ModuleOperator::compressed(t.codomain.clone(), t.domain.clone(), s)?;

    let tm = &t.matrix;
    let sm = &s.matrix;
    let st = sm * tm;
    let ts = tm * sm;
    let r1 = (&(tm * sm) * tm).distance(tm) / tm.norm().max(1.0);
    let r2 = (&(sm * tm) * sm).distance(sm) / sm.norm().max(1.0);
    let bound = tol.sqrt();
    if r1 > bound || r2 > bound {
        return Err(degenerate(format!(
            "pseudo-inverse residuals {r1:.3e}, {r2:.3e} exceed {bound:.1e}"
        )));
    }
    let kernel_projection = t.domain.projection() - &st;
    let cokernel_projection = t.codomain.projection() - &ts;
    let guard = bound.max(tol);
    let index = &k0_of_projection(&kernel_projection, guard)? - &k0_of_projection(&cokernel_projection, guard)?;
    Ok(IndexWitness {
        operator: t.clone(),
        pseudo_inverse: s,
        kernel_projection,
        cokernel_projection,
        index,
        residuals: (r1, r2),
    })
}

/// `rank Ker T − rank Ker T*`, cross-checked against `rank M − rank N`.
pub fn index(t: &ModuleOperator, tol: f64) -> Result<K0Class> {
    let w = pseudo_inverse(t, tol)?;
    let expected = &module_rank(&t.domain, tol)? - &module_rank(&t.codomain, tol)?;
    if w.index != expected {
        return Err(degenerate(format!(
            "kernel index {} disagrees with rank difference {expected}",
            w.index
        )));
    }
    Ok(w.index)
}

/// `T ↦ T̃` on `M ⊕ Aⁿ → N ⊕ Aⁿ` together with its pseudo-inverse `S̃`.
#[derive(Debug, Clone)]
pub struct Regularization {
    pub t: ModuleOperator,
    pub s: ModuleOperator,
    pub n: usize,
    /// Relative `‖T̃S̃T̃ − T̃‖` and `‖S̃T̃S̃ − S̃‖`.
    pub residuals: (f64, f64),
}

/// `T̃ = [[T, 0], [Ω_μ*, 0]]`, `S̃ = [[S, Ω_ν], [0, 0]]` from a factorization
/// `1 − ST = Ω_ν Ω_μ*`.
pub fn regularize(
    t: &ModuleOperator,
    s: &ModuleOperator,
    mu: &[ModuleElement],
    nu: &[ModuleElement],
    tol: f64,
) -> Result<Regularization> {
    cm::check_tol(tol)?;
    if mu.len() != nu.len() {
        return Err(invalid("factorization tuples have different lengths"));
    }
    if !s.domain.approx_eq(&t.codomain, tol) || !s.codomain.approx_eq(&t.domain, tol) {
        return Err(invalid("S must map the codomain of T back to its domain"));
    }
    let m = &t.domain;
    let alg = m.algebra();
    let n = mu.len();
    let om_mu = omega(m, mu)?;
    let om_nu = omega(m, nu)?;
    let kernel = m.projection() - &(&s.matrix * &t.matrix);
    let factor = om_nu.matrix() * &om_mu.matrix().adjoint();
    let residual = kernel.distance(&factor);
    if residual > tol.sqrt() * kernel.frobenius().max(1.0) {
        return Err(invalid(format!(
            "1 − ST ≠ Ω_ν Ω_μ* (residual {residual:.3e})"
        )));
    }
    let nn = t.codomain.ambient_rank();
    let free = HilbertModule::free(alg, n);
    let z_nn = AlgebraMatrix::zeros(alg, nn, n);
    let z_n = AlgebraMatrix::zeros(alg, n, n);
    let mu_adj = om_mu.matrix().adjoint();
    let t_big = AlgebraMatrix::assemble(alg, &[vec![&t.matrix, &z_nn], vec![&mu_adj, &z_n]])?;
    let z_nnn = AlgebraMatrix::zeros(alg, n, nn);
    let s_big = AlgebraMatrix::assemble(alg, &[vec![&s.matrix, om_nu.matrix()], vec![&z_nnn, &z_n]])?;
    let dom = direct_sum(m, &free)?;
    let cod = direct_sum(&t.codomain, &free)?;
    let tt = ModuleOperator::compressed(dom.clone(), cod.clone(), t_big)?;
    let ss = ModuleOperator::compressed(cod, dom, s_big)?;
    let r1 = (&(&tt.matrix * &ss.matrix) * &tt.matrix).distance(&tt.matrix) / tt.norm().max(1.0);
    let r2 = (&(&ss.matrix * &tt.matrix) * &ss.matrix).distance(&ss.matrix) / ss.norm().max(1.0);
    if r1 > tol.sqrt() || r2 > tol.sqrt() {
        return Err(degenerate(format!(
            "regularized pair fails TST = T or STS = S ({r1:.3e}, {r2:.3e})"
        )));
    }
    Ok(Regularization {
        t: tt,
        s: ss,
        n,
        residuals: (r1, r2),
    })
}

/// The factorization `1 − ST = Ω_ν Ω_μ*` with `μ = ν` the columns of the
/// kernel projection; empty when the kernel is zero.
pub fn kernel_factorization(w: &IndexWitness, tol: f64) -> Result<Vec<ModuleElement>> {
    let m = w.operator.domain();
    if w.kernel_projection.frobenius() <= tol {
        return Ok(Vec::new());
    }
    let k = w.kernel_projection.map(cm::hermitian_part);
    (0..m.ambient_rank())
        .map(|i| m.element(k.column_at(i), tol.sqrt()))
        .collect()
}

/// Regularization of `T` viewed over `Ã`, with the index read back through
/// `ε_*`.
#[derive(Debug, Clone)]
pub struct UnitizedIndex {
    pub unitization: Unitization,
    pub regularization: Regularization,
    /// `[I − S̃T̃] − [I − T̃S̃]` in `K₀(Ã)`.
    pub unitized_index: K0Class,
    /// `[ker T̃] − [ε(ker T̃)]·1`, killed by `ε_*` and restricted to `K₀(A)`.
    pub restricted_index: K0Class,
}

pub fn unitized_index(t: &ModuleOperator, tol: f64) -> Result<UnitizedIndex> {
    let u = Unitization::new(t.domain.algebra());
    let lift = ModuleOperator::compressed(
        t.domain.unitize(&u),
        t.codomain.unitize(&u),
        u.embed_matrix(&t.matrix),
    )?;
    let w = pseudo_inverse(&lift, tol)?;
    let cols = kernel_factorization(&w, tol)?;
    let reg = regularize(&lift, &w.pseudo_inverse, &cols, &cols, tol)?;
    let wt = pseudo_inverse(&reg.t, tol)?;
    let unitized_index = wt.index.clone();
    let eps = u.augment_class(&unitized_index);
    let corrected = &unitized_index - &u.unit_class().scale(eps);
    let restricted_index = u
        .restrict_class(&corrected)
        .ok_or_else(|| degenerate("augmentation correction did not land in K₀(A)"))?;
    Ok(UnitizedIndex {
        unitization: u,
        regularization: reg,
        unitized_index,
        restricted_index,
    })
}

/// `v ↦ q v` from `pAⁿ` to `qAⁿ`, whose index is `[p]₀ − [q]₀`.
pub fn standard_index_op(p: &AlgebraMatrix, q: &AlgebraMatrix, tol: f64) -> Result<ModuleOperator> {
    if p.algebra() != q.algebra() || p.rows() != q.rows() {
        return Err(invalid("standard index operator needs projections of one size over one algebra"));
    }
    let dom = HilbertModule::new(p.clone(), tol)?;
    let cod = HilbertModule::new(q.clone(), tol)?;
    ModuleOperator::compressed(dom, cod, q * p)
}

/// `U` invertible and `K = (T₁ ⊕ T₂* ⊕ I_{Aⁿ}) − U`.
#[derive(Debug, Clone)]
pub struct SameIndexWitness {
    pub n: usize,
    pub sum: ModuleOperator,
    pub invertible: ModuleOperator,
    pub remainder: ModuleOperator,
}

pub fn same_index_witness(
    t1: &ModuleOperator,
    t2: &ModuleOperator,
    tol: f64,
) -> Result<Option<SameIndexWitness>> {
    if t1.domain.algebra() != t2.domain.algebra() {
        return Err(invalid("operators over different algebras"));
    }
    if index(t1, tol)? != index(t2, tol)? {
        return Ok(None);
    }
    let sum = t1.dsum(&t2.adjoint())?;
    let u = construct_isomorphism(sum.domain(), sum.codomain(), tol)?
        .ok_or_else(|| degenerate("equal indices but no isomorphism M₁⊕N₂ → N₁⊕M₂"))?;
    let remainder = sum.try_sub(&u, tol)?;
    Ok(Some(SameIndexWitness {
        n: 0,
        sum,
        invertible: u,
        remainder,
    }))
}

pub fn fredholm_equivalent(t1: &ModuleOperator, t2: &ModuleOperator, tol: f64) -> Result<bool> {
    Ok(index(t1, tol)? == index(t2, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{minimal_projection, Algebra};
    use crate::matrix::{diag_real, from_real, DEFAULT_TOL};

    const TOL: f64 = DEFAULT_TOL;

    fn c_proj(d: &[f64]) -> AlgebraMatrix {
        AlgebraMatrix::scalar(&Algebra::complex(), &diag_real(d))
    }

    fn c_module(d: &[f64]) -> HilbertModule {
        HilbertModule::new(c_proj(d), TOL).unwrap()
    }

    #[test]
    fn compression_is_validated() {
        let m = c_module(&[1.0, 0.0]);
        let bad = AlgebraMatrix::scalar(&Algebra::complex(), &from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]));
        assert!(ModuleOperator::new(m.clone(), m.clone(), bad.clone(), TOL).is_err());
        let ok = ModuleOperator::compressed(m.clone(), m.clone(), bad).unwrap();
        assert_eq!(ok.matrix(), &c_proj(&[1.0, 0.0]));
        assert!(ModuleOperator::new(m.clone(), c_module(&[1.0]), c_proj(&[1.0, 0.0]), TOL).is_err());
    }

    #[test]
    fn algebraic_examples() {
        let m = c_module(&[1.0, 1.0]);
        let t = ModuleOperator::compressed(
            m.clone(),
            m.clone(),
            AlgebraMatrix::scalar(&Algebra::complex(), &from_real(2, 2, &[1.0, 2.0, 3.0, 4.0])),
        )
        .unwrap();
        assert_eq!(t.compose(&m.identity_operator(), TOL).unwrap(), t);
        assert_eq!(t.adjoint().adjoint(), t);
        let z = HilbertModule::zero(&Algebra::complex(), 0);
        let padded = t.dsum(&ModuleOperator::zero(&z, &z).unwrap()).unwrap();
        assert_eq!(padded.matrix(), t.matrix());
        assert!(t.compose(&ModuleOperator::zero(&c_module(&[1.0]), &c_module(&[1.0])).unwrap(), TOL).is_err());
    }

    #[test]
    fn pseudo_inverse_examples() {
        let a = Algebra::full_matrix(2);
        let m = HilbertModule::free(&a, 1);
        let rot = from_real(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        let u = ModuleOperator::compressed(m.clone(), m.clone(), a.element_in_block(0, rot).unwrap().as_matrix()).unwrap();
        let w = pseudo_inverse(&u, TOL).unwrap();
        assert!(w.pseudo_inverse.matrix().distance(&u.adjoint().matrix().clone()) < 1e-14);
        assert!(w.index.is_zero());

        let n = HilbertModule::free(&a, 2);
        let z = ModuleOperator::zero(&m, &n).unwrap();
        let w = pseudo_inverse(&z, TOL).unwrap();
        assert_eq!(w.pseudo_inverse.matrix().frobenius(), 0.0);
        assert_eq!(&w.kernel_projection, m.projection());
        assert_eq!(&w.cokernel_projection, n.projection());
    }

    #[test]
    fn near_threshold_spectrum_is_rejected() {
        let m = c_module(&[1.0, 1.0]);
        let t = ModuleOperator::compressed(m.clone(), m.clone(), c_proj(&[1.0, 1e-8])).unwrap();
        assert!(matches!(pseudo_inverse(&t, TOL), Err(crate::Error::NumericalDegeneracy(_))));
        let t = ModuleOperator::compressed(m.clone(), m, c_proj(&[1.0, 1e-13])).unwrap();
        assert_eq!(pseudo_inverse(&t, TOL).unwrap().index.vector(), &[0]);
    }

    #[test]
    fn index_examples() {
        let m = c_module(&[1.0, 1.0, 0.0]);
        assert!(index(&m.identity_operator(), TOL).unwrap().is_zero());
        let a = Algebra::with_blocks(&[2, 3]).unwrap();
        let mm = HilbertModule::free(&a, 2);
        let nn = HilbertModule::new(minimal_projection(&a, 1).unwrap(), TOL).unwrap();
        let z = ModuleOperator::zero(&mm, &nn).unwrap();
        assert_eq!(index(&z, TOL).unwrap().vector(), &[4, 5]);
    }

    #[test]
    fn standard_index_op_examples() {
        let p = c_proj(&[1.0, 0.0]);
        let q = c_proj(&[1.0, 1.0]);
        assert!(index(&standard_index_op(&p, &p, TOL).unwrap(), TOL).unwrap().is_zero());
        let t = standard_index_op(&p, &q, TOL).unwrap();
        let w = pseudo_inverse(&t, TOL).unwrap();
        assert_eq!(k0_of_projection(&w.kernel_projection, TOL).unwrap().vector(), &[0]);
        assert_eq!(k0_of_projection(&w.cokernel_projection, TOL).unwrap().vector(), &[1]);
        assert_eq!(index(&t, TOL).unwrap().vector(), &[-1]);

        let a = Algebra::with_blocks(&[2, 3]).unwrap();
        let z = AlgebraMatrix::zeros(&a, 1, 1);
        let p = minimal_projection(&a, 0).unwrap().dsum(&z).unwrap();
        let q = z.dsum(&minimal_projection(&a, 1).unwrap()).unwrap();
        assert_eq!(index(&standard_index_op(&p, &q, TOL).unwrap(), TOL).unwrap().vector(), &[1, -1]);
        assert!(standard_index_op(&p, &minimal_projection(&a, 1).unwrap(), TOL).is_err());
    }

    #[test]
    fn regularize_examples() {
        let m = c_module(&[1.0, 1.0]);
        let id = m.identity_operator();
        let r = regularize(&id, &id, &[], &[], TOL).unwrap();
        assert_eq!(r.n, 0);
        assert_eq!(r.t.matrix(), id.matrix());

        // T = diag(1, 0) on ℂ²: kernel e₂
        let t = ModuleOperator::compressed(m.clone(), m.clone(), c_proj(&[1.0, 0.0])).unwrap();
        let w = pseudo_inverse(&t, TOL).unwrap();
        let e2 = m.column(1);
        let r = regularize(&t, &w.pseudo_inverse, &[e2.clone()], &[e2], TOL).unwrap();
        assert_eq!(r.n, 1);
        let ker = &r.t.domain().projection().clone() - &(r.s.matrix() * r.t.matrix());
        assert!(ker.distance(&c_proj(&[0.0, 0.0, 1.0])) < 1e-14);
        assert_eq!(index(&r.t, TOL).unwrap(), index(&t, TOL).unwrap());

        let e1 = m.column(0);
        assert!(regularize(&t, &w.pseudo_inverse, &[e1.clone()], &[e1], TOL).is_err());
    }

    #[test]
    fn unitized_index_reads_back_the_index() {
        let a = Algebra::with_blocks(&[2, 1]).unwrap();
        let p = AlgebraMatrix::identity(&a, 1).dsum(&minimal_projection(&a, 1).unwrap()).unwrap();
        let q = minimal_projection(&a, 0).unwrap().dsum(&AlgebraMatrix::zeros(&a, 1, 1)).unwrap();
        let t = standard_index_op(&p, &q, TOL).unwrap();
        let u = unitized_index(&t, TOL).unwrap();
        assert_eq!(u.restricted_index, index(&t, TOL).unwrap());
        assert_eq!(u.restricted_index.vector(), &[1, 2]);
    }

    #[test]
    fn same_index_examples() {
        let m = c_module(&[1.0, 1.0]);
        let id = m.identity_operator();
        let w = same_index_witness(&id, &id, TOL).unwrap().unwrap();
        assert_eq!(w.n, 0);
        assert!(w.remainder.matrix().frobenius() < 1e-12);

        let a = Algebra::full_matrix(2);
        let e = HilbertModule::new(minimal_projection(&a, 0).unwrap(), TOL).unwrap();
        let f = HilbertModule::new(
            a.element_in_block(0, from_real(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap().as_matrix(),
            TOL,
        )
        .unwrap();
        let zero = HilbertModule::zero(&a, 0);
        let t1 = ModuleOperator::zero(&e, &zero).unwrap();
        let t2 = ModuleOperator::zero(&f, &zero).unwrap();
        let w = same_index_witness(&t1, &t2, TOL).unwrap().unwrap();
        let u = w.invertible.matrix();
        assert!((&u.adjoint() * u).distance(w.sum.domain().projection()) < 1e-12);
        let rebuilt = w.invertible.try_add(&w.remainder, TOL).unwrap();
        assert!(rebuilt.matrix().distance(w.sum.matrix()) < 1e-14);

        let t3 = ModuleOperator::zero(&HilbertModule::free(&a, 1), &zero).unwrap();
        assert!(same_index_witness(&t1, &t3, TOL).unwrap().is_none());
    }

    #[test]
    fn equivalence_examples() {
        let p = c_proj(&[1.0, 0.0, 1.0]);
        let q = c_proj(&[1.0, 1.0, 1.0]);
        let t = standard_index_op(&p, &q, TOL).unwrap();
        assert!(fredholm_equivalent(&t, &t, TOL).unwrap());
        assert!(!fredholm_equivalent(&t, &t.adjoint(), TOL).unwrap());
        let s = c_module(&[1.0, 1.0, 0.0]).identity_operator();
        assert!(fredholm_equivalent(&s, &s.adjoint(), TOL).unwrap());
        let t2 = standard_index_op(&c_proj(&[0.0, 1.0]), &c_proj(&[1.0, 1.0]), TOL).unwrap();
        assert!(fredholm_equivalent(&t, &t2, TOL).unwrap());
    }
}
