use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::{Algebra, AlgebraElement, AlgebraMatrix};
use crate::error::{degenerate, invalid, Error, Result};
use crate::matrix::{self as cm, CMatrix};

/// Largest distance from an integer a projection trace may have.
pub const TRACE_ROUNDING_GUARD: f64 = 1e-6;

/// An element of `K₀(A) = ℤᵏ`, one coordinate per block of `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct K0Class {
    algebra: Algebra,
    vector: Vec<i64>,
}

impl K0Class {
    /// # Panics
    /// If the vector length differs from the number of blocks.
    pub fn new(algebra: Algebra, vector: Vec<i64>) -> Self {
        assert_eq!(
            vector.len(),
            algebra.num_blocks(),
            "K0 vector length must equal the number of blocks"
        );
        K0Class { algebra, vector }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::new(algebra.clone(), vec![0; algebra.num_blocks()])
    }

    /// The generator `δ_i`, the class of a minimal projection in block `i`.
    pub fn generator(algebra: &Algebra, i: usize) -> Self {
        let mut v = vec![0; algebra.num_blocks()];
        v[i] = 1;
        Self::new(algebra.clone(), v)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, n: i64) -> Self {
        Self::new(self.algebra.clone(), self.vector.iter().map(|x| x * n).collect())
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!(self.algebra, other.algebra, "K0 classes of different algebras");
        Self::new(
            self.algebra.clone(),
            self.vector
                .iter()
                .zip(&other.vector)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl Add for &K0Class {
    type Output = K0Class;
    fn add(self, rhs: &K0Class) -> K0Class {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &K0Class {
    type Output = K0Class;
    fn sub(self, rhs: &K0Class) -> K0Class {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        self.scale(-1)
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vector.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Class of the range of a projection `p ∈ M_n(A)`: the rounded trace of
/// each reduced block.
pub fn k0_of_projection(p: &AlgebraMatrix, tol: f64) -> Result<K0Class> {
    cm::check_tol(tol)?;
    let defect = p.projection_defect();
    if defect > tol {
        return Err(invalid(format!(
            "not a projection (defect {defect:.3e} above {tol:.1e})"
        )));
    }
    let mut vector = Vec::with_capacity(p.blocks().len());
    for (i, b) in p.blocks().iter().enumerate() {
        let t = cm::trace(b).re;
        let rounded = t.round();
        if (t - rounded).abs() >= TRACE_ROUNDING_GUARD {
            return Err(degenerate(format!(
                "block {i} trace {t} is not within {TRACE_ROUNDING_GUARD:e} of an integer"
            )));
        }
        vector.push(rounded as i64);
    }
    Ok(K0Class::new(p.algebra().clone(), vector))
}

/// The `1 × 1` matrix holding `e₁₁` in block `i` (zero-based).
pub fn minimal_projection(algebra: &Algebra, i: usize) -> Result<AlgebraMatrix> {
    let n = *algebra
        .block_sizes()
        .get(i)
        .ok_or_else(|| invalid(format!("block index {i} out of range")))?;
    Ok(algebra.element_in_block(i, cm::unit(n, n, 0, 0))?.as_matrix())
}

/// A partial isometry `v` with `v*v = p` and `vv* = q`, assembled block by
/// block from orthonormal bases of the ranges.
pub fn mv_partial_isometry(p: &AlgebraMatrix, q: &AlgebraMatrix, tol: f64) -> Result<AlgebraMatrix> {
    if p.algebra() != q.algebra() {
        return Err(invalid("projections over different algebras"));
    }
    let cp = k0_of_projection(p, tol)?;
    let cq = k0_of_projection(q, tol)?;
    if cp != cq {
        return Err(Error::NoEquivalence {
            left: cp.to_string(),
            right: cq.to_string(),
        });
    }
    let blocks = p
        .blocks()
        .iter()
        .zip(q.blocks())
        .zip(cp.vector())
        .map(|((pb, qb), &r)| {
            let r = r as usize;
            let from = cm::column_basis(pb, r);
            let to = cm::column_basis(qb, r);
            to * from.adjoint()
        })
        .collect();
    AlgebraMatrix::from_blocks(p.algebra().clone(), q.rows(), p.rows(), blocks)
}

/// Result of turning an idempotent into a similar projection.
#[derive(Debug, Clone)]
pub struct IdempotentReduction {
    /// Self-adjoint projection onto the range of the idempotent.
    pub projection: AlgebraMatrix,
    /// Invertible `z` with `projection = z·e·z⁻¹`.
    pub similarity: AlgebraMatrix,
    pub similarity_inverse: AlgebraMatrix,
}

/// Range projection `r = e e* (1 + (e − e*)(e* − e))⁻¹` of an idempotent,
/// with the similarity `z = 1 + e − r` (inverse `1 − e + r`).
pub fn idempotent_to_projection(e: &AlgebraMatrix, tol: f64) -> Result<IdempotentReduction> {
    cm::check_tol(tol)?;
    if !e.is_square() {
        return Err(invalid("idempotent must be square"));
    }
    let defect = (&(e * e) - e).frobenius();
    if defect > tol * e.frobenius().max(1.0) {
        return Err(invalid(format!("not idempotent (‖e²−e‖ = {defect:.3e})")));
    }
    let n = e.rows();
    let one = AlgebraMatrix::identity(e.algebra(), n);
    let mut r_blocks = Vec::with_capacity(e.blocks().len());
    for (i, b) in e.blocks().iter().enumerate() {
        let size = b.nrows();
        let skew = b - b.adjoint();
        let kaplansky = cm::identity(size) - &skew * &skew;
        let inv = kaplansky
            .try_inverse()
            .ok_or_else(|| degenerate(format!("block {i}: 1 + (e−e*)(e*−e) is singular")))?;
        let r = b * b.adjoint() * inv;
        r_blocks.push(cm::hermitian_part(&r));
    }
    let projection = AlgebraMatrix::from_blocks(e.algebra().clone(), n, n, r_blocks)?;
    let similarity = &(&one + e) - &projection;
    let similarity_inverse = &(&one - e) + &projection;
    let check = (&(&similarity * &similarity_inverse) - &one).frobenius();
    if check > tol.sqrt() * (n as f64).max(1.0) {
        return Err(degenerate(format!(
            "similarity is numerically singular (‖z z⁻¹ − 1‖ = {check:.3e})"
        )));
    }
    Ok(IdempotentReduction {
        projection,
        similarity,
        similarity_inverse,
    })
}

/// `Ã = A ⊕ ℂ` with a new unit and the augmentation `ε: Ã → ℂ` given by the
/// last block.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitization {
    base: Algebra,
    unitized: Algebra,
}

impl Unitization {
    pub fn new(base: &Algebra) -> Self {
        let mut sizes = base.block_sizes().to_vec();
        let mut mults = base.multiplicities().to_vec();
        sizes.push(1);
        mults.push(1);
        Unitization {
            base: base.clone(),
            unitized: Algebra::new(sizes, mults).expect("extending a valid algebra"),
        }
    }

    pub fn base(&self) -> &Algebra {
        &self.base
    }

    pub fn unitized(&self) -> &Algebra {
        &self.unitized
    }

    /// `a ↦ (a, 0)`.
    pub fn embed_element(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut blocks = a.blocks().to_vec();
        blocks.push(cm::zeros(1, 1));
        AlgebraElement::new(self.unitized.clone(), blocks).expect("shapes follow the base")
    }

    pub fn embed_matrix(&self, m: &AlgebraMatrix) -> AlgebraMatrix {
        let mut blocks = m.blocks().to_vec();
        blocks.push(cm::zeros(m.rows(), m.cols()));
        AlgebraMatrix::from_blocks(self.unitized.clone(), m.rows(), m.cols(), blocks)
            .expect("shapes follow the base")
    }

    pub fn augmentation(&self, x: &AlgebraElement) -> cm::C64 {
        x.blocks().last().expect("unitized algebra has a scalar block")[(0, 0)]
    }

    /// `ε(m)` applied entrywise.
    pub fn augmentation_matrix(&self, m: &AlgebraMatrix) -> CMatrix {
        m.blocks().last().expect("unitized algebra has a scalar block").clone()
    }

    /// `ε_*`: the last coordinate.
    pub fn augment_class(&self, c: &K0Class) -> i64 {
        *c.vector().last().expect("unitized class")
    }

    /// `K₀(A) ↪ K₀(Ã)`.
    pub fn embed_class(&self, c: &K0Class) -> K0Class {
        let mut v = c.vector().to_vec();
        v.push(0);
        K0Class::new(self.unitized.clone(), v)
    }

    /// The preimage in `K₀(A)` of a class killed by `ε_*`.
    pub fn restrict_class(&self, c: &K0Class) -> Option<K0Class> {
        if self.augment_class(c) != 0 {
            return None;
        }
        let v = c.vector()[..c.vector().len() - 1].to_vec();
        Some(K0Class::new(self.base.clone(), v))
    }

    pub fn unit_class(&self) -> K0Class {
        self.unitized.unit_class()
    }
}
