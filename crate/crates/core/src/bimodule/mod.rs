//! Concretely represented Hilbert bimodules: spaces of `d_A × d_B` matrices
//! stable under the standard representations of `A` on the left and `B` on
//! the right.

mod linking;
mod tensor;

pub use linking::{corner_bimodule, corner_chain, linking_algebra, LinkingAlgebraView};
pub use tensor::{module_tensor, op_tensor, TensorModule, TensorOperator};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{degenerate, invalid, Error, Result};
use crate::matrix::{self as cm, onb_span, subspace_equal, CMatrix, Subspace, C64};

/// The standard faithful, non-degenerate representation of an algebra: block
/// `i` repeated `μ_i` times on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    algebra: Algebra,
}

impl Representation {
    pub fn new(algebra: Algebra) -> Self {
        Representation { algebra }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn space_dim(&self) -> usize {
        self.algebra.ambient_dim()
    }

    pub fn embed(&self, x: &AlgebraElement) -> CMatrix {
        self.algebra.embed(x)
    }

    /// The element represented by `m`, or an axiom violation tagged `axiom`.
    fn extract(&self, m: &CMatrix, tol: f64, axiom: char, what: &str) -> Result<AlgebraElement> {
        let (x, residual) = self.algebra.extract(m)?;
        if residual > tol * cm::frobenius(m).max(1.0) {
            return Err(Error::AxiomViolation {
                axiom,
                detail: format!("{what} is not in the represented {}", self.algebra),
                residual,
            });
        }
        Ok(x)
    }

    /// Orthonormal basis of `π(A)` inside `M_d(ℂ)`.
    fn span(&self) -> Subspace {
        let d = self.space_dim();
        let units: Vec<CMatrix> = self.algebra.matrix_units().iter().map(|u| self.embed(u)).collect();
        onb_span((d, d), &units, 1e-12).expect("matrix units are finite")
    }
}

/// A concrete Hilbert `A`-`B`-bimodule `X ⊆ L(H_B, H_A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bimodule {
    left: Representation,
    right: Representation,
    span: Subspace,
}

/// An input basis this close to orthonormal is kept verbatim.
const ORTHONORMAL_SLACK: f64 = 1e-13;

/// Orthonormalizes `basis` and checks the left and right actions and both
/// inner-product ranges.
pub fn make_bimodule(left: Representation, right: Representation, basis: &[CMatrix], tol: f64) -> Result<Bimodule> {
    cm::check_tol(tol)?;
    let shape = (left.space_dim(), right.space_dim());
    if let Some(b) = basis.iter().find(|b| b.shape() != shape) {
        return Err(invalid(format!(
            "bimodule basis matrices must be {}x{}, got {:?}",
            shape.0,
            shape.1,
            b.shape()
        )));
    }
    let span = match Subspace::from_orthonormal(shape, basis.to_vec(), ORTHONORMAL_SLACK) {
        Some(span) => span,
        None => onb_span(shape, basis, tol)?,
    };
    let x = Bimodule { left, right, span };
    x.verify(tol)?;
    Ok(x)
}

impl Bimodule {
    pub fn left(&self) -> &Representation {
        &self.left
    }

    pub fn right(&self) -> &Representation {
        &self.right
    }

    pub fn left_algebra(&self) -> &Algebra {
        &self.left.algebra
    }

    pub fn right_algebra(&self) -> &Algebra {
        &self.right.algebra
    }

    /// `(d_A, d_B)`.
    pub fn shape(&self) -> (usize, usize) {
        self.span.shape()
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    /// Orthonormal basis of `X`.
    pub fn basis(&self) -> &[CMatrix] {
        self.span.basis()
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.span.is_zero()
    }

    pub fn contains(&self, x: &CMatrix, tol: f64) -> bool {
        x.shape() == self.shape() && self.span.contains(x, tol)
    }

    /// `Σ c_k e_k` over the orthonormal basis.
    pub fn combine(&self, coefficients: &[C64]) -> CMatrix {
        let (r, c) = self.shape();
        let mut out = cm::zeros(r, c);
        for (b, &k) in self.basis().iter().zip(coefficients) {
            out += b * k;
        }
        out
    }

    fn verify(&self, tol: f64) -> Result<()> {
        let basis = self.basis();
        let check_in = |axiom: char, what: &str, v: CMatrix| -> Result<()> {
            let residual = self.span.residual(&v);
            if residual > tol * cm::frobenius(&v).max(1.0) {
                return Err(Error::AxiomViolation {
                    axiom,
                    detail: format!("{what} leaves the span"),
                    residual,
                });
            }
            Ok(())
        };
        for u in self.left.algebra.matrix_units() {
            let a = self.left.embed(&u);
            for x in basis {
                check_in('a', "π_A(a)·x", &a * x)?;
            }
        }
        for u in self.right.algebra.matrix_units() {
            let b = self.right.embed(&u);
            for x in basis {
                check_in('b', "x·π_B(b)", x * &b)?;
            }
        }
        for x in basis {
            for y in basis {
                self.left.extract(&(x * y.adjoint()), tol, 'c', "x·y*")?;
                self.right.extract(&(x.adjoint() * y), tol, 'd', "x*·y")?;
            }
        }
        for x in basis.iter().take(4) {
            let n2 = cm::spectral_norm(x).powi(2);
            let lhs = cm::spectral_norm(&(x * x.adjoint()));
            let rhs = cm::spectral_norm(&(x.adjoint() * x));
            if (n2 - lhs).abs() > tol.sqrt() * n2.max(1.0) || (lhs - rhs).abs() > tol.sqrt() * lhs.max(1.0) {
                return Err(degenerate("representation of X is not isometric"));
            }
            for y in basis.iter().take(4) {
                for z in basis.iter().take(4) {
                    let lhs = &(x * y.adjoint()) * z;
                    let rhs = x * &(y.adjoint() * z);
                    if cm::distance(&lhs, &rhs) > tol.sqrt() {
                        return Err(degenerate("(x|y)z differs from x⟨y,z⟩"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `(x|y)`: the element of `A` represented by `x y*`.
pub fn left_inner(x_mod: &Bimodule, x: &CMatrix, y: &CMatrix, tol: f64) -> Result<AlgebraElement> {
    check_members(x_mod, &[x, y])?;
    x_mod.left.extract(&(x * y.adjoint()), tol, 'c', "x·y*")
}

/// `⟨x,y⟩`: the element of `B` represented by `x* y`.
pub fn right_inner(x_mod: &Bimodule, x: &CMatrix, y: &CMatrix, tol: f64) -> Result<AlgebraElement> {
    check_members(x_mod, &[x, y])?;
    x_mod.right.extract(&(x.adjoint() * y), tol, 'd', "x*·y")
}

fn check_members(x_mod: &Bimodule, xs: &[&CMatrix]) -> Result<()> {
    for x in xs {
        if x.shape() != x_mod.shape() {
            return Err(invalid(format!(
                "element of shape {:?} in a bimodule of shape {:?}",
                x.shape(),
                x_mod.shape()
            )));
        }
    }
    Ok(())
}

/// Whether `span{x y*} = π_A(A)`.
pub fn is_left_full(x: &Bimodule, tol: f64) -> Result<bool> {
    let products: Vec<CMatrix> = pairs(x.basis(), |a, b| a * b.adjoint());
    let d = x.left.space_dim();
    subspace_equal(&onb_span((d, d), &products, tol)?, &x.left.span(), tol.sqrt())
}

/// Whether `span{x* y} = π_B(B)`.
pub fn is_right_full(x: &Bimodule, tol: f64) -> Result<bool> {
    let products: Vec<CMatrix> = pairs(x.basis(), |a, b| a.adjoint() * b);
    let d = x.right.space_dim();
    subspace_equal(&onb_span((d, d), &products, tol)?, &x.right.span(), tol.sqrt())
}

fn pairs(basis: &[CMatrix], f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Vec<CMatrix> {
    basis
        .iter()
        .flat_map(|a| basis.iter().map(move |b| (a, b)))
        .map(|(a, b)| f(a, b))
        .collect()
}

/// The conjugate `B`-`A`-bimodule `X* = {x*}`.
pub fn conjugate(x: &Bimodule) -> Bimodule {
    let (r, c) = x.shape();
    let adj: Vec<CMatrix> = x.basis().iter().map(|b| b.adjoint()).collect();
    Bimodule {
        left: x.right.clone(),
        right: x.left.clone(),
        span: onb_span((c, r), &adj, 1e-12).expect("adjoints of an orthonormal basis"),
    }
}

/// `X ⊗_B Y`, realized as the span of products `x y`.
pub fn internal_tensor(x: &Bimodule, y: &Bimodule, tol: f64) -> Result<Bimodule> {
    if x.right.algebra.block_sizes() != y.left.algebra.block_sizes() {
        return Err(invalid(format!(
            "middle algebras differ: {} and {}",
            x.right.algebra, y.left.algebra
        )));
    }
    if x.right != y.left {
        return Err(invalid(format!(
            "the middle algebra is represented differently on each side: {} and {}",
            x.right.algebra, y.left.algebra
        )));
    }
    let products: Vec<CMatrix> = x
        .basis()
        .iter()
        .flat_map(|a| y.basis().iter().map(move |b| a * b))
        .collect();
    let shape = (x.left.space_dim(), y.right.space_dim());
    let span = onb_span(shape, &products, tol)?;
    let z = Bimodule {
        left: x.left.clone(),
        right: y.right.clone(),
        span,
    };
    z.verify(tol.sqrt())?;
    Ok(z)
}

/// Whether `X ⊗_B X*` and `(X|X)` have the same concrete span.
pub fn check_conjugate_tensor(x: &Bimodule, tol: f64) -> Result<bool> {
    let t = internal_tensor(x, &conjugate(x), tol)?;
    let d = x.left.space_dim();
    let ideal = onb_span((d, d), &pairs(x.basis(), |a, b| a * b.adjoint()), tol)?;
    subspace_equal(t.span(), &ideal, tol.sqrt())
}

/// Permutation `σ` of `0..d₁d₂` with `σ(kron index) = standard index` for the
/// blockwise tensor product of two standard representations.
fn tensor_permutation(a1: &Algebra, a2: &Algebra) -> Vec<usize> {
    let t = a1.tensor(a2);
    let d2 = a2.ambient_dim();
    let mut sigma = vec![0; a1.ambient_dim() * d2];
    let k2 = a2.num_blocks();
    for i in 0..a1.num_blocks() {
        let n = a1.block_sizes()[i];
        for (s, o1) in a1.copy_offsets(i).into_iter().enumerate() {
            for j in 0..k2 {
                let m = a2.block_sizes()[j];
                let nu = a2.multiplicities()[j];
                let target = t.copy_offsets(i * k2 + j);
                for (u, o2) in a2.copy_offsets(j).into_iter().enumerate() {
                    let base = target[s * nu + u];
                    for a in 0..n {
                        for b in 0..m {
                            sigma[(o1 + a) * d2 + o2 + b] = base + a * m + b;
                        }
                    }
                }
            }
        }
    }
    sigma
}

fn permutation_matrix(sigma: &[usize]) -> CMatrix {
    let n = sigma.len();
    let mut p = cm::zeros(n, n);
    for (src, &dst) in sigma.iter().enumerate() {
        p[(dst, src)] = cm::ONE;
    }
    p
}

/// `X₁ ⊠ X₂` over `(A₁ ⊗ A₂, B₁ ⊗ B₂)`, basis of Kronecker products moved to
/// the standard representations of the tensor algebras.
pub fn external_tensor(x1: &Bimodule, x2: &Bimodule, tol: f64) -> Result<Bimodule> {
    let pa = permutation_matrix(&tensor_permutation(x1.left_algebra(), x2.left_algebra()));
    let pb = permutation_matrix(&tensor_permutation(x1.right_algebra(), x2.right_algebra()));
    let pb_adj = pb.adjoint();
    let basis: Vec<CMatrix> = x1
        .basis()
        .iter()
        .flat_map(|a| x2.basis().iter().map(move |b| cm::kron(a, b)))
        .map(|k| &pa * k * &pb_adj)
        .collect();
    let left = Representation::new(x1.left_algebra().tensor(x2.left_algebra()));
    let right = Representation::new(x1.right_algebra().tensor(x2.right_algebra()));
    make_bimodule(left, right, &basis, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{from_real, DEFAULT_TOL};

    const TOL: f64 = DEFAULT_TOL;

    /// `ℂⁿ` as an `Mₙ`-`ℂ` bimodule.
    pub(crate) fn column_space(n: usize) -> Bimodule {
        let basis: Vec<CMatrix> = (0..n).map(|i| cm::unit(n, 1, i, 0)).collect();
        make_bimodule(
            Representation::new(Algebra::full_matrix(n)),
            Representation::new(Algebra::complex()),
            &basis,
            TOL,
        )
        .unwrap()
    }

    #[test]
    fn make_examples() {
        let x = column_space(3);
        assert_eq!(x.dim(), 3);
        let z = make_bimodule(
            Representation::new(Algebra::full_matrix(2)),
            Representation::new(Algebra::complex()),
            &[],
            TOL,
        )
        .unwrap();
        assert!(z.is_zero());
        assert!(!is_left_full(&z, TOL).unwrap());
        assert!(!is_right_full(&z, TOL).unwrap());

        // over ℂ ⊕ ℂ on both sides, e₁₁ is fine but the all-ones matrix is not
        let cc = Representation::new(Algebra::with_blocks(&[1, 1]).unwrap());
        let ones = from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let err = make_bimodule(cc.clone(), Representation::new(Algebra::complex()), &[from_real(2, 1, &[1.0, 1.0])], TOL)
            .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { axiom: 'a', .. }));
        assert!(make_bimodule(cc.clone(), cc.clone(), &[ones], TOL).is_err());

        let m2 = Representation::new(Algebra::full_matrix(2));
        let bad = make_bimodule(m2, Representation::new(Algebra::complex()), &[cm::zeros(3, 1)], TOL);
        assert!(matches!(bad, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn axiom_c_violation() {
        // X = ℂ·[1, 1]ᵀ over (ℂ ⊕ ℂ, ℂ) is not left-stable; with the left
        // algebra ℂ acting by scalars on ℂ² (multiplicity 2) it is, but
        // x x* = [[1,1],[1,1]] is not a scalar.
        let left = Representation::new(Algebra::new(vec![1], vec![2]).unwrap());
        let err = make_bimodule(left, Representation::new(Algebra::complex()), &[from_real(2, 1, &[1.0, 1.0])], TOL)
            .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { axiom: 'c', .. }));
    }

    #[test]
    fn inner_examples() {
        let x = column_space(3);
        let v = from_real(3, 1, &[1.0, 2.0, 0.0]);
        let w = from_real(3, 1, &[0.0, 1.0, 5.0]);
        let r = right_inner(&x, &v, &w, TOL).unwrap();
        assert!((r.block(0)[(0, 0)] - C64::new(2.0, 0.0)).norm() < 1e-15);
        let l = left_inner(&x, &v, &v, TOL).unwrap();
        assert!((l.norm() - right_inner(&x, &v, &v, TOL).unwrap().norm()).abs() < 1e-12);
        assert!(left_inner(&x, &cm::zeros(3, 1), &cm::zeros(3, 1), TOL).unwrap().norm() == 0.0);
        assert!(l.norm() > 0.0);
        assert!(left_inner(&x, &cm::zeros(2, 1), &v, TOL).is_err());
    }

    #[test]
    fn fullness_examples() {
        let x = column_space(3);
        assert!(is_left_full(&x, TOL).unwrap());
        assert!(is_right_full(&x, TOL).unwrap());

        // ℂ^{2×2} ⊕ 0 over (M₂, M₂ ⊕ M₃)
        let left = Representation::new(Algebra::full_matrix(2));
        let right = Representation::new(Algebra::with_blocks(&[2, 3]).unwrap());
        let basis: Vec<CMatrix> = (0..4).map(|k| cm::unit(2, 5, k / 2, k % 2)).collect();
        let y = make_bimodule(left, right, &basis, TOL).unwrap();
        assert!(is_left_full(&y, TOL).unwrap());
        assert!(!is_right_full(&y, TOL).unwrap());
        assert!(is_left_full(&conjugate(&y), TOL).unwrap() == is_right_full(&y, TOL).unwrap());
    }

    #[test]
    fn conjugate_examples() {
        let x = column_space(2);
        let xs = conjugate(&x);
        assert_eq!(xs.shape(), (1, 2));
        assert_eq!(xs.left_algebra(), &Algebra::complex());
        let back = conjugate(&xs);
        assert!(subspace_equal(back.span(), x.span(), 1e-12).unwrap());
        assert_eq!(back.left(), x.left());
    }

    #[test]
    fn internal_tensor_examples() {
        let x = conjugate(&column_space(2));
        let y = column_space(2);
        let t = internal_tensor(&x, &y, TOL).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.shape(), (1, 1));

        let z = make_bimodule(y.right().clone(), x.left().clone(), &[], TOL).unwrap();
        assert!(internal_tensor(&y, &z, TOL).unwrap().is_zero());

        let full = internal_tensor(&column_space(2), &x, TOL).unwrap();
        assert!(is_left_full(&full, TOL).unwrap());
        assert!(internal_tensor(&x, &x, TOL).is_err());

        // the middle algebra M₂ is represented once with multiplicity 1, once with 2
        let basis: Vec<CMatrix> = (0..2)
            .map(|i| {
                let mut m = cm::zeros(4, 2);
                m[(i, 0)] = cm::ONE;
                m[(2 + i, 1)] = cm::ONE;
                m
            })
            .collect();
        let doubled = make_bimodule(
            Representation::new(Algebra::new(vec![2], vec![2]).unwrap()),
            Representation::new(Algebra::new(vec![1], vec![2]).unwrap()),
            &basis,
            TOL,
        )
        .unwrap();
        assert!(matches!(internal_tensor(&x, &doubled, TOL), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn conjugate_tensor_examples() {
        assert!(check_conjugate_tensor(&column_space(3), TOL).unwrap());
        let z = make_bimodule(
            Representation::new(Algebra::full_matrix(2)),
            Representation::new(Algebra::complex()),
            &[],
            TOL,
        )
        .unwrap();
        assert!(check_conjugate_tensor(&z, TOL).unwrap());
        let left = Representation::new(Algebra::with_blocks(&[1, 1]).unwrap());
        let partial = make_bimodule(left, Representation::new(Algebra::complex()), &[cm::unit(2, 1, 0, 0)], TOL).unwrap();
        assert!(!is_left_full(&partial, TOL).unwrap());
        assert!(check_conjugate_tensor(&partial, TOL).unwrap());
    }

    #[test]
    fn external_tensor_examples() {
        let c = column_space(1);
        let cc = external_tensor(&c, &c, TOL).unwrap();
        assert_eq!((cc.dim(), cc.shape()), (1, (1, 1)));

        let x = external_tensor(&column_space(2), &column_space(3), TOL).unwrap();
        assert_eq!(x.dim(), 6);
        assert_eq!(x.left_algebra(), &Algebra::full_matrix(6));
        assert!(is_left_full(&x, TOL).unwrap() && is_right_full(&x, TOL).unwrap());
    }

    #[test]
    fn tensor_permutation_intertwines() {
        let a1 = Algebra::new(vec![1, 2], vec![2, 1]).unwrap();
        let a2 = Algebra::new(vec![2, 1], vec![1, 3]).unwrap();
        let p = permutation_matrix(&tensor_permutation(&a1, &a2));
        let t = a1.tensor(&a2);
        let u1 = a1.matrix_units();
        let u2 = a2.matrix_units();
        for x in &u1 {
            for y in &u2 {
                let k = &p * cm::kron(&a1.embed(x), &a2.embed(y)) * p.adjoint();
                let (_, residual) = t.extract(&k).unwrap();
                assert!(residual < 1e-14);
            }
        }
    }
}
