//! The linking algebra `[[A, X], [X*, B]]` and its inverse, the corner
//! bimodule of a pair of complementary projections.

use super::{make_bimodule, Bimodule, Representation};
use crate::algebra::{central_decomposition, CentralDecomposition};
use crate::error::{invalid, Error, Result};
use crate::matrix::{self as cm, onb_span, CMatrix, Subspace};

/// The concrete linking algebra of a bimodule, acting on `H_A ⊕ H_B`.
#[derive(Debug, Clone)]
pub struct LinkingAlgebraView {
    pub bimodule: Bimodule,
    /// Orthonormal basis of `L ⊆ M_{d_A + d_B}(ℂ)`.
    pub span: Subspace,
    pub decomposition: CentralDecomposition,
}

impl LinkingAlgebraView {
    /// `diag(1_{H_A}, 0)`.
    pub fn projection_a(&self) -> CMatrix {
        let (da, db) = self.bimodule.shape();
        corner_projection(da, db, true)
    }

    /// `diag(0, 1_{H_B})`.
    pub fn projection_b(&self) -> CMatrix {
        let (da, db) = self.bimodule.shape();
        corner_projection(da, db, false)
    }

    /// Recovers the bimodule from the two corners.
    pub fn corner(&self, tol: f64) -> Result<Bimodule> {
        corner_bimodule(self.span.basis(), &self.projection_a(), &self.projection_b(), tol)
    }
}

fn corner_projection(da: usize, db: usize, top: bool) -> CMatrix {
    let mut p = cm::zeros(da + db, da + db);
    let range = if top { 0..da } else { da..da + db };
    for i in range {
        p[(i, i)] = cm::ONE;
    }
    p
}

fn place(total: usize, at: (usize, usize), m: &CMatrix) -> CMatrix {
    let mut out = cm::zeros(total, total);
    out.view_mut(at, m.shape()).copy_from(m);
    out
}

pub fn linking_algebra(x: &Bimodule, tol: f64) -> Result<LinkingAlgebraView> {
    let (da, db) = x.shape();
    let d = da + db;
    let mut gens = Vec::new();
    for u in x.left_algebra().matrix_units() {
        gens.push(place(d, (0, 0), &x.left().embed(&u)));
    }
    for u in x.right_algebra().matrix_units() {
        gens.push(place(d, (da, da), &x.right().embed(&u)));
    }
    for b in x.basis() {
        gens.push(place(d, (0, da), b));
        gens.push(place(d, (da, 0), &b.adjoint()));
    }
    let decomposition = central_decomposition(&gens, tol).map_err(|e| match e {
        Error::InvalidInput(detail) => Error::AxiomViolation {
            axiom: 'c',
            detail: format!("linking algebra is not closed: {detail}"),
            residual: f64::NAN,
        },
        other => other,
    })?;
    Ok(LinkingAlgebraView {
        bimodule: x.clone(),
        span: decomposition.span.clone(),
        decomposition,
    })
}

/// `P_A L P_B` as a bimodule between the corners `P_A L P_A` and `P_B L P_B`,
/// each moved to standard form.
pub fn corner_bimodule(span: &[CMatrix], p_a: &CMatrix, p_b: &CMatrix, tol: f64) -> Result<Bimodule> {
    cm::check_tol(tol)?;
    let d = span.first().map(|m| m.nrows()).ok_or_else(|| invalid("empty linking algebra"))?;
    for (name, p) in [("P_A", p_a), ("P_B", p_b)] {
        if p.shape() != (d, d) {
            return Err(invalid(format!("{name} must be {d}x{d}")));
        }
        cm::check_finite(p)?;
        let defect = cm::distance(&(p * p), p).max(cm::distance(&p.adjoint(), p));
        if defect > tol {
            return Err(invalid(format!("{name} is not a projection (defect {defect:.3e})")));
        }
        if cm::frobenius(p) <= tol {
            return Err(invalid(format!("{name} is zero")));
        }
    }
    let l = onb_span((d, d), span, tol)?;
    let bound = tol.sqrt();
    for (name, p) in [("P_A", p_a), ("P_B", p_b)] {
        if !l.contains(p, bound) {
            return Err(invalid(format!("{name} is not in the algebra")));
        }
    }
    let unit = p_a + p_b;
    for b in l.basis() {
        if cm::distance(&(&unit * b), b) > bound || cm::distance(&(b * &unit), b) > bound {
            return Err(invalid("P_A + P_B is not the unit of the algebra"));
        }
    }
    let corner = |p: &CMatrix, q: &CMatrix| -> Vec<CMatrix> { l.basis().iter().map(|b| p * b * q).collect() };
    let a = central_decomposition(&corner(p_a, p_a), tol)?;
    let b = central_decomposition(&corner(p_b, p_b), tol)?;
    let wa_adj = a.isometry.adjoint();
    let basis: Vec<CMatrix> = corner(p_a, p_b).iter().map(|x| &wa_adj * x * &b.isometry).collect();
    make_bimodule(Representation::new(a.algebra), Representation::new(b.algebra), &basis, bound)
}

/// Consecutive corner bimodules `P_k L P_{k+1}` for mutually orthogonal
/// projections, each corner decomposed once.
pub fn corner_chain(span: &[CMatrix], ps: &[CMatrix], tol: f64) -> Result<Vec<Bimodule>> {
    cm::check_tol(tol)?;
    let d = ps.first().map(|p| p.nrows()).ok_or_else(|| invalid("no projections"))?;
    let l = onb_span((d, d), span, tol)?;
    let corners = ps
        .iter()
        .map(|p| {
            let part: Vec<CMatrix> = l.basis().iter().map(|b| p * b * p).collect();
            central_decomposition(&part, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    (0..ps.len() - 1)
        .map(|k| {
            let (wa, wb) = (&corners[k].isometry, &corners[k + 1].isometry);
            let basis: Vec<CMatrix> = l
                .basis()
                .iter()
                .map(|b| wa.adjoint() * &ps[k] * b * &ps[k + 1] * wb)
                .collect();
            make_bimodule(
                Representation::new(corners[k].algebra.clone()),
                Representation::new(corners[k + 1].algebra.clone()),
                &basis,
                tol.sqrt(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::tests::column_space;
    use super::super::{is_left_full, is_right_full};
    use super::*;
    use crate::algebra::Algebra;
    use crate::matrix::DEFAULT_TOL;

    const TOL: f64 = DEFAULT_TOL;

    fn full(n: usize) -> Vec<CMatrix> {
        (0..n * n).map(|k| cm::unit(n, n, k / n, k % n)).collect()
    }

    fn diag(bits: &[f64]) -> CMatrix {
        cm::diag_real(bits)
    }

    #[test]
    fn linking_examples() {
        let l = linking_algebra(&column_space(1), TOL).unwrap();
        assert_eq!(l.decomposition.algebra, Algebra::full_matrix(2));

        let z = make_bimodule(
            Representation::new(Algebra::full_matrix(2)),
            Representation::new(Algebra::complex()),
            &[],
            TOL,
        )
        .unwrap();
        let l = linking_algebra(&z, TOL).unwrap();
        let mut sizes = l.decomposition.algebra.block_sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2]);

        let l = linking_algebra(&column_space(3), TOL).unwrap();
        assert_eq!(l.decomposition.algebra, Algebra::full_matrix(4));
        let back = l.corner(TOL).unwrap();
        assert_eq!(back.dim(), 3);
        assert_eq!(back.left_algebra(), &Algebra::full_matrix(3));
    }

    #[test]
    fn corner_examples() {
        let x = corner_bimodule(&full(2), &diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), TOL).unwrap();
        assert_eq!(x.left_algebra(), &Algebra::complex());
        assert_eq!(x.right_algebra(), &Algebra::complex());
        assert_eq!(x.dim(), 1);

        let x = corner_bimodule(&full(3), &diag(&[1.0, 0.0, 0.0]), &diag(&[0.0, 1.0, 1.0]), TOL).unwrap();
        assert_eq!(x.left_algebra(), &Algebra::complex());
        assert_eq!(x.right_algebra(), &Algebra::full_matrix(2));
        assert_eq!(x.dim(), 2);
        assert!(is_left_full(&x, TOL).unwrap() && is_right_full(&x, TOL).unwrap());

        let zero = cm::zeros(3, 3);
        assert!(matches!(
            corner_bimodule(&full(3), &cm::identity(3), &zero, TOL),
            Err(Error::InvalidInput(_))
        ));
        assert!(corner_bimodule(&full(3), &diag(&[1.0, 0.0, 0.0]), &diag(&[0.0, 1.0, 0.0]), TOL).is_err());
    }
}
