//! The induced map `X_*: K₀(A) → K₀(B)` of a bimodule, computed through
//! Fredholm indices and, independently, through multiplicities.

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{minimal_projection, Algebra, AlgebraMatrix, K0Class};
use crate::bimodule::{conjugate, internal_tensor, is_left_full, is_right_full, op_tensor, Bimodule};
use crate::error::{invalid, Error, Result};
use crate::fredholm::{index, standard_index_op};
use crate::matrix::{onb_span, CMatrix};

/// An integer `k_B × k_A` matrix acting on `K₀` coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMap {
    pub source: Algebra,
    pub target: Algebra,
    /// Row `j`, column `i`: coefficient of `δ_j` in the image of `δ_i`.
    pub matrix: Vec<Vec<i64>>,
}

impl InducedMap {
    pub fn new(source: Algebra, target: Algebra, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let (r, c) = (target.num_blocks(), source.num_blocks());
        if matrix.len() != r || matrix.iter().any(|row| row.len() != c) {
            return Err(invalid(format!("induced map must be a {r}x{c} integer matrix")));
        }
        Ok(InducedMap { source, target, matrix })
    }

    fn from_columns(source: Algebra, target: Algebra, columns: &[Vec<i64>]) -> Self {
        let rows = target.num_blocks();
        let matrix = (0..rows).map(|j| columns.iter().map(|c| c[j]).collect()).collect();
        InducedMap { source, target, matrix }
    }

    pub fn column(&self, i: usize) -> Vec<i64> {
        self.matrix.iter().map(|row| row[i]).collect()
    }

    pub fn apply(&self, c: &K0Class) -> Result<K0Class> {
        if c.algebra().block_sizes() != self.source.block_sizes() {
            return Err(invalid("class does not live in the source K₀ group"));
        }
        let v = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(c.vector()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(K0Class::new(self.target.clone(), v))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &InducedMap) -> Result<InducedMap> {
        if first.target.block_sizes() != self.source.block_sizes() {
            return Err(invalid("induced maps are not composable"));
        }
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..first.source.num_blocks())
                    .map(|i| row.iter().zip(&first.matrix).map(|(a, r)| a * r[i]).sum())
                    .collect()
            })
            .collect();
        Ok(InducedMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.len() == self.source.num_blocks()
            && self
                .matrix
                .iter()
                .enumerate()
                .all(|(j, row)| row.iter().enumerate().all(|(i, &v)| v == i64::from(i == j)))
    }

    /// Every column is a standard basis vector.
    pub fn columns_are_basis_vectors(&self) -> bool {
        (0..self.source.num_blocks()).all(|i| {
            let c = self.column(i);
            c.iter().filter(|&&v| v == 1).count() == 1 && c.iter().all(|&v| v == 0 || v == 1)
        })
    }
}

impl fmt::Display for InducedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, row) in self.matrix.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Entry `(j, i)` is `dim_ℂ π_A(e_i)·X·π_B(f_j)` for minimal projections `e_i`, `f_j`.
pub fn multiplicity_matrix(x: &Bimodule, tol: f64) -> Result<InducedMap> {
    let (a, b) = (x.left_algebra(), x.right_algebra());
    let minimal = |alg: &Algebra, i: usize| -> Result<CMatrix> {
        let e = minimal_projection(alg, i)?.entry(0, 0);
        Ok(alg.embed(&e))
    };
    let es: Vec<_> = (0..a.num_blocks()).map(|i| minimal(a, i)).collect::<Result<_>>()?;
    let fs: Vec<_> = (0..b.num_blocks()).map(|j| minimal(b, j)).collect::<Result<_>>()?;
    let mut columns = Vec::with_capacity(es.len());
    for e in &es {
        let mut col = Vec::with_capacity(fs.len());
        for f in &fs {
            let compressed: Vec<_> = x.basis().iter().map(|v| e * v * f).collect();
            col.push(onb_span(x.shape(), &compressed, tol)?.dim() as i64);
        }
        columns.push(col);
    }
    Ok(InducedMap::from_columns(a.clone(), b.clone(), &columns))
}

fn require_left_full(x: &Bimodule, name: &str, tol: f64) -> Result<()> {
    if is_left_full(x, tol)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} is not left-full")))
    }
}

/// `δ_i ↦ index(T_i ⊗ I_X)` with `T_i = standard_index_op(e_i, 0)`.
pub fn induced_map_fredholm(x: &Bimodule, tol: f64) -> Result<InducedMap> {
    require_left_full(x, "the bimodule", tol)?;
    let a = x.left_algebra();
    let columns: Vec<Vec<i64>> = (0..a.num_blocks())
        .into_par_iter()
        .map(|i| {
            let e = minimal_projection(a, i)?;
            let t = standard_index_op(&e, &AlgebraMatrix::zeros(a, 1, 1), tol)?;
            Ok(index(&op_tensor(&t, x, tol)?.operator, tol)?.vector().to_vec())
        })
        .collect::<Result<_>>()?;
    Ok(InducedMap::from_columns(a.clone(), x.right_algebra().clone(), &columns))
}

/// Recomputes each column from the second representative
/// `diag(e_i, 1) → diag(0, 1)` and compares.
pub fn check_well_defined(x: &Bimodule, map: &InducedMap, tol: f64) -> Result<bool> {
    let a = x.left_algebra();
    let one = AlgebraMatrix::identity(a, 1);
    let zero = AlgebraMatrix::zeros(a, 1, 1);
    for i in 0..a.num_blocks() {
        let p = minimal_projection(a, i)?.dsum(&one)?;
        let q = zero.dsum(&one)?;
        let t = standard_index_op(&p, &q, tol)?;
        let c = index(&op_tensor(&t, x, tol)?.operator, tol)?;
        if c.vector() != map.column(i).as_slice() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct FunctorialityReport {
    /// `(X ⊗_B Y)_*`.
    pub tensor: InducedMap,
    /// `Y_* ∘ X_*`.
    pub composite: InducedMap,
}

impl FunctorialityReport {
    pub fn holds(&self) -> bool {
        self.tensor.matrix == self.composite.matrix
    }
}

pub fn verify_functoriality(x: &Bimodule, y: &Bimodule, tol: f64) -> Result<FunctorialityReport> {
    require_left_full(x, "X", tol)?;
    require_left_full(y, "Y", tol)?;
    if x.right() != y.left() {
        return Err(Error::Precondition(
            "X and Y do not share one representation of the middle algebra".into(),
        ));
    }
    let xy = internal_tensor(x, y, tol)?;
    let tensor = induced_map_fredholm(&xy, tol)?;
    let composite = induced_map_fredholm(y, tol)?.after(&induced_map_fredholm(x, tol)?)?;
    Ok(FunctorialityReport { tensor, composite })
}

#[derive(Debug, Clone)]
pub struct MoritaReport {
    pub forward: InducedMap,
    pub backward: InducedMap,
    /// `(X*)_* ∘ X_*` on `K₀(A)`.
    pub round_trip_a: InducedMap,
    /// `X_* ∘ (X*)_*` on `K₀(B)`.
    pub round_trip_b: InducedMap,
}

impl MoritaReport {
    pub fn holds(&self) -> bool {
        self.failure().is_none()
    }

    /// The first generator whose image breaks the isomorphism, if any.
    pub fn failure(&self) -> Option<String> {
        for (name, m) in [("K₀(A)", &self.round_trip_a), ("K₀(B)", &self.round_trip_b)] {
            for i in 0..m.source.num_blocks() {
                let c = m.column(i);
                if c.iter().enumerate().any(|(j, &v)| v != i64::from(i == j)) {
                    return Some(format!("generator δ_{i} of {name} returns as {c:?}"));
                }
            }
        }
        for i in 0..self.forward.source.num_blocks() {
            let c = self.forward.column(i);
            if c.iter().filter(|&&v| v != 0).count() != 1 || c.iter().any(|&v| v != 0 && v != 1) {
                return Some(format!("X_* sends δ_{i} to {c:?}, not a generator"));
            }
        }
        None
    }
}

pub fn verify_morita_iso(x: &Bimodule, tol: f64) -> Result<MoritaReport> {
    if !is_left_full(x, tol)? || !is_right_full(x, tol)? {
        return Err(Error::Precondition("X is not an imprimitivity bimodule".into()));
    }
    let forward = induced_map_fredholm(x, tol)?;
    let backward = induced_map_fredholm(&conjugate(x), tol)?;
    Ok(MoritaReport {
        round_trip_a: backward.after(&forward)?,
        round_trip_b: forward.after(&backward)?,
        forward,
        backward,
    })
}
