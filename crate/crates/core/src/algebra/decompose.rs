//! Wedderburn decomposition of a concrete *-algebra of matrices.

use super::Algebra;
use crate::error::{degenerate, invalid, Result};
use crate::matrix::{self as cm, CMatrix, Subspace, C64};

/// Block structure of a concrete *-algebra `L ⊆ M_D(ℂ)`.
#[derive(Debug, Clone)]
pub struct CentralDecomposition {
    /// Standard form of `L`, acting on the range of its unit.
    pub algebra: Algebra,
    /// Isometry `W: ℂ^d → ℂ^D` (`d` = ambient dimension of `algebra`) onto the
    /// range of the unit, with `W* x W = embed(x')` for every `x ∈ L`.
    pub isometry: CMatrix,
    /// The unit of `L` (a projection in `M_D`).
    pub unit: CMatrix,
    /// Orthonormal basis of `L`.
    pub span: Subspace,
}

impl CentralDecomposition {
    /// Coordinates of `x ∈ L` in the standard form.
    pub fn to_standard(&self, x: &CMatrix) -> CMatrix {
        self.isometry.adjoint() * x * &self.isometry
    }

    pub fn from_standard(&self, y: &CMatrix) -> CMatrix {
        &self.isometry * y * self.isometry.adjoint()
    }
}

// Fixed, irrational-ish weights used to build generic elements; retries shift
// the sequence.
fn weight(k: usize, attempt: usize) -> f64 {
    let phi = 0.618_033_988_749_894_9_f64;
    let x = ((k + 1) as f64 * phi + attempt as f64 * 0.377_964_473_009_227_2).fract();
    0.25 + x
}

/// Generic self-adjoint element of the span of `basis`.
fn generic_hermitian(basis: &[CMatrix], attempt: usize) -> CMatrix {
    let (r, c) = basis.first().map_or((0, 0), |b| b.shape());
    let mut h = cm::zeros(r, c);
    for (k, b) in basis.iter().enumerate() {
        h += cm::hermitian_part(b).scale(weight(2 * k, attempt));
        h += cm::skew_part(b).scale(weight(2 * k + 1, attempt));
    }
    h
}

/// Splits sorted eigenvalues into `groups` clusters at the largest gaps.
/// Returns the cluster boundaries if the smallest chosen gap dominates the
/// largest spread inside a cluster.
fn split_clusters(vals: &[f64], groups: usize, scale: f64) -> Option<Vec<std::ops::Range<usize>>> {
    let n = vals.len();
    if groups == 0 || groups > n {
        return None;
    }
    let mut gaps: Vec<(usize, f64)> = (1..n).map(|i| (i, vals[i] - vals[i - 1])).collect();
    gaps.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut cuts: Vec<usize> = gaps.iter().take(groups - 1).map(|g| g.0).collect();
    cuts.sort_unstable();
    let min_gap = gaps.iter().take(groups - 1).map(|g| g.1).fold(f64::INFINITY, f64::min);
    let max_spread = gaps.iter().skip(groups - 1).map(|g| g.1).fold(0.0, f64::max);
    let separated = groups == 1 || (min_gap > 1e-6 * scale && min_gap > 1e3 * max_spread);
    if !separated {
        return None;
    }
    let mut ranges = Vec::with_capacity(groups);
    let mut start = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        ranges.push(start..c);
        start = c;
    }
    Some(ranges)
}

fn columns(m: &CMatrix, range: std::ops::Range<usize>) -> CMatrix {
    m.columns(range.start, range.len()).into_owned()
}

/// Finds the block sizes, multiplicities and a standard-form basis of the
/// *-algebra spanned by `span`.
///
/// The algebra must be closed under products and adjoints and contain a unit
/// (not necessarily the ambient identity).
pub fn central_decomposition(span: &[CMatrix], tol: f64) -> Result<CentralDecomposition> {
    cm::check_tol(tol)?;
    let d = span.first().map(|m| m.nrows()).ok_or_else(|| invalid("empty span"))?;
    if span.iter().any(|m| m.shape() != (d, d)) {
        return Err(invalid("span must consist of equally sized square matrices"));
    }
    let onb = cm::onb_span((d, d), span, tol)?;
    let basis = onb.basis();
    if basis.is_empty() {
        return Err(invalid("span is the zero space"));
    }

    // closure under * and products
    for (i, a) in basis.iter().enumerate() {
        let r = onb.residual(&a.adjoint());
        if r > tol.sqrt() {
            return Err(invalid(format!("span is not closed under adjoints (residual {r:.2e})")));
        }
        for b in &basis[i..] {
            for prod in [a * b, b * a] {
                let r = onb.residual(&prod);
                if r > tol.sqrt() {
                    return Err(invalid(format!(
                        "span is not closed under multiplication (residual {r:.2e})"
                    )));
                }
            }
        }
    }

    // unit = projection onto the sum of ranges
    let mut gram = cm::zeros(d, d);
    for b in basis {
        gram += b * b.adjoint();
    }
    let range = cm::psd_range(&gram, tol);
    let unit = &range * range.adjoint();
    if onb.residual(&unit) > tol.sqrt() {
        return Err(invalid("span does not contain its own unit"));
    }

    // center: coefficient vectors c with [Σ c_i b_i, b_j] = 0 for all j
    let m = basis.len();
    let mut normal = cm::zeros(m, m);
    let commutators: Vec<Vec<CMatrix>> = basis
        .iter()
        .map(|bi| basis.iter().map(|bj| bi * bj - bj * bi).collect())
        .collect();
    for i in 0..m {
        for k in i..m {
            let v: C64 = (0..m).map(|j| cm::inner(&commutators[i][j], &commutators[k][j])).sum();
            normal[(i, k)] = v;
            normal[(k, i)] = v.conj();
        }
    }
    let (vals, vecs) = cm::hermitian_eigen(&normal);
    let top = vals.last().copied().unwrap_or(0.0).max(1.0);
    let center: Vec<CMatrix> = (0..m)
        .filter(|&i| vals[i] <= tol * top)
        .map(|i| {
            let mut z = cm::zeros(d, d);
            for (l, b) in basis.iter().enumerate() {
                z += b * vecs[(l, i)];
            }
            z
        })
        .collect();
    let k = center.len();
    if k == 0 {
        return Err(degenerate("could not locate the center"));
    }

    // minimal central projections from a generic central element
    let rd = range.ncols();
    let mut clusters = None;
    for attempt in 0..8 {
        let h = range.adjoint() * generic_hermitian(&center, attempt) * &range;
        let (ev, evec) = cm::hermitian_eigen(&h);
        let scale = ev.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        if let Some(ranges) = split_clusters(&ev, k, scale) {
            clusters = Some((ranges, evec));
            break;
        }
    }
    let (ranges, evec) =
        clusters.ok_or_else(|| degenerate("central spectrum does not separate into blocks"))?;
    debug_assert_eq!(evec.nrows(), rd);

    let mut sizes = Vec::with_capacity(k);
    let mut mults = Vec::with_capacity(k);
    let mut isometry_cols: Vec<CMatrix> = Vec::with_capacity(k);
    for cluster in ranges {
        let p = &range * columns(&evec, cluster);
        let dim = p.ncols();
        let compressed: Vec<CMatrix> = basis.iter().map(|b| p.adjoint() * b * &p).collect();
        let block_span = cm::onb_span((dim, dim), &compressed, tol)?;
        let n = (block_span.dim() as f64).sqrt().round() as usize;
        if n == 0 || n * n != block_span.dim() || dim % n != 0 {
            return Err(degenerate(format!(
                "central summand of dimension {} acting on ℂ^{dim} is not a full matrix block",
                block_span.dim()
            )));
        }
        let mu = dim / n;
        let units = matrix_unit_basis(block_span.basis(), n, mu)?;
        isometry_cols.push(p * units);
        sizes.push(n);
        mults.push(mu);
    }

    let algebra = Algebra::new(sizes, mults)?;
    let mut isometry = cm::zeros(d, algebra.ambient_dim());
    let mut c0 = 0;
    for cols in isometry_cols {
        isometry.columns_mut(c0, cols.ncols()).copy_from(&cols);
        c0 += cols.ncols();
    }
    let out = CentralDecomposition {
        algebra,
        isometry,
        unit,
        span: onb.clone(),
    };
    for b in onb.basis() {
        if out.algebra.is_member(&out.to_standard(b), tol.sqrt())?.is_none() {
            return Err(degenerate("standard-form conjugation failed"));
        }
    }
    Ok(out)
}

/// For a factor `≅ M_n ⊗ 1_μ` acting on `ℂ^{nμ}` (given by a basis), a
/// unitary whose columns are ordered (copy, row) so that conjugating by it
/// yields `diag(a, …, a)`.
fn matrix_unit_basis(block_basis: &[CMatrix], n: usize, mu: usize) -> Result<CMatrix> {
    let dim = n * mu;
    if n == 1 {
        return Ok(cm::identity(dim));
    }
    let mut found = None;
    for attempt in 0..8 {
        let h = generic_hermitian(block_basis, attempt);
        let (ev, evec) = cm::hermitian_eigen(&h);
        let scale = ev.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        // n eigenvalues, each with multiplicity μ
        let groups: Vec<std::ops::Range<usize>> = (0..n).map(|j| j * mu..(j + 1) * mu).collect();
        let spread = groups
            .iter()
            .map(|g| ev[g.end - 1] - ev[g.start])
            .fold(0.0, f64::max);
        let gap = (1..n)
            .map(|j| ev[j * mu] - ev[j * mu - 1])
            .fold(f64::INFINITY, f64::min);
        if gap > 1e-6 * scale && gap > 1e3 * spread {
            found = Some((groups, evec));
            break;
        }
    }
    let (groups, evec) =
        found.ok_or_else(|| degenerate("could not split a matrix block into minimal projections"))?;
    let frames: Vec<CMatrix> = groups.into_iter().map(|g| columns(&evec, g)).collect();

    // partial isometries from the first minimal projection to the others
    let mut maps = vec![frames[0].clone()];
    for fj in &frames[1..] {
        let (k, _) = block_basis
            .iter()
            .map(|b| {
                let k = fj.adjoint() * b * &frames[0];
                let w = cm::frobenius(&k);
                (k, w)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty block basis");
        // k is a multiple of a unitary on the multiplicity space
        let lambda = cm::frobenius(&k).powi(2) / mu as f64;
        if lambda <= 0.0 {
            return Err(degenerate("minimal projections are not linked inside the block"));
        }
        let khat = k.unscale(lambda.sqrt());
        let defect = cm::distance(&(khat.adjoint() * &khat), &cm::identity(mu));
        if defect > 1e-6 {
            return Err(degenerate(format!("matrix-unit construction defect {defect:.2e}")));
        }
        maps.push(fj * khat);
    }
    let mut out = cm::zeros(dim, dim);
    for s in 0..mu {
        for (j, m) in maps.iter().enumerate() {
            out.set_column(s * n + j, &m.column(s));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;
    use crate::matrix::{unit, DEFAULT_TOL};

    fn full_span(n: usize) -> Vec<CMatrix> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                v.push(unit(n, n, i, j));
            }
        }
        v
    }

    #[test]
    fn full_matrix_algebra() {
        let dec = central_decomposition(&full_span(3), DEFAULT_TOL).unwrap();
        assert_eq!(dec.algebra.block_sizes(), &[3]);
        assert_eq!(dec.algebra.multiplicities(), &[1]);
    }

    #[test]
    fn repeated_block() {
        let a = Algebra::new(vec![2], vec![2]).unwrap();
        let span: Vec<CMatrix> = a.matrix_units().iter().map(|x| a.embed(x)).collect();
        let dec = central_decomposition(&span, DEFAULT_TOL).unwrap();
        assert_eq!(dec.algebra.block_sizes(), &[2]);
        assert_eq!(dec.algebra.multiplicities(), &[2]);
    }

    #[test]
    fn two_by_two_linking_algebra_of_the_line() {
        // corners ℂ, ℂ, X = ℂ, X* = ℂ: the four matrix units of M₂
        let dec = central_decomposition(&full_span(2), DEFAULT_TOL).unwrap();
        assert_eq!(dec.algebra.block_sizes(), &[2]);
    }

    #[test]
    fn recovers_a_rotated_multi_matrix_algebra() {
        let a = Algebra::new(vec![2, 1, 3], vec![1, 2, 2]).unwrap();
        let d = a.ambient_dim();
        // rotate by a fixed unitary (Cayley transform of a Hermitian matrix)
        let mut h = cm::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] = C64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0);
            }
        }
        let h = cm::hermitian_part(&h);
        let i = C64::new(0.0, 1.0);
        let u = (cm::identity(d) - &h * i) * (cm::identity(d) + &h * i).try_inverse().unwrap();
        let span: Vec<CMatrix> = a
            .matrix_units()
            .iter()
            .map(|x| &u * a.embed(x) * u.adjoint())
            .collect();
        let dec = central_decomposition(&span, DEFAULT_TOL).unwrap();
        let mut got: Vec<(usize, usize)> = dec
            .algebra
            .block_sizes()
            .iter()
            .copied()
            .zip(dec.algebra.multiplicities().iter().copied())
            .collect();
        got.sort_unstable();
        assert_eq!(got, vec![(1, 2), (2, 1), (3, 2)]);
        assert!(cm::distance(&(dec.isometry.adjoint() * &dec.isometry), &cm::identity(d)) < 1e-10);
        // every element lands in the standard form
        let x = AlgebraElement::new(
            a.clone(),
            vec![
                cm::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]),
                cm::from_real(1, 1, &[5.0]),
                cm::from_real(3, 3, &[1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.0, 3.0]),
            ],
        )
        .unwrap();
        let rotated = &u * a.embed(&x) * u.adjoint();
        assert!(dec.algebra.is_member(&dec.to_standard(&rotated), 1e-9).unwrap().is_some());
    }

    #[test]
    fn corner_with_non_identity_unit() {
        // {diag(a, 0) : a ∈ M₂} inside M₃
        let span: Vec<CMatrix> = full_span(2)
            .into_iter()
            .map(|m| {
                let mut big = cm::zeros(3, 3);
                big.view_mut((0, 0), (2, 2)).copy_from(&m);
                big
            })
            .collect();
        let dec = central_decomposition(&span, DEFAULT_TOL).unwrap();
        assert_eq!(dec.algebra.block_sizes(), &[2]);
        assert_eq!(dec.isometry.shape(), (3, 2));
        assert!(cm::distance(&dec.unit, &cm::diag_real(&[1.0, 1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn rejects_non_algebras() {
        let span = vec![unit(2, 2, 0, 1)];
        assert!(matches!(
            central_decomposition(&span, DEFAULT_TOL),
            Err(crate::Error::InvalidInput(_))
        ));
        assert!(central_decomposition(&[], DEFAULT_TOL).is_err());
    }
}
