//! Seeded random instances within desk-scale size caps.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Algebra, AlgebraMatrix};
use crate::bimodule::{corner_bimodule, corner_chain, Bimodule};
use super::json::Document;
use crate::error::{invalid, Result};
use crate::fredholm::ModuleOperator;
use crate::matrix::{self as cm, CMatrix, C64, DEFAULT_TOL};
use crate::module::HilbertModule;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Base trial count; properties scale their own counts from it.
    pub trials: usize,
    pub max_blocks: usize,
    pub max_block_size: usize,
    pub max_multiplicity: usize,
    pub max_ambient_rank: usize,
    /// Cap on `Σ N_j²` for random linking algebras `⊕ M_{N_j}`.
    pub max_linking_dim: usize,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            trials: 50,
            max_blocks: 3,
            max_block_size: 4,
            max_multiplicity: 2,
            max_ambient_rank: 4,
            max_linking_dim: 60,
            tol: DEFAULT_TOL,
        }
    }
}

impl SuiteConfig {
    /// Independent stream for trial `trial` of property `property`.
    pub fn rng(&self, property: u64, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((property << 32) | trial);
        rng
    }
}

pub fn random_algebra(rng: &mut impl Rng, cfg: &SuiteConfig) -> Algebra {
    let k = rng.random_range(1..=cfg.max_blocks);
    let sizes = (0..k).map(|_| rng.random_range(1..=cfg.max_block_size)).collect();
    let mults = (0..k).map(|_| rng.random_range(1..=cfg.max_multiplicity)).collect();
    Algebra::new(sizes, mults).expect("positive sizes")
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    if n == 0 {
        return cm::zeros(0, 0);
    }
    let qr = random_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cm::ONE };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// `U diag(1_r, 0) U*` with `U` a random unitary.
fn random_rank_projection(rng: &mut impl Rng, n: usize, r: usize) -> CMatrix {
    let u = random_unitary(rng, n);
    let v = u.columns(0, r).into_owned();
    &v * v.adjoint()
}

/// A projection in `M_n(A)` with uniformly random rank in every block.
pub fn random_projection(rng: &mut impl Rng, alg: &Algebra, n: usize) -> AlgebraMatrix {
    let blocks = alg
        .block_sizes()
        .iter()
        .map(|&s| {
            let r = rng.random_range(0..=n * s);
            random_rank_projection(rng, n * s, r)
        })
        .collect();
    AlgebraMatrix::from_blocks(alg.clone(), n, n, blocks).expect("block shapes follow the algebra")
}

pub fn random_module(rng: &mut impl Rng, alg: &Algebra, cfg: &SuiteConfig) -> HilbertModule {
    let n = rng.random_range(1..=cfg.max_ambient_rank);
    let p = random_projection(rng, alg, n);
    HilbertModule::new(p, cfg.tol.sqrt()).expect("generated projections are exact to rounding")
}

/// Orthonormal basis of the range of each block of a projection.
fn range_bases(p: &AlgebraMatrix) -> Vec<CMatrix> {
    p.blocks().iter().map(|b| cm::psd_range(b, 1e-6)).collect()
}

fn random_singular_values(rng: &mut impl Rng, r: usize) -> Vec<f64> {
    (0..r).map(|_| rng.random_range(0.5..2.0)).collect()
}

/// An operator `M → N` whose nonzero singular values lie in `[0.5, 2)` and
/// whose rank in each block is uniform over its feasible range.
pub fn random_operator(rng: &mut impl Rng, m: &HilbertModule, n: &HilbertModule) -> ModuleOperator {
    let bp = range_bases(m.projection());
    let bq = range_bases(n.projection());
    let blocks = bp
        .iter()
        .zip(&bq)
        .map(|(p, q)| {
            let r = rng.random_range(0..=p.ncols().min(q.ncols()));
            let up = p * random_unitary(rng, p.ncols());
            let uq = q * random_unitary(rng, q.ncols());
            let s = cm::diag_real(&random_singular_values(rng, r));
            uq.columns(0, r) * s * up.columns(0, r).adjoint()
        })
        .collect();
    let t = AlgebraMatrix::from_blocks(m.algebra().clone(), n.ambient_rank(), m.ambient_rank(), blocks)
        .expect("block shapes follow the modules");
    ModuleOperator::compressed(m.clone(), n.clone(), t).expect("shapes follow the modules")
}

/// An invertible operator `M → M` with singular values in `[0.5, 2)`.
pub fn random_invertible(rng: &mut impl Rng, m: &HilbertModule) -> ModuleOperator {
    let blocks = range_bases(m.projection())
        .iter()
        .map(|b| {
            let k = b.ncols();
            let s = cm::diag_real(&random_singular_values(rng, k));
            let core = random_unitary(rng, k) * s * random_unitary(rng, k);
            b * core * b.adjoint()
        })
        .collect();
    let t = AlgebraMatrix::from_blocks(m.algebra().clone(), m.ambient_rank(), m.ambient_rank(), blocks)
        .expect("block shapes follow the module");
    ModuleOperator::compressed(m.clone(), m.clone(), t).expect("shapes follow the module")
}

/// A random unitary in `M_n(A)`.
pub fn random_algebra_unitary(rng: &mut impl Rng, alg: &Algebra, n: usize) -> AlgebraMatrix {
    let blocks = alg.block_sizes().iter().map(|&s| random_unitary(rng, n * s)).collect();
    AlgebraMatrix::from_blocks(alg.clone(), n, n, blocks).expect("block shapes follow the algebra")
}

/// A rotated copy `R (⊕ M_{N_j} ⊗ 1_{m_j}) R*` of a multi-matrix algebra,
/// given by a spanning set, together with the rotation.
#[derive(Debug, Clone)]
pub struct RandomLinking {
    pub algebra: Algebra,
    pub rotation: CMatrix,
    pub span: Vec<CMatrix>,
}

impl RandomLinking {
    /// `R·embed(diag(1_{r_j}, 0))·R*` for per-block ranks `r_j`.
    pub fn projection(&self, ranks: &[usize]) -> CMatrix {
        self.window(&vec![0; ranks.len()], ranks)
    }

    /// Projection onto coordinates `start_j .. start_j + len_j` of each block.
    pub fn window(&self, start: &[usize], len: &[usize]) -> CMatrix {
        let blocks = self
            .algebra
            .block_sizes()
            .iter()
            .enumerate()
            .map(|(j, &n)| {
                let mut d = vec![0.0; n];
                for v in d.iter_mut().skip(start[j]).take(len[j]) {
                    *v = 1.0;
                }
                cm::diag_real(&d)
            })
            .collect();
        let e = crate::algebra::AlgebraElement::new(self.algebra.clone(), blocks).expect("diagonal blocks");
        &self.rotation * self.algebra.embed(&e) * self.rotation.adjoint()
    }
}

/// Blocks `N_j ≥ min_size` with `Σ N_j² ≤ cap`.
pub fn random_linking(rng: &mut impl Rng, cfg: &SuiteConfig, min_size: usize) -> RandomLinking {
    let k = rng.random_range(1..=cfg.max_blocks);
    let mut sizes: Vec<usize> = Vec::with_capacity(k);
    let mut budget = cfg.max_linking_dim;
    for _ in 0..k {
        let largest = (1..).take_while(|n| n * n <= budget).last().unwrap_or(0);
        if largest < min_size {
            break;
        }
        let n = rng.random_range(min_size..=largest.min(min_size + 4));
        budget -= n * n;
        sizes.push(n);
    }
    let mults: Vec<usize> = sizes.iter().map(|_| rng.random_range(1..=cfg.max_multiplicity)).collect();
    let algebra = Algebra::new(sizes, mults).expect("at least one block fits the budget");
    let rotation = random_unitary(rng, algebra.ambient_dim());
    let span = algebra
        .matrix_units()
        .iter()
        .map(|u| &rotation * algebra.embed(u) * rotation.adjoint())
        .collect();
    RandomLinking {
        algebra,
        rotation,
        span,
    }
}

/// A corner of a random linking algebra with both corners hitting every
/// central block: an imprimitivity bimodule.
pub fn random_imprimitivity(rng: &mut impl Rng, cfg: &SuiteConfig) -> Result<Bimodule> {
    let l = random_linking(rng, cfg, 2);
    let ranks: Vec<usize> = l.algebra.block_sizes().iter().map(|&n| rng.random_range(1..n)).collect();
    let pa = l.projection(&ranks);
    let pb = cm::identity(pa.nrows()) - &pa;
    corner_bimodule(&l.span, &pa, &pb, cfg.tol)
}

/// A left-full corner bimodule; blocks the left corner misses make it fail
/// right-fullness.
pub fn random_left_full(rng: &mut impl Rng, cfg: &SuiteConfig) -> Result<Bimodule> {
    let l = random_linking(rng, cfg, 2);
    let sizes = l.algebra.block_sizes().to_vec();
    let mut ranks: Vec<usize> = sizes.iter().map(|&n| rng.random_range(0..n)).collect();
    if ranks.iter().all(|&r| r == 0) {
        let j = rng.random_range(0..ranks.len());
        ranks[j] = 1;
    }
    let pa = l.projection(&ranks);
    let pb = cm::identity(pa.nrows()) - &pa;
    corner_bimodule(&l.span, &pa, &pb, cfg.tol)
}

/// Any corner bimodule: neither side need be full.
pub fn random_bimodule(rng: &mut impl Rng, cfg: &SuiteConfig) -> Result<Bimodule> {
    let l = loop {
        let l = random_linking(rng, cfg, 1);
        if l.algebra.block_sizes().iter().sum::<usize>() >= 2 {
            break l;
        }
    };
    let sizes = l.algebra.block_sizes().to_vec();
    let total: usize = sizes.iter().sum();
    loop {
        let ranks: Vec<usize> = sizes.iter().map(|&n| rng.random_range(0..=n)).collect();
        let r: usize = ranks.iter().sum();
        if r > 0 && r < total {
            let pa = l.projection(&ranks);
            let pb = cm::identity(pa.nrows()) - &pa;
            return corner_bimodule(&l.span, &pa, &pb, cfg.tol);
        }
    }
}

/// Composable `X: A-B`, `Y: B-C` cut from one linking algebra by three
/// complementary projections, so that `B` is represented identically on
/// both sides. Both are left-full.
pub fn random_chain(rng: &mut impl Rng, cfg: &SuiteConfig) -> Result<(Bimodule, Bimodule)> {
    let l = random_linking(rng, cfg, 2);
    let sizes = l.algebra.block_sizes().to_vec();
    let mut parts: Vec<[usize; 3]> = sizes
        .iter()
        .map(|&n| {
            let r2 = rng.random_range(1..n);
            let r1 = rng.random_range(0..=n - r2 - 1);
            [r1, r2, n - r1 - r2]
        })
        .collect();
    if parts.iter().all(|p| p[0] == 0) {
        match sizes.iter().position(|&n| n >= 3) {
            Some(j) => parts[j] = [1, 1, sizes[j] - 2],
            None => return random_chain(rng, cfg),
        }
    }
    let starts = |k: usize| -> Vec<usize> { parts.iter().map(|p| p[..k].iter().sum()).collect() };
    let lens = |k: usize| -> Vec<usize> { parts.iter().map(|p| p[k]).collect() };
    let ps: Vec<CMatrix> = (0..3).map(|k| l.window(&starts(k), &lens(k))).collect();
    let chain = corner_chain(&l.span, &ps, cfg.tol)?;
    let mut it = chain.into_iter();
    Ok((it.next().expect("two links"), it.next().expect("two links")))
}

/// Kinds accepted by [`generate`].
pub const GENERATED_KINDS: [&str; 8] = [
    "algebra",
    "matrix",
    "module",
    "operator",
    "bimodule",
    "bimodule-left-full",
    "bimodule-imprimitivity",
    "linking-algebra",
];

/// A pseudorandom document of the given kind, determined by the config seed.
pub fn generate(kind: &str, cfg: &SuiteConfig) -> Result<Document> {
    let stream = GENERATED_KINDS
        .iter()
        .position(|&k| k == kind)
        .ok_or_else(|| invalid(format!("cannot generate {kind:?}; expected one of {}", GENERATED_KINDS.join(", "))))?;
    let rng = &mut cfg.rng(1000 + stream as u64, 0);
    Ok(match kind {
        "algebra" => Document::Algebra(random_algebra(rng, cfg)),
        "matrix" => {
            let a = random_algebra(rng, cfg);
            let n = rng.random_range(1..=cfg.max_ambient_rank);
            Document::Matrix(random_projection(rng, &a, n))
        }
        "module" => {
            let a = random_algebra(rng, cfg);
            Document::Module(random_module(rng, &a, cfg))
        }
        "operator" => {
            let a = random_algebra(rng, cfg);
            let m = random_module(rng, &a, cfg);
            let n = random_module(rng, &a, cfg);
            Document::Operator(random_operator(rng, &m, &n))
        }
        "bimodule" => Document::Bimodule(random_bimodule(rng, cfg)?),
        "bimodule-left-full" => Document::Bimodule(random_left_full(rng, cfg)?),
        "bimodule-imprimitivity" => Document::Bimodule(random_imprimitivity(rng, cfg)?),
        _ => Document::LinkingAlgebra(random_linking(rng, cfg, 2).span),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{is_left_full, is_right_full};

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let cfg = SuiteConfig::default();
        let a: u64 = cfg.rng(1, 7).random();
        let b: u64 = cfg.rng(1, 7).random();
        let c: u64 = cfg.rng(1, 8).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(random_algebra(&mut cfg.rng(0, 1), &cfg), random_algebra(&mut cfg.rng(0, 1), &cfg));
    }

    #[test]
    fn unitaries_are_unitary() {
        let u = random_unitary(&mut SuiteConfig::default().rng(9, 0), 5);
        assert!(cm::distance(&(u.adjoint() * &u), &cm::identity(5)) < 1e-12);
    }

    #[test]
    fn generated_objects_satisfy_invariants() {
        let cfg = SuiteConfig::default();
        for t in 0..10 {
            let mut rng = cfg.rng(10, t);
            let a = random_algebra(&mut rng, &cfg);
            let m = random_module(&mut rng, &a, &cfg);
            let n = random_module(&mut rng, &a, &cfg);
            assert!(m.projection().projection_defect() < 1e-12);
            let op = random_operator(&mut rng, &m, &n);
            assert!(ModuleOperator::new(m.clone(), n.clone(), op.matrix().clone(), 1e-10).is_ok());
            let g = random_invertible(&mut rng, &m);
            let w = crate::fredholm::pseudo_inverse(&g, cfg.tol).unwrap();
            assert!(w.kernel_projection.frobenius() < 1e-10);
        }
    }

    #[test]
    fn imprimitivity_generator_gives_full_bimodules() {
        let cfg = SuiteConfig::default();
        for t in 0..5 {
            let x = random_imprimitivity(&mut cfg.rng(11, t), &cfg).unwrap();
            assert!(is_left_full(&x, cfg.tol).unwrap());
            assert!(is_right_full(&x, cfg.tol).unwrap());
            let y = random_left_full(&mut cfg.rng(12, t), &cfg).unwrap();
            assert!(is_left_full(&y, cfg.tol).unwrap());
        }
    }

    #[test]
    fn chains_share_the_middle_representation() {
        let cfg = SuiteConfig::default();
        for t in 0..5 {
            let (x, y) = random_chain(&mut cfg.rng(13, t), &cfg).unwrap();
            assert_eq!(x.right(), y.left());
            assert!(is_left_full(&x, cfg.tol).unwrap());
            assert!(is_left_full(&y, cfg.tol).unwrap());
        }
    }

    #[test]
    fn generate_is_deterministic() {
        let cfg = SuiteConfig {
            seed: 1,
            ..SuiteConfig::default()
        };
        for kind in GENERATED_KINDS {
            let a = crate::lab::json::serialize(&generate(kind, &cfg).unwrap());
            let b = crate::lab::json::serialize(&generate(kind, &cfg).unwrap());
            assert_eq!(a, b, "{kind}");
        }
        assert!(generate("report", &cfg).is_err());
    }

    #[test]
    fn generated_imprimitivity_document_is_full() {
        for seed in 0..3 {
            let cfg = SuiteConfig {
                seed,
                ..SuiteConfig::default()
            };
            match generate("bimodule-imprimitivity", &cfg).unwrap() {
                Document::Bimodule(x) => {
                    assert!(is_left_full(&x, cfg.tol).unwrap() && is_right_full(&x, cfg.tol).unwrap())
                }
                other => panic!("unexpected {}", other.kind()),
            }
        }
    }
}
