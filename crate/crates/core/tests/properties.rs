use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use morita_core::bimodule::{conjugate, left_inner, right_inner};
use morita_core::fredholm::{index, pseudo_inverse};
use morita_core::lab::generate::{
    random_algebra, random_algebra_unitary, random_bimodule, random_complex, random_matrix, random_module,
    random_operator, random_projection,
};
use morita_core::lab::{generate, json, run_suite, Suite, SuiteConfig};
use morita_core::matrix::{onb_span, pinv, rank_tol, subspace_equal};
use morita_core::module::{direct_sum, inner, module_rank};
use morita_core::{AlgebraElement, HilbertModule, DEFAULT_TOL};

const TOL: f64 = DEFAULT_TOL;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pinv_is_an_involution_on_low_rank(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, r in 0usize..4) {
        let mut g = rng(seed);
        let r = r.min(rows).min(cols);
        let t = random_matrix(&mut g, rows, r) * random_matrix(&mut g, r, cols);
        let s = pinv(&t, TOL).unwrap();
        let back = pinv(&s, TOL).unwrap();
        prop_assert!((&back - &t).norm() <= 1e-9 * t.norm().max(1.0));
        prop_assert_eq!(rank_tol(&t, TOL).unwrap(), r);
        prop_assert_eq!(rank_tol(&t.adjoint(), TOL).unwrap(), r);
    }

    #[test]
    fn k0_is_additive_and_unitarily_invariant(seed in any::<u64>()) {
        let mut g = rng(seed);
        let cfg = SuiteConfig::default();
        let alg = random_algebra(&mut g, &cfg);
        let m = random_module(&mut g, &alg, &cfg);
        let n = random_module(&mut g, &alg, &cfg);
        let sum = direct_sum(&m, &n).unwrap();
        let total = &module_rank(&m, TOL).unwrap() + &module_rank(&n, TOL).unwrap();
        prop_assert_eq!(module_rank(&sum, TOL).unwrap(), total);

        let k = m.ambient_rank();
        let u = random_algebra_unitary(&mut g, &alg, k);
        let conj = &(&u * m.projection()) * &u.adjoint();
        let moved = HilbertModule::new(conj, 1e-9).unwrap();
        prop_assert_eq!(module_rank(&moved, TOL).unwrap(), module_rank(&m, TOL).unwrap());
    }

    #[test]
    fn rank_is_bounded_by_ambient_rank(seed in any::<u64>(), k in 1usize..4) {
        let mut g = rng(seed);
        let alg = random_algebra(&mut g, &SuiteConfig::default());
        let p = random_projection(&mut g, &alg, k);
        let r = module_rank(&HilbertModule::new(p, TOL).unwrap(), TOL).unwrap();
        for (&c, &n) in r.vector().iter().zip(alg.block_sizes()) {
            prop_assert!(c >= 0 && c as usize <= k * n);
        }
    }

    #[test]
    fn module_inner_product_is_sesquilinear_and_positive(seed in any::<u64>()) {
        let mut g = rng(seed);
        let cfg = SuiteConfig::default();
        let alg = random_algebra(&mut g, &cfg);
        let m = random_module(&mut g, &alg, &cfg);
        let v = m.column(0);
        let w = m.column(m.ambient_rank() - 1);
        let blocks = alg.block_sizes().iter().map(|&n| random_matrix(&mut g, n, n)).collect();
        let a = AlgebraElement::new(alg.clone(), blocks).unwrap();

        let vw = inner(&v, &w).unwrap();
        let wv = inner(&w, &v).unwrap();
        prop_assert!(vw.adjoint().distance(&wv) < 1e-10);
        let lhs = inner(&v, &w.mul_right(&a)).unwrap();
        prop_assert!(lhs.distance(&vw.mul(&a)) < 1e-9);
        prop_assert!(inner(&v, &v).unwrap().min_eigenvalue() > -1e-10);
    }

    #[test]
    fn adjoint_negates_index(seed in any::<u64>()) {
        let mut g = rng(seed);
        let cfg = SuiteConfig::default();
        let alg = random_algebra(&mut g, &cfg);
        let m = random_module(&mut g, &alg, &cfg);
        let n = random_module(&mut g, &alg, &cfg);
        let t = random_operator(&mut g, &m, &n);
        let i = index(&t, TOL).unwrap();
        prop_assert_eq!(index(&t.adjoint(), TOL).unwrap(), i.scale(-1));
        let w = pseudo_inverse(&t, TOL).unwrap();
        prop_assert!(w.kernel_projection.projection_defect() < 1e-9);
        prop_assert!(w.cokernel_projection.projection_defect() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bimodule_inner_products_are_compatible(seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_bimodule(&mut g, &SuiteConfig::default()).unwrap();
        prop_assume!(!x.is_zero());
        let coeffs = |g: &mut ChaCha8Rng| (0..x.dim()).map(|_| random_complex(g)).collect::<Vec<_>>();
        let (a, b, c) = (x.combine(&coeffs(&mut g)), x.combine(&coeffs(&mut g)), x.combine(&coeffs(&mut g)));
        let xy = left_inner(&x, &a, &b, 1e-9).unwrap();
        let yz = right_inner(&x, &b, &c, 1e-9).unwrap();
        let lhs = x.left().embed(&xy) * &c;
        let rhs = &a * x.right().embed(&yz);
        prop_assert!((&lhs - &rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
        prop_assert!(left_inner(&x, &a, &a, 1e-9).unwrap().min_eigenvalue() > -1e-9);
        prop_assert!(right_inner(&x, &a, &a, 1e-9).unwrap().min_eigenvalue() > -1e-9);
    }

    #[test]
    fn double_conjugate_is_the_original(seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_bimodule(&mut g, &SuiteConfig::default()).unwrap();
        let xx = conjugate(&conjugate(&x));
        prop_assert_eq!(xx.shape(), x.shape());
        let u = onb_span(x.shape(), x.basis(), TOL).unwrap();
        let v = onb_span(xx.shape(), xx.basis(), TOL).unwrap();
        prop_assert!(subspace_equal(&u, &v, 1e-9).unwrap());
    }

    #[test]
    fn generated_documents_round_trip(seed in any::<u64>(), which in 0usize..generate::GENERATED_KINDS.len()) {
        let cfg = SuiteConfig { seed, ..SuiteConfig::default() };
        let doc = generate::generate(generate::GENERATED_KINDS[which], &cfg).unwrap();
        let text = json::serialize(&doc);
        let back = json::parse(&text, TOL).unwrap();
        prop_assert_eq!(back.kind(), doc.kind());
        prop_assert_eq!(json::serialize(&back), text);
    }
}

#[test]
fn suite_reports_are_reproducible() {
    let cfg = SuiteConfig { seed: 7, trials: 2, ..SuiteConfig::default() };
    let a = run_suite(&cfg, Suite::All, &[]);
    let b = run_suite(&cfg, Suite::All, &[]);
    assert!(a.all_pass(), "{}", a.transcript());
    assert_eq!(
        serde_json::to_string(&json::to_value(&json::Document::Report(a.without_timing()))).unwrap(),
        serde_json::to_string(&json::to_value(&json::Document::Report(b.without_timing()))).unwrap()
    );
}

#[test]
fn different_seeds_draw_different_inputs() {
    let doc = |seed| {
        let cfg = SuiteConfig { seed, ..SuiteConfig::default() };
        json::serialize(&generate::generate("operator", &cfg).unwrap())
    };
    assert_eq!(doc(3), doc(3));
    assert_ne!(doc(3), doc(4));
}
