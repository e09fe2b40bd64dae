//! Randomized property batteries with a deterministic report.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::catalog;
use super::generate::*;
use super::json::{self, DocumentError};
use crate::algebra::{k0_of_projection, mv_partial_isometry, Algebra, AlgebraElement, AlgebraMatrix};
use crate::bimodule::{
    check_conjugate_tensor, conjugate, corner_chain, external_tensor, internal_tensor, is_left_full, is_right_full,
    left_inner, linking_algebra, right_inner, Bimodule,
};
use crate::error::{Error, Result};
use crate::fredholm::{
    index, pseudo_inverse, same_index_witness, standard_index_op, unitized_index, ModuleOperator,
};
use crate::matrix::{self as cm, onb_span, subspace_equal, CMatrix, Subspace, C64};
use crate::module::{check_quasi_stable, construct_isomorphism, direct_sum, inner, module_rank, HilbertModule};
use crate::morita::{
    check_well_defined, induced_map_fredholm, multiplicity_matrix, verify_functoriality, verify_morita_iso,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    /// The identity being checked, in symbols.
    pub claim: String,
    pub trials: usize,
    pub max_residual: f64,
    pub pass: bool,
    /// First failing trial, when there is one.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
    pub wall_ms: u64,
    pub notes: Vec<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// The report with timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Report {
        Report {
            wall_ms: 0,
            ..self.clone()
        }
    }

    /// One `PASS`/`FAIL` line per property.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for p in &self.properties {
            out.push_str(&format!(
                "{} {:<44} trials={:<4} max_residual={:.3e}",
                if p.pass { "PASS" } else { "FAIL" },
                p.name,
                p.trials,
                p.max_residual
            ));
            if let Some(d) = &p.detail {
                out.push_str(&format!("  [{d}]"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Fredholm,
    Morita,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Fredholm => "fredholm",
            Suite::Morita => "morita",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "all" => Some(Suite::All),
            "fredholm" => Some(Suite::Fredholm),
            "morita" => Some(Suite::Morita),
            _ => None,
        }
    }
}

/// An externally supplied document, checked on load.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub text: String,
}

pub const NOTE_K1: &str = "K₁ is not checked: every finite-dimensional C*-algebra has K₁ = 0, and the \
suspension C₀(ℝ) ⊗ A has no finite-dimensional model, so the K₁ statement is vacuous here.";

/// Outcome of one trial: a residual and an optional failure message.
struct Trial {
    residual: f64,
    failure: Option<String>,
}

/// Accumulates a trial's residuals against one threshold, remembering the
/// first breach.
struct Meter {
    threshold: f64,
    residual: f64,
    failure: Option<String>,
}

impl Meter {
    fn new(threshold: f64) -> Self {
        Meter {
            threshold,
            residual: 0.0,
            failure: None,
        }
    }

    fn bound(&mut self, what: &str, r: f64) {
        self.residual = self.residual.max(r);
        if !(r <= self.threshold) && self.failure.is_none() {
            self.failure = Some(format!("{what}: residual {r:.3e} exceeds {:.0e}", self.threshold));
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok && self.failure.is_none() {
            self.failure = Some(what.to_string());
        }
    }

    fn equal<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, lhs: T, rhs: T) {
        if lhs != rhs && self.failure.is_none() {
            self.failure = Some(format!("{what}: {lhs:?} ≠ {rhs:?}"));
        }
    }

    fn finish(self) -> Result<Trial> {
        Ok(Trial {
            residual: self.residual,
            failure: self.failure,
        })
    }
}

type Check = fn(&mut ChaCha8Rng, &SuiteConfig) -> Result<Trial>;

struct Property {
    name: &'static str,
    claim: &'static str,
    /// Trial count at the default base of 50.
    base_trials: usize,
    check: Check,
}

impl Property {
    fn run(&self, stream: u64, cfg: &SuiteConfig) -> PropertyResult {
        let trials = (self.base_trials * cfg.trials).div_ceil(50).max(1);
        let outcomes: Vec<Result<Trial>> = (0..trials)
            .into_par_iter()
            .map(|t| (self.check)(&mut cfg.rng(stream, t as u64), cfg))
            .collect();
        let mut max_residual: f64 = 0.0;
        let mut detail = None;
        for (t, o) in outcomes.into_iter().enumerate() {
            let msg = match o {
                Ok(trial) => {
                    max_residual = max_residual.max(trial.residual);
                    trial.failure
                }
                Err(e) => Some(e.to_string()),
            };
            if let (Some(m), None) = (msg, &detail) {
                detail = Some(format!("trial {t}: {m}"));
            }
        }
        PropertyResult {
            name: self.name.to_string(),
            claim: self.claim.to_string(),
            trials,
            max_residual,
            pass: detail.is_none(),
            detail,
        }
    }
}

fn fredholm_properties() -> Vec<Property> {
    vec![
        Property {
            name: "index realization",
            claim: "index(v ↦ qv : pAⁿ → qAⁿ) = [p]₀ − [q]₀",
            base_trials: 100,
            check: check_index_realization,
        },
        Property {
            name: "index algebra",
            claim: "ind T* = −ind T, ind VTU = ind T, ind(T⊕T₁) and ind(T₂T₁) add, ind(End) = 0",
            base_trials: 100,
            check: check_index_algebra,
        },
        Property {
            name: "pseudo-inverse contract",
            claim: "‖TST − T‖, ‖STS − S‖ < 1e-9; p − ST and q − TS are projections",
            base_trials: 100,
            check: check_pseudo_inverse,
        },
        Property {
            name: "regularization",
            claim: "ind T̃ = ind T, [Ker T̃] = n[1], ε_*(ind T̃) = 0",
            base_trials: 50,
            check: check_regularization,
        },
        Property {
            name: "quasi-stable rank rigidity",
            claim: "T: M⊕X → N⊕X invertible ⇒ rank M = rank N",
            base_trials: 50,
            check: check_quasi_stable_rank,
        },
        Property {
            name: "K0 invariants",
            claim: "[upu*] = [p], [p⊕q] = [p] + [q], equal classes give partial isometries",
            base_trials: 50,
            check: check_k0_invariants,
        },
        Property {
            name: "module inner product",
            claim: "⟨v, wa⟩ = ⟨v,w⟩a, ⟨va, w⟩ = a*⟨v,w⟩, isomorphic modules have equal rank",
            base_trials: 50,
            check: check_module_inner,
        },
    ]
}

fn morita_properties() -> Vec<Property> {
    vec![
        Property {
            name: "bimodule axioms and positivity",
            claim: "closure and extraction < 1e-8; (z|z), ⟨z,z⟩ ≥ 0; ‖(z|z)‖ = ‖⟨z,z⟩‖ = ‖z‖²",
            base_trials: 50,
            check: check_bimodule_axioms,
        },
        Property {
            name: "induced map dual path",
            claim: "ind(T_i ⊗ I_X) = dim e_i X f_j for two representatives of each generator",
            base_trials: 50,
            check: check_dual_path,
        },
        Property {
            name: "functoriality",
            claim: "(X ⊗_B Y)_* = Y_* ∘ X_*",
            base_trials: 30,
            check: check_functoriality,
        },
        Property {
            name: "Morita isomorphism",
            claim: "(X*)_* X_* = 1, X_* (X*)_* = 1, columns of X_* are basis vectors",
            base_trials: 50,
            check: check_morita,
        },
        Property {
            name: "conjugate tensor",
            claim: "X ⊗_B X* = span(X|X) and X** = X",
            base_trials: 50,
            check: check_conjugate,
        },
        Property {
            name: "tensor associativity",
            claim: "(X ⊗ Y) ⊗ Z = X ⊗ (Y ⊗ Z) as concrete spans",
            base_trials: 20,
            check: check_associativity,
        },
        Property {
            name: "external tensor equivalence",
            claim: "X₁ ⊠ X₂ of imprimitivity bimodules induces an isomorphism",
            base_trials: 10,
            check: check_external_tensor,
        },
        Property {
            name: "canonical catalog",
            claim: "ℂ³ over (M₃, ℂ) induces [[1]] and [1] ↦ 3; linking algebra of ℂ is M₂",
            base_trials: 1,
            check: check_catalog,
        },
    ]
}

/// Runs the selected battery, then loads every fixture.
pub fn run_suite(cfg: &SuiteConfig, suite: Suite, fixtures: &[Fixture]) -> Report {
    let start = Instant::now();
    let mut props: Vec<(u64, Property)> = Vec::new();
    if suite != Suite::Morita {
        props.extend(fredholm_properties().into_iter().enumerate().map(|(i, p)| (i as u64, p)));
    }
    if suite != Suite::Fredholm {
        props.extend(morita_properties().into_iter().enumerate().map(|(i, p)| (100 + i as u64, p)));
    }
    let mut properties: Vec<PropertyResult> = props.iter().map(|(s, p)| p.run(*s, cfg)).collect();
    properties.extend(fixtures.iter().map(|f| check_fixture(f, cfg.tol)));
    let mut notes = vec![NOTE_K1.to_string()];
    notes.push(format!(
        "caps: k ≤ {}, block size ≤ {}, multiplicity ≤ {}, ambient rank ≤ {}, linking dim ≤ {}; tol = {:e}",
        cfg.max_blocks, cfg.max_block_size, cfg.max_multiplicity, cfg.max_ambient_rank, cfg.max_linking_dim, cfg.tol
    ));
    Report {
        suite: suite.name().to_string(),
        seed: cfg.seed,
        properties,
        wall_ms: start.elapsed().as_millis() as u64,
        notes,
    }
}

fn check_fixture(f: &Fixture, tol: f64) -> PropertyResult {
    let failure = match json::parse(&f.text, tol) {
        Ok(_) => None,
        Err(DocumentError::Invariant {
            path,
            source: Error::AxiomViolation { axiom, detail, residual },
        }) => Some(format!("axiom ({axiom}) violated at {path}: {detail} (residual {residual:.3e})")),
        Err(e) => Some(e.to_string()),
    };
    PropertyResult {
        name: format!("fixture {}", f.name),
        claim: "the document parses and satisfies its invariants".to_string(),
        trials: 1,
        max_residual: 0.0,
        pass: failure.is_none(),
        detail: failure,
    }
}

fn random_element(rng: &mut impl Rng, alg: &Algebra) -> AlgebraElement {
    let blocks = alg.block_sizes().iter().map(|&n| random_matrix(rng, n, n)).collect();
    AlgebraElement::new(alg.clone(), blocks).expect("block shapes follow the algebra")
}

fn random_vector(rng: &mut impl Rng, x: &Bimodule) -> CMatrix {
    let coeffs: Vec<C64> = (0..x.dim()).map(|_| random_complex(rng)).collect();
    let v = x.combine(&coeffs);
    let n = cm::frobenius(&v);
    if n > 0.0 {
        v.unscale(n)
    } else {
        v
    }
}

fn check_index_realization(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let a = random_algebra(rng, cfg);
    let n = rng.random_range(1..=cfg.max_ambient_rank);
    let p = random_projection(rng, &a, n);
    let q = random_projection(rng, &a, n);
    let expected = &k0_of_projection(&p, cfg.tol)? - &k0_of_projection(&q, cfg.tol)?;
    let t = standard_index_op(&p, &q, cfg.tol.sqrt())?;
    let mut m = Meter::new(0.0);
    m.equal("index", index(&t, cfg.tol)?, expected);
    m.finish()
}

fn check_index_algebra(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let a = random_algebra(rng, cfg);
    let m1 = random_module(rng, &a, cfg);
    let m2 = random_module(rng, &a, cfg);
    let m3 = random_module(rng, &a, cfg);
    let t = random_operator(rng, &m1, &m2);
    let t1 = random_operator(rng, &m2, &m3);
    let ind = index(&t, tol)?;
    let ind1 = index(&t1, tol)?;
    let mut m = Meter::new(1e-8);
    m.equal("ind T*", index(&t.adjoint(), tol)?, -&ind);
    let u = random_invertible(rng, &m1);
    let v = random_invertible(rng, &m2);
    m.equal("ind VTU", index(&v.compose(&t.compose(&u, tol)?, tol)?, tol)?, ind.clone());
    m.equal("ind T⊕T₁", index(&t.dsum(&t1)?, tol)?, &ind + &ind1);
    m.equal("ind T₁T", index(&t1.compose(&t, tol)?, tol)?, &ind + &ind1);
    let e = random_operator(rng, &m1, &m1);
    m.equal("ind End", index(&e, tol)?.is_zero(), true);
    let t2 = random_operator(rng, &m1, &m2);
    m.equal("ind T′", index(&t2, tol)?, ind.clone());
    match same_index_witness(&t, &t2, tol)? {
        Some(w) => {
            let iw = pseudo_inverse(&w.invertible, tol)?;
            let s = iw.pseudo_inverse.matrix();
            let u = w.invertible.matrix();
            m.bound("U⁻¹U − 1", (s * u).distance(w.invertible.domain().projection()));
            m.bound("UU⁻¹ − 1", (u * s).distance(w.invertible.codomain().projection()));
            m.bound("U + K − (T ⊕ T′*)", (u + w.remainder.matrix()).distance(w.sum.matrix()));
        }
        None => m.require("equal indices but no same-index witness", false),
    }
    m.finish()
}

fn check_pseudo_inverse(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let a = random_algebra(rng, cfg);
    let mm = random_module(rng, &a, cfg);
    let nn = random_module(rng, &a, cfg);
    let t = random_operator(rng, &mm, &nn);
    let w = pseudo_inverse(&t, cfg.tol)?;
    let (tm, sm) = (t.matrix(), w.pseudo_inverse.matrix());
    let mut m = Meter::new(1e-9);
    m.bound("TST − T", (&(tm * sm) * tm).distance(tm));
    m.bound("STS − S", (&(sm * tm) * sm).distance(sm));
    m.bound("kernel projection", w.kernel_projection.projection_defect());
    m.bound("cokernel projection", w.cokernel_projection.projection_defect());
    m.bound("S⁺ − T", pseudo_inverse(&w.pseudo_inverse, cfg.tol)?.pseudo_inverse.matrix().distance(tm));
    let classes = &k0_of_projection(&w.kernel_projection, 1e-6)? - &k0_of_projection(&w.cokernel_projection, 1e-6)?;
    m.equal("kernel classes", classes, w.index.clone());
    m.finish()
}

fn check_regularization(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let a = random_algebra(rng, cfg);
    let mm = random_module(rng, &a, cfg);
    let nn = random_module(rng, &a, cfg);
    let t = random_operator(rng, &mm, &nn);
    let ui = unitized_index(&t, cfg.tol)?;
    let reg = &ui.regularization;
    let mut m = Meter::new(1e-9);
    m.bound("T̃S̃T̃ − T̃", reg.residuals.0);
    m.bound("S̃T̃S̃ − S̃", reg.residuals.1);
    m.equal("ind T̃", ui.restricted_index.clone(), index(&t, cfg.tol)?);
    let kernel = k0_of_projection(&pseudo_inverse(&reg.t, cfg.tol)?.kernel_projection, 1e-6)?;
    m.equal("[Ker T̃]", kernel, ui.unitization.unit_class().scale(reg.n as i64));
    m.equal("ε_*(ind T̃)", ui.unitization.augment_class(&ui.unitized_index), 0);
    m.finish()
}

fn check_quasi_stable_rank(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let a = random_algebra(rng, cfg);
    let mm = random_module(rng, &a, cfg);
    let xx = random_module(rng, &a, cfg);
    let (nm, extra) = (mm.ambient_rank(), rng.random_range(0..=2));
    let nn_rank = nm + extra;
    let w = random_algebra_unitary(rng, &a, nn_rank);
    let pad = AlgebraMatrix::assemble(
        &a,
        &[vec![&AlgebraMatrix::identity(&a, nm)], vec![&AlgebraMatrix::zeros(&a, extra, nm)]],
    )?;
    let embed = &(&w * &pad) * mm.projection();
    let nn = HilbertModule::new(&embed * &embed.adjoint(), tol.sqrt())?;
    let dom = direct_sum(&mm, &xx)?;
    let cod = direct_sum(&nn, &xx)?;
    let zx = AlgebraMatrix::zeros(&a, nn_rank, xx.ambient_rank());
    let zm = AlgebraMatrix::zeros(&a, xx.ambient_rank(), nm);
    let d = AlgebraMatrix::assemble(&a, &[vec![&embed, &zx], vec![&zm, xx.projection()]])?;
    let d = ModuleOperator::compressed(dom.clone(), cod, d)?;
    let t = d.compose(&random_invertible(rng, &dom), tol)?;
    let report = check_quasi_stable(&t, &mm, &nn, &xx, tol)?;
    let mut m = Meter::new(tol.sqrt());
    m.bound("ST − 1", report.left_residual);
    m.bound("TS − 1", report.right_residual);
    m.require("T is not invertible", report.holds());
    m.equal("rank", module_rank(&mm, tol)?, module_rank(&nn, tol)?);
    m.finish()
}

fn check_k0_invariants(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let a = random_algebra(rng, cfg);
    let n = rng.random_range(1..=cfg.max_ambient_rank);
    let p = random_projection(rng, &a, n);
    let q = random_projection(rng, &a, n);
    let u = random_algebra_unitary(rng, &a, n);
    let cp = k0_of_projection(&p, tol)?;
    let mut m = Meter::new(1e-8);
    m.equal("[upu*]", k0_of_projection(&(&(&u * &p) * &u.adjoint()), tol)?, cp.clone());
    m.equal("[p⊕q]", k0_of_projection(&p.dsum(&q)?, tol)?, &cp + &k0_of_projection(&q, tol)?);
    let r = &(&u * &p) * &u.adjoint();
    let v = mv_partial_isometry(&p, &r, tol)?;
    m.bound("v*v − p", (&v.adjoint() * &v).distance(&p));
    m.bound("vv* − upu*", (&v * &v.adjoint()).distance(&r));
    m.finish()
}

fn check_module_inner(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let a = random_algebra(rng, cfg);
    let mm = random_module(rng, &a, cfg);
    let n = mm.ambient_rank();
    let vec = |rng: &mut ChaCha8Rng| -> Result<_> {
        let blocks = a.block_sizes().iter().map(|&s| random_matrix(rng, n * s, s)).collect();
        let raw = AlgebraMatrix::from_blocks(a.clone(), n, 1, blocks)?;
        mm.element(mm.projection() * &raw, tol)
    };
    let v = vec(rng)?;
    let w = vec(rng)?;
    let x = random_element(rng, &a);
    let mut m = Meter::new(1e-8);
    let vw = inner(&v, &w)?;
    let scale = vw.norm().max(1.0) * x.norm().max(1.0);
    m.bound("⟨v, wa⟩", inner(&v, &w.mul_right(&x))?.distance(&vw.mul(&x)) / scale);
    m.bound("⟨va, w⟩", inner(&v.mul_right(&x), &w)?.distance(&x.adjoint().mul(&vw)) / scale);
    m.bound("⟨v, v⟩ ≥ 0", (-inner(&v, &v)?.min_eigenvalue()).max(0.0));
    let u = random_algebra_unitary(rng, &a, n);
    let rotated = HilbertModule::new(&(&u * mm.projection()) * &u.adjoint(), tol.sqrt())?;
    match construct_isomorphism(&mm, &rotated, tol)? {
        Some(_) => m.equal("rank", module_rank(&mm, tol)?, module_rank(&rotated, tol)?),
        None => m.require("no isomorphism onto a unitary conjugate", false),
    }
    m.finish()
}

fn check_bimodule_axioms(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let x = random_bimodule(rng, cfg)?;
    let mut m = Meter::new(1e-8);
    let xx = internal_tensor(&x, &conjugate(&x), tol)?;
    for _ in 0..4 {
        let (u, v) = (random_vector(rng, &x), random_vector(rng, &x));
        let a = x.left().embed(&random_element(rng, x.left_algebra()));
        let b = x.right().embed(&random_element(rng, x.right_algebra()));
        let sa = cm::spectral_norm(&a).max(1.0);
        let sb = cm::spectral_norm(&b).max(1.0);
        m.bound("π_A(a)x ∈ X", x.span().residual(&(&a * &u)) / sa);
        m.bound("xπ_B(b) ∈ X", x.span().residual(&(&u * &b)) / sb);
        m.bound("(x|y) ∈ A", x.left_algebra().extract(&(&u * v.adjoint()))?.1);
        m.bound("⟨x,y⟩ ∈ B", x.right_algebra().extract(&(u.adjoint() * &v))?.1);
        let l = left_inner(&x, &u, &u, tol)?;
        m.bound("‖x‖² = ‖(x|x)‖", (cm::spectral_norm(&u).powi(2) - l.norm()).abs());

        let z = random_vector(rng, &xx);
        let zl = left_inner(&xx, &z, &z, tol)?;
        let zr = right_inner(&xx, &z, &z, tol)?;
        m.bound("(z|z) ≥ 0", (-zl.min_eigenvalue()).max(0.0));
        m.bound("⟨z,z⟩ ≥ 0", (-zr.min_eigenvalue()).max(0.0));
        m.bound("‖(z|z)‖ = ‖⟨z,z⟩‖", (zl.norm() - zr.norm()).abs());
        m.bound("‖z‖² = ‖(z|z)‖", (cm::spectral_norm(&z).powi(2) - zl.norm()).abs());
    }
    m.finish()
}

fn check_dual_path(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let x = random_left_full(rng, cfg)?;
    let oracle = multiplicity_matrix(&x, cfg.tol)?;
    let fredholm = induced_map_fredholm(&x, cfg.tol)?;
    let mut m = Meter::new(0.0);
    m.equal("Fredholm path vs multiplicities", &fredholm.matrix, &oracle.matrix);
    m.require("second representative disagrees", check_well_defined(&x, &fredholm, cfg.tol)?);
    m.finish()
}

fn check_functoriality(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let (x, y) = random_chain(rng, cfg)?;
    let oracle_x = multiplicity_matrix(&x, cfg.tol)?;
    let oracle_y = multiplicity_matrix(&y, cfg.tol)?;
    let oracle_xy = multiplicity_matrix(&internal_tensor(&x, &y, cfg.tol)?, cfg.tol)?;
    let report = verify_functoriality(&x, &y, cfg.tol)?;
    let mut m = Meter::new(0.0);
    m.equal("(X⊗Y)_* vs Y_*X_*", &report.tensor.matrix, &report.composite.matrix);
    m.equal("multiplicity oracle", &oracle_y.after(&oracle_x)?.matrix, &oracle_xy.matrix);
    m.equal("oracle vs Fredholm path", &oracle_xy.matrix, &report.tensor.matrix);
    m.finish()
}

fn check_morita(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let x = random_imprimitivity(rng, cfg)?;
    let oracle = multiplicity_matrix(&x, cfg.tol)?;
    let report = verify_morita_iso(&x, cfg.tol)?;
    let mut m = Meter::new(0.0);
    m.equal("X_* vs multiplicities", &report.forward.matrix, &oracle.matrix);
    if let Some(f) = report.failure() {
        m.require(&f, false);
    }
    m.require("a column of X_* is not a basis vector", report.forward.columns_are_basis_vectors());
    m.finish()
}

fn span_distance(u: &Subspace, v: &Subspace) -> f64 {
    let one = u.basis().iter().map(|b| v.residual(b)).fold(0.0, f64::max);
    let two = v.basis().iter().map(|b| u.residual(b)).fold(0.0, f64::max);
    one.max(two)
}

fn check_conjugate(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let x = random_bimodule(rng, cfg)?;
    let t = internal_tensor(&x, &conjugate(&x), tol)?;
    let d = x.shape().0;
    let products: Vec<CMatrix> = x
        .basis()
        .iter()
        .flat_map(|a| x.basis().iter().map(move |b| a * b.adjoint()))
        .collect();
    let ideal = onb_span((d, d), &products, tol)?;
    let mut m = Meter::new(1e-8);
    m.equal("dimension", t.dim(), ideal.dim());
    m.bound("X ⊗ X* vs (X|X)", span_distance(t.span(), &ideal));
    m.require("X ⊗ X* ≠ (X|X)", check_conjugate_tensor(&x, tol)?);
    let back = conjugate(&conjugate(&x));
    m.require("X** ≠ X", subspace_equal(back.span(), x.span(), tol)?);
    m.finish()
}

fn check_associativity(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let l = random_linking(rng, cfg, 4);
    let parts: Vec<[usize; 4]> = l
        .algebra
        .block_sizes()
        .iter()
        .map(|&n| {
            let a = rng.random_range(1..=n - 3);
            let b = rng.random_range(1..=n - a - 2);
            let c = rng.random_range(1..=n - a - b - 1);
            [a, b, c, n - a - b - c]
        })
        .collect();
    let ps: Vec<CMatrix> = (0..4)
        .map(|k| {
            let start: Vec<usize> = parts.iter().map(|p| p[..k].iter().sum()).collect();
            let len: Vec<usize> = parts.iter().map(|p| p[k]).collect();
            l.window(&start, &len)
        })
        .collect();
    let chain = corner_chain(&l.span, &ps, tol)?;
    let (x, y, z) = (&chain[0], &chain[1], &chain[2]);
    let left = internal_tensor(&internal_tensor(x, y, tol)?, z, tol)?;
    let right = internal_tensor(x, &internal_tensor(y, z, tol)?, tol)?;
    let mut m = Meter::new(1e-8);
    m.bound("(X⊗Y)⊗Z vs X⊗(Y⊗Z)", span_distance(left.span(), right.span()));
    m.require("spans differ", subspace_equal(left.span(), right.span(), tol)?);
    m.finish()
}

fn check_external_tensor(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let small = SuiteConfig {
        max_blocks: 2,
        max_linking_dim: 20,
        max_multiplicity: 1,
        ..cfg.clone()
    };
    let x1 = random_imprimitivity(rng, &small)?;
    let x2 = random_imprimitivity(rng, &small)?;
    let x = external_tensor(&x1, &x2, cfg.tol)?;
    let mut m = Meter::new(0.0);
    m.require("X₁ ⊠ X₂ is not left-full", is_left_full(&x, cfg.tol)?);
    m.require("X₁ ⊠ X₂ is not right-full", is_right_full(&x, cfg.tol)?);
    let report = verify_morita_iso(&x, cfg.tol)?;
    if let Some(f) = report.failure() {
        m.require(&f, false);
    }
    m.finish()
}

fn check_catalog(_: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<Trial> {
    let tol = cfg.tol;
    let mut m = Meter::new(0.0);
    let x = catalog::column_bimodule(3);
    let oracle = multiplicity_matrix(&x, tol)?;
    let fredholm = induced_map_fredholm(&x, tol)?;
    m.equal("multiplicities", oracle.to_string(), "[[1]]".to_string());
    m.equal("Fredholm path", fredholm.to_string(), "[[1]]".to_string());
    let unit = x.left_algebra().unit_class();
    m.equal("[1_M₃] ↦", fredholm.apply(&unit)?.vector().to_vec(), vec![3]);
    let l = linking_algebra(&catalog::column_bimodule(1), tol)?;
    m.equal("linking algebra", l.decomposition.algebra.block_sizes().to_vec(), vec![2]);
    for (name, doc) in catalog::entries() {
        let text = json::serialize(&doc);
        let back = json::parse(&text, tol).map_err(|e| Error::InvalidInput(format!("{name}: {e}")))?;
        m.require(&format!("{name} does not round-trip"), json::serialize(&back) == text);
    }
    m.finish()
}
