//! Canonical example documents.

use serde_json::json;

use super::json::{self, Document};
use crate::algebra::{minimal_projection, Algebra, AlgebraMatrix};
use crate::bimodule::{corner_bimodule, make_bimodule, Bimodule, Representation};
use crate::fredholm::ModuleOperator;
use crate::matrix::{self as cm, CMatrix, DEFAULT_TOL};
use crate::module::HilbertModule;
use crate::morita::multiplicity_matrix;

/// `ℂⁿ` as an `Mₙ`-`ℂ` bimodule.
pub fn column_bimodule(n: usize) -> Bimodule {
    let basis: Vec<CMatrix> = (0..n).map(|i| cm::unit(n, 1, i, 0)).collect();
    make_bimodule(
        Representation::new(Algebra::full_matrix(n)),
        Representation::new(Algebra::complex()),
        &basis,
        DEFAULT_TOL,
    )
    .expect("ℂⁿ is an Mₙ-ℂ bimodule")
}

/// Matrix units of `M_n(ℂ)`.
pub fn full_matrix_span(n: usize) -> Vec<CMatrix> {
    (0..n * n).map(|k| cm::unit(n, n, k / n, k % n)).collect()
}

fn m2_m3() -> Algebra {
    Algebra::with_blocks(&[2, 3]).expect("positive sizes")
}

/// `e₁₁ ⊕ 1` in `M₂ ⊕ M₃`.
fn sample_projection() -> AlgebraMatrix {
    let a = m2_m3();
    let e = minimal_projection(&a, 0).expect("block 0 exists");
    let blocks = vec![e.block(0).clone(), cm::identity(3)];
    AlgebraMatrix::from_blocks(a, 1, 1, blocks).expect("block shapes follow the algebra")
}

/// `0: ℂ² → ℂ¹`, of index `(1)`.
pub fn zero_operator() -> ModuleOperator {
    let c = Algebra::complex();
    ModuleOperator::zero(&HilbertModule::free(&c, 2), &HilbertModule::free(&c, 1)).expect("zero operator")
}

/// Every valid canonical document, keyed by file name.
pub fn entries() -> Vec<(&'static str, Document)> {
    let cn = column_bimodule(3);
    let corner = corner_bimodule(
        &full_matrix_span(3),
        &cm::diag_real(&[1.0, 0.0, 0.0]),
        &cm::diag_real(&[0.0, 1.0, 1.0]),
        DEFAULT_TOL,
    )
    .expect("corner of M₃");
    vec![
        ("algebra_m2_m3.json", Document::Algebra(m2_m3())),
        ("projection.json", Document::Matrix(sample_projection())),
        (
            "module.json",
            Document::Module(HilbertModule::new(sample_projection(), DEFAULT_TOL).expect("projection")),
        ),
        ("zero_op.json", Document::Operator(zero_operator())),
        ("c_over_c.json", Document::Bimodule(column_bimodule(1))),
        (
            "induced_map.json",
            Document::InducedMap(multiplicity_matrix(&cn, DEFAULT_TOL).expect("ℂ³ map")),
        ),
        ("cn.json", Document::Bimodule(cn)),
        ("corner_m3.json", Document::Bimodule(corner)),
        ("linking_m3.json", Document::LinkingAlgebra(full_matrix_span(3))),
    ]
}

/// `ℂ²` over `(M₂, ℂ)` with only the first basis vector: not closed under
/// the left action.
pub fn corrupted_bimodule_text() -> String {
    let doc = json!({
        "kind": "bimodule",
        "format_version": json::FORMAT_VERSION,
        "left": {"algebra": [2], "multiplicities": [1]},
        "right": {"algebra": [1], "multiplicities": [1]},
        "basis": [[[[1.0, 0.0]], [[0.0, 0.0]]]],
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// Documents that must fail validation, keyed by file name.
pub fn negative_fixtures() -> Vec<(&'static str, String)> {
    vec![("corrupted_bimodule.json", corrupted_bimodule_text())]
}
