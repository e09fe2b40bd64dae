pub mod algebra;
pub mod bimodule;
pub mod error;
pub mod fredholm;
pub mod lab;
pub mod matrix;
pub mod module;
pub mod morita;

pub use algebra::{Algebra, AlgebraElement, AlgebraMatrix, K0Class, Unitization};
pub use bimodule::{Bimodule, Representation};
pub use error::{Error, Result};
pub use fredholm::{IndexWitness, ModuleOperator};
pub use matrix::{CMatrix, Subspace, C64, DEFAULT_TOL};
pub use module::{HilbertModule, ModuleElement};
pub use morita::InducedMap;
