//! Interchange format, random instances, the property suite and the example
//! catalog.

pub mod catalog;
pub mod generate;
pub mod json;
pub mod suite;

pub use generate::{generate, SuiteConfig};
pub use json::{Document, DocumentError};
pub use suite::{run_suite, Fixture, PropertyResult, Report, Suite};
