//! Finite combinatorial models of stratified fibre bundles over cell complexes.

pub mod cellbase;
pub mod doc;
mod error;
pub mod fincat;
pub mod funcspace;
mod report;
pub mod oracle;
pub mod strabundle;
pub mod triviality;

pub use error::{Error, ErrorClass, Result};
pub use report::ValidationReport;
