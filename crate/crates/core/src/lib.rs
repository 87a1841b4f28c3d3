pub mod catalogue;
pub mod cli;
pub mod dist;
pub mod dynamic;
pub mod grid;
pub mod interval;
pub mod error;
pub mod measures;
pub mod order;
pub mod quad;
pub mod report;
pub mod repro;
pub mod special;

pub use dist::{DistSpec, Distribution};
pub use error::{Error, Result};
pub use measures::MeasureValue;
pub use quad::{IntegralResult, QuadratureConfig};
pub use report::{PropositionReport, Relation, Status};
