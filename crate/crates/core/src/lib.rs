//! Exact computations for rational approximation on smooth complete toric varieties.

pub mod approx;
pub mod arith;
pub mod collections;
pub mod corpus;
pub mod curves;
pub mod divisor;
pub mod error;
pub mod exact;
pub mod fan;
pub mod kleinschmidt;
pub mod positivity;
mod serde_util;

pub use error::{Error, Result};
pub use fan::{Fan, FanFile, Relation, ValidationReport, Wall};
pub use divisor::{PicBasis, TDivisor};
