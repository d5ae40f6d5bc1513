//! Outage, symbol-error and capacity analysis of a dual-hop decode-and-forward
//! link with an underwater optical first hop and an α-μ RF second hop.

// `!(x > 0.0)` also rejects NaN; the quadrature tables keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod channels;
pub mod error;
pub mod metrics;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
