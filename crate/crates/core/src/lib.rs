// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod degeneracy;
pub mod error;
pub mod gap;
pub mod harness;
mod hp;
pub mod predictor;
pub mod quadrature;
pub mod recovery;
pub mod signal;
pub mod transfer;
pub mod wiener;
