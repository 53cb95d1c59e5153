// Negated comparisons such as `!(x > 0.0)` are used on purpose: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod currents;
pub mod error;
pub mod landau;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod ring;
pub mod specfun;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
