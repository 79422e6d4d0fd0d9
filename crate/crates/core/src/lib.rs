// NaN must fail every range check, hence `!(x > 0.0)` style guards
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod exterior;
pub mod flow;
pub mod lattice;
pub mod measures;
pub mod numeric;
pub mod report;

pub use error::{Error, Result};
