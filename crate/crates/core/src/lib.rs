// `!(x >= 0.0)` style comparisons are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod channels;
pub mod cli;
pub mod displacement;
pub mod error;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
