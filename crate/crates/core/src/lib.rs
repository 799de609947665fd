// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exit_laws;
pub mod grid;
pub mod killed;
pub mod mc;
pub mod params;
pub mod reflected;
pub mod special;
pub mod verify;
mod triple;

pub use error::{Error, Result};
pub use params::{make_params, StableParams};
pub use special::QuadratureSpec;
