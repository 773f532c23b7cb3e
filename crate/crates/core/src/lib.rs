#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail these checks

pub mod bounds;
pub mod decoherence;
pub mod error;
pub mod fieldgrid;
pub mod harness;
pub mod holography;
pub mod measurement;
pub mod modes;
pub mod polariton;
pub mod rng;
pub mod tomography;

pub use error::{Error, Result};
