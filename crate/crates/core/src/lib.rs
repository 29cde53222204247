#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
