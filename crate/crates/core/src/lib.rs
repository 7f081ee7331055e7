#![no_std]
// indexed loops mirror the matrix arithmetic they implement
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chebyshev;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod lms;
mod math;
pub mod simnet;

pub use error::{Error, Result};
