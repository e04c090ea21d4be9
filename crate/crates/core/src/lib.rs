//! Exact algebra, jet counting and determinantal checks over `Q` and `F_q`.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel counting is
//! supplied by the caller through [`jets::ShardRunner`].

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod configurations;
pub mod determinantal;
pub mod error;
pub mod jets;

pub use error::{Error, Result};
