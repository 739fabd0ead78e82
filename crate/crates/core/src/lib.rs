//! Exact arithmetic for ordinal segments below epsilon_0 and a few symbolic
//! extensions: counting series by term-complexity norm, semilinear subsets and
//! their densities, and closed-form asymptotic probabilities for recognizer
//! properties.
//!
//! The crate is `no_std` + `alloc`; everything is exact (`BigUint`/`BigRational`)
//! except the radius-of-convergence estimates, which are explicitly `f64`.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod config;
pub mod counting;
pub mod ordinal;
pub mod recognizer;
pub mod selfcheck;
pub mod semilinear;
pub mod tauberian;

pub use config::Config;
pub use ordinal::{Ordinal, Segment, SymbolicSegment};
