//! Inscribed-rectangle search on sampled Jordan curves, and exact
//! linking-form, correction-term, lattice-embedding and Seifert-form
//! computations obstructing Möbius bands bounded by torus and 2-bridge knots.
//!
//! The crate is `no_std` and only needs `alloc`. Floating point is confined
//! to the geometry modules ([`curve`], [`rect`]); everything else runs on
//! arbitrary-precision integers and rationals.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod curve;
pub mod dinv;
mod error;
pub mod exact;
pub mod lattice;
pub mod linking;
pub mod rect;
pub mod report;
pub mod seifert;

pub use error::{Error, Result};
