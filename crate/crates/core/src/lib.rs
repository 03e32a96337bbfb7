//! Exact computations with the Ramanujan operad `Ram`, the cooperad `R` of
//! forest-graded quotient algebras, and the comparison map `ρ : Ram → R*`.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, reports and the command
//! line live in the `ramop` companion crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod atom;
pub mod bidegree;
pub mod component;
pub mod cooperad;
pub mod dual;
pub mod error;
pub mod forms;
pub mod graph;
pub mod linear;
pub mod operad;
pub mod ram;
pub mod ramanujan;
pub mod report;

pub use atom::{Atom, Transport};
pub use bidegree::{BiDegree, DimTable};
pub use error::{Error, Limits, Result};
pub use linear::Rational;
