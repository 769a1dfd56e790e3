//! Exact computations with finite-dimensional coquasi-Hopf algebras given by
//! structure constants: axiom verification, gauge twists, comodule algebras,
//! Galois-type extensions and the associated bialgebroid.

#![allow(clippy::needless_range_loop)]

pub mod bialgebroid;
pub mod comodule;
pub mod coquasi;
pub mod cqhfile;
pub mod exactlin;
pub mod fixtures;
pub mod galois;
pub mod group;
pub mod sweedler;
pub mod twist;

mod error;
mod report;

pub use error::Error;
pub use report::{CheckEntry, CheckReport};
