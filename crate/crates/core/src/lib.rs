//! Exact ribbon-graph sums for the noncommutative Batalin-Vilkovisky equation.
//!
//! The pipeline is: declare a cyclic algebra with an odd derivation ([`algebra`]),
//! pick a homotopy ([`homotopy`]), enumerate ribbon graphs ([`ribbon`]),
//! contract tensors along them ([`graphsum`]) and check the resulting functional
//! against the BV operator and odd bracket on cyclic words ([`bvcalc`]).

pub mod algebra;
pub mod bvcalc;
pub mod error;
pub mod graphsum;
pub mod homotopy;
pub mod ribbon;
pub mod superlinear;

pub use error::{Error, Result};
