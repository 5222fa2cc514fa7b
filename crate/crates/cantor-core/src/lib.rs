//! Exact measure theory on Cantor space M = {0,1}^N, truncated at finite depth.
//!
//! Everything here is a finite object: words are bit prefixes, cylinder sets
//! are explicit leaf sets at a declared depth, measures are tables of
//! nonnegative rationals on the leaves, kernels are tables of measures indexed
//! by the atoms of a finite level. All arithmetic is exact; there is no
//! floating point anywhere and every identity the library promises holds with
//! zero tolerance.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is
//! enabled; the companion `cantor-cli` crate supplies file formats and a
//! batch command-line interface.

#![cfg_attr(not(feature = "std"), no_std)]

#[macro_use]
extern crate alloc;

pub mod cylinder;
pub mod finite;
pub mod kernel;
pub mod laws;
pub mod measure;
pub mod point;
pub mod rat;
pub mod tower;
pub mod tree;
pub mod word;

mod error;

pub use error::CoreError;
