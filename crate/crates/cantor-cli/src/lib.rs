//! File formats for the cantor artifact types, shared between the `cantor`
//! binary and its tests.

pub mod formats;
