//! Exact computation with integral p-adic representations of finite p-groups.
//!
//! The library recognizes permutation lattices over group rings Z_p[H] with
//! verified certificates, checks Weiss-type criteria, and synthesizes the
//! special HNN-extension presentation attached to a permutation certificate,
//! cross-checked by an abelianized Reidemeister-Schreier computation. All
//! arithmetic is exact.

pub mod algebra;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod hnn;
pub mod io;
pub mod lattice;
pub mod suites;
pub mod weiss;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::PrecisionContext;
