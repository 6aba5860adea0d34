//! Exact-arithmetic toolkit for Pólya groups of number fields.
//!
//! The crate is organized around a pipeline: univariate integer polynomials
//! ([`poly`]) define number fields ([`numfield`]) whose class groups carry
//! Pólya groups ([`polya`]); quadratic fields get a dedicated fast engine
//! ([`quadratic`]) that doubles as an independent oracle; [`dihedral`] builds
//! and certifies D_l extensions of the rationals from parametric families.
//!
//! All computation is exact (arbitrary-precision integers, Hermite/Smith
//! normal forms, continued fractions). Floating point appears only as a
//! search heuristic inside lattice reduction; every result it suggests is
//! verified exactly before use.

pub mod arith;
pub mod config;
pub mod dihedral;
pub mod linalg;
pub mod numfield;
pub mod poly;
pub mod polya;
pub mod quadratic;
pub mod report;
pub mod rng;
