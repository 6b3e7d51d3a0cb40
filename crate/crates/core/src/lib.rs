//! Exact arithmetic for sparse Laurent polynomial compositions `f(g)` and the
//! lacunary-power problems built on them: table verification, exponent
//! lattices, Universal Hilbert Set checks, composition gaps and digit patterns of
//! perfect powers.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classify;
pub mod coeffield;
pub mod compgap;
pub mod digits;
pub mod lattice;
pub mod parser;
pub mod polycore;
pub mod uhs;

pub use coeffield::{BigInt, GaussianRational, Rational};
pub use polycore::{compose, ExponentVector, MonomialImage, PolyError, SparsePoly, UniPoly};
