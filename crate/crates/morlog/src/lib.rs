//! Exact-arithmetic kernels for logarithmic operations built from power
//! operations, together with the combinatorial machinery they rest on:
//! p-adic integers and valuations, truncated power series, formal group
//! laws with level structures, Burnside rings of finite abelian p-groups,
//! and Hecke operators acting on lattices.
//!
//! Everything is computed over exact coefficient rings (arbitrary-precision
//! rationals or fixed-precision p-adic integers); no floating point is used
//! anywhere. Identities are verified by explicit computation at desk scale,
//! with independent brute-force oracles in the test suite.

pub mod burnside;
pub mod error;
pub mod exact;
pub mod fgl;
pub mod hecke;
pub mod intmat;
pub mod logops;
pub mod report;
pub mod ring;
pub mod runner;
pub mod selftest;

pub use error::{Error, Result};
