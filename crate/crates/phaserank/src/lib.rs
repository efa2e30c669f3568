//! Phase analysis of sectorial complex matrices.
//!
//! A sectorial matrix (numerical range excluding the origin) is congruent to
//! a diagonal unitary matrix; the angles of that diagonal are its canonical
//! phases and the number of nonzero phases is its phase-rank. This crate
//! computes those quantities and solves two low phase-rank approximation
//! problems — one measured through matrix geometric means, one through a
//! geodesic distance on the strictly accretive matrices — together with the
//! supporting machinery: numerical-range boundaries, symmetric gauge
//! functions, matrix means, symmetric polar decompositions, seeded random
//! generators, and a verification harness exercising the closed-form optima.

pub mod error;
pub mod gauge;
pub mod geodesic;
pub mod io;
pub mod linalg;
pub mod lowprank;
pub mod means;
pub mod nrange;
pub mod randgen;
pub mod sectorial;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::CMat;
