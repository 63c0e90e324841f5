//! Formal power series solutions of first-order autonomous algebraic ODEs
//! `F(y, y') = 0`, computed from the places of the plane curve `F(y, z) = 0`.

pub mod cli;
pub mod error;
pub mod numbers;
pub mod poly;
pub mod puiseux;
pub mod ring;
pub mod series;
pub mod solver;
pub mod upoly;

pub use error::{AodeError, Result};
