//! Exact arithmetic over the rationals and number fields.

pub mod algebraic;
pub mod complex;
pub mod field;
pub mod json;
pub mod qpoly;
pub mod tower;

pub use algebraic::AlgebraicNumber;
pub use field::{degree_cap, set_degree_cap, with_degree_cap, NumberField};
pub use tower::{adjoin_root, all_roots, roots_in_field, APoly};
