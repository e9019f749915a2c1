//! Exact-arithmetic toolkit for masses of positive definite integral ternary
//! quadratic forms.
//!
//! Two independent routes to the same numbers:
//!
//! * a *global* route which enumerates reduced forms of bounded determinant
//!   and counts integral automorphisms ([`forms`]), and
//! * a *local* route which enumerates p-adic genus data, computes normalized
//!   representation densities, and assembles them into Dirichlet series
//!   ([`local_odd`], [`local_two`], [`series`]).
//!
//! All arithmetic is exact: integers are `i64`/`BigInt`, densities and series
//! coefficients are `BigRational`. No floating point is used anywhere.

pub mod arith;
pub mod dirichlet;
pub mod forms;
pub mod local_odd;
pub mod local_two;
pub mod series;

pub use arith::Rat;
