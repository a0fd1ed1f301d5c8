//! Exact-arithmetic toolkit for bispectral polynomial families.
//!
//! Polynomial eigenfunctions of finite-order differential operators are
//! computed over the rationals, paired with the banded recurrences they
//! satisfy, and pushed through linear and Geronimus transformations. Every
//! identity is checked exactly; nothing here uses floating point.

pub mod bispectral;
pub mod darboux;
pub mod det;
pub mod diffop;
pub mod eigenpoly;
pub mod error;
pub mod exact;
pub mod hermite;
pub mod recurrence;

pub use error::{Error, Result};
pub use exact::{rat, Poly, Rational};
