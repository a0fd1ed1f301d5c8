//! Exact rational scalars and dense polynomials.

pub mod comb;
mod poly;
mod rational;

pub use comb::Pascal;
pub use poly::Poly;
pub use rational::{rat, Rational};
