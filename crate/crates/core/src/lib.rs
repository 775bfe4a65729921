//! Exact verification of order bounds for metacyclic groups acting on
//! compact Riemann surfaces.

pub mod arith;
pub mod bounds;
pub mod fuchsian;
pub mod genvec;
pub mod groups;
pub mod rational;

pub use rational::ExactRational;
