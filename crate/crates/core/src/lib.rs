//! Convex geometry of symmetric (bosonic) quantum states: symmetric
//! subspaces, symmetric separable decompositions, joint numerical ranges of
//! symmetric product states and mean-field ground energies.

pub mod error;
pub mod ground;
pub mod io;
pub mod models;
pub mod ops;
pub mod random;
pub mod range;
pub mod separable;
pub mod symmetric;

pub use error::{Error, Result};
