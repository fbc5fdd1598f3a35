//! Construction and verification of thick flag-transitive incidence
//! geometries built from primitive permutation groups.

pub mod config;
pub mod construct;
pub mod geometry;
pub mod error;
pub mod actions;
pub mod perm;
pub mod verify;

pub use error::{Error, Result};
