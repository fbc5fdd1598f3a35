//! Permutation groups: products, orbits, stabilizer chains, primitivity.

mod chain;
mod group;
mod orbit;
mod permutation;
mod schreier;

pub use chain::{schreier_sims, sifting_chain, Level, ProductReplacement, StabilizerChain, CHAIN_SEED};
pub use group::PermGroup;
pub use orbit::{Orbit, OrbitSeed};
pub use permutation::Permutation;
pub use schreier::SchreierTree;
