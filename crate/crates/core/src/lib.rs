//! Simulation toolkit for topological error correction on small cluster states.
//!
//! The crate combines Z2 cell complexes, a stabilizer tableau, an exact
//! state-vector oracle, the eight-qubit syndrome decoder with its Monte-Carlo
//! harness, and a local entanglement witness.

pub mod cell_complex;
pub mod cluster;
pub mod dense;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod rng;
pub mod tableau;
pub mod tec;
pub mod witness;

pub use error::{Error, Result};
pub use pauli::{Pauli, PauliOperator};
pub use tableau::{Gate, StabilizerTableau};

pub const VERSION: &str = concat!("tecsim ", env!("CARGO_PKG_VERSION"));
