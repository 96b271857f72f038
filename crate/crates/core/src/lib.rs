//! Classification of lattice states: bipartite states on C^4 ⊗ C^4 that are
//! uniform mixtures of the 16 Pauli-rotated maximally entangled vectors
//! indexed by a subset of the 4x4 lattice.
//!
//! The pipeline is exact: partial-transpose positivity is decided
//! combinatorially, PPT entanglement by the quadruple-free point test, and
//! separability by a verified covering with special quadruples. Floating
//! point only enters in the spectral cross-checks and the witness numerics.

pub mod classify;
pub mod covering;
pub mod dense;
pub mod eigen;
pub mod error;
pub mod pattern;
pub mod pauli;
pub mod quadruples;
pub mod simplex;
pub mod state;
pub mod symmetry;
pub mod witness;

pub use classify::{classify, Classification, Verdict};
pub use error::{Error, Result};
pub use pattern::Pattern;
pub use pauli::{LatticePoint, PauliIndex, PauliString, Phase};
