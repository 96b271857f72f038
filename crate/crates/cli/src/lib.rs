//! Command-line and HTTP front end for `lattice-core`.

pub mod json;
pub mod payload;
pub mod render;
pub mod server;
