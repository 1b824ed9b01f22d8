pub mod codes;
pub mod error;
pub mod fermion;
pub mod formats;
pub mod gf2;
pub mod lattice;
pub mod laurent;
pub mod linegraph;
pub mod pauli;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
