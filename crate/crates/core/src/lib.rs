//! Exact verification of zero-product characterizations of (generalized)
//! Jordan derivations on finite matrix rings.
//!
//! Every map space ("all derivations", "all maps with the zero-product
//! property", ...) is computed as a submodule of the flattened map
//! coordinates over `Z/mZ`, canonicalized with the Howell normal form, so
//! the structural results become module equalities that can be checked
//! exactly.

pub mod addmaps;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod rings;
pub mod suite;

pub use error::{Error, Result};
