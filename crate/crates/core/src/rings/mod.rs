//! Finite unital rings over `Z/mZ` and their bimodules.
//!
//! Supported rings are `Z/mZ`, the dual numbers `Z/mZ[ε]/(ε²)`, full
//! matrix rings over either, and trivial extensions `T(A, A)`. Elements
//! are coordinate vectors in the canonical basis documented on
//! [`RingDescriptor`].

mod bimodule;
mod descriptor;
mod pairs;
mod ring;

pub use bimodule::{Bimodule, PeirceComponents};
pub use descriptor::{BimoduleDescriptor, RingDescriptor, MAX_DEPTH, MAX_RANK};
pub use pairs::{
    annihilator_system, condition_pairs, exhaustive_allowed, exhaustive_pairs, fiber_module,
    schema_pairs, zero_product_pairs, Pair, PairCondition, PairMode, SchemaPair,
    EXHAUSTIVE_GUARD, SCHEMA_COUNT,
};
pub use ring::{trivial_extension, Ring, RingElement};
