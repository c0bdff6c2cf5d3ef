//! Identity kinds, constraint systems, checkers and the constructive
//! decompositions for maps on matrix rings.

mod constraints;
mod decompose;
mod identity;
mod peirce;
mod steps;

use serde::{Deserialize, Serialize};

pub use constraints::{
    check, constraint_system, exhaustive_pair_list, quantified_pairs, solve_all, CheckReport,
    ConstraintSystem, Witness, CONSTRAINT_ENTRY_GUARD,
};
pub use decompose::{
    decompose_inner_plus_lifted, decompose_theorem21, decompose_trivial_extension,
    verify_trivial_extension_parts, DecompositionTrace, InnerPlusLifted, TrivialExtParts,
};
pub use identity::{Identity, IdentityKind};
pub use peirce::{peirce_component_check, peirce_components};
pub use steps::verify_proof_steps;

use crate::error::{Error, Result};

/// One labelled check inside a multi-part report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
    /// Number of instances evaluated.
    pub instances: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// A list of named checks; passes iff every entry does.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistReport {
    pub passed: bool,
    pub checks: Vec<NamedCheck>,
}

impl ChecklistReport {
    pub(crate) fn new(checks: Vec<NamedCheck>) -> Self {
        ChecklistReport {
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &NamedCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub(crate) fn require_odd(m: u64) -> Result<()> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenModulus(m));
    }
    Ok(())
}
