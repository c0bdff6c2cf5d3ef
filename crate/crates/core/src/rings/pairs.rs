use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Ring;
use crate::error::{Error, Result};
use crate::linalg::{solve_homogeneous, ResidueMatrix, SolutionModule};

/// Upper bound on `|ring|^2` for exhaustive pair scans.
pub const EXHAUSTIVE_GUARD: u128 = 100_000_000;

/// How the pairs for a conditional identity are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    /// Every ordered pair of ring elements satisfying the hypothesis.
    Exhaustive,
    /// The zero-product pair schemas of the matrix-ring argument,
    /// instantiated over basis elements.
    #[default]
    Structured,
}

impl std::str::FromStr for PairMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(PairMode::Exhaustive),
            "structured" => Ok(PairMode::Structured),
            other => Err(format!("unknown pair mode `{other}`")),
        }
    }
}

/// Hypothesis on a pair `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairCondition {
    /// `ab = ba = 0`
    ZeroProduct,
    /// `ab + ba = 0`
    JordanZero,
    /// `ab = 0`
    LeftZero,
}

impl PairCondition {
    pub fn holds(self, ring: &Ring, a: &[u64], b: &[u64]) -> bool {
        match self {
            PairCondition::ZeroProduct => {
                Ring::is_zero(&ring.mul(a, b)) && Ring::is_zero(&ring.mul(b, a))
            }
            PairCondition::JordanZero => Ring::is_zero(&ring.jordan_product(a, b)),
            PairCondition::LeftZero => Ring::is_zero(&ring.mul(a, b)),
        }
    }
}

pub type Pair = (Vec<u64>, Vec<u64>);

/// `{b : condition(a, b)}`, which is a submodule for each fixed `a`.
pub fn fiber_module(ring: &Ring, condition: PairCondition, a: &[u64]) -> SolutionModule {
    let left = ring.left_mul_matrix(a);
    let right = ring.right_mul_matrix(a);
    let system = match condition {
        PairCondition::ZeroProduct => left.vstack(&right).expect("same shape"),
        PairCondition::JordanZero => left.add(&right).expect("same shape"),
        PairCondition::LeftZero => left,
    };
    solve_homogeneous(&system)
}

pub(crate) fn exhaustive_guard(ring: &Ring) -> Result<u128> {
    let size = ring
        .size()
        .ok_or_else(|| Error::Guard(format!("{} is too large to enumerate", ring.descriptor())))?;
    match size.checked_mul(size) {
        Some(sq) if sq <= EXHAUSTIVE_GUARD => Ok(size),
        _ => Err(Error::Guard(format!(
            "{} has {size} elements; exhaustive pair scans need |R|^2 <= {EXHAUSTIVE_GUARD}",
            ring.descriptor()
        ))),
    }
}

/// Whether exhaustive scans are allowed on this ring.
pub fn exhaustive_allowed(ring: &Ring) -> bool {
    exhaustive_guard(ring).is_ok()
}

/// All ordered pairs satisfying `condition`, in lexicographic order of the
/// element indices. Each fiber is solved as a linear system and then
/// enumerated, which gives the same set as a full scan.
pub fn exhaustive_pairs(ring: &Ring, condition: PairCondition) -> Result<Vec<Pair>> {
    let size = exhaustive_guard(ring)?;
    let fibers: Vec<Vec<Pair>> = (0..size as u64)
        .into_par_iter()
        .map(|idx| {
            let a = ring.element_at(u128::from(idx));
            let fiber = fiber_module(ring, condition, &a);
            let mut bs = fiber.elements(size).expect("fiber is a subset of the ring");
            bs.sort();
            bs.into_iter().map(|b| (a.clone(), b)).collect()
        })
        .collect();
    Ok(fibers.into_iter().flatten().collect())
}

/// One instantiated zero-product schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaPair {
    pub schema: usize,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

/// Number of zero-product schemas used by the structured mode.
pub const SCHEMA_COUNT: usize = 9;

/// The zero-product pairs of the matrix-ring decomposition argument, with
/// `E = E_11`, `F = 1 - E` and `A`, `B` ranging over the basis:
///
/// 0. `(E, FAF)`
/// 1. `(EAE, F)`
/// 2. `(EAF, EBF)`
/// 3. `(FAE, FBE)`
/// 4. `(EAE + EAEBF, F - EBF)`
/// 5. `(F + FAE, FAEBE - EBE)`
/// 6. `(E + EAF, FBF - EAFBF)`
/// 7. `(E - FBE, FAFBE + FAF)`
/// 8. `(EAFBE + EAF - FBE - F, -E - EAF + FBE + FBEAF)`
pub fn schema_pairs(ring: &Ring) -> Result<Vec<SchemaPair>> {
    if ring.matrix_shape().is_none() {
        return Err(Error::InvalidRing(format!(
            "structured pairs need a matrix ring, got {}",
            ring.descriptor()
        )));
    }
    let e = ring.matrix_unit(0, 0)?;
    let f = ring.sub(&ring.one(), &e);
    let basis = ring.basis_elements();
    let p = |xs: &[&[u64]]| ring.mul_all(xs);
    let add = |x: &[u64], y: &[u64]| ring.add(x, y);
    let sub = |x: &[u64], y: &[u64]| ring.sub(x, y);
    let mut out = Vec::new();
    let mut push = |schema: usize, a: Vec<u64>, b: Vec<u64>| {
        debug_assert!(PairCondition::ZeroProduct.holds(ring, &a, &b), "schema {schema}");
        out.push(SchemaPair { schema, a, b });
    };
    for a in &basis {
        push(0, e.clone(), p(&[&f, a, &f]));
    }
    for a in &basis {
        push(1, p(&[&e, a, &e]), f.clone());
    }
    for a in &basis {
        for b in &basis {
            push(2, p(&[&e, a, &f]), p(&[&e, b, &f]));
        }
    }
    for a in &basis {
        for b in &basis {
            push(3, p(&[&f, a, &e]), p(&[&f, b, &e]));
        }
    }
    for a in &basis {
        for b in &basis {
            let eae = p(&[&e, a, &e]);
            let ebf = p(&[&e, b, &f]);
            push(4, add(&eae, &p(&[&eae, b, &f])), sub(&f, &ebf));
        }
    }
    for a in &basis {
        for b in &basis {
            let fae = p(&[&f, a, &e]);
            push(
                5,
                add(&f, &fae),
                sub(&p(&[&fae, b, &e]), &p(&[&e, b, &e])),
            );
        }
    }
    for a in &basis {
        for b in &basis {
            let eaf = p(&[&e, a, &f]);
            push(
                6,
                add(&e, &eaf),
                sub(&p(&[&f, b, &f]), &p(&[&eaf, b, &f])),
            );
        }
    }
    for a in &basis {
        for b in &basis {
            let fbe = p(&[&f, b, &e]);
            let faf = p(&[&f, a, &f]);
            push(7, sub(&e, &fbe), add(&p(&[&faf, b, &e]), &faf));
        }
    }
    for a in &basis {
        for b in &basis {
            let eaf = p(&[&e, a, &f]);
            let fbe = p(&[&f, b, &e]);
            let x = sub(&sub(&add(&p(&[&eaf, b, &e]), &eaf), &fbe), &f);
            let y = add(
                &add(&sub(&ring.neg(&e), &eaf), &fbe),
                &p(&[&fbe, a, &f]),
            );
            push(8, x, y);
        }
    }
    Ok(out)
}

/// Pairs for `condition` under `mode`.
///
/// The structured mode for the weaker hypotheses (`ab + ba = 0`, `ab = 0`)
/// is the zero-product schemas together with every ordered basis pair that
/// satisfies the hypothesis.
pub fn condition_pairs(ring: &Ring, condition: PairCondition, mode: PairMode) -> Result<Vec<Pair>> {
    match mode {
        PairMode::Exhaustive => exhaustive_pairs(ring, condition),
        PairMode::Structured => {
            let mut out: Vec<Pair> = schema_pairs(ring)?.into_iter().map(|p| (p.a, p.b)).collect();
            if condition != PairCondition::ZeroProduct {
                for i in 0..ring.rank() {
                    for j in 0..ring.rank() {
                        let (a, b) = (ring.basis(i), ring.basis(j));
                        if condition.holds(ring, &a, &b) {
                            out.push((a, b));
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// All pairs with `ab = ba = 0` under `mode`.
pub fn zero_product_pairs(ring: &Ring, mode: PairMode) -> Result<Vec<Pair>> {
    condition_pairs(ring, PairCondition::ZeroProduct, mode)
}

/// Builds the stacked matrix of `b ↦ (ab, ba)`; exposed for tests that
/// cross-check fibers against direct scans.
pub fn annihilator_system(ring: &Ring, a: &[u64]) -> ResidueMatrix {
    ring.left_mul_matrix(a).vstack(&ring.right_mul_matrix(a)).expect("same shape")
}
