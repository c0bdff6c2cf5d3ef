use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::identity::{eval_terms, symbolic_rows, Identity};
use crate::addmaps::AdditiveMap;
use crate::error::{Error, Result};
use crate::linalg::{self, gcd, solve_homogeneous, ResidueMatrix, SolutionModule};
use crate::rings::{
    condition_pairs, exhaustive_pairs, fiber_module, Bimodule, BimoduleDescriptor, Pair,
    PairMode, Ring, RingDescriptor,
};

/// Largest constraint matrix (in entries) [`constraint_system`] will build.
pub const CONSTRAINT_ENTRY_GUARD: usize = 50_000_000;

/// Outcome of evaluating an identity on a concrete map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// The first pair on which an identity fails, with the nonzero residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub residual: Vec<u64>,
}

impl CheckReport {
    fn pass() -> Self {
        CheckReport {
            passed: true,
            witness: None,
        }
    }

    fn fail(a: &[u64], b: &[u64], residual: Vec<u64>) -> Self {
        debug_assert!(residual.iter().any(|&x| x != 0));
        CheckReport {
            passed: false,
            witness: Some(Witness {
                a: a.to_vec(),
                b: b.to_vec(),
                residual,
            }),
        }
    }
}

/// A homogeneous system over the flattened map coordinates whose solutions
/// are exactly the maps satisfying `identity`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub identity: Identity,
    pub ring: RingDescriptor,
    pub bimodule: BimoduleDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_mode: Option<PairMode>,
    pub pair_count: usize,
    pub matrix: ResidueMatrix,
}

impl ConstraintSystem {
    pub fn solve(&self) -> SolutionModule {
        solve_homogeneous(&self.matrix)
    }
}

fn check_map_space(bimodule: &Bimodule) -> Result<()> {
    if bimodule.rank() == 0 || bimodule.ring().rank() == 0 {
        return Err(Error::Shape("map space has rank 0".into()));
    }
    Ok(())
}

fn basis_pairs(ring: &Ring) -> Vec<Pair> {
    let basis = ring.basis_elements();
    let mut out = Vec::with_capacity(basis.len() * basis.len());
    for a in &basis {
        for b in &basis {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

/// The pairs on which `identity` is imposed: ordered basis pairs for
/// unconditional kinds (enough by bilinearity), otherwise the pairs of the
/// hypothesis under `mode`.
pub fn quantified_pairs(identity: Identity, ring: &Ring, mode: PairMode) -> Result<Vec<Pair>> {
    match identity.kind.condition() {
        None => Ok(basis_pairs(ring)),
        Some(cond) => condition_pairs(ring, cond, mode),
    }
}

/// Assembles the full constraint matrix, one block of `rank(M)` rows per
/// quantified pair.
pub fn constraint_system(
    identity: impl Into<Identity>,
    bimodule: &Bimodule,
    mode: PairMode,
) -> Result<ConstraintSystem> {
    let identity = identity.into();
    check_map_space(bimodule)?;
    let ring = bimodule.ring();
    let pairs = quantified_pairs(identity, ring, mode)?;
    let cols = bimodule.rank() * ring.rank();
    let entries = pairs.len().saturating_mul(bimodule.rank()).saturating_mul(cols);
    if entries > CONSTRAINT_ENTRY_GUARD {
        return Err(Error::Guard(format!(
            "constraint matrix with {entries} entries exceeds {CONSTRAINT_ENTRY_GUARD}"
        )));
    }
    let blocks: Vec<Vec<Vec<u64>>> = pairs
        .par_iter()
        .map(|(a, b)| symbolic_rows(bimodule, &identity.terms(ring, a, b)))
        .collect();
    let rows: Vec<Vec<u64>> = blocks.into_iter().flatten().collect();
    Ok(ConstraintSystem {
        identity,
        ring: ring.descriptor().clone(),
        bimodule: bimodule.descriptor().clone(),
        pair_mode: identity.kind.is_conditional().then_some(mode),
        pair_count: pairs.len(),
        matrix: ResidueMatrix::from_rows(bimodule.modulus(), cols, &rows)?,
    })
}

/// Keeps a running Howell basis of the constraint rows seen so far, so
/// memory stays bounded by the number of unknowns.
struct RowSpan {
    modulus: u64,
    cols: usize,
    basis: Vec<Vec<u64>>,
    pending: Vec<Vec<u64>>,
}

impl RowSpan {
    fn new(modulus: u64, cols: usize) -> Self {
        RowSpan {
            modulus,
            cols,
            basis: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn extend(&mut self, rows: impl IntoIterator<Item = Vec<u64>>) {
        self.pending
            .extend(rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)));
        if self.pending.len() >= 4 * self.cols.max(16) {
            self.flush();
        }
    }

    fn flush(&mut self) {
        if self.pending.is_empty() {
            return;
        }
        let mut rows = std::mem::take(&mut self.basis);
        rows.append(&mut self.pending);
        self.basis = linalg::howell_rows(rows, self.cols, self.modulus);
    }

    fn kernel(mut self) -> SolutionModule {
        self.flush();
        let mat = ResidueMatrix::from_rows(self.modulus, self.cols, &self.basis)
            .expect("rows have the right width");
        solve_homogeneous(&mat)
    }
}

/// One representative per orbit of nonzero elements under unit scaling:
/// the leading coordinate must already be a divisor of `m`.
fn is_orbit_representative(a: &[u64], m: u64) -> bool {
    match a.iter().find(|&&x| x != 0) {
        None => false,
        Some(&lead) => gcd(lead, m) == lead,
    }
}

const PAIR_CHUNK: usize = 512;

/// Every map satisfying `identity`, as a Howell-canonical submodule of the
/// flattened map coordinates.
///
/// In exhaustive mode the residual of a conditional identity is linear in
/// `b` for fixed `a`, and scales with unit multiples of `a`, so it suffices
/// to impose it on `(a, g)` for one `a` per unit orbit and `g` ranging over
/// generators of the fiber `{b : condition(a, b)}`. The resulting row span
/// equals that of the full pair scan.
pub fn solve_all(
    identity: impl Into<Identity>,
    bimodule: &Bimodule,
    mode: PairMode,
) -> Result<SolutionModule> {
    let identity = identity.into();
    check_map_space(bimodule)?;
    let ring = bimodule.ring();
    let m = bimodule.modulus();
    let cols = bimodule.rank() * ring.rank();
    let mut span = RowSpan::new(m, cols);
    let rows_for = |a: &[u64], b: &[u64]| symbolic_rows(bimodule, &identity.terms(ring, a, b));

    match (identity.kind.condition(), mode) {
        (Some(cond), PairMode::Exhaustive) => {
            let size = crate::rings::exhaustive_allowed(ring)
                .then(|| ring.size())
                .flatten()
                .ok_or_else(|| {
                    Error::Guard(format!(
                        "{} is too large for exhaustive pairs",
                        ring.descriptor()
                    ))
                })? as u64;
            let mut start = 0u64;
            while start < size {
                let end = (start + PAIR_CHUNK as u64).min(size);
                let blocks: Vec<Vec<Vec<u64>>> = (start..end)
                    .into_par_iter()
                    .flat_map_iter(|idx| {
                        let a = ring.element_at(u128::from(idx));
                        let gens: Vec<Vec<u64>> = if is_orbit_representative(&a, m) {
                            fiber_module(ring, cond, &a)
                                .generator_rows()
                                .map(<[u64]>::to_vec)
                                .collect()
                        } else {
                            Vec::new()
                        };
                        gens.into_iter().map(move |g| rows_for(&a, &g)).collect::<Vec<_>>()
                    })
                    .collect();
                span.extend(blocks.into_iter().flatten());
                start = end;
            }
        }
        _ => {
            let pairs = quantified_pairs(identity, ring, mode)?;
            for chunk in pairs.chunks(PAIR_CHUNK) {
                let blocks: Vec<Vec<Vec<u64>>> =
                    chunk.par_iter().map(|(a, b)| rows_for(a, b)).collect();
                span.extend(blocks.into_iter().flatten());
            }
        }
    }
    Ok(span.kernel())
}

fn check_descriptors(f: &AdditiveMap, bimodule: &Bimodule) -> Result<()> {
    if f.domain() != bimodule.ring().descriptor() || f.codomain() != bimodule.descriptor() {
        return Err(Error::Descriptor(format!(
            "map {} -> {} checked against {} -> {}",
            f.domain(),
            f.codomain(),
            bimodule.ring().descriptor(),
            bimodule.descriptor()
        )));
    }
    Ok(())
}

/// Evaluates `identity` directly on `f` over every quantified pair and
/// reports the first failure.
///
/// Order: ordered basis pairs by index for unconditional kinds;
/// lexicographic element order for exhaustive pairs; schema order for
/// structured pairs.
pub fn check(
    f: &AdditiveMap,
    identity: impl Into<Identity>,
    bimodule: &Bimodule,
    mode: PairMode,
) -> Result<CheckReport> {
    let identity = identity.into();
    check_descriptors(f, bimodule)?;
    let ring = bimodule.ring();
    let residual = |a: &[u64], b: &[u64]| eval_terms(bimodule, f, &identity.terms(ring, a, b));
    match (identity.kind.condition(), mode) {
        (Some(cond), PairMode::Exhaustive) => {
            // Stream each fiber instead of materializing every pair.
            let size = exhaustive_pairs_size(ring)?;
            for idx in 0..size {
                let a = ring.element_at(idx);
                if Ring::is_zero(&a) {
                    continue;
                }
                let mut fiber = fiber_module(ring, cond, &a)
                    .elements(size)
                    .expect("fiber fits in the ring");
                fiber.sort();
                for b in fiber {
                    let r = residual(&a, &b);
                    if r.iter().any(|&x| x != 0) {
                        return Ok(CheckReport::fail(&a, &b, r));
                    }
                }
            }
            Ok(CheckReport::pass())
        }
        _ => {
            for (a, b) in quantified_pairs(identity, ring, mode)? {
                let r = residual(&a, &b);
                if r.iter().any(|&x| x != 0) {
                    return Ok(CheckReport::fail(&a, &b, r));
                }
            }
            Ok(CheckReport::pass())
        }
    }
}

fn exhaustive_pairs_size(ring: &Ring) -> Result<u128> {
    if !crate::rings::exhaustive_allowed(ring) {
        return Err(Error::Guard(format!(
            "{} is too large for exhaustive pairs",
            ring.descriptor()
        )));
    }
    Ok(ring.size().expect("guarded"))
}

/// Materialized exhaustive pair list, for callers that want to inspect it.
pub fn exhaustive_pair_list(ring: &Ring, identity: Identity) -> Result<Vec<Pair>> {
    match identity.kind.condition() {
        Some(cond) => exhaustive_pairs(ring, cond),
        None => Ok(basis_pairs(ring)),
    }
}
