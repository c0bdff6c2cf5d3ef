//! One end-to-end verification procedure per structural result, each
//! producing a [`TheoremReport`].
//!
//! All conclusions checked here are linear in the map, so checking the
//! generators of a solution module covers the whole module. Where the
//! module is computed in two ways (or a decomposition is rebuilt), a seeded
//! sample of module elements is re-checked as well.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::addmaps::{
    inner_derivation, lift_map, right_multiplier, right_multiplier_module, AdditiveMap,
};
use crate::error::{Error, Result};
use crate::lab::{
    check, decompose_inner_plus_lifted, decompose_theorem21, peirce_component_check, solve_all,
    verify_trivial_extension_parts, Identity, IdentityKind,
};
use crate::linalg::SolutionModule;
use crate::rings::{
    exhaustive_allowed, Bimodule, BimoduleDescriptor, PairMode, Ring, RingDescriptor,
};

/// Default number of sampled module elements.
pub const DEFAULT_SAMPLE_BOUND: usize = 1000;

/// Identity term flipped by [`VerifyOptions::corrupt`]: `-D(b)a` becomes
/// `+D(b)a` in the Jordan identity.
pub const CORRUPTED_TERM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "thm2_1")]
    Thm2_1,
    #[serde(rename = "thm2_2")]
    Thm2_2,
    #[serde(rename = "cor2_3")]
    Cor2_3,
    #[serde(rename = "lemma3_1")]
    Lemma3_1,
    #[serde(rename = "thm3_2i")]
    Thm3_2i,
    #[serde(rename = "thm3_2ii")]
    Thm3_2ii,
    #[serde(rename = "thm4_2")]
    Thm4_2,
    #[serde(rename = "thm4_4")]
    Thm4_4,
    #[serde(rename = "remark1_1")]
    Remark1_1,
    #[serde(rename = "remark1_2")]
    Remark1_2,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::Thm2_1,
        TheoremId::Thm2_2,
        TheoremId::Cor2_3,
        TheoremId::Lemma3_1,
        TheoremId::Thm3_2i,
        TheoremId::Thm3_2ii,
        TheoremId::Thm4_2,
        TheoremId::Thm4_4,
        TheoremId::Remark1_1,
        TheoremId::Remark1_2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            TheoremId::Thm2_1 => "thm2_1",
            TheoremId::Thm2_2 => "thm2_2",
            TheoremId::Cor2_3 => "cor2_3",
            TheoremId::Lemma3_1 => "lemma3_1",
            TheoremId::Thm3_2i => "thm3_2i",
            TheoremId::Thm3_2ii => "thm3_2ii",
            TheoremId::Thm4_2 => "thm4_2",
            TheoremId::Thm4_4 => "thm4_4",
            TheoremId::Remark1_1 => "remark1_1",
            TheoremId::Remark1_2 => "remark1_2",
        }
    }

    /// One-line statement of what is verified.
    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::Thm2_1 => "maps with the zero-product property are derivations plus central right multipliers",
            TheoremId::Thm2_2 => "maps with the corrected zero-product property are derivations plus right multipliers",
            TheoremId::Cor2_3 => "zero-product maps into M_n(N) are lifted derivations plus inner derivations plus A·D(1)",
            TheoremId::Lemma3_1 => "Jordan derivations into a non-unital bimodule are derivations, component by component",
            TheoremId::Thm3_2i => "Jordan derivations are derivations",
            TheoremId::Thm3_2ii => "generalized Jordan derivations are generalized derivations",
            TheoremId::Thm4_2 => "φ(ab+ba) = aφ(b)+φ(b)a forces φ(a) = aφ(1) with φ(1) central",
            TheoremId::Thm4_4 => "Jordan derivations of T(A, A) are derivations",
            TheoremId::Remark1_1 => "D is a generalized derivation iff D - (a ↦ aD(1)) is a derivation",
            TheoremId::Remark1_2 => "the ab+ba=0 and ab=0 variants imply the zero-product property",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub pairs: PairMode,
    pub seed: u64,
    pub sample_bound: usize,
    /// Flip one term of the Jordan identity wherever it is used.
    pub corrupt: bool,
    /// Rank of the zero-action summand for the non-unital bimodule.
    pub inflate_rank: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            pairs: PairMode::Structured,
            seed: 0,
            sample_bound: DEFAULT_SAMPLE_BOUND,
            corrupt: false,
            inflate_rank: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Falsified,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Falsified => "falsified",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub ring: RingDescriptor,
    pub status: Status,
    pub pairs: PairMode,
    /// Module sizes, generator counts and sample counts.
    pub counts: BTreeMap<String, u128>,
    /// Observations that are measured rather than asserted.
    pub findings: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub seed: u64,
    pub sample_bound: usize,
    pub elapsed_ms: u64,
}

impl TheoremReport {
    /// JSON without the timing field; identical inputs give identical bytes.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable");
        if let Value::Object(map) = &mut v {
            map.remove("elapsed_ms");
        }
        serde_json::to_string(&v).expect("serializable")
    }
}

/// Why a run stopped early.
enum Outcome {
    Falsified(Value),
    Skipped(String),
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        match e {
            Error::Guard(msg) => Outcome::Skipped(msg),
            Error::EvenModulus(_) => Outcome::Skipped("modulus not 2-torsion free".into()),
            Error::Precondition { identity, report } => Outcome::Falsified(json!({
                "kind": "precondition",
                "identity": identity,
                "report": report,
            })),
            Error::Verification { message, trace } => Outcome::Falsified(json!({
                "kind": "verification",
                "message": message,
                "trace": trace,
            })),
            other => Outcome::Skipped(other.to_string()),
        }
    }
}

type Step<T> = std::result::Result<T, Outcome>;

struct Run<'a> {
    opts: &'a VerifyOptions,
    counts: BTreeMap<String, u128>,
    findings: BTreeMap<String, bool>,
    rng: ChaCha8Rng,
}

impl Run<'_> {
    fn jordan(&self) -> Identity {
        if self.opts.corrupt {
            Identity::with_flipped_term(IdentityKind::Jordan, CORRUPTED_TERM)
        } else {
            IdentityKind::Jordan.into()
        }
    }

    fn record(&mut self, name: &str, module: &SolutionModule) {
        if let Some(order) = module.order() {
            self.counts.insert(format!("{name}_size"), order);
        }
        self.counts
            .insert(format!("{name}_generators"), module.num_generators() as u128);
    }

    fn solve(&mut self, name: &str, identity: Identity, bm: &Bimodule, mode: PairMode) -> Step<SolutionModule> {
        let module = solve_all(identity, bm, mode)?;
        self.record(name, &module);
        Ok(module)
    }

    /// Module equality; on failure the counterexample is a map in one
    /// module but not the other, with the failing pair for the other
    /// module's identity when one is available.
    fn expect_equal(
        &mut self,
        bm: &Bimodule,
        lhs: (&str, &SolutionModule, Option<(Identity, PairMode)>),
        rhs: (&str, &SolutionModule, Option<(Identity, PairMode)>),
    ) -> Step<()> {
        for (inside, outside) in [(&lhs, &rhs), (&rhs, &lhs)] {
            let missing = outside.1.first_missing(inside.1)?;
            if let Some(v) = missing {
                let map = AdditiveMap::from_flat(bm.ring(), bm, &v)?;
                let witness = match outside.2 {
                    Some((identity, mode)) => Some(check(&map, identity, bm, mode)?),
                    None => None,
                };
                return Err(Outcome::Falsified(json!({
                    "kind": "module_mismatch",
                    "in": inside.0,
                    "not_in": outside.0,
                    "map": map,
                    "check": witness,
                })));
            }
        }
        Ok(())
    }

    fn expect_contained(
        &mut self,
        bm: &Bimodule,
        small: (&str, &SolutionModule),
        big: (&str, &SolutionModule, Identity, PairMode),
    ) -> Step<()> {
        if let Some(v) = big.1.first_missing(small.1)? {
            let map = AdditiveMap::from_flat(bm.ring(), bm, &v)?;
            let report = check(&map, big.2, bm, big.3)?;
            return Err(Outcome::Falsified(json!({
                "kind": "containment",
                "in": small.0,
                "not_in": big.0,
                "map": map,
                "check": report,
            })));
        }
        Ok(())
    }

    /// Generators followed by up to `sample_bound` seeded random elements.
    fn members(&mut self, module: &SolutionModule) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = module.generator_rows().map(<[u64]>::to_vec).collect();
        for _ in 0..self.opts.sample_bound {
            out.push(module.random_element(&mut self.rng));
        }
        out
    }
}

fn regular(ring: &Ring) -> Bimodule {
    Bimodule::regular(ring)
}

fn require_matrix(ring: &Ring) -> Step<()> {
    if ring.matrix_shape().is_none() {
        return Err(Outcome::Skipped(format!(
            "{} is not a matrix ring M_n(R) with n >= 2",
            ring.descriptor()
        )));
    }
    Ok(())
}

fn guard_odd(m: u64) -> Step<()> {
    if m.is_multiple_of(2) {
        return Err(Outcome::Skipped("modulus not 2-torsion free".into()));
    }
    Ok(())
}

fn require_exhaustive_ok(ring: &Ring, mode: PairMode) -> Step<()> {
    if mode == PairMode::Exhaustive && !exhaustive_allowed(ring) {
        return Err(Outcome::Skipped(format!(
            "{} is too large for exhaustive pairs",
            ring.descriptor()
        )));
    }
    Ok(())
}

/// The zero-product theorems share a skeleton: solve the conditional
/// module in the requested mode, compare it against derivations plus the
/// allowed right multipliers, and (where feasible) compare structured and
/// exhaustive modes.
fn zero_product_theorem(run: &mut Run<'_>, ring: &Ring, kind: IdentityKind) -> Step<(Bimodule, SolutionModule)> {
    require_matrix(ring)?;
    let mode = run.opts.pairs;
    require_exhaustive_ok(ring, mode)?;
    let bm = regular(ring);
    let module = run.solve(kind.tag(), kind.into(), &bm, mode)?;
    if exhaustive_allowed(ring) {
        let other = match mode {
            PairMode::Structured => PairMode::Exhaustive,
            PairMode::Exhaustive => PairMode::Structured,
        };
        let alt = solve_all(kind, &bm, other)?;
        run.findings
            .insert("structured_equals_exhaustive".into(), alt.equals(&module)?);
    }
    let der = run.solve("derivation", IdentityKind::Derivation.into(), &bm, mode)?;
    let multipliers = if kind == IdentityKind::Star {
        let center = bm.center();
        run.record("center", &center);
        right_multiplier_module(&bm, &center)
    } else {
        right_multiplier_module(&bm, &SolutionModule::full(bm.modulus(), bm.rank()))
    };
    run.record("multipliers", &multipliers);
    let target = der.sum(&multipliers)?;
    run.record("target", &target);
    run.expect_equal(
        &bm,
        (kind.tag(), &module, Some((kind.into(), mode))),
        ("derivations_plus_multipliers", &target, None),
    )?;
    Ok((bm, module))
}

fn thm2_1(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    let (bm, module) = zero_product_theorem(run, ring, IdentityKind::Star)?;
    let gens = module.num_generators();
    let members = run.members(&module);
    for (i, v) in members.iter().enumerate() {
        let d = AdditiveMap::from_flat(ring, &bm, v)?;
        // Generators are checked against the requested pair mode; sampled
        // elements only re-run the decomposition with structured pairs.
        let mode = if i < gens { run.opts.pairs } else { PairMode::Structured };
        decompose_theorem21(&d, &bm, mode)?;
    }
    run.counts.insert("decomposed".into(), members.len() as u128);
    Ok(())
}

fn thm2_2(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    let (bm, module) = zero_product_theorem(run, ring, IdentityKind::StarStar)?;
    let members = run.members(&module);
    for v in &members {
        let d = AdditiveMap::from_flat(ring, &bm, v)?;
        let c = d.apply(&ring.one())?;
        let delta = d.sub(&right_multiplier(&bm, &c))?;
        let report = check(&delta, IdentityKind::Derivation, &bm, PairMode::Structured)?;
        if !report.passed {
            return Err(Outcome::Falsified(json!({
                "kind": "decomposition",
                "map": d,
                "delta": delta,
                "check": report,
            })));
        }
    }
    run.counts.insert("decomposed".into(), members.len() as u128);
    Ok(())
}

fn cor2_3(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    require_matrix(ring)?;
    let mode = run.opts.pairs;
    require_exhaustive_ok(ring, mode)?;
    let bm = regular(ring);
    let (n, _) = ring.matrix_shape().expect("matrix ring");
    let der = run.solve("derivation", IdentityKind::Derivation.into(), &bm, mode)?;
    let mut nonzero_d = 0u128;
    for v in der.generator_rows() {
        let delta = AdditiveMap::from_flat(ring, &bm, v)?;
        let out = decompose_inner_plus_lifted(&delta, &bm)?;
        if !out.d.is_zero() {
            nonzero_d += 1;
        }
    }
    run.counts.insert("nonzero_base_derivations".into(), nonzero_d);

    let star = run.solve("star", IdentityKind::Star.into(), &bm, mode)?;
    for v in star.generator_rows() {
        let d_map = AdditiveMap::from_flat(ring, &bm, v)?;
        let trace = decompose_theorem21(&d_map, &bm, mode)?;
        let out = decompose_inner_plus_lifted(&trace.delta, &bm)?;
        let rebuilt = lift_map(&out.d, n)?
            .matrix()
            .add(inner_derivation(&bm, &out.g).matrix())?
            .add(right_multiplier(&bm, &trace.central).matrix())?;
        if rebuilt != *d_map.matrix() {
            return Err(Outcome::Falsified(json!({
                "kind": "recomposition",
                "map": d_map,
                "d": out.d,
                "g": out.g,
            })));
        }
    }
    Ok(())
}

fn lemma3_1(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    require_matrix(ring)?;
    let desc = BimoduleDescriptor::inflated(
        BimoduleDescriptor::regular(ring.descriptor().clone()),
        run.opts.inflate_rank,
    );
    let bm = Bimodule::new(&desc)?;
    let jordan_id = run.jordan();
    let jordan = run.solve("jordan", jordan_id, &bm, PairMode::Structured)?;
    let der = run.solve("derivation", IdentityKind::Derivation.into(), &bm, PairMode::Structured)?;
    run.expect_equal(
        &bm,
        ("jordan", &jordan, Some((jordan_id, PairMode::Structured))),
        ("derivation", &der, Some((IdentityKind::Derivation.into(), PairMode::Structured))),
    )?;
    for v in jordan.generator_rows() {
        let d = AdditiveMap::from_flat(ring, &bm, v)?;
        let report = peirce_component_check(&d, &bm)?;
        if !report.passed {
            return Err(Outcome::Falsified(json!({
                "kind": "peirce_components",
                "map": d,
                "report": report,
            })));
        }
    }
    let gj = run.solve(
        "generalized_jordan",
        IdentityKind::GeneralizedJordan.into(),
        &bm,
        PairMode::Structured,
    )?;
    let gd = run.solve(
        "generalized_derivation",
        IdentityKind::GeneralizedDerivation.into(),
        &bm,
        PairMode::Structured,
    )?;
    run.expect_equal(
        &bm,
        ("generalized_jordan", &gj, Some((IdentityKind::GeneralizedJordan.into(), PairMode::Structured))),
        ("generalized_derivation", &gd, Some((IdentityKind::GeneralizedDerivation.into(), PairMode::Structured))),
    )
}

/// Equality of two unconditional identity modules on `bm`.
fn same_modules(run: &mut Run<'_>, bm: &Bimodule, a: (&str, Identity), b: (&str, Identity)) -> Step<()> {
    let ma = run.solve(a.0, a.1, bm, PairMode::Structured)?;
    let mb = run.solve(b.0, b.1, bm, PairMode::Structured)?;
    run.expect_equal(
        bm,
        (a.0, &ma, Some((a.1, PairMode::Structured))),
        (b.0, &mb, Some((b.1, PairMode::Structured))),
    )
}

fn thm3_2(run: &mut Run<'_>, ring: &Ring, generalized: bool) -> Step<()> {
    require_matrix(ring)?;
    let (jk, dk) = if generalized {
        (IdentityKind::GeneralizedJordan.into(), IdentityKind::GeneralizedDerivation)
    } else {
        (run.jordan(), IdentityKind::Derivation)
    };
    let bm = regular(ring);
    same_modules(run, &bm, ("jordan", jk), ("derivation", dk.into()))?;
    if run.opts.inflate_rank > 0 {
        let desc = BimoduleDescriptor::inflated(
            BimoduleDescriptor::regular(ring.descriptor().clone()),
            run.opts.inflate_rank,
        );
        let inflated = Bimodule::new(&desc)?;
        same_modules(
            run,
            &inflated,
            ("inflated_jordan", jk),
            ("inflated_derivation", dk.into()),
        )?;
    }
    Ok(())
}

fn thm4_2(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    require_matrix(ring)?;
    let bm = regular(ring);
    let phi = run.solve("phi", IdentityKind::Phi.into(), &bm, PairMode::Structured)?;
    let center = bm.center();
    run.record("center", &center);
    let target = right_multiplier_module(&bm, &center);
    run.record("target", &target);
    run.expect_equal(
        &bm,
        ("phi", &phi, Some((IdentityKind::Phi.into(), PairMode::Structured))),
        ("central_multipliers", &target, None),
    )
}

fn thm4_4(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    let t_desc = match ring.descriptor() {
        RingDescriptor::TrivialExt { .. } => ring.descriptor().clone(),
        other => crate::rings::trivial_extension(other)?,
    };
    let t = Ring::new(&t_desc)?;
    let bm = regular(&t);
    let jordan_id = run.jordan();
    let jordan = run.solve("jordan", jordan_id, &bm, PairMode::Structured)?;
    let der = run.solve("derivation", IdentityKind::Derivation.into(), &bm, PairMode::Structured)?;
    run.expect_equal(
        &bm,
        ("jordan", &jordan, Some((jordan_id, PairMode::Structured))),
        ("derivation", &der, Some((IdentityKind::Derivation.into(), PairMode::Structured))),
    )?;
    for v in jordan.generator_rows() {
        let d = AdditiveMap::from_flat(&t, &bm, v)?;
        verify_trivial_extension_parts(&d)?;
    }
    Ok(())
}

fn remark1_1(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    let bm = regular(ring);
    let gd = run.solve(
        "generalized_derivation",
        IdentityKind::GeneralizedDerivation.into(),
        &bm,
        PairMode::Structured,
    )?;
    let der = run.solve("derivation", IdentityKind::Derivation.into(), &bm, PairMode::Structured)?;
    let all = right_multiplier_module(&bm, &SolutionModule::full(bm.modulus(), bm.rank()));
    let target = der.sum(&all)?;
    run.record("target", &target);
    run.expect_equal(
        &bm,
        (
            "generalized_derivation",
            &gd,
            Some((IdentityKind::GeneralizedDerivation.into(), PairMode::Structured)),
        ),
        ("derivations_plus_multipliers", &target, None),
    )?;
    let members = run.members(&gd);
    for v in &members {
        let d = AdditiveMap::from_flat(ring, &bm, v)?;
        let delta = d.sub(&right_multiplier(&bm, &d.apply(&ring.one())?))?;
        let report = check(&delta, IdentityKind::Derivation, &bm, PairMode::Structured)?;
        if !report.passed {
            return Err(Outcome::Falsified(json!({
                "kind": "decomposition",
                "map": d,
                "check": report,
            })));
        }
    }
    run.counts.insert("decomposed".into(), members.len() as u128);
    Ok(())
}

fn remark1_2(run: &mut Run<'_>, ring: &Ring) -> Step<()> {
    require_matrix(ring)?;
    let mode = run.opts.pairs;
    require_exhaustive_ok(ring, mode)?;
    let bm = regular(ring);
    let star = run.solve("star", IdentityKind::Star.into(), &bm, mode)?;
    for kind in [IdentityKind::RemarkAntizero, IdentityKind::RemarkAbzero] {
        let module = run.solve(kind.tag(), kind.into(), &bm, mode)?;
        run.findings
            .insert(format!("{}_equals_star", kind.tag()), module.equals(&star)?);
        run.expect_contained(
            &bm,
            (kind.tag(), &module),
            ("star", &star, IdentityKind::Star.into(), mode),
        )?;
    }
    Ok(())
}

fn now() -> Option<std::time::Instant> {
    #[cfg(not(target_arch = "wasm32"))]
    {
        Some(std::time::Instant::now())
    }
    #[cfg(target_arch = "wasm32")]
    {
        None
    }
}

/// Runs one verification procedure. Invalid descriptors are errors; guard
/// violations and even moduli produce a skipped report.
pub fn verify_theorem(
    id: TheoremId,
    ring: &RingDescriptor,
    opts: &VerifyOptions,
) -> Result<TheoremReport> {
    ring.validate()?;
    let start = now();
    let mut run = Run {
        opts,
        counts: BTreeMap::new(),
        findings: BTreeMap::new(),
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
    };
    let outcome = guard_odd(ring.modulus()).and_then(|()| {
        let r = Ring::new(ring)?;
        match id {
            TheoremId::Thm2_1 => thm2_1(&mut run, &r),
            TheoremId::Thm2_2 => thm2_2(&mut run, &r),
            TheoremId::Cor2_3 => cor2_3(&mut run, &r),
            TheoremId::Lemma3_1 => lemma3_1(&mut run, &r),
            TheoremId::Thm3_2i => thm3_2(&mut run, &r, false),
            TheoremId::Thm3_2ii => thm3_2(&mut run, &r, true),
            TheoremId::Thm4_2 => thm4_2(&mut run, &r),
            TheoremId::Thm4_4 => thm4_4(&mut run, &r),
            TheoremId::Remark1_1 => remark1_1(&mut run, &r),
            TheoremId::Remark1_2 => remark1_2(&mut run, &r),
        }
    });
    let (status, counterexample, reason) = match outcome {
        Ok(()) => (Status::Verified, None, None),
        Err(Outcome::Falsified(v)) => (Status::Falsified, Some(v), None),
        Err(Outcome::Skipped(r)) => (Status::Skipped, None, Some(r)),
    };
    Ok(TheoremReport {
        theorem_id: id,
        ring: ring.clone(),
        status,
        pairs: opts.pairs,
        counts: run.counts,
        findings: run.findings,
        counterexample,
        reason,
        seed: opts.seed,
        sample_bound: opts.sample_bound,
        elapsed_ms: start.map_or(0, |s| s.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2z(m: u64) -> RingDescriptor {
        RingDescriptor::matrix(2, RingDescriptor::zmod(m))
    }

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.tag().parse::<TheoremId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
    }

    #[test]
    fn even_modulus_skipped() {
        let r = verify_theorem(TheoremId::Thm2_1, &m2z(2), &VerifyOptions::default()).unwrap();
        assert_eq!(r.status, Status::Skipped);
        assert_eq!(r.reason.as_deref(), Some("modulus not 2-torsion free"));
    }

    #[test]
    fn jordan_equals_derivation_on_m2z3() {
        let r = verify_theorem(TheoremId::Thm3_2i, &m2z(3), &VerifyOptions::default()).unwrap();
        assert_eq!(r.status, Status::Verified, "{r:?}");
        assert_eq!(r.counts["jordan_size"], 27);
        assert_eq!(r.counts["derivation_size"], 27);
    }

    #[test]
    fn phi_module_has_three_elements() {
        let r = verify_theorem(TheoremId::Thm4_2, &m2z(3), &VerifyOptions::default()).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.counts["phi_size"], 3);
    }

    #[test]
    fn corrupted_identity_is_caught() {
        let opts = VerifyOptions {
            corrupt: true,
            ..VerifyOptions::default()
        };
        let r = verify_theorem(TheoremId::Thm3_2i, &m2z(3), &opts).unwrap();
        assert_eq!(r.status, Status::Falsified);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let opts = VerifyOptions {
            sample_bound: 20,
            ..VerifyOptions::default()
        };
        let a = verify_theorem(TheoremId::Remark1_1, &m2z(3), &opts).unwrap();
        let b = verify_theorem(TheoremId::Remark1_1, &m2z(3), &opts).unwrap();
        assert_eq!(a.deterministic_json(), b.deterministic_json());
    }
}
