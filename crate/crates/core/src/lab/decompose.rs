use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{check, require_odd, IdentityKind};
use crate::addmaps::{inner_derivation, lift_map, right_multiplier, AdditiveMap};
use crate::error::{Error, Result};
use crate::linalg::{solve_affine, sub_mod, ResidueMatrix};
use crate::rings::{Bimodule, BimoduleDescriptor, PairMode, Ring, RingDescriptor};

/// Intermediate objects of the zero-product decomposition
/// `D(A) = δ(A) + A·D(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTrace {
    pub e: Vec<u64>,
    pub f: Vec<u64>,
    /// `m = E·D(E)·F - F·D(E)·E`
    pub m: Vec<u64>,
    /// `Δ = D - I_m`
    pub big_delta: AdditiveMap,
    /// `d(A) = Δ(A) - A·Δ(1)`
    pub d: AdditiveMap,
    /// `δ = d + I_m`
    pub delta: AdditiveMap,
    /// `D(1)`
    pub central: Vec<u64>,
}

fn verification_error(message: impl Into<String>, trace: serde_json::Value) -> Error {
    Error::Verification {
        message: message.into(),
        trace: Box::new(trace),
    }
}

fn require_domain(f: &AdditiveMap, bimodule: &Bimodule) -> Result<()> {
    if f.domain() != bimodule.ring().descriptor() || f.codomain() != bimodule.descriptor() {
        return Err(Error::Descriptor(format!(
            "map {} -> {} used with bimodule {}",
            f.domain(),
            f.codomain(),
            bimodule.descriptor()
        )));
    }
    Ok(())
}

/// Splits a map satisfying the zero-product condition into a derivation
/// plus a right multiplier by the central element `D(1)`.
///
/// The pieces are built exactly as in the matrix-ring argument, then
/// re-verified: δ must pass the derivation check, `D(1)` must be central
/// and `D(x) = δ(x) + x·D(1)` must hold on every basis element. A failure
/// there is reported as [`Error::Verification`] with the full trace.
pub fn decompose_theorem21(
    d_map: &AdditiveMap,
    bimodule: &Bimodule,
    mode: PairMode,
) -> Result<DecompositionTrace> {
    require_domain(d_map, bimodule)?;
    let ring = bimodule.ring();
    require_odd(ring.modulus())?;
    if !bimodule.is_unital() {
        return Err(Error::InvalidRing(format!(
            "{} is not a unital bimodule",
            bimodule.descriptor()
        )));
    }
    let pre = check(d_map, IdentityKind::Star, bimodule, mode)?;
    if !pre.passed {
        return Err(Error::Precondition {
            identity: IdentityKind::Star.to_string(),
            report: Box::new(pre),
        });
    }
    let e = ring.matrix_unit(0, 0)?;
    let f = ring.sub(&ring.one(), &e);
    let de = d_map.apply(&e)?;
    let m = bimodule.sub(
        &bimodule.sandwich(Some(&e), &de, Some(&f)),
        &bimodule.sandwich(Some(&f), &de, Some(&e)),
    );
    let inner = inner_derivation(bimodule, &m);
    let big_delta = d_map.sub(&inner)?;
    let delta_one = big_delta.apply(&ring.one())?;
    let d = big_delta.sub(&right_multiplier(bimodule, &delta_one))?;
    let delta = d.add(&inner)?;
    let central = d_map.apply(&ring.one())?;
    let trace = DecompositionTrace {
        e,
        f,
        m,
        big_delta,
        d,
        delta,
        central,
    };

    let as_json = |t: &DecompositionTrace| serde_json::to_value(t).unwrap_or_default();
    let der = check(&trace.delta, IdentityKind::Derivation, bimodule, mode)?;
    if !der.passed {
        return Err(verification_error(
            "delta is not a derivation",
            json!({ "trace": as_json(&trace), "check": der }),
        ));
    }
    if !bimodule.is_central(&trace.central) {
        return Err(verification_error("D(1) is not central", as_json(&trace)));
    }
    for i in 0..ring.rank() {
        let x = ring.basis(i);
        let lhs = d_map.apply(&x)?;
        let rhs = bimodule.add(&trace.delta.apply(&x)?, &bimodule.left_act(&x, &trace.central));
        if lhs != rhs {
            return Err(verification_error(
                format!("recomposition fails on basis element {i}"),
                json!({ "trace": as_json(&trace), "basis": i, "lhs": lhs, "rhs": rhs }),
            ));
        }
    }
    Ok(trace)
}

/// `δ = d̄ + I_G` for a derivation δ on `M_n(R)` into `M_n(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerPlusLifted {
    /// The base derivation `d: R → N`.
    pub d: AdditiveMap,
    pub g: Vec<u64>,
}

/// The base bimodule `N` with `bimodule = M_n(N)`.
fn base_bimodule(bimodule: &Bimodule) -> Result<(usize, BimoduleDescriptor)> {
    match bimodule.descriptor() {
        BimoduleDescriptor::Regular(RingDescriptor::Matrix { n, base }) => {
            Ok((*n, BimoduleDescriptor::regular((**base).clone())))
        }
        BimoduleDescriptor::MatrixOver { n, base } => Ok((*n, (**base).clone())),
        other => Err(Error::InvalidRing(format!(
            "{other} is not a matrix bimodule M_n(N)"
        ))),
    }
}

/// Writes a derivation on a matrix ring as an entrywise lift of a base
/// derivation plus an inner derivation.
///
/// `G` solves `E_ij·G - G·E_ij = δ(E_ij)` for all matrix units. The
/// remainder `δ - I_G` must then act cell by cell, and `d` is read off the
/// `(1,1)` cell. Both the lifted shape and `δ = d̄ + I_G` are verified.
pub fn decompose_inner_plus_lifted(
    delta: &AdditiveMap,
    bimodule: &Bimodule,
) -> Result<InnerPlusLifted> {
    require_domain(delta, bimodule)?;
    let ring = bimodule.ring();
    let (n, base_desc) = base_bimodule(bimodule)?;
    let pre = check(delta, IdentityKind::Derivation, bimodule, PairMode::Structured)?;
    if !pre.passed {
        return Err(Error::Precondition {
            identity: IdentityKind::Derivation.to_string(),
            report: Box::new(pre),
        });
    }
    let m = ring.modulus();
    let rank = bimodule.rank();

    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rhs: Vec<u64> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let eij = ring.matrix_unit(i, j)?;
            let l = bimodule.sandwich_matrix(Some(&eij), None);
            let r = bimodule.sandwich_matrix(None, Some(&eij));
            for (lk, rk) in l.iter().zip(&r) {
                rows.push(lk.iter().zip(rk).map(|(&a, &b)| sub_mod(a, b, m)).collect());
            }
            rhs.extend(delta.apply(&eij)?);
        }
    }
    let system = ResidueMatrix::from_rows(m, rank, &rows)?;
    let g = match solve_affine(&system, &rhs)?.0 {
        Some(g) => g,
        None => {
            return Err(verification_error(
                "no G with I_G = delta on the matrix units",
                json!({ "delta": delta }),
            ))
        }
    };
    let remainder = delta.sub(&inner_derivation(bimodule, &g))?;

    let base_ring = Ring::new(&base_desc.ring())?;
    let base_bm = Bimodule::new(&base_desc)?;
    let rb = base_ring.rank();
    let nb = base_bm.rank();
    for i in 0..n {
        for j in 0..n {
            for b in 0..rb {
                let x = ring.matrix_entry_element(i, j, &base_ring.basis(b))?;
                let img = remainder.apply(&x)?;
                let cell = i * n + j;
                let stray = img
                    .iter()
                    .enumerate()
                    .any(|(k, &v)| v != 0 && k / nb != cell);
                if stray {
                    return Err(verification_error(
                        format!("delta - I_G is not entrywise at cell ({i},{j})"),
                        json!({ "delta": delta, "g": g, "image": img }),
                    ));
                }
            }
        }
    }
    let images: Vec<Vec<u64>> = (0..rb)
        .map(|b| {
            let x = ring.matrix_entry_element(0, 0, &base_ring.basis(b))?;
            Ok(remainder.apply(&x)?[..nb].to_vec())
        })
        .collect::<Result<_>>()?;
    let d = AdditiveMap::from_basis_images(&base_ring, &base_bm, &images)?;

    let d_check = check(&d, IdentityKind::Derivation, &base_bm, PairMode::Structured)?;
    if !d_check.passed {
        return Err(verification_error(
            "extracted base map is not a derivation",
            json!({ "d": d, "check": d_check }),
        ));
    }
    let lifted = lift_map(&d, n)?;
    let inner = inner_derivation(bimodule, &g);
    if lifted.matrix().add(inner.matrix())? != *delta.matrix() {
        return Err(verification_error(
            "delta differs from d-bar + I_G",
            json!({ "delta": delta, "d": d, "g": g }),
        ));
    }
    Ok(InnerPlusLifted { d, g })
}

/// Components of a map on `T(A, A)`:
/// `Δ(a, b) = (δ1(a) + δ2(b), δ3(a) + δ4(b))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialExtParts {
    pub delta1: AdditiveMap,
    pub delta2: AdditiveMap,
    pub delta3: AdditiveMap,
    pub delta4: AdditiveMap,
}

fn trivial_ext_base(desc: &RingDescriptor) -> Result<RingDescriptor> {
    match desc {
        RingDescriptor::TrivialExt { base } => Ok((**base).clone()),
        other => Err(Error::InvalidRing(format!("{other} is not a trivial extension"))),
    }
}

/// Reads off the four component maps along the `A ⊕ A` coordinate split.
pub fn decompose_trivial_extension(big_delta: &AdditiveMap) -> Result<TrivialExtParts> {
    let base = trivial_ext_base(big_delta.domain())?;
    if *big_delta.codomain() != BimoduleDescriptor::regular(big_delta.domain().clone()) {
        return Err(Error::Descriptor(format!(
            "expected a map from {} into itself",
            big_delta.domain()
        )));
    }
    let k = base.rank();
    let cod = BimoduleDescriptor::regular(base.clone());
    let part = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| {
        AdditiveMap::new(base.clone(), cod.clone(), big_delta.block(rows, cols))
    };
    Ok(TrivialExtParts {
        delta1: part(0..k, 0..k)?,
        delta2: part(0..k, k..2 * k)?,
        delta3: part(k..2 * k, 0..k)?,
        delta4: part(k..2 * k, k..2 * k)?,
    })
}

/// Splits a Jordan derivation on `T(A, A)` and verifies the component
/// structure: δ1 and δ3 are Jordan derivations, δ2 = 0, and
/// `δ4 = δ1 + (a ↦ a·c)` with `c = δ4(1)` central.
pub fn verify_trivial_extension_parts(big_delta: &AdditiveMap) -> Result<TrivialExtParts> {
    let ring = Ring::new(big_delta.domain())?;
    require_odd(ring.modulus())?;
    let bm = Bimodule::regular(&ring);
    let pre = check(big_delta, IdentityKind::Jordan, &bm, PairMode::Structured)?;
    if !pre.passed {
        return Err(Error::Precondition {
            identity: IdentityKind::Jordan.to_string(),
            report: Box::new(pre),
        });
    }
    let parts = decompose_trivial_extension(big_delta)?;
    let base = Ring::new(parts.delta1.domain())?;
    let base_bm = Bimodule::regular(&base);
    let fail = |msg: &str| verification_error(msg, json!({ "map": big_delta, "parts": &parts }));
    for (name, p) in [("delta1", &parts.delta1), ("delta3", &parts.delta3)] {
        if !check(p, IdentityKind::Jordan, &base_bm, PairMode::Structured)?.passed {
            return Err(fail(&format!("{name} is not a Jordan derivation")));
        }
    }
    if !parts.delta2.is_zero() {
        return Err(fail("delta2 is not zero"));
    }
    let c = parts.delta4.apply(&base.one())?;
    if !base_bm.is_central(&c) {
        return Err(fail("delta4(1) is not central"));
    }
    let expected = parts.delta1.add(&right_multiplier(&base_bm, &c))?;
    if expected != parts.delta4 {
        return Err(fail("delta4 differs from delta1 + right multiplier"));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(base: RingDescriptor) -> Bimodule {
        Bimodule::regular(&Ring::new(&RingDescriptor::matrix(2, base)).unwrap())
    }

    #[test]
    fn inner_map_decomposes_to_itself() {
        let bm = m2(RingDescriptor::zmod(3));
        let g = vec![1, 2, 0, 1];
        let inner = inner_derivation(&bm, &g);
        let t = decompose_theorem21(&inner, &bm, PairMode::Structured).unwrap();
        assert_eq!(t.delta, inner);
        assert!(t.central.iter().all(|&x| x == 0));
    }

    #[test]
    fn central_multiplier_has_zero_delta() {
        let bm = m2(RingDescriptor::zmod(3));
        let c = bm.ring().scale(2, &bm.ring().one());
        let rm = right_multiplier(&bm, &c);
        let t = decompose_theorem21(&rm, &bm, PairMode::Structured).unwrap();
        assert!(t.delta.is_zero());
        assert_eq!(t.central, c);
    }

    #[test]
    fn precondition_failure_carries_witness() {
        let bm = m2(RingDescriptor::zmod(3));
        let e12 = bm.ring().matrix_unit(0, 1).unwrap();
        let rm = right_multiplier(&bm, &e12);
        match decompose_theorem21(&rm, &bm, PairMode::Structured) {
            Err(Error::Precondition { report, .. }) => assert!(report.witness.is_some()),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn even_modulus_rejected() {
        let bm = m2(RingDescriptor::zmod(2));
        let z = AdditiveMap::zero(bm.ring(), &bm);
        assert!(matches!(
            decompose_theorem21(&z, &bm, PairMode::Structured),
            Err(Error::EvenModulus(2))
        ));
    }

    #[test]
    fn lifted_dual_derivation_recovered() {
        let base = RingDescriptor::dual(3);
        let base_ring = Ring::new(&base).unwrap();
        let base_bm = Bimodule::regular(&base_ring);
        // d(1) = 0, d(ε) = ε
        let d = AdditiveMap::from_basis_images(&base_ring, &base_bm, &[vec![0, 0], vec![0, 1]])
            .unwrap();
        let lifted = lift_map(&d, 2).unwrap();
        let bm = m2(base);
        let out = decompose_inner_plus_lifted(&lifted, &bm).unwrap();
        let inner = inner_derivation(&bm, &out.g);
        assert_eq!(lift_map(&out.d, 2).unwrap().add(&inner).unwrap(), lifted);
        assert_eq!(out.d, d);
    }

    #[test]
    fn inner_on_dual_matrix_has_zero_base_part() {
        let bm = m2(RingDescriptor::dual(3));
        let g0: Vec<u64> = (0..8).map(|i| (i * 5 + 1) % 3).collect();
        let inner = inner_derivation(&bm, &g0);
        let out = decompose_inner_plus_lifted(&inner, &bm).unwrap();
        assert!(out.d.is_zero());
        assert_eq!(inner_derivation(&bm, &out.g), inner);
    }

    #[test]
    fn trivial_extension_inner_components() {
        let a = RingDescriptor::matrix(2, RingDescriptor::zmod(3));
        let t = Ring::new(&RingDescriptor::trivial_ext(a.clone())).unwrap();
        let tb = Bimodule::regular(&t);
        let (g, h) = (vec![1, 2, 0, 1], vec![0, 1, 1, 2]);
        let gh: Vec<u64> = g.iter().chain(&h).copied().collect();
        let parts = verify_trivial_extension_parts(&inner_derivation(&tb, &gh)).unwrap();
        let ab = Bimodule::regular(&Ring::new(&a).unwrap());
        assert_eq!(parts.delta1, inner_derivation(&ab, &g));
        assert!(parts.delta2.is_zero());
        assert_eq!(parts.delta3, inner_derivation(&ab, &h));
        assert_eq!(parts.delta4, inner_derivation(&ab, &g));

        let zero = decompose_trivial_extension(&AdditiveMap::zero(&t, &tb)).unwrap();
        assert!([zero.delta1, zero.delta2, zero.delta3, zero.delta4]
            .iter()
            .all(AdditiveMap::is_zero));
    }
}
