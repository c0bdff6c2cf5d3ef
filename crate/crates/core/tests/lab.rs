mod common;

use std::collections::BTreeSet;

use common::{m2, m2_dual, oracle_mul, vadd, vsub};
use jordanlab_core::addmaps::{
    inner_derivation, inner_derivation_module, lift_map, right_multiplier, right_multiplier_module,
    AdditiveMap,
};
use jordanlab_core::lab::{
    check, decompose_inner_plus_lifted, decompose_theorem21, peirce_component_check, solve_all,
    verify_proof_steps, verify_trivial_extension_parts, IdentityKind,
};
use jordanlab_core::linalg::SolutionModule;
use jordanlab_core::rings::{Bimodule, BimoduleDescriptor, PairMode, Ring, RingDescriptor};
use proptest::prelude::*;

fn regular(desc: &RingDescriptor) -> Bimodule {
    Bimodule::regular(&Ring::new(desc).unwrap())
}

fn elements(desc: &RingDescriptor) -> Vec<Vec<u64>> {
    let ring = Ring::new(desc).unwrap();
    (0..ring.size().unwrap()).map(|i| ring.element_at(i)).collect()
}

/// Flattened coordinates of `a ↦ f(a)` on the regular bimodule, with
/// coordinate `k * rank + i` the `k`-th entry of `f(e_i)`.
fn flatten(desc: &RingDescriptor, f: impl Fn(&[u64]) -> Vec<u64>) -> Vec<u64> {
    let r = desc.rank();
    let imgs: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            f(&e)
        })
        .collect();
    (0..r * r).map(|u| imgs[u % r][u / r]).collect()
}

fn apply_flat(desc: &RingDescriptor, flat: &[u64], x: &[u64]) -> Vec<u64> {
    let m = desc.modulus();
    let r = desc.rank();
    (0..r)
        .map(|k| (0..r).fold(0, |acc, i| (acc + flat[k * r + i] * x[i]) % m))
        .collect()
}

fn module_set(module: &SolutionModule) -> BTreeSet<Vec<u64>> {
    module.elements(1 << 20).unwrap().into_iter().collect()
}

fn central_elements(desc: &RingDescriptor) -> Vec<Vec<u64>> {
    let all = elements(desc);
    all.iter()
        .filter(|z| all.iter().all(|b| oracle_mul(desc, z, b) == oracle_mul(desc, b, z)))
        .cloned()
        .collect()
}

#[test]
fn derivations_are_inner_maps() {
    let desc = m2(3);
    let m = 3;
    let inner: BTreeSet<Vec<u64>> = elements(&desc)
        .iter()
        .map(|g| flatten(&desc, |a| vsub(m, &oracle_mul(&desc, a, g), &oracle_mul(&desc, g, a))))
        .collect();
    assert_eq!(inner.len(), 27);
    let ders = solve_all(IdentityKind::Derivation, &regular(&desc), PairMode::Structured).unwrap();
    assert_eq!(module_set(&ders), inner);
    let jordan = solve_all(IdentityKind::Jordan, &regular(&desc), PairMode::Structured).unwrap();
    assert_eq!(module_set(&jordan), inner);
}

#[test]
fn star_maps_are_derivations_plus_central_multipliers() {
    let desc = m2(3);
    let m = 3;
    let mut expected = BTreeSet::new();
    for g in elements(&desc) {
        for c in central_elements(&desc) {
            expected.insert(flatten(&desc, |a| {
                let inner = vsub(m, &oracle_mul(&desc, a, &g), &oracle_mul(&desc, &g, a));
                vadd(m, &inner, &oracle_mul(&desc, a, &c))
            }));
        }
    }
    assert_eq!(expected.len(), 81);
    let star = solve_all(IdentityKind::Star, &regular(&desc), PairMode::Exhaustive).unwrap();
    let got = module_set(&star);
    assert_eq!(got, expected);

    // every member satisfies the hypothesis-restricted identity on every
    // zero-product pair, evaluated without the crate's tables
    let all = elements(&desc);
    let zp: Vec<(&Vec<u64>, &Vec<u64>)> = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (a, b)))
        .filter(|(a, b)| {
            oracle_mul(&desc, a, b).iter().all(|&x| x == 0) && oracle_mul(&desc, b, a).iter().all(|&x| x == 0)
        })
        .collect();
    for flat in &got {
        for &(a, b) in &zp {
            let da = apply_flat(&desc, flat, a);
            let db = apply_flat(&desc, flat, b);
            let terms = [
                oracle_mul(&desc, &da, b),
                oracle_mul(&desc, a, &db),
                oracle_mul(&desc, &db, a),
                oracle_mul(&desc, b, &da),
            ];
            let s = terms.iter().fold(vec![0; 4], |acc, t| vadd(m, &acc, t));
            assert!(s.iter().all(|&x| x == 0));
        }
    }
}

#[test]
fn phi_maps_are_central_multipliers() {
    let desc = m2(3);
    let central = central_elements(&desc);
    assert_eq!(central.len(), 3);
    let expected: BTreeSet<Vec<u64>> = central
        .iter()
        .map(|c| flatten(&desc, |a| oracle_mul(&desc, a, c)))
        .collect();
    let phi = solve_all(IdentityKind::Phi, &regular(&desc), PairMode::Exhaustive).unwrap();
    assert_eq!(module_set(&phi), expected);
}

#[test]
fn containments_between_solution_modules() {
    let bm = regular(&m2(3));
    let solve = |k| solve_all(k, &bm, PairMode::Structured).unwrap();
    let der = solve(IdentityKind::Derivation);
    let jordan = solve(IdentityKind::Jordan);
    let star = solve(IdentityKind::Star);
    let gd = solve(IdentityKind::GeneralizedDerivation);
    let gj = solve(IdentityKind::GeneralizedJordan);
    let star_star = solve(IdentityKind::StarStar);
    assert!(jordan.contains_module(&der).unwrap());
    assert!(star.contains_module(&jordan).unwrap());
    assert!(gj.contains_module(&gd).unwrap());
    assert!(star_star.contains_module(&gj).unwrap());
    assert!(star_star.contains_module(&star).unwrap());

    let all_rm = right_multiplier_module(&bm, &SolutionModule::full(3, 4));
    assert!(gd.equals(&der.sum(&all_rm).unwrap()).unwrap());
    assert!(inner_derivation_module(&bm).equals(&der).unwrap());
}

#[test]
fn remark_kinds_contain_in_star() {
    let bm = regular(&m2(3));
    let star = solve_all(IdentityKind::Star, &bm, PairMode::Exhaustive).unwrap();
    for kind in [IdentityKind::RemarkAntizero, IdentityKind::RemarkAbzero] {
        let s = solve_all(kind, &bm, PairMode::Exhaustive).unwrap();
        assert!(star.contains_module(&s).unwrap(), "{kind}");
        let structured = solve_all(kind, &bm, PairMode::Structured).unwrap();
        assert!(structured.equals(&s).unwrap(), "{kind}");
    }
}

#[test]
fn generalized_derivation_correction_both_ways() {
    let bm = regular(&m2(3));
    let ring = bm.ring();
    let gd = solve_all(IdentityKind::GeneralizedDerivation, &bm, PairMode::Structured).unwrap();
    for g in gd.generator_rows() {
        let f = AdditiveMap::from_flat(ring, &bm, g).unwrap();
        let f1 = f.apply(&ring.one()).unwrap();
        let d = f.sub(&right_multiplier(&bm, &f1)).unwrap();
        assert!(check(&d, IdentityKind::Derivation, &bm, PairMode::Structured).unwrap().passed);
    }
    let der = solve_all(IdentityKind::Derivation, &bm, PairMode::Structured).unwrap();
    for g in der.generator_rows() {
        let d = AdditiveMap::from_flat(ring, &bm, g).unwrap();
        for c in ring.basis_elements() {
            let f = d.add(&right_multiplier(&bm, &c)).unwrap();
            let r = check(&f, IdentityKind::GeneralizedDerivation, &bm, PairMode::Structured).unwrap();
            assert!(r.passed);
        }
    }
}

#[test]
fn star_generators_decompose_and_pass_steps() {
    let bm = regular(&m2(3));
    let star = solve_all(IdentityKind::Star, &bm, PairMode::Exhaustive).unwrap();
    for g in star.generator_rows() {
        let f = AdditiveMap::from_flat(bm.ring(), &bm, g).unwrap();
        let trace = decompose_theorem21(&f, &bm, PairMode::Exhaustive).unwrap();
        assert!(bm.is_central(&trace.central));
        assert!(check(&trace.delta, IdentityKind::Derivation, &bm, PairMode::Structured).unwrap().passed);
        let steps = verify_proof_steps(&f, &bm, PairMode::Structured).unwrap();
        assert!(steps.passed);
    }
}

#[test]
fn dual_matrix_derivations_split_into_lift_and_inner() {
    let desc = m2_dual(3);
    let bm = regular(&desc);
    let der = solve_all(IdentityKind::Derivation, &bm, PairMode::Structured).unwrap();
    assert_eq!(der.order(), Some(2187));
    let mut nonzero = 0;
    for g in der.generator_rows() {
        let delta = AdditiveMap::from_flat(bm.ring(), &bm, g).unwrap();
        let parts = decompose_inner_plus_lifted(&delta, &bm).unwrap();
        let rebuilt = lift_map(&parts.d, 2).unwrap().add(&inner_derivation(&bm, &parts.g)).unwrap();
        assert_eq!(rebuilt, delta);
        nonzero += usize::from(!parts.d.is_zero());
    }
    assert!(nonzero > 0);
}

#[test]
fn trivial_extension_jordan_generators_split() {
    let desc = RingDescriptor::trivial_ext(m2(3));
    let bm = regular(&desc);
    let jordan = solve_all(IdentityKind::Jordan, &bm, PairMode::Structured).unwrap();
    let der = solve_all(IdentityKind::Derivation, &bm, PairMode::Structured).unwrap();
    assert!(jordan.equals(&der).unwrap());
    for g in jordan.generator_rows() {
        let f = AdditiveMap::from_flat(bm.ring(), &bm, g).unwrap();
        let parts = verify_trivial_extension_parts(&f).unwrap();
        assert!(parts.delta2.is_zero());
    }
}

#[test]
fn inflated_jordan_generators_pass_peirce_checks() {
    let desc = BimoduleDescriptor::inflated(BimoduleDescriptor::regular(m2(3)), 4);
    let bm = Bimodule::new(&desc).unwrap();
    let jordan = solve_all(IdentityKind::Jordan, &bm, PairMode::Structured).unwrap();
    let der = solve_all(IdentityKind::Derivation, &bm, PairMode::Structured).unwrap();
    assert!(jordan.equals(&der).unwrap());
    for g in jordan.generator_rows() {
        let f = AdditiveMap::from_flat(bm.ring(), &bm, g).unwrap();
        let report = peirce_component_check(&f, &bm).unwrap();
        assert!(report.passed, "{:?}", report.failed().collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_derivation_is_additive_in_m(x in proptest::collection::vec(0u64..9, 8), y in proptest::collection::vec(0u64..9, 8)) {
        let bm = regular(&m2_dual(9));
        let sum = inner_derivation(&bm, &x).add(&inner_derivation(&bm, &y)).unwrap();
        prop_assert_eq!(inner_derivation(&bm, &vadd(9, &x, &y)), sum);
    }

    #[test]
    fn maps_are_additive(flat in proptest::collection::vec(0u64..5, 16), x in proptest::collection::vec(0u64..5, 4), y in proptest::collection::vec(0u64..5, 4)) {
        let desc = m2(5);
        let bm = regular(&desc);
        let f = AdditiveMap::from_flat(bm.ring(), &bm, &flat).unwrap();
        let lhs = f.apply(&vadd(5, &x, &y)).unwrap();
        prop_assert_eq!(lhs, vadd(5, &f.apply(&x).unwrap(), &f.apply(&y).unwrap()));
        prop_assert_eq!(f.apply(&x).unwrap(), apply_flat(&desc, &flat, &x));
    }

    #[test]
    fn right_multipliers_are_generalized_derivations(c in proptest::collection::vec(0u64..3, 4)) {
        let bm = regular(&m2(3));
        let f = right_multiplier(&bm, &c);
        prop_assert!(check(&f, IdentityKind::GeneralizedDerivation, &bm, PairMode::Structured).unwrap().passed);
        prop_assert!(check(&f, IdentityKind::StarStar, &bm, PairMode::Structured).unwrap().passed);
    }

    #[test]
    fn map_json_round_trip(flat in proptest::collection::vec(0u64..3, 32)) {
        let desc = BimoduleDescriptor::inflated(BimoduleDescriptor::regular(m2(3)), 4);
        let bm = Bimodule::new(&desc).unwrap();
        let f = AdditiveMap::from_flat(bm.ring(), &bm, &flat).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: AdditiveMap = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn random_star_members_decompose(seed in any::<u64>()) {
        use rand::SeedableRng;
        let bm = regular(&m2(3));
        let star = solve_all(IdentityKind::Star, &bm, PairMode::Structured).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = AdditiveMap::from_flat(bm.ring(), &bm, &star.random_element(&mut rng)).unwrap();
        let trace = decompose_theorem21(&f, &bm, PairMode::Structured).unwrap();
        let rebuilt = trace.delta.add(&right_multiplier(&bm, &trace.central)).unwrap();
        prop_assert_eq!(rebuilt, f);
    }
}
