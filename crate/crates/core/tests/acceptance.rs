//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any of them fails or overruns its time budget.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{all_vectors, m2, m2_dual, oracle_mul, span, vadd, vsub};
use jordanlab_core::addmaps::{right_multiplier_module, AdditiveMap};
use jordanlab_core::lab::{
    check, decompose_theorem21, solve_all, verify_proof_steps, Identity, IdentityKind,
};
use jordanlab_core::linalg::{howell_form, solve_affine, ResidueMatrix, SolutionModule};
use jordanlab_core::rings::{Bimodule, PairMode, Ring, RingDescriptor};
use jordanlab_core::suite::{verify_theorem, Status, TheoremId, TheoremReport, VerifyOptions, CORRUPTED_TERM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run(id: TheoremId, ring: &RingDescriptor, opts: &VerifyOptions) -> Result<TheoremReport, String> {
    let report = verify_theorem(id, ring, opts).map_err(|e| e.to_string())?;
    ensure(
        report.status == Status::Verified,
        format!("{id} on {ring}: {} {}", report.status, report.deterministic_json()),
    )?;
    Ok(report)
}

fn exhaustive() -> VerifyOptions {
    VerifyOptions {
        pairs: PairMode::Exhaustive,
        ..VerifyOptions::default()
    }
}

fn elements(desc: &RingDescriptor) -> Vec<Vec<u64>> {
    let ring = Ring::new(desc).unwrap();
    (0..ring.size().unwrap()).map(|i| ring.element_at(i)).collect()
}

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

fn central_elements(desc: &RingDescriptor) -> Vec<Vec<u64>> {
    let all = elements(desc);
    all.iter()
        .filter(|z| all.iter().all(|b| oracle_mul(desc, z, b) == oracle_mul(desc, b, z)))
        .cloned()
        .collect()
}

fn as_set(module: &SolutionModule) -> BTreeSet<Vec<u64>> {
    module.elements(1 << 20).unwrap().into_iter().collect()
}

fn criterion1() -> Outcome {
    let mut notes = Vec::new();
    for desc in [m2(3), m2(5), m2_dual(3)] {
        let start = Instant::now();
        let bm = Bimodule::regular(&Ring::new(&desc).unwrap());
        let jordan = solve_all(IdentityKind::Jordan, &bm, PairMode::Structured).map_err(|e| e.to_string())?;
        let der = solve_all(IdentityKind::Derivation, &bm, PairMode::Structured).map_err(|e| e.to_string())?;
        ensure(jordan.equals(&der).unwrap(), format!("jordan != derivation on {desc}"))?;
        run(TheoremId::Thm3_2i, &desc, &VerifyOptions::default())?;
        if desc == m2(3) {
            ensure(jordan.order() == Some(27), "jordan module is not of size 27")?;
            let m = 3;
            let inner: BTreeSet<Vec<u64>> = elements(&desc)
                .iter()
                .map(|g| flatten(&desc, |a| vsub(m, &oracle_mul(&desc, a, g), &oracle_mul(&desc, g, a))))
                .collect();
            ensure(as_set(&der) == inner, "derivations are not the 27 inner maps")?;
        }
        let t = start.elapsed();
        ensure(t < Duration::from_secs(10), format!("{desc} took {t:?}"))?;
        notes.push(format!("{desc} {:.1}s", t.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn criterion2() -> Outcome {
    let desc = m2(3);
    let report = run(TheoremId::Thm2_1, &desc, &exhaustive())?;
    ensure(report.counts.get("star_size") == Some(&81), "star module is not of size 81")?;
    let bm = Bimodule::regular(&Ring::new(&desc).unwrap());
    let star = solve_all(IdentityKind::Star, &bm, PairMode::Exhaustive).unwrap();
    let der = solve_all(IdentityKind::Derivation, &bm, PairMode::Exhaustive).unwrap();
    let central = central_elements(&desc);
    ensure(central.len() == 3, "center is not of size 3")?;
    let center = SolutionModule::from_generators(3, 4, central.clone());
    let rm = right_multiplier_module(&bm, &center);
    // direct sum: no nonzero central multiplier is a derivation
    for c in central.iter().filter(|c| c.iter().any(|&x| x != 0)) {
        let flat = flatten(&desc, |a| oracle_mul(&desc, a, c));
        ensure(!der.contains(&flat).unwrap(), "a central multiplier is a derivation")?;
        ensure(star.contains(&flat).unwrap(), "a central multiplier misses star")?;
    }
    ensure(star.equals(&der.sum(&rm).unwrap()).unwrap(), "star != der + central multipliers")?;
    for g in star.generator_rows() {
        let f = AdditiveMap::from_flat(bm.ring(), &bm, g).unwrap();
        let trace = decompose_theorem21(&f, &bm, PairMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure(bm.is_central(&trace.central), "D(1) is not central")?;
        let r = check(&trace.delta, IdentityKind::Derivation, &bm, PairMode::Structured).unwrap();
        ensure(r.passed, "delta is not a derivation")?;
    }
    Ok(format!("star size 81, {} generators decomposed", star.num_generators()))
}

fn criterion3() -> Outcome {
    let desc = m2(3);
    run(TheoremId::Thm2_2, &desc, &exhaustive())?;
    let bm = Bimodule::regular(&Ring::new(&desc).unwrap());
    let ss = solve_all(IdentityKind::StarStar, &bm, PairMode::Exhaustive).unwrap();
    let der = solve_all(IdentityKind::Derivation, &bm, PairMode::Exhaustive).unwrap();
    let all = SolutionModule::from_generators(3, 4, all_vectors(3, 4));
    let target = der.sum(&right_multiplier_module(&bm, &all)).unwrap();
    ensure(ss.equals(&target).unwrap(), "star_star != der + all multipliers")?;
    Ok(format!("module equality, size {}", ss.order().unwrap()))
}

fn criterion4() -> Outcome {
    let bm = Bimodule::regular(&Ring::new(&m2(3)).unwrap());
    let star = solve_all(IdentityKind::Star, &bm, PairMode::Exhaustive).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..100 {
        let f = AdditiveMap::from_flat(bm.ring(), &bm, &star.random_element(&mut rng)).unwrap();
        let report = verify_proof_steps(&f, &bm, PairMode::Structured).map_err(|e| e.to_string())?;
        ensure(
            report.passed,
            format!("sample {i}: {:?}", report.failed().map(|c| &c.name).collect::<Vec<_>>()),
        )?;
    }
    Ok("100 seeded samples, all steps pass".into())
}

fn criterion5() -> Outcome {
    let report = run(TheoremId::Cor2_3, &m2_dual(3), &VerifyOptions::default())?;
    let nonzero = report.counts.get("nonzero_base_derivations").copied().unwrap_or(0);
    ensure(nonzero >= 1, "no generator has a nonzero base derivation")?;
    Ok(format!("{nonzero} generator(s) with d != 0"))
}

fn criterion6() -> Outcome {
    let desc = m2(3);
    run(TheoremId::Thm4_2, &desc, &VerifyOptions::default())?;
    let bm = Bimodule::regular(&Ring::new(&desc).unwrap());
    let phi = solve_all(IdentityKind::Phi, &bm, PairMode::Structured).unwrap();
    let expected: BTreeSet<Vec<u64>> = central_elements(&desc)
        .iter()
        .map(|c| flatten(&desc, |a| oracle_mul(&desc, a, c)))
        .collect();
    ensure(expected.len() == 3, "center is not of size 3")?;
    ensure(as_set(&phi) == expected, "phi module differs from central multipliers")?;
    Ok("size 3".into())
}

fn criterion7() -> Outcome {
    let report = run(TheoremId::Thm4_4, &m2(3), &VerifyOptions::default())?;
    let size = report.counts.get("jordan_size").copied().unwrap_or(0);
    Ok(format!("T(M_2(Z_3)) jordan = derivation, size {size}"))
}

fn criterion8() -> Outcome {
    let opts = VerifyOptions {
        inflate_rank: 4,
        ..VerifyOptions::default()
    };
    let report = run(TheoremId::Lemma3_1, &m2(3), &opts)?;
    let gens = report.counts.get("jordan_generators").copied().unwrap_or(0);
    Ok(format!("{gens} generators checked"))
}

/// A random span-preserving rewrite of `rows`.
fn perturb(m: u64, rows: &[Vec<u64>], rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let mut out = rows.to_vec();
    if out.is_empty() {
        return out;
    }
    let units: Vec<u64> = (1..m).filter(|&u| (1..m).any(|v| u * v % m == 1)).collect();
    for _ in 0..6 {
        let n = out.len();
        match rng.gen_range(0..4) {
            0 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                out.swap(i, j);
            }
            1 => {
                let i = rng.gen_range(0..n);
                let u = units[rng.gen_range(0..units.len())];
                out[i] = out[i].iter().map(|x| x * u % m).collect();
            }
            2 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if i != j {
                    let c = rng.gen_range(0..m);
                    let src = out[j].clone();
                    out[i] = vadd(m, &out[i], &src.iter().map(|x| x * c % m).collect::<Vec<_>>());
                }
            }
            _ => {
                let coeffs: Vec<u64> = out.iter().map(|_| rng.gen_range(0..m)).collect();
                let combo = (0..out[0].len())
                    .map(|k| out.iter().zip(&coeffs).fold(0, |acc, (r, c)| (acc + c * r[k]) % m))
                    .collect();
                out.push(combo);
            }
        }
    }
    out
}

fn criterion9() -> Outcome {
    let a = ResidueMatrix::from_rows(6, 1, &[vec![2]]).unwrap();
    let (p, hom) = solve_affine(&a, &[4]).unwrap();
    let p = p.ok_or("2x = 4 mod 6 reported inconsistent")?;
    let mut sols: Vec<u64> = hom.elements(6).unwrap().iter().map(|h| (h[0] + p[0]) % 6).collect();
    sols.sort();
    ensure(sols == vec![2, 5], format!("2x = 4 mod 6 gave {sols:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..1000 {
        let m = if i % 2 == 0 { 6 } else { 9 };
        let rows_n = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let rows: Vec<Vec<u64>> = (0..rows_n)
            .map(|_| (0..cols).map(|_| rng.gen_range(0..m)).collect())
            .collect();
        let other = perturb(m, &rows, &mut rng);
        let h1 = howell_form(&ResidueMatrix::from_rows(m, cols, &rows).unwrap());
        let h2 = howell_form(&ResidueMatrix::from_rows(m, cols, &other).unwrap());
        ensure(h1 == h2, format!("case {i}: forms differ for {rows:?} and {other:?}"))?;
        if cols <= 3 {
            ensure(span(m, cols, &h1.row_vecs()) == span(m, cols, &rows), format!("case {i}: span changed"))?;
        }
    }
    Ok("2x=4 -> {2,5}; 1000 rewrites canonical".into())
}

fn find_witness(v: &serde_json::Value) -> Option<&serde_json::Value> {
    match v {
        serde_json::Value::Object(map) => map
            .get("witness")
            .or_else(|| map.values().find_map(find_witness)),
        serde_json::Value::Array(xs) => xs.iter().find_map(find_witness),
        _ => None,
    }
}

fn criterion10() -> Outcome {
    let opts = VerifyOptions {
        corrupt: true,
        ..VerifyOptions::default()
    };
    let report = verify_theorem(TheoremId::Thm3_2i, &m2(3), &opts).map_err(|e| e.to_string())?;
    ensure(report.status == Status::Falsified, format!("status {}", report.status))?;
    let cx = report.counterexample.as_ref().ok_or("no counterexample")?;
    let w = find_witness(cx).ok_or("counterexample has no witness pair")?;
    let map: AdditiveMap = serde_json::from_value(cx["map"].clone()).map_err(|e| e.to_string())?;
    let bm = Bimodule::regular(&Ring::new(&m2(3)).unwrap());
    let corrupted = Identity::with_flipped_term(IdentityKind::Jordan, CORRUPTED_TERM);
    let re = check(&map, corrupted, &bm, PairMode::Structured).unwrap();
    ensure(!re.passed, "witness map passes the corrupted identity")?;
    Ok(format!("falsified, witness a={} b={}", w["a"], w["b"]))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("jordan = derivation on M_2(Z_3), M_2(Z_5), M_2(Z_3[e])", criterion1, 30),
        ("zero-product maps = derivations + central multipliers", criterion2, 30),
        ("generalized zero-product maps = derivations + multipliers", criterion3, 30),
        ("proof steps on 100 random zero-product maps", criterion4, 10),
        ("dual-number derivations = lift + inner", criterion5, 30),
        ("phi maps = central multipliers", criterion6, 10),
        ("trivial extension jordan = derivation", criterion7, 120),
        ("Peirce components on the inflated bimodule", criterion8, 30),
        ("solver oracle and Howell canonicality", criterion9, 5),
        ("corrupted identity is falsified", criterion10, 10),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let t = start.elapsed();
        let result = result.and_then(|note| {
            if t <= Duration::from_secs(*budget) {
                Ok(note)
            } else {
                Err(format!("took {:.1}s, budget {budget}s", t.as_secs_f64()))
            }
        });
        match result {
            Ok(note) => println!("criterion {}: PASS ({:.2}s) {name}: {note}", i + 1, t.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({:.2}s) {name}: {why}", i + 1, t.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
