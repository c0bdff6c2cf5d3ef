use super::identity::{eval_terms, Term};
use super::{check, require_odd, ChecklistReport, IdentityKind, NamedCheck, Witness};
use crate::addmaps::AdditiveMap;
use crate::error::{Error, Result};
use crate::linalg::{add_mod, sub_mod, ResidueMatrix};
use crate::rings::{Bimodule, PairMode};

/// `D = D1 + D2 + D3 + D4`, where `Dk` is `D` followed by the `k`-th
/// projection of [`Bimodule::peirce_split`].
pub fn peirce_components(d_map: &AdditiveMap, bimodule: &Bimodule) -> Result<[AdditiveMap; 4]> {
    if d_map.codomain() != bimodule.descriptor() {
        return Err(Error::Descriptor(format!(
            "map into {} used with {}",
            d_map.codomain(),
            bimodule.descriptor()
        )));
    }
    let m = bimodule.modulus();
    let r = bimodule.rank();
    let one = bimodule.ring().one();
    let l1 = bimodule.sandwich_matrix(Some(&one), None);
    let r1 = bimodule.sandwich_matrix(None, Some(&one));
    let lr = bimodule.sandwich_matrix(Some(&one), Some(&one));
    let mut proj = [(); 4].map(|_| ResidueMatrix::zeros(m, r, r).expect("valid"));
    for k in 0..r {
        for l in 0..r {
            let id = u64::from(k == l);
            proj[0].set(k, l, lr[k][l]);
            proj[1].set(k, l, sub_mod(l1[k][l], lr[k][l], m));
            proj[2].set(k, l, sub_mod(r1[k][l], lr[k][l], m));
            let rest = sub_mod(sub_mod(id, l1[k][l], m), r1[k][l], m);
            proj[3].set(k, l, add_mod(rest, lr[k][l], m));
        }
    }
    let mut out = Vec::with_capacity(4);
    for p in &proj {
        out.push(AdditiveMap::new(
            d_map.domain().clone(),
            d_map.codomain().clone(),
            p.mul(d_map.matrix())?,
        )?);
    }
    Ok(out.try_into().expect("four components"))
}

/// First failing basis pair of `sum coef·left·Dk(arg)·right = 0`.
fn scan<F>(bimodule: &Bimodule, map: &AdditiveMap, arity: usize, build: F) -> (usize, Option<Witness>)
where
    F: Fn(&[u64], &[u64]) -> Vec<Term>,
{
    let ring = bimodule.ring();
    let basis = ring.basis_elements();
    let one = ring.one();
    let pairs: Vec<(&[u64], &[u64])> = if arity == 1 {
        basis.iter().map(|a| (&a[..], &one[..])).collect()
    } else {
        basis
            .iter()
            .flat_map(|a| basis.iter().map(move |b| (&a[..], &b[..])))
            .collect()
    };
    let mut n = 0;
    for (a, b) in pairs {
        n += 1;
        let residual = eval_terms(bimodule, map, &build(a, b));
        if residual.iter().any(|&x| x != 0) {
            return (
                n,
                Some(Witness {
                    a: a.to_vec(),
                    b: b.to_vec(),
                    residual,
                }),
            );
        }
    }
    (n, None)
}

fn named(name: &str, (instances, witness): (usize, Option<Witness>)) -> NamedCheck {
    NamedCheck {
        name: name.to_string(),
        passed: witness.is_none(),
        instances,
        witness,
    }
}

/// Splits a Jordan derivation into a possibly non-unital bimodule along the
/// unit's two-sided Peirce decomposition and checks the component
/// identities:
///
/// - `D1` is a Jordan derivation and a derivation;
/// - `D2(ab+ba) = aD2(b) + bD2(a)` and `D2(a) = aD2(1)`;
/// - `D3(ab+ba) = D3(a)b + D3(b)a` and `D3(a) = D3(1)a`;
/// - `D4(ab+ba) = 0` and `D4 = 0`.
///
/// The unary conclusions are listed with `b = 1` in the witness.
pub fn peirce_component_check(d_map: &AdditiveMap, bimodule: &Bimodule) -> Result<ChecklistReport> {
    require_odd(bimodule.modulus())?;
    let pre = check(d_map, IdentityKind::Jordan, bimodule, PairMode::Structured)?;
    if !pre.passed {
        return Err(Error::Precondition {
            identity: IdentityKind::Jordan.to_string(),
            report: Box::new(pre),
        });
    }
    let [d1, d2, d3, d4] = peirce_components(d_map, bimodule)?;
    let ring = bimodule.ring();
    let one = ring.one();
    let jp = |a: &[u64], b: &[u64]| ring.jordan_product(a, b);
    let mut checks = Vec::new();

    for (name, kind) in [("d1_jordan", IdentityKind::Jordan), ("d1_derivation", IdentityKind::Derivation)] {
        let r = check(&d1, kind, bimodule, PairMode::Structured)?;
        checks.push(NamedCheck {
            name: name.into(),
            passed: r.passed,
            instances: ring.rank() * ring.rank(),
            witness: r.witness,
        });
    }
    checks.push(named(
        "d2_identity",
        scan(bimodule, &d2, 2, |a, b| {
            vec![
                Term::new(1, None, None, &jp(a, b)),
                Term::new(-1, Some(a), None, b),
                Term::new(-1, Some(b), None, a),
            ]
        }),
    ));
    checks.push(named(
        "d2_left_multiplier",
        scan(bimodule, &d2, 1, |a, _| {
            vec![Term::new(1, None, None, a), Term::new(-1, Some(a), None, &one)]
        }),
    ));
    checks.push(named(
        "d3_identity",
        scan(bimodule, &d3, 2, |a, b| {
            vec![
                Term::new(1, None, None, &jp(a, b)),
                Term::new(-1, None, Some(b), a),
                Term::new(-1, None, Some(a), b),
            ]
        }),
    ));
    checks.push(named(
        "d3_right_multiplier",
        scan(bimodule, &d3, 1, |a, _| {
            vec![Term::new(1, None, None, a), Term::new(-1, None, Some(a), &one)]
        }),
    ));
    checks.push(named(
        "d4_identity",
        scan(bimodule, &d4, 2, |a, b| vec![Term::new(1, None, None, &jp(a, b))]),
    ));
    checks.push(named(
        "d4_zero",
        scan(bimodule, &d4, 1, |a, _| vec![Term::new(1, None, None, a)]),
    ));
    Ok(ChecklistReport::new(checks))
}
