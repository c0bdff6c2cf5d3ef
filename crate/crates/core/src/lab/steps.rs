use super::identity::{eval_terms, Term};
use super::{check, require_odd, ChecklistReport, IdentityKind, NamedCheck, Witness};
use crate::addmaps::{inner_derivation, AdditiveMap};
use crate::error::{Error, Result};
use crate::rings::{Bimodule, PairMode, Ring};

/// `(coef, left, arg, right)` with ring elements already multiplied out.
type StepTerm = (i64, Vec<u64>, Vec<u64>, Vec<u64>);

struct Ctx<'a> {
    ring: &'a Ring,
    e: Vec<u64>,
    f: Vec<u64>,
    one: Vec<u64>,
}

impl Ctx<'_> {
    fn p(&self, xs: &[&[u64]]) -> Vec<u64> {
        self.ring.mul_all(xs)
    }
}

/// Each step identity as a residual `sum coef · left · Δ(arg) · right` that
/// must vanish, over basis `A` (and `B` for the bilinear parts).
fn step_terms(c: &Ctx<'_>, step: &str, a: &[u64], b: &[u64]) -> Vec<StepTerm> {
    let (e, f, one) = (&c.e[..], &c.f[..], &c.one[..]);
    let p = |xs: &[&[u64]]| c.p(xs);
    let t = |coef: i64, l: Vec<u64>, x: Vec<u64>, r: Vec<u64>| (coef, l, x, r);
    match step {
        "0a" => vec![t(1, e.to_vec(), e.to_vec(), f.to_vec())],
        "0b" => vec![t(1, f.to_vec(), e.to_vec(), e.to_vec())],
        "1a" => {
            let x = p(&[e, a, e]);
            vec![t(1, one.to_vec(), x.clone(), one.to_vec()), t(-1, e.to_vec(), x, e.to_vec())]
        }
        "1b" => {
            let x = p(&[f, a, f]);
            vec![t(1, one.to_vec(), x.clone(), one.to_vec()), t(-1, f.to_vec(), x, f.to_vec())]
        }
        "2" => {
            let x = p(&[e, a, f]);
            vec![t(1, one.to_vec(), x.clone(), one.to_vec()), t(-1, e.to_vec(), x, f.to_vec())]
        }
        "3" => {
            let x = p(&[f, a, e]);
            vec![t(1, one.to_vec(), x.clone(), one.to_vec()), t(-1, f.to_vec(), x, e.to_vec())]
        }
        "4a" => vec![
            t(1, e.to_vec(), p(&[e, a, e, b, f]), f.to_vec()),
            t(-1, p(&[e, a, e]), p(&[e, b, f]), f.to_vec()),
            t(-1, e.to_vec(), p(&[e, a, e]), p(&[e, b, f])),
            t(1, p(&[e, a, e, b, f]), f.to_vec(), f.to_vec()),
        ],
        "4b" => vec![
            t(1, e.to_vec(), p(&[e, a, f, b, f]), f.to_vec()),
            t(-1, e.to_vec(), p(&[e, a, f]), p(&[f, b, f])),
            t(-1, p(&[e, a, f]), p(&[f, b, f]), f.to_vec()),
            t(1, p(&[e, a, f]), f.to_vec(), p(&[f, b, f])),
        ],
        "5a" => vec![
            t(1, f.to_vec(), p(&[f, a, e, b, e]), e.to_vec()),
            t(-1, f.to_vec(), p(&[f, a, e]), p(&[e, b, e])),
            t(-1, p(&[f, a, e]), p(&[e, b, e]), e.to_vec()),
            t(1, f.to_vec(), f.to_vec(), p(&[f, a, e, b, e])),
        ],
        "5b" => vec![
            t(1, f.to_vec(), p(&[f, a, f, b, e]), e.to_vec()),
            t(-1, p(&[f, a, f]), p(&[f, b, e]), e.to_vec()),
            t(-1, f.to_vec(), p(&[f, a, f]), p(&[f, b, e])),
            t(1, p(&[f, a, f]), f.to_vec(), p(&[f, b, e])),
        ],
        "6a" => vec![
            t(1, e.to_vec(), p(&[e, a, e, b, e]), e.to_vec()),
            t(-1, p(&[e, a, e]), p(&[e, b, e]), e.to_vec()),
            t(-1, e.to_vec(), p(&[e, a, e]), p(&[e, b, e])),
            t(1, p(&[e, a, e]), e.to_vec(), p(&[e, b, e])),
        ],
        "6b" => vec![
            t(1, f.to_vec(), p(&[f, a, f, b, f]), f.to_vec()),
            t(-1, f.to_vec(), p(&[f, a, f]), p(&[f, b, f])),
            t(-1, p(&[f, a, f]), p(&[f, b, f]), f.to_vec()),
            t(1, p(&[f, a, f]), f.to_vec(), p(&[f, b, f])),
        ],
        "7" => vec![
            t(1, a.to_vec(), one.to_vec(), one.to_vec()),
            t(-1, one.to_vec(), one.to_vec(), a.to_vec()),
        ],
        "8a" => vec![
            t(1, e.to_vec(), p(&[e, a, f, b, e]), e.to_vec()),
            t(-1, e.to_vec(), p(&[e, a, f]), p(&[f, b, e])),
            t(-1, p(&[e, a, f]), p(&[f, b, e]), e.to_vec()),
            t(1, p(&[e, a, f, b, e]), e.to_vec(), e.to_vec()),
        ],
        "8b" => vec![
            t(1, f.to_vec(), p(&[f, b, e, a, f]), f.to_vec()),
            t(-1, f.to_vec(), p(&[f, b, e]), p(&[e, a, f])),
            t(-1, p(&[f, b, e]), p(&[e, a, f]), f.to_vec()),
            t(1, f.to_vec(), f.to_vec(), p(&[f, b, e, a, f])),
        ],
        other => unreachable!("unknown step {other}"),
    }
}

/// `(name, arity)`; arity 0 has no free variable, 1 ranges over `A`,
/// 2 over pairs `(A, B)`.
const STEPS: [(&str, usize); 16] = [
    ("0a", 0),
    ("0b", 0),
    ("1a", 1),
    ("1b", 1),
    ("2", 1),
    ("3", 1),
    ("4a", 2),
    ("4b", 2),
    ("5a", 2),
    ("5b", 2),
    ("6a", 2),
    ("6b", 2),
    ("7", 1),
    ("8a", 2),
    ("8b", 2),
    ("recompose", 2),
];

/// Checks every intermediate identity of the zero-product argument on
/// `Δ = D - I_m`, with `A`, `B` over the ring basis.
///
/// Check `step0*` is the preliminary `E·Δ(E)·F = F·Δ(E)·E = 0`; the
/// final entry re-checks that `d(A) = Δ(A) - A·Δ(1)` is a derivation.
pub fn verify_proof_steps(
    d_map: &AdditiveMap,
    bimodule: &Bimodule,
    mode: PairMode,
) -> Result<ChecklistReport> {
    let ring = bimodule.ring();
    require_odd(ring.modulus())?;
    if ring.matrix_shape().is_none() {
        return Err(Error::InvalidRing(format!(
            "proof steps need a matrix ring, got {}",
            ring.descriptor()
        )));
    }
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
    let ctx = Ctx {
        ring,
        f: ring.sub(&ring.one(), &e),
        one: ring.one(),
        e,
    };
    let de = d_map.apply(&ctx.e)?;
    let m = bimodule.sub(
        &bimodule.sandwich(Some(&ctx.e), &de, Some(&ctx.f)),
        &bimodule.sandwich(Some(&ctx.f), &de, Some(&ctx.e)),
    );
    let big_delta = d_map.sub(&inner_derivation(bimodule, &m))?;
    let basis = ring.basis_elements();
    let zero = ring.zero();

    let mut checks = Vec::new();
    for (name, arity) in STEPS {
        let mut instances = 0;
        let mut witness = None;
        let pairs: Vec<(&[u64], &[u64])> = match arity {
            0 => vec![(&zero, &zero)],
            1 => basis.iter().map(|a| (&a[..], &zero[..])).collect(),
            _ => basis
                .iter()
                .flat_map(|a| basis.iter().map(move |b| (&a[..], &b[..])))
                .collect(),
        };
        for (a, b) in pairs {
            instances += 1;
            let residual = if name == "recompose" {
                recompose_residual(&ctx, bimodule, &big_delta, a, b)?
            } else {
                let terms: Vec<Term> = step_terms(&ctx, name, a, b)
                    .into_iter()
                    .map(|(coef, l, x, r)| Term::new(coef, Some(&l), Some(&r), &x))
                    .collect();
                eval_terms(bimodule, &big_delta, &terms)
            };
            if residual.iter().any(|&x| x != 0) {
                witness = Some(Witness {
                    a: a.to_vec(),
                    b: b.to_vec(),
                    residual,
                });
                break;
            }
        }
        checks.push(NamedCheck {
            name: format!("step{name}"),
            passed: witness.is_none(),
            instances,
            witness,
        });
    }
    Ok(ChecklistReport::new(checks))
}

/// Derivation residual of `d(A) = Δ(A) - A·Δ(1)` on `(A, B)`.
fn recompose_residual(
    ctx: &Ctx<'_>,
    bimodule: &Bimodule,
    big_delta: &AdditiveMap,
    a: &[u64],
    b: &[u64],
) -> Result<Vec<u64>> {
    let c = big_delta.apply(&ctx.one)?;
    let d = |x: &[u64]| -> Result<Vec<u64>> {
        Ok(bimodule.sub(&big_delta.apply(x)?, &bimodule.left_act(x, &c)))
    };
    let ab = ctx.ring.mul(a, b);
    let lhs = d(&ab)?;
    let rhs = bimodule.add(&bimodule.right_act(&d(a)?, b), &bimodule.left_act(a, &d(b)?));
    Ok(bimodule.sub(&lhs, &rhs))
}
