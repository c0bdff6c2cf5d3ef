use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::addmaps::AdditiveMap;
use crate::linalg::{add_mod, mul_mod, reduce_i64};
use crate::rings::{Bimodule, PairCondition, Ring};

/// The identities an additive map `D: A → M` can be tested against.
///
/// Unconditional kinds quantify over all `a, b`; conditional kinds only over
/// pairs satisfying their hypothesis (see [`IdentityKind::condition`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// `D(ab) = D(a)b + aD(b)`
    Derivation,
    /// `D(ab) = D(a)b + aD(b) - aD(1)b`
    GeneralizedDerivation,
    /// `D(ab+ba) = D(a)b + aD(b) + D(b)a + bD(a)`
    Jordan,
    /// the Jordan identity with `- aD(1)b - bD(1)a`
    GeneralizedJordan,
    /// `ab = ba = 0 ⇒ D(a)b + aD(b) + D(b)a + bD(a) = 0`
    Star,
    /// `ab = ba = 0 ⇒ D(a)b + aD(b) + D(b)a + bD(a) - aD(1)b - bD(1)a = 0`
    StarStar,
    /// `φ(ab+ba) = aφ(b) + φ(b)a`
    Phi,
    /// `ab + ba = 0 ⇒ D(a)b + aD(b) + D(b)a + bD(a) = 0`
    RemarkAntizero,
    /// `ab = 0 ⇒ D(a)b + aD(b) + D(b)a + bD(a) = D(ab+ba)`
    ///
    /// Only `ab = 0` is assumed, with no condition on `ba`.
    RemarkAbzero,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 9] = [
        IdentityKind::Derivation,
        IdentityKind::GeneralizedDerivation,
        IdentityKind::Jordan,
        IdentityKind::GeneralizedJordan,
        IdentityKind::Star,
        IdentityKind::StarStar,
        IdentityKind::Phi,
        IdentityKind::RemarkAntizero,
        IdentityKind::RemarkAbzero,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            IdentityKind::Derivation => "derivation",
            IdentityKind::GeneralizedDerivation => "generalized_derivation",
            IdentityKind::Jordan => "jordan",
            IdentityKind::GeneralizedJordan => "generalized_jordan",
            IdentityKind::Star => "star",
            IdentityKind::StarStar => "star_star",
            IdentityKind::Phi => "phi",
            IdentityKind::RemarkAntizero => "remark_antizero",
            IdentityKind::RemarkAbzero => "remark_abzero",
        }
    }

    /// Hypothesis on `(a, b)` for conditional kinds.
    pub fn condition(self) -> Option<PairCondition> {
        match self {
            IdentityKind::Star | IdentityKind::StarStar => Some(PairCondition::ZeroProduct),
            IdentityKind::RemarkAntizero => Some(PairCondition::JordanZero),
            IdentityKind::RemarkAbzero => Some(PairCondition::LeftZero),
            _ => None,
        }
    }

    pub fn is_conditional(self) -> bool {
        self.condition().is_some()
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| format!("unknown identity kind `{s}`"))
    }
}

/// An identity kind, optionally with the sign of one term flipped.
///
/// The flipped variant exists to confirm that the verification pipeline
/// really notices a wrong identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Identity {
    pub kind: IdentityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flipped_term: Option<usize>,
}

impl Identity {
    pub fn with_flipped_term(kind: IdentityKind, term: usize) -> Self {
        Identity {
            kind,
            flipped_term: Some(term),
        }
    }

    /// The signed terms of `residual(a, b)`, which must vanish.
    pub(crate) fn terms(&self, ring: &Ring, a: &[u64], b: &[u64]) -> Vec<Term> {
        let one = ring.one();
        let ab = ring.mul(a, b);
        let jordan = ring.jordan_product(a, b);
        // The four "Jordan" terms D(a)b + aD(b) + D(b)a + bD(a).
        let sym = |sign: i64| {
            vec![
                Term::new(sign, None, Some(b), a),
                Term::new(sign, Some(a), None, b),
                Term::new(sign, None, Some(a), b),
                Term::new(sign, Some(b), None, a),
            ]
        };
        let mut terms = match self.kind {
            IdentityKind::Derivation => vec![
                Term::new(1, None, None, &ab),
                Term::new(-1, None, Some(b), a),
                Term::new(-1, Some(a), None, b),
            ],
            IdentityKind::GeneralizedDerivation => vec![
                Term::new(1, None, None, &ab),
                Term::new(-1, None, Some(b), a),
                Term::new(-1, Some(a), None, b),
                Term::new(1, Some(a), Some(b), &one),
            ],
            IdentityKind::Jordan => {
                let mut t = vec![Term::new(1, None, None, &jordan)];
                t.extend(sym(-1));
                t
            }
            IdentityKind::GeneralizedJordan => {
                let mut t = vec![Term::new(1, None, None, &jordan)];
                t.extend(sym(-1));
                t.push(Term::new(1, Some(a), Some(b), &one));
                t.push(Term::new(1, Some(b), Some(a), &one));
                t
            }
            IdentityKind::Star | IdentityKind::RemarkAntizero => sym(1),
            IdentityKind::StarStar => {
                let mut t = sym(1);
                t.push(Term::new(-1, Some(a), Some(b), &one));
                t.push(Term::new(-1, Some(b), Some(a), &one));
                t
            }
            IdentityKind::Phi => vec![
                Term::new(1, None, None, &jordan),
                Term::new(-1, Some(a), None, b),
                Term::new(-1, None, Some(a), b),
            ],
            IdentityKind::RemarkAbzero => {
                let mut t = sym(1);
                t.push(Term::new(-1, None, None, &jordan));
                t
            }
        };
        if let Some(i) = self.flipped_term {
            if let Some(t) = terms.get_mut(i) {
                t.coef = -t.coef;
            }
        }
        terms
    }
}

impl From<IdentityKind> for Identity {
    fn from(kind: IdentityKind) -> Self {
        Identity {
            kind,
            flipped_term: None,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flipped_term {
            None => write!(f, "{}", self.kind),
            Some(i) => write!(f, "{} (term {i} sign-flipped)", self.kind),
        }
    }
}

/// `coef · left · D(arg) · right`, with `None` meaning no factor.
#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub coef: i64,
    pub left: Option<Vec<u64>>,
    pub right: Option<Vec<u64>>,
    pub arg: Vec<u64>,
}

impl Term {
    pub fn new(coef: i64, left: Option<&[u64]>, right: Option<&[u64]>, arg: &[u64]) -> Self {
        Term {
            coef,
            left: left.map(<[u64]>::to_vec),
            right: right.map(<[u64]>::to_vec),
            arg: arg.to_vec(),
        }
    }
}

/// Evaluates `sum coef · left · f(arg) · right` with a concrete map.
pub(crate) fn eval_terms(bimodule: &Bimodule, f: &AdditiveMap, terms: &[Term]) -> Vec<u64> {
    let m = bimodule.modulus();
    let mut acc = bimodule.zero();
    for t in terms {
        if t.arg.iter().all(|&x| x == 0) {
            continue;
        }
        let image = f.apply(&t.arg).expect("map matches the ring");
        let v = bimodule.sandwich(t.left.as_deref(), &image, t.right.as_deref());
        let c = reduce_i64(t.coef, m);
        for (a, x) in acc.iter_mut().zip(v) {
            *a = add_mod(*a, mul_mod(c, x, m), m);
        }
    }
    acc
}

/// Linear equations (one per codomain coordinate) in the flattened map
/// unknowns expressing `sum coef · left · D(arg) · right = 0`.
pub(crate) fn symbolic_rows(bimodule: &Bimodule, terms: &[Term]) -> Vec<Vec<u64>> {
    let m = bimodule.modulus();
    let cod = bimodule.rank();
    let dom = bimodule.ring().rank();
    let mut rows = vec![vec![0u64; cod * dom]; cod];
    for t in terms {
        if t.arg.iter().all(|&x| x == 0) {
            continue;
        }
        let action = bimodule.sandwich_matrix(t.left.as_deref(), t.right.as_deref());
        let c = reduce_i64(t.coef, m);
        for (k, row) in rows.iter_mut().enumerate() {
            for (l, &w) in action[k].iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let cw = mul_mod(c, w, m);
                for (i, &z) in t.arg.iter().enumerate() {
                    if z != 0 {
                        let u = l * dom + i;
                        row[u] = add_mod(row[u], mul_mod(cw, z, m), m);
                    }
                }
            }
        }
    }
    rows
}
