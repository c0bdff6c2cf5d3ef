use serde::{Deserialize, Serialize};

use super::ring::Table;
use super::{BimoduleDescriptor, Ring};
use crate::error::Result;
use crate::linalg::{add_mod, mul_mod, sub_mod, ResidueMatrix, SolutionModule};

/// The four components of a bimodule element relative to the unit of the
/// ring: `1x1`, `1x - 1x1`, `x1 - 1x1` and `x - 1x - x1 + 1x1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeirceComponents {
    pub m1: Vec<u64>,
    pub m2: Vec<u64>,
    pub m3: Vec<u64>,
    pub m4: Vec<u64>,
}

/// A finite bimodule with precomputed left and right action tables.
#[derive(Clone, Debug)]
pub struct Bimodule {
    desc: BimoduleDescriptor,
    ring: Ring,
    rank: usize,
    /// `left[i * rank + l]`: coordinates of `e_i · f_l`
    left: Table,
    /// `right[l * ring_rank + i]`: coordinates of `f_l · e_i`
    right: Table,
}

fn build(desc: &BimoduleDescriptor, ring: &Ring) -> (Table, Table) {
    match desc {
        BimoduleDescriptor::Regular(_) => {
            let t = ring.table().clone();
            (t.clone(), t)
        }
        BimoduleDescriptor::Inflated { inner, zero_rank } => {
            let (il, ir) = build(inner, ring);
            let rr = ring.rank();
            let inner_rank = inner.rank();
            let rank = inner_rank + zero_rank;
            let mut left = vec![Vec::new(); rr * rank];
            let mut right = vec![Vec::new(); rank * rr];
            for i in 0..rr {
                for l in 0..inner_rank {
                    left[i * rank + l] = il[i * inner_rank + l].clone();
                    right[l * rr + i] = ir[l * rr + i].clone();
                }
            }
            (left, right)
        }
        BimoduleDescriptor::MatrixOver { n, base } => {
            let n = *n;
            let base_ring = Ring::new(&base.ring()).expect("validated");
            let (bl, brt) = build(base, &base_ring);
            let rb = base_ring.rank();
            let nb = base.rank();
            let rr = n * n * rb;
            let rank = n * n * nb;
            let ring_idx = |i: usize, j: usize, b: usize| (i * n + j) * rb + b;
            let mod_idx = |i: usize, j: usize, x: usize| (i * n + j) * nb + x;
            let mut left = vec![Vec::new(); rr * rank];
            let mut right = vec![Vec::new(); rank * rr];
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        for b in 0..rb {
                            for x in 0..nb {
                                // (E_ij b)(E_jl x) = E_il (b x)
                                left[ring_idx(i, j, b) * rank + mod_idx(j, l, x)] = bl
                                    [b * nb + x]
                                    .iter()
                                    .map(|&(k, c)| (mod_idx(i, l, k), c))
                                    .collect();
                                // (E_ij x)(E_jl b) = E_il (x b)
                                right[mod_idx(i, j, x) * rr + ring_idx(j, l, b)] = brt
                                    [x * rb + b]
                                    .iter()
                                    .map(|&(k, c)| (mod_idx(i, l, k), c))
                                    .collect();
                            }
                        }
                    }
                }
            }
            (left, right)
        }
    }
}

impl Bimodule {
    pub fn new(desc: &BimoduleDescriptor) -> Result<Self> {
        desc.validate()?;
        let ring = Ring::new(&desc.ring())?;
        let (left, right) = build(desc, &ring);
        Ok(Bimodule {
            desc: desc.clone(),
            rank: desc.rank(),
            ring,
            left,
            right,
        })
    }

    /// The ring acting on itself.
    pub fn regular(ring: &Ring) -> Self {
        let t = ring.table().clone();
        Bimodule {
            desc: BimoduleDescriptor::Regular(ring.descriptor().clone()),
            ring: ring.clone(),
            rank: ring.rank(),
            left: t.clone(),
            right: t,
        }
    }

    pub fn descriptor(&self) -> &BimoduleDescriptor {
        &self.desc
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank]
    }

    pub fn basis(&self, l: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank];
        v[l] = 1;
        v
    }

    /// `a · x` for a ring element `a` and module element `x`.
    pub fn left_act(&self, a: &[u64], x: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        let mut out = vec![0; self.rank];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (l, &xl) in x.iter().enumerate() {
                if xl == 0 {
                    continue;
                }
                let c0 = mul_mod(ai, xl, m);
                for &(k, c) in &self.left[i * self.rank + l] {
                    out[k] = add_mod(out[k], mul_mod(c0, c, m), m);
                }
            }
        }
        out
    }

    /// `x · a` for a module element `x` and ring element `a`.
    pub fn right_act(&self, x: &[u64], a: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        let rr = self.ring.rank();
        let mut out = vec![0; self.rank];
        for (l, &xl) in x.iter().enumerate() {
            if xl == 0 {
                continue;
            }
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let c0 = mul_mod(xl, ai, m);
                for &(k, c) in &self.right[l * rr + i] {
                    out[k] = add_mod(out[k], mul_mod(c0, c, m), m);
                }
            }
        }
        out
    }

    /// `a · x · b`, with `None` standing for the unit (no multiplication).
    pub fn sandwich(&self, a: Option<&[u64]>, x: &[u64], b: Option<&[u64]>) -> Vec<u64> {
        let y = match a {
            Some(a) => self.left_act(a, x),
            None => x.to_vec(),
        };
        match b {
            Some(b) => self.right_act(&y, b),
            None => y,
        }
    }

    /// Matrix (rank × rank) of `x ↦ a · x · b`.
    pub fn sandwich_matrix(&self, a: Option<&[u64]>, b: Option<&[u64]>) -> Vec<Vec<u64>> {
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(self.rank);
        for l in 0..self.rank {
            cols.push(self.sandwich(a, &self.basis(l), b));
        }
        // transpose to row-major rows[k][l]
        (0..self.rank)
            .map(|k| cols.iter().map(|col| col[k]).collect())
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        x.iter().zip(y).map(|(&a, &b)| add_mod(a, b, m)).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        x.iter().zip(y).map(|(&a, &b)| sub_mod(a, b, m)).collect()
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Vec<u64> {
        let m = self.modulus();
        x.iter().map(|&a| mul_mod(a, c % m, m)).collect()
    }

    /// Whether `1·x = x·1 = x` on every basis element.
    pub fn is_unital(&self) -> bool {
        let one = self.ring.one();
        (0..self.rank).all(|l| {
            let f = self.basis(l);
            self.left_act(&one, &f) == f && self.right_act(&f, &one) == f
        })
    }

    /// The centre `{x : a·x = x·a for every ring basis element a}`.
    pub fn center(&self) -> SolutionModule {
        let m = self.modulus();
        let mut rows = Vec::new();
        for i in 0..self.ring.rank() {
            let e = self.ring.basis(i);
            let l = self.sandwich_matrix(Some(&e), None);
            let r = self.sandwich_matrix(None, Some(&e));
            for (lr, rr) in l.iter().zip(&r) {
                rows.push(lr.iter().zip(rr).map(|(&a, &b)| sub_mod(a, b, m)).collect());
            }
        }
        let system = ResidueMatrix::from_rows(m, self.rank, &rows).expect("square rows");
        crate::linalg::solve_homogeneous(&system)
    }

    pub fn is_central(&self, x: &[u64]) -> bool {
        (0..self.ring.rank()).all(|i| {
            let e = self.ring.basis(i);
            self.left_act(&e, x) == self.right_act(x, &e)
        })
    }

    pub fn peirce_split(&self, x: &[u64]) -> PeirceComponents {
        let one = self.ring.one();
        let lx = self.left_act(&one, x);
        let xr = self.right_act(x, &one);
        let lxr = self.right_act(&lx, &one);
        let m1 = lxr.clone();
        let m2 = self.sub(&lx, &lxr);
        let m3 = self.sub(&xr, &lxr);
        let m4 = self.add(&self.sub(&self.sub(x, &lx), &xr), &lxr);
        PeirceComponents { m1, m2, m3, m4 }
    }
}
