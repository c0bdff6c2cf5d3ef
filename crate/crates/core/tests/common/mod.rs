//! Brute-force oracles shared by the integration tests. Nothing here
//! goes through the crate's tables or normal forms.

#![allow(dead_code)]

use std::collections::BTreeSet;

use jordanlab_core::rings::RingDescriptor;

/// Every `Z/mZ`-combination of `rows`.
pub fn span(m: u64, cols: usize, rows: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    let mut coeffs = vec![0u64; rows.len()];
    loop {
        let mut v = vec![0u64; cols];
        for (row, &c) in rows.iter().zip(&coeffs) {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = (*x + c * y) % m;
            }
        }
        out.insert(v);
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return out;
            }
            coeffs[i] += 1;
            if coeffs[i] < m {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// All vectors of `(Z/mZ)^k`.
pub fn all_vectors(m: u64, k: usize) -> Vec<Vec<u64>> {
    let total = (m as usize).pow(k as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0u64; k];
            for x in v.iter_mut().rev() {
                *x = (idx % m as usize) as u64;
                idx /= m as usize;
            }
            v
        })
        .collect()
}

pub fn mat_vec(m: u64, rows: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    rows.iter()
        .map(|r| r.iter().zip(x).fold(0, |acc, (&a, &b)| (acc + a * b) % m))
        .collect()
}

/// Multiplication straight from the ring definitions, on canonical
/// coordinates.
pub fn oracle_mul(desc: &RingDescriptor, a: &[u64], b: &[u64]) -> Vec<u64> {
    let m = desc.modulus();
    match desc {
        RingDescriptor::Zmod { .. } => vec![a[0] * b[0] % m],
        RingDescriptor::Dual { .. } => vec![a[0] * b[0] % m, (a[0] * b[1] + a[1] * b[0]) % m],
        RingDescriptor::Matrix { n, base } => {
            let n = *n;
            let r = base.rank();
            let cell = |x: &[u64], i: usize, j: usize| x[(i * n + j) * r..(i * n + j + 1) * r].to_vec();
            let mut out = vec![0u64; n * n * r];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let p = oracle_mul(base, &cell(a, i, k), &cell(b, k, j));
                        for (t, v) in p.into_iter().enumerate() {
                            let idx = (i * n + j) * r + t;
                            out[idx] = (out[idx] + v) % m;
                        }
                    }
                }
            }
            out
        }
        RingDescriptor::TrivialExt { base } => {
            let k = base.rank();
            let (a1, m1) = a.split_at(k);
            let (a2, m2) = b.split_at(k);
            let top = oracle_mul(base, a1, a2);
            let x = oracle_mul(base, a1, m2);
            let y = oracle_mul(base, m1, a2);
            top.into_iter()
                .chain(x.iter().zip(&y).map(|(&p, &q)| (p + q) % m))
                .collect()
        }
    }
}

pub fn vadd(m: u64, x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(&a, &b)| (a + b) % m).collect()
}

pub fn vsub(m: u64, x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(&a, &b)| (a + m - b) % m).collect()
}

pub fn m2(m: u64) -> RingDescriptor {
    RingDescriptor::matrix(2, RingDescriptor::zmod(m))
}

pub fn m2_dual(m: u64) -> RingDescriptor {
    RingDescriptor::matrix(2, RingDescriptor::dual(m))
}
