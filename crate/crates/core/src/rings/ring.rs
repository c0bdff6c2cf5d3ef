use serde::{Deserialize, Serialize};

use super::RingDescriptor;
use crate::error::{Error, Result};
use crate::linalg::{add_mod, mul_mod, neg_mod, sub_mod, ResidueMatrix, SolutionModule};

/// Sparse structure constants: `products[i * rank + j]` lists `(k, c)` with
/// `e_i e_j = sum c e_k`.
pub(crate) type Table = Vec<Vec<(usize, u64)>>;

/// A ring element with its descriptor, for API boundaries and JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingElement {
    pub ring: RingDescriptor,
    pub coords: Vec<u64>,
}

/// A supported finite ring with precomputed multiplication table.
#[derive(Clone, Debug)]
pub struct Ring {
    desc: RingDescriptor,
    modulus: u64,
    rank: usize,
    table: Table,
    one: Vec<u64>,
}

fn build(desc: &RingDescriptor) -> (Table, Vec<u64>) {
    let m = desc.modulus();
    match desc {
        RingDescriptor::Zmod { .. } => (vec![vec![(0, 1 % m)]], vec![1]),
        RingDescriptor::Dual { .. } => {
            // [1, e]: 1*1 = 1, 1*e = e*1 = e, e*e = 0
            (vec![vec![(0, 1)], vec![(1, 1)], vec![(1, 1)], vec![]], vec![1, 0])
        }
        RingDescriptor::Matrix { n, base } => {
            let n = *n;
            let (bt, bone) = build(base);
            let br = base.rank();
            let rank = n * n * br;
            let idx = |i: usize, j: usize, b: usize| (i * n + j) * br + b;
            let mut table = vec![Vec::new(); rank * rank];
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        for b in 0..br {
                            for c in 0..br {
                                let prods = &bt[b * br + c];
                                table[idx(i, j, b) * rank + idx(j, l, c)] =
                                    prods.iter().map(|&(k, v)| (idx(i, l, k), v)).collect();
                            }
                        }
                    }
                }
            }
            let mut one = vec![0; rank];
            for i in 0..n {
                for b in 0..br {
                    one[idx(i, i, b)] = bone[b];
                }
            }
            (table, one)
        }
        RingDescriptor::TrivialExt { base } => {
            let (bt, bone) = build(base);
            let r = base.rank();
            let rank = 2 * r;
            let mut table = vec![Vec::new(); rank * rank];
            for i in 0..r {
                for j in 0..r {
                    let prods = &bt[i * r + j];
                    // (a,0)(b,0) = (ab,0)
                    table[i * rank + j] = prods.clone();
                    // (a,0)(0,y) = (0,ay)
                    table[i * rank + (r + j)] = prods.iter().map(|&(k, v)| (r + k, v)).collect();
                    // (0,x)(b,0) = (0,xb)
                    table[(r + i) * rank + j] = prods.iter().map(|&(k, v)| (r + k, v)).collect();
                    // (0,x)(0,y) = 0
                }
            }
            let mut one = vec![0; rank];
            one[..r].copy_from_slice(&bone);
            (table, one)
        }
    }
}

impl Ring {
    pub fn new(desc: &RingDescriptor) -> Result<Self> {
        desc.validate()?;
        let (table, one) = build(desc);
        Ok(Ring {
            desc: desc.clone(),
            modulus: desc.modulus(),
            rank: desc.rank(),
            table,
            one,
        })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.desc
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn table(&self) -> &Table {
        &self.table
    }

    pub fn one(&self) -> Vec<u64> {
        self.one.clone()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank]
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        v
    }

    pub fn basis_elements(&self) -> Vec<Vec<u64>> {
        (0..self.rank).map(|i| self.basis(i)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        debug_assert_eq!(a.len(), self.rank);
        debug_assert_eq!(b.len(), self.rank);
        let m = self.modulus;
        let mut out = vec![0; self.rank];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = mul_mod(x, y, m);
                for &(k, c) in &self.table[i * self.rank + j] {
                    out[k] = add_mod(out[k], mul_mod(xy, c, m), m);
                }
            }
        }
        out
    }

    /// Product of several factors, left to right.
    pub fn mul_all(&self, factors: &[&[u64]]) -> Vec<u64> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, m)).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        a.iter().zip(b).map(|(&x, &y)| sub_mod(x, y, m)).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| neg_mod(x, self.modulus)).collect()
    }

    pub fn scale(&self, c: u64, a: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        a.iter().map(|&x| mul_mod(x, c % m, m)).collect()
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// `ab + ba`.
    pub fn jordan_product(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(&self.mul(a, b), &self.mul(b, a))
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<RingElement> {
        if coords.len() != self.rank {
            return Err(Error::Shape(format!(
                "{} coordinates for a ring of rank {}",
                coords.len(),
                self.rank
            )));
        }
        Ok(RingElement {
            ring: self.desc.clone(),
            coords: coords.into_iter().map(|x| x % self.modulus).collect(),
        })
    }

    fn check_element(&self, a: &RingElement) -> Result<()> {
        if a.ring != self.desc {
            return Err(Error::Descriptor(format!(
                "element of {} used in {}",
                a.ring, self.desc
            )));
        }
        if a.coords.len() != self.rank {
            return Err(Error::Shape(format!(
                "{} coordinates for a ring of rank {}",
                a.coords.len(),
                self.rank
            )));
        }
        Ok(())
    }

    /// Checked product of two descriptor-carrying elements.
    pub fn mul_elements(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(RingElement {
            ring: self.desc.clone(),
            coords: self.mul(&a.coords, &b.coords),
        })
    }

    pub fn add_elements(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(RingElement {
            ring: self.desc.clone(),
            coords: self.add(&a.coords, &b.coords),
        })
    }

    /// Matrix size `n` and base rank, for matrix rings.
    pub fn matrix_shape(&self) -> Option<(usize, usize)> {
        match &self.desc {
            RingDescriptor::Matrix { n, base } => Some((*n, base.rank())),
            _ => None,
        }
    }

    /// `x·E_ij` for `x` in the base ring (given in base coordinates).
    /// Indices are zero-based.
    pub fn matrix_entry_element(&self, i: usize, j: usize, x: &[u64]) -> Result<Vec<u64>> {
        let (n, br) = self
            .matrix_shape()
            .ok_or_else(|| Error::InvalidRing(format!("{} is not a matrix ring", self.desc)))?;
        if i >= n || j >= n {
            return Err(Error::Index(format!("matrix unit ({i},{j}) in size {n}")));
        }
        if x.len() != br {
            return Err(Error::Shape(format!("{} base coordinates, need {br}", x.len())));
        }
        let mut v = vec![0; self.rank];
        v[(i * n + j) * br..(i * n + j + 1) * br].copy_from_slice(x);
        Ok(v)
    }

    /// The matrix unit `E_ij` with zero-based indices.
    pub fn matrix_unit(&self, i: usize, j: usize) -> Result<Vec<u64>> {
        let base_one = match &self.desc {
            RingDescriptor::Matrix { base, .. } => build(base).1,
            _ => {
                return Err(Error::InvalidRing(format!(
                    "{} is not a matrix ring",
                    self.desc
                )))
            }
        };
        self.matrix_entry_element(i, j, &base_one)
    }

    /// Base-ring coordinates of entry `(i, j)` of a matrix-ring element.
    pub fn matrix_entry<'a>(&self, a: &'a [u64], i: usize, j: usize) -> &'a [u64] {
        let (n, br) = self.matrix_shape().expect("matrix ring");
        &a[(i * n + j) * br..(i * n + j + 1) * br]
    }

    /// Number of elements `m^rank`, if it fits.
    pub fn size(&self) -> Option<u128> {
        self.desc.size()
    }

    /// The element with lexicographic index `idx` (coordinates read as
    /// base-`m` digits, most significant first).
    pub fn element_at(&self, mut idx: u128) -> Vec<u64> {
        let m = u128::from(self.modulus);
        let mut v = vec![0; self.rank];
        for slot in v.iter_mut().rev() {
            *slot = (idx % m) as u64;
            idx /= m;
        }
        v
    }

    /// Matrix (rank × rank) of `x ↦ a·x`.
    pub fn left_mul_matrix(&self, a: &[u64]) -> ResidueMatrix {
        let mut data = vec![0; self.rank * self.rank];
        for l in 0..self.rank {
            let col = self.mul(a, &self.basis(l));
            for (k, v) in col.into_iter().enumerate() {
                data[k * self.rank + l] = v;
            }
        }
        ResidueMatrix::from_raw_parts(self.modulus, self.rank, self.rank, data)
    }

    /// Matrix (rank × rank) of `x ↦ x·a`.
    pub fn right_mul_matrix(&self, a: &[u64]) -> ResidueMatrix {
        let mut data = vec![0; self.rank * self.rank];
        for l in 0..self.rank {
            let col = self.mul(&self.basis(l), a);
            for (k, v) in col.into_iter().enumerate() {
                data[k * self.rank + l] = v;
            }
        }
        ResidueMatrix::from_raw_parts(self.modulus, self.rank, self.rank, data)
    }

    /// The centre `{c : e_i c = c e_i for every basis element e_i}`.
    pub fn center(&self) -> SolutionModule {
        let mut rows = Vec::new();
        for i in 0..self.rank {
            let e = self.basis(i);
            let diff = self.left_mul_matrix(&e).sub(&self.right_mul_matrix(&e)).unwrap();
            rows.extend(diff.row_vecs());
        }
        let system = ResidueMatrix::from_rows(self.modulus, self.rank, &rows).unwrap();
        crate::linalg::solve_homogeneous(&system)
    }
}

/// The trivial extension `T(A, A)` of a ring by itself.
pub fn trivial_extension(ring: &RingDescriptor) -> Result<RingDescriptor> {
    let t = RingDescriptor::trivial_ext(ring.clone());
    t.validate()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2z3() -> Ring {
        Ring::new(&RingDescriptor::matrix(2, RingDescriptor::zmod(3))).unwrap()
    }

    #[test]
    fn matrix_unit_relations() {
        let r = m2z3();
        let e = |i, j| r.matrix_unit(i, j).unwrap();
        assert_eq!(r.mul(&e(0, 1), &e(1, 0)), e(0, 0));
        assert!(Ring::is_zero(&r.mul(&e(0, 0), &e(1, 1))));
        assert_eq!(r.add(&e(0, 0), &e(1, 1)), r.one());
        let e12 = e(0, 1);
        assert_eq!(e12.iter().filter(|&&x| x == 1).count(), 1);
        assert_eq!(e12.iter().filter(|&&x| x == 0).count(), 3);
        assert!(r.matrix_unit(2, 0).is_err());
    }

    #[test]
    fn idempotent_split() {
        let r = m2z3();
        let e = r.matrix_unit(0, 0).unwrap();
        let f = r.sub(&r.one(), &e);
        assert!(Ring::is_zero(&r.mul(&e, &f)));
        assert!(Ring::is_zero(&r.mul(&f, &e)));
        assert_eq!(r.mul(&e, &e), e);
        assert_eq!(r.mul(&f, &f), f);
    }

    #[test]
    fn trivial_extension_rules() {
        let a = RingDescriptor::matrix(2, RingDescriptor::zmod(3));
        let t = Ring::new(&trivial_extension(&a).unwrap()).unwrap();
        assert_eq!(t.rank(), 8);
        assert_eq!(t.size(), Some(6561));
        let one = t.one();
        assert_eq!(&one[4..], &[0, 0, 0, 0]);
        for i in 0..8 {
            let x = t.basis(i);
            assert_eq!(t.mul(&one, &x), x);
            assert_eq!(t.mul(&x, &one), x);
        }
        for i in 4..8 {
            for j in 4..8 {
                assert!(Ring::is_zero(&t.mul(&t.basis(i), &t.basis(j))));
            }
        }
        assert!(trivial_extension(&trivial_extension(&a).unwrap()).is_err());
    }

    #[test]
    fn descriptor_mismatch_is_an_error() {
        let r = m2z3();
        let other = Ring::new(&RingDescriptor::matrix(2, RingDescriptor::zmod(5))).unwrap();
        let a = r.element(r.one()).unwrap();
        let b = other.element(other.one()).unwrap();
        assert!(r.mul_elements(&a, &b).is_err());
        assert_eq!(r.mul_elements(&a, &a).unwrap(), a);
    }

    #[test]
    fn dual_numbers() {
        let r = Ring::new(&RingDescriptor::dual(5)).unwrap();
        let eps = r.basis(1);
        assert!(Ring::is_zero(&r.mul(&eps, &eps)));
        assert_eq!(r.mul(&[2, 3], &[4, 1]), vec![8 % 5, (2 + 12) % 5]);
    }

    #[test]
    fn element_indexing_is_lexicographic() {
        let r = Ring::new(&RingDescriptor::dual(3)).unwrap();
        let all: Vec<_> = (0..9).map(|i| r.element_at(i)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all[5], vec![1, 2]);
    }
}
