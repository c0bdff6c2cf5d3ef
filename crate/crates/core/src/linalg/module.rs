use rand::Rng;
use serde::{Deserialize, Serialize};

use super::howell::howell_rows;
use super::{add_mod, mul_mod, sub_mod, ResidueMatrix};
use crate::error::{Error, Result};

/// A submodule of `(Z/mZ)^k`, stored by its Howell-form generators.
///
/// Because the generator matrix is canonical, equality of modules is
/// equality of the stored matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionModule {
    modulus: u64,
    ambient_rank: usize,
    generators: ResidueMatrix,
}

impl SolutionModule {
    pub fn from_generators(modulus: u64, ambient_rank: usize, rows: Vec<Vec<u64>>) -> Self {
        let rows: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|row| row.into_iter().map(|x| x % modulus).collect::<Vec<_>>())
            .filter(|row| row.iter().any(|&x| x != 0))
            .collect();
        debug_assert!(rows.iter().all(|row| row.len() == ambient_rank));
        let hf = howell_rows(rows, ambient_rank, modulus);
        let count = hf.len();
        let data = hf.into_iter().flatten().collect();
        SolutionModule {
            modulus,
            ambient_rank,
            generators: ResidueMatrix::from_raw_parts(modulus, count, ambient_rank, data),
        }
    }

    /// Canonicalizes the row span of `mat`.
    pub fn row_span(mat: &ResidueMatrix) -> Self {
        Self::from_generators(mat.modulus(), mat.cols(), mat.row_vecs())
    }

    pub fn zero(modulus: u64, ambient_rank: usize) -> Self {
        Self::from_generators(modulus, ambient_rank, Vec::new())
    }

    pub fn full(modulus: u64, ambient_rank: usize) -> Self {
        let rows = (0..ambient_rank)
            .map(|i| {
                let mut row = vec![0; ambient_rank];
                row[i] = 1;
                row
            })
            .collect();
        Self::from_generators(modulus, ambient_rank, rows)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &ResidueMatrix {
        &self.generators
    }

    pub fn generator_rows(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.generators.rows()).map(move |r| self.generators.row(r))
    }

    pub fn num_generators(&self) -> usize {
        self.generators.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.rows() == 0
    }

    /// Leading column and pivot value of each generator.
    pub fn pivots(&self) -> Vec<(usize, u64)> {
        self.generator_rows()
            .map(|row| {
                let c = row.iter().position(|&x| x != 0).expect("rows are nonzero");
                (c, row[c])
            })
            .collect()
    }

    /// Number of elements, when it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        self.pivots().iter().try_fold(1u128, |acc, &(_, p)| {
            acc.checked_mul(u128::from(self.modulus / p))
        })
    }

    fn check_compatible(&self, other: &SolutionModule) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::Shape(format!(
                "modules of ambient rank {} and {}",
                self.ambient_rank, other.ambient_rank
            )));
        }
        Ok(())
    }

    /// Module equality; errors when the ambient spaces differ.
    pub fn equals(&self, other: &SolutionModule) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.generators == other.generators)
    }

    /// Whether `v` lies in the module.
    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.ambient_rank {
            return Err(Error::Shape(format!(
                "vector of length {} in ambient rank {}",
                v.len(),
                self.ambient_rank
            )));
        }
        let m = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        for row in self.generator_rows() {
            let c = row.iter().position(|&x| x != 0).expect("rows are nonzero");
            if v[..c].iter().any(|&x| x != 0) {
                return Ok(false);
            }
            let p = row[c];
            if !v[c].is_multiple_of(p) {
                return Ok(false);
            }
            let q = v[c] / p;
            if q != 0 {
                for (x, &y) in v[c..].iter_mut().zip(&row[c..]) {
                    *x = sub_mod(*x, mul_mod(q, y, m), m);
                }
            }
        }
        Ok(v.iter().all(|&x| x == 0))
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_module(&self, other: &SolutionModule) -> Result<bool> {
        self.check_compatible(other)?;
        for row in other.generator_rows() {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First generator of `other` outside `self`, if any.
    pub fn first_missing(&self, other: &SolutionModule) -> Result<Option<Vec<u64>>> {
        self.check_compatible(other)?;
        for row in other.generator_rows() {
            if !self.contains(row)? {
                return Ok(Some(row.to_vec()));
            }
        }
        Ok(None)
    }

    /// The sum `self + other`.
    pub fn sum(&self, other: &SolutionModule) -> Result<SolutionModule> {
        self.check_compatible(other)?;
        let rows = self
            .generator_rows()
            .chain(other.generator_rows())
            .map(<[u64]>::to_vec)
            .collect();
        Ok(Self::from_generators(self.modulus, self.ambient_rank, rows))
    }

    /// The combination `sum_i coeffs[i] * generator_i`.
    pub fn combine(&self, coeffs: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut out = vec![0; self.ambient_rank];
        for (row, &c) in self.generator_rows().zip(coeffs) {
            let c = c % m;
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = add_mod(*o, mul_mod(c, x, m), m);
            }
        }
        out
    }

    /// A uniformly random element: each generator contributes a coefficient
    /// in `[0, m / pivot)`, which parametrizes the module bijectively.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let coeffs: Vec<u64> = self
            .pivots()
            .iter()
            .map(|&(_, p)| rng.gen_range(0..self.modulus / p))
            .collect();
        self.combine(&coeffs)
    }

    /// Every element, in a deterministic order. Returns `None` when the
    /// module has more than `limit` elements.
    pub fn elements(&self, limit: u128) -> Option<Vec<Vec<u64>>> {
        let order = self.order()?;
        if order > limit {
            return None;
        }
        let bounds: Vec<u64> = self.pivots().iter().map(|&(_, p)| self.modulus / p).collect();
        let mut coeffs = vec![0u64; bounds.len()];
        let mut out = Vec::with_capacity(order as usize);
        loop {
            out.push(self.combine(&coeffs));
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return Some(out);
                }
                coeffs[i] += 1;
                if coeffs[i] < bounds[i] {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    /// Image of this module under the linear map sending a vector `v` to
    /// `f(v)`; `f` must be `Z/mZ`-linear.
    pub fn map_linear(
        &self,
        target_rank: usize,
        f: impl FnMut(&[u64]) -> Vec<u64>,
    ) -> SolutionModule {
        let rows = self.generator_rows().map(f).collect();
        Self::from_generators(self.modulus, target_rank, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(m: u64, rows: &[&[u64]]) -> SolutionModule {
        let k = rows.first().map_or(0, |r| r.len());
        SolutionModule::from_generators(m, k, rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn equality_examples() {
        let s2 = span(6, &[&[2]]);
        let s4 = span(6, &[&[4]]);
        let s3 = span(6, &[&[3]]);
        assert!(s2.equals(&s2).unwrap());
        assert!(s2.equals(&s4).unwrap());
        assert!(!s2.equals(&s3).unwrap());
        assert!(s2.equals(&span(6, &[&[2, 0]])).is_err());
    }

    #[test]
    fn membership_examples() {
        let s2 = span(6, &[&[2]]);
        assert!(s2.contains(&[0]).unwrap());
        assert!(s2.contains(&[4]).unwrap());
        assert!(!s2.contains(&[1]).unwrap());
        assert!(!s2.contains(&[3]).unwrap());
    }

    #[test]
    fn order_and_elements() {
        let s = span(6, &[&[2, 1]]);
        // {k*(2,1)} for k in 0..6 are six distinct vectors.
        assert_eq!(s.order(), Some(6));
        let elems = s.elements(100).unwrap();
        assert_eq!(elems.len(), 6);
        for e in &elems {
            assert!(s.contains(e).unwrap());
        }
        assert_eq!(SolutionModule::full(3, 4).order(), Some(81));
        assert_eq!(SolutionModule::zero(3, 4).order(), Some(1));
    }

    #[test]
    fn sum_of_spans() {
        let a = span(6, &[&[2]]);
        let b = span(6, &[&[3]]);
        assert!(a.sum(&b).unwrap().equals(&SolutionModule::full(6, 1)).unwrap());
    }
}
