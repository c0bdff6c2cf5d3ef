use serde::{Deserialize, Serialize};

use super::{add_mod, check_modulus, mul_mod};
use crate::error::{Error, Result};

/// Dense row-major matrix of residues modulo `modulus`.
///
/// Every entry is kept reduced into `[0, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct ResidueMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    m: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl TryFrom<RawMatrix> for ResidueMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        check_modulus(raw.m)?;
        if raw.rows.checked_mul(raw.cols) != Some(raw.data.len()) {
            return Err(Error::Shape(format!(
                "{}x{} matrix with {} entries",
                raw.rows,
                raw.cols,
                raw.data.len()
            )));
        }
        if let Some(bad) = raw.data.iter().find(|&&x| x >= raw.m) {
            return Err(Error::Shape(format!(
                "entry {bad} is not reduced modulo {}",
                raw.m
            )));
        }
        Ok(ResidueMatrix {
            modulus: raw.m,
            rows: raw.rows,
            cols: raw.cols,
            data: raw.data,
        })
    }
}

impl From<ResidueMatrix> for RawMatrix {
    fn from(mat: ResidueMatrix) -> Self {
        RawMatrix {
            m: mat.modulus,
            rows: mat.rows,
            cols: mat.cols,
            data: mat.data,
        }
    }
}

impl ResidueMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(ResidueMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self> {
        let mut mat = Self::zeros(modulus, n, n)?;
        for i in 0..n {
            mat.data[i * n + i] = 1;
        }
        Ok(mat)
    }

    /// Builds a matrix from arbitrary integers, reducing each modulo `modulus`.
    pub fn from_i64(modulus: u64, rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        check_modulus(modulus)?;
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix with {} entries",
                data.len()
            )));
        }
        Ok(ResidueMatrix {
            modulus,
            rows,
            cols,
            data: data.iter().map(|&x| super::reduce_i64(x, modulus)).collect(),
        })
    }

    /// Builds a matrix from rows of already-reduced residues.
    pub fn from_rows(modulus: u64, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        check_modulus(modulus)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| x % modulus));
        }
        Ok(ResidueMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_raw_parts(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        debug_assert!(data.iter().all(|&x| x < modulus));
        ResidueMatrix {
            modulus,
            rows,
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> ResidueMatrix {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        ResidueMatrix::from_raw_parts(self.modulus, self.cols, self.rows, data)
    }

    /// Matrix-vector product `self * x`.
    pub fn mul_vec(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let m = self.modulus;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, m), m))
            })
            .collect())
    }

    pub fn mul(&self, other: &ResidueMatrix) -> Result<ResidueMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let m = self.modulus;
        let mut data = vec![0; self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let out = &mut data[r * other.cols..(r + 1) * other.cols];
                for (o, &b) in out.iter_mut().zip(other.row(k)) {
                    *o = add_mod(*o, mul_mod(a, b, m), m);
                }
            }
        }
        Ok(ResidueMatrix::from_raw_parts(m, self.rows, other.cols, data))
    }

    fn same_shape(&self, other: &ResidueMatrix) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ResidueMatrix) -> Result<ResidueMatrix> {
        self.same_shape(other)?;
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| add_mod(a, b, m))
            .collect();
        Ok(ResidueMatrix::from_raw_parts(m, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &ResidueMatrix) -> Result<ResidueMatrix> {
        self.same_shape(other)?;
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| super::sub_mod(a, b, m))
            .collect();
        Ok(ResidueMatrix::from_raw_parts(m, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: u64) -> ResidueMatrix {
        let m = self.modulus;
        let c = c % m;
        let data = self.data.iter().map(|&a| mul_mod(a, c, m)).collect();
        ResidueMatrix::from_raw_parts(m, self.rows, self.cols, data)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &ResidueMatrix) -> Result<ResidueMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "stacking {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ResidueMatrix::from_raw_parts(
            self.modulus,
            self.rows + other.rows,
            self.cols,
            data,
        ))
    }
}
