//! Additive maps from a ring into a bimodule, stored as coordinate
//! matrices.
//!
//! Every additive map between `Z/mZ`-modules is `Z/mZ`-linear (an integer
//! scalar is repeated addition), so a map is determined by the images of
//! the basis and is stored as a `codomain_rank × domain_rank` matrix acting
//! on coordinate columns. Map spaces are submodules of the row-major
//! flattening of that matrix: coordinate `k * domain_rank + i` is the
//! `k`-th coordinate of `D(e_i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ResidueMatrix, SolutionModule};
use crate::rings::{Bimodule, BimoduleDescriptor, Ring, RingDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct AdditiveMap {
    domain: RingDescriptor,
    codomain: BimoduleDescriptor,
    matrix: ResidueMatrix,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    domain: RingDescriptor,
    codomain: BimoduleDescriptor,
    matrix: ResidueMatrix,
}

impl TryFrom<RawMap> for AdditiveMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        AdditiveMap::new(raw.domain, raw.codomain, raw.matrix)
    }
}

impl From<AdditiveMap> for RawMap {
    fn from(map: AdditiveMap) -> Self {
        RawMap {
            domain: map.domain,
            codomain: map.codomain,
            matrix: map.matrix,
        }
    }
}

impl AdditiveMap {
    pub fn new(
        domain: RingDescriptor,
        codomain: BimoduleDescriptor,
        matrix: ResidueMatrix,
    ) -> Result<Self> {
        domain.validate()?;
        codomain.validate()?;
        if matrix.modulus() != domain.modulus() || codomain.modulus() != domain.modulus() {
            return Err(Error::ModulusMismatch(domain.modulus(), matrix.modulus()));
        }
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return Err(Error::Shape(format!(
                "{}x{} matrix for a map from rank {} into rank {}",
                matrix.rows(),
                matrix.cols(),
                domain.rank(),
                codomain.rank()
            )));
        }
        Ok(AdditiveMap {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn zero(domain: &Ring, codomain: &Bimodule) -> Self {
        AdditiveMap {
            domain: domain.descriptor().clone(),
            codomain: codomain.descriptor().clone(),
            matrix: ResidueMatrix::zeros(domain.modulus(), codomain.rank(), domain.rank())
                .expect("validated modulus"),
        }
    }

    /// The identity map of a ring into itself.
    pub fn identity(ring: &Ring) -> Self {
        AdditiveMap {
            domain: ring.descriptor().clone(),
            codomain: BimoduleDescriptor::regular(ring.descriptor().clone()),
            matrix: ResidueMatrix::identity(ring.modulus(), ring.rank()).expect("validated"),
        }
    }

    /// The map with `D(e_i) = images[i]`.
    pub fn from_basis_images(domain: &Ring, codomain: &Bimodule, images: &[Vec<u64>]) -> Result<Self> {
        if images.len() != domain.rank() {
            return Err(Error::Shape(format!(
                "{} basis images for a domain of rank {}",
                images.len(),
                domain.rank()
            )));
        }
        let (rows, cols) = (codomain.rank(), domain.rank());
        let mut mat = ResidueMatrix::zeros(domain.modulus(), rows, cols)?;
        for (i, img) in images.iter().enumerate() {
            if img.len() != rows {
                return Err(Error::Shape(format!(
                    "image of length {} in a codomain of rank {rows}",
                    img.len()
                )));
            }
            for (k, &v) in img.iter().enumerate() {
                mat.set(k, i, v);
            }
        }
        Ok(AdditiveMap {
            domain: domain.descriptor().clone(),
            codomain: codomain.descriptor().clone(),
            matrix: mat,
        })
    }

    /// Rebuilds a map from its flattened coordinates.
    pub fn from_flat(domain: &Ring, codomain: &Bimodule, flat: &[u64]) -> Result<Self> {
        let (rows, cols) = (codomain.rank(), domain.rank());
        if flat.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} flat coordinates for a {rows}x{cols} map",
                flat.len()
            )));
        }
        let data: Vec<u64> = flat.iter().map(|&x| x % domain.modulus()).collect();
        Ok(AdditiveMap {
            domain: domain.descriptor().clone(),
            codomain: codomain.descriptor().clone(),
            matrix: ResidueMatrix::from_raw_parts(domain.modulus(), rows, cols, data),
        })
    }

    pub fn domain(&self) -> &RingDescriptor {
        &self.domain
    }

    pub fn codomain(&self) -> &BimoduleDescriptor {
        &self.codomain
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.matrix
    }

    pub fn flat(&self) -> &[u64] {
        self.matrix.data()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Coordinates of `D(x)`.
    pub fn apply(&self, x: &[u64]) -> Result<Vec<u64>> {
        self.matrix.mul_vec(x)
    }

    /// `D(e_i)`.
    pub fn image_of_basis(&self, i: usize) -> Vec<u64> {
        (0..self.matrix.rows()).map(|k| self.matrix.get(k, i)).collect()
    }

    fn check_same(&self, other: &AdditiveMap) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Descriptor(format!(
                "maps {} -> {} and {} -> {}",
                self.domain, self.codomain, other.domain, other.codomain
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &AdditiveMap) -> Result<AdditiveMap> {
        self.check_same(other)?;
        Ok(AdditiveMap {
            matrix: self.matrix.add(&other.matrix)?,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &AdditiveMap) -> Result<AdditiveMap> {
        self.check_same(other)?;
        Ok(AdditiveMap {
            matrix: self.matrix.sub(&other.matrix)?,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: u64) -> AdditiveMap {
        AdditiveMap {
            matrix: self.matrix.scale(c),
            ..self.clone()
        }
    }

    /// `self ∘ inner`; `inner` must land in the ring `self` is defined on
    /// (viewed as the regular bimodule).
    pub fn compose(&self, inner: &AdditiveMap) -> Result<AdditiveMap> {
        if inner.codomain != BimoduleDescriptor::regular(self.domain.clone()) {
            return Err(Error::Descriptor(format!(
                "cannot compose a map on {} after a map into {}",
                self.domain, inner.codomain
            )));
        }
        Ok(AdditiveMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&inner.matrix)?,
        })
    }

    /// Restriction of the matrix to given codomain rows and domain columns.
    pub(crate) fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> ResidueMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for r in rows.clone() {
            for c in cols.clone() {
                data.push(self.matrix.get(r, c));
            }
        }
        ResidueMatrix::from_raw_parts(self.matrix.modulus(), rows.len(), cols.len(), data)
    }
}

fn map_from_images(ring: &Ring, bimodule: &Bimodule, images: impl Fn(&[u64]) -> Vec<u64>) -> AdditiveMap {
    let imgs: Vec<Vec<u64>> = ring.basis_elements().iter().map(|e| images(e)).collect();
    AdditiveMap::from_basis_images(ring, bimodule, &imgs).expect("ranks match")
}

/// The inner derivation `I_m(a) = a·m - m·a`.
pub fn inner_derivation(bimodule: &Bimodule, m: &[u64]) -> AdditiveMap {
    map_from_images(bimodule.ring(), bimodule, |a| {
        bimodule.sub(&bimodule.left_act(a, m), &bimodule.right_act(m, a))
    })
}

/// The right multiplier `a ↦ a·c`.
pub fn right_multiplier(bimodule: &Bimodule, c: &[u64]) -> AdditiveMap {
    map_from_images(bimodule.ring(), bimodule, |a| bimodule.left_act(a, c))
}

/// Entrywise lift `d̄` of a map `d: R → N` to `M_n(R) → M_n(N)`.
pub fn lift_map(d: &AdditiveMap, n: usize) -> Result<AdditiveMap> {
    let base_ring = d.domain.clone();
    let domain = RingDescriptor::matrix(n, base_ring);
    domain.validate()?;
    let codomain = if d.codomain.is_regular() && d.codomain.ring() == d.domain {
        BimoduleDescriptor::regular(domain.clone())
    } else {
        BimoduleDescriptor::matrix_over(n, d.codomain.clone())
    };
    codomain.validate()?;
    let rb = d.domain.rank();
    let nb = d.codomain.rank();
    let mut mat = ResidueMatrix::zeros(domain.modulus(), n * n * nb, n * n * rb)?;
    for cell in 0..n * n {
        for b in 0..rb {
            for x in 0..nb {
                mat.set(cell * nb + x, cell * rb + b, d.matrix.get(x, b));
            }
        }
    }
    AdditiveMap::new(domain, codomain, mat)
}

/// The module of all inner derivations `{I_m : m ∈ M}` in flattened map
/// coordinates.
pub fn inner_derivation_module(bimodule: &Bimodule) -> SolutionModule {
    let full = SolutionModule::full(bimodule.modulus(), bimodule.rank());
    let rank = bimodule.rank() * bimodule.ring().rank();
    full.map_linear(rank, |m| inner_derivation(bimodule, m).flat().to_vec())
}

/// The module `{a ↦ a·c : c ∈ elements}` in flattened map coordinates.
pub fn right_multiplier_module(bimodule: &Bimodule, elements: &SolutionModule) -> SolutionModule {
    let rank = bimodule.rank() * bimodule.ring().rank();
    elements.map_linear(rank, |c| right_multiplier(bimodule, c).flat().to_vec())
}

/// The linear map `m ↦ I_m`, as a matrix from bimodule coordinates to
/// flattened map coordinates.
pub fn inner_derivation_matrix(bimodule: &Bimodule) -> ResidueMatrix {
    let rank = bimodule.rank() * bimodule.ring().rank();
    let cols: Vec<Vec<u64>> = (0..bimodule.rank())
        .map(|l| inner_derivation(bimodule, &bimodule.basis(l)).flat().to_vec())
        .collect();
    let mut mat = ResidueMatrix::zeros(bimodule.modulus(), rank, bimodule.rank()).expect("validated");
    for (l, col) in cols.iter().enumerate() {
        for (u, &v) in col.iter().enumerate() {
            mat.set(u, l, v);
        }
    }
    mat
}
