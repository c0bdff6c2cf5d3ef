use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::check_modulus;

/// Largest supported ring (and bimodule) rank over `Z/mZ`.
pub const MAX_RANK: usize = 64;
/// Largest supported nesting depth of matrix / trivial-extension layers.
pub const MAX_DEPTH: usize = 2;

/// Describes one of the supported finite unital rings.
///
/// Canonical coordinate bases:
/// * `zmod`: `[1]`
/// * `dual`: `[1, ε]`
/// * `matrix`: matrix units `E_ij` in row-major order, each tensored with
///   the base basis
/// * `trivial_ext`: the base basis for the first component, then the base
///   basis again for the second
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Zmod { m: u64 },
    Dual { m: u64 },
    Matrix { n: usize, base: Box<RingDescriptor> },
    TrivialExt { base: Box<RingDescriptor> },
}

impl RingDescriptor {
    pub fn zmod(m: u64) -> Self {
        RingDescriptor::Zmod { m }
    }

    pub fn dual(m: u64) -> Self {
        RingDescriptor::Dual { m }
    }

    pub fn matrix(n: usize, base: RingDescriptor) -> Self {
        RingDescriptor::Matrix {
            n,
            base: Box::new(base),
        }
    }

    pub fn trivial_ext(base: RingDescriptor) -> Self {
        RingDescriptor::TrivialExt {
            base: Box::new(base),
        }
    }

    pub fn modulus(&self) -> u64 {
        match self {
            RingDescriptor::Zmod { m } | RingDescriptor::Dual { m } => *m,
            RingDescriptor::Matrix { base, .. } | RingDescriptor::TrivialExt { base } => {
                base.modulus()
            }
        }
    }

    /// Rank as a free `Z/mZ`-module (saturating, so absurd inputs still
    /// fail validation instead of overflowing).
    pub fn rank(&self) -> usize {
        match self {
            RingDescriptor::Zmod { .. } => 1,
            RingDescriptor::Dual { .. } => 2,
            RingDescriptor::Matrix { n, base } => n.saturating_mul(*n).saturating_mul(base.rank()),
            RingDescriptor::TrivialExt { base } => base.rank().saturating_mul(2),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RingDescriptor::Zmod { .. } | RingDescriptor::Dual { .. } => 0,
            RingDescriptor::Matrix { base, .. } | RingDescriptor::TrivialExt { base } => {
                1 + base.depth()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingDescriptor::Zmod { m } | RingDescriptor::Dual { m } => check_modulus(*m)?,
            RingDescriptor::Matrix { n, base } => {
                if *n < 2 {
                    return Err(Error::InvalidRing(format!(
                        "matrix size must be at least 2, got {n}"
                    )));
                }
                if !matches!(**base, RingDescriptor::Zmod { .. } | RingDescriptor::Dual { .. }) {
                    return Err(Error::InvalidRing(
                        "matrix rings are supported over zmod or dual bases only".into(),
                    ));
                }
                base.validate()?;
            }
            RingDescriptor::TrivialExt { base } => {
                if matches!(**base, RingDescriptor::TrivialExt { .. }) {
                    return Err(Error::InvalidRing(
                        "nested trivial extensions are not supported".into(),
                    ));
                }
                base.validate()?;
            }
        }
        if self.depth() > MAX_DEPTH {
            return Err(Error::InvalidRing(format!(
                "nesting depth {} exceeds {MAX_DEPTH}",
                self.depth()
            )));
        }
        if self.rank() > MAX_RANK {
            return Err(Error::InvalidRing(format!(
                "rank {} exceeds {MAX_RANK}",
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self, RingDescriptor::Matrix { .. })
    }

    /// Number of elements, `m^rank`, if it fits.
    pub fn size(&self) -> Option<u128> {
        u128::from(self.modulus()).checked_pow(u32::try_from(self.rank()).ok()?)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Zmod { m } => write!(f, "Z/{m}"),
            RingDescriptor::Dual { m } => write!(f, "Z/{m}[e]"),
            RingDescriptor::Matrix { n, base } => write!(f, "M_{n}({base})"),
            RingDescriptor::TrivialExt { base } => write!(f, "T({base},{base})"),
        }
    }
}

/// Describes a bimodule over a ring.
///
/// JSON form: a regular bimodule serializes as its ring descriptor; the
/// other kinds carry `"kind": "matrix_over"` or `"kind": "inflated"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BimoduleDescriptor {
    /// The ring acting on itself by multiplication.
    Regular(RingDescriptor),
    /// `M_n(N)` as a bimodule over `M_n(R)`, for an `R`-bimodule `N`.
    MatrixOver {
        n: usize,
        base: Box<BimoduleDescriptor>,
    },
    /// `inner ⊕ (Z/mZ)^zero_rank`, the second summand with zero action on
    /// both sides. Not unital whenever `zero_rank > 0`.
    Inflated {
        inner: Box<BimoduleDescriptor>,
        zero_rank: usize,
    },
}

impl BimoduleDescriptor {
    pub fn regular(ring: RingDescriptor) -> Self {
        BimoduleDescriptor::Regular(ring)
    }

    pub fn inflated(inner: BimoduleDescriptor, zero_rank: usize) -> Self {
        BimoduleDescriptor::Inflated {
            inner: Box::new(inner),
            zero_rank,
        }
    }

    pub fn matrix_over(n: usize, base: BimoduleDescriptor) -> Self {
        BimoduleDescriptor::MatrixOver {
            n,
            base: Box::new(base),
        }
    }

    /// The ring acting on this bimodule.
    pub fn ring(&self) -> RingDescriptor {
        match self {
            BimoduleDescriptor::Regular(r) => r.clone(),
            BimoduleDescriptor::MatrixOver { n, base } => RingDescriptor::matrix(*n, base.ring()),
            BimoduleDescriptor::Inflated { inner, .. } => inner.ring(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            BimoduleDescriptor::Regular(r) => r.rank(),
            BimoduleDescriptor::MatrixOver { n, base } => {
                n.saturating_mul(*n).saturating_mul(base.rank())
            }
            BimoduleDescriptor::Inflated { inner, zero_rank } => {
                inner.rank().saturating_add(*zero_rank)
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.ring().modulus()
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BimoduleDescriptor::Regular(r) => r.validate()?,
            BimoduleDescriptor::MatrixOver { n, base } => {
                base.validate()?;
                RingDescriptor::matrix(*n, base.ring()).validate()?;
            }
            BimoduleDescriptor::Inflated { inner, zero_rank } => {
                inner.validate()?;
                if *zero_rank == 0 {
                    return Err(Error::InvalidRing(
                        "inflated bimodule needs a positive zero-action rank".into(),
                    ));
                }
            }
        }
        if self.rank() > MAX_RANK {
            return Err(Error::InvalidRing(format!(
                "bimodule rank {} exceeds {MAX_RANK}",
                self.rank()
            )));
        }
        Ok(())
    }

    /// True when `M_n(N)` collapses to the regular bimodule, i.e. every
    /// nested base is regular over its own ring.
    pub fn is_regular(&self) -> bool {
        match self {
            BimoduleDescriptor::Regular(_) => true,
            BimoduleDescriptor::MatrixOver { base, .. } => base.is_regular(),
            BimoduleDescriptor::Inflated { .. } => false,
        }
    }
}

impl fmt::Display for BimoduleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BimoduleDescriptor::Regular(r) => write!(f, "{r}"),
            BimoduleDescriptor::MatrixOver { n, base } => write!(f, "M_{n}({base})"),
            BimoduleDescriptor::Inflated { inner, zero_rank } => {
                write!(f, "{inner} + 0^{zero_rank}")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawBimodule {
    Zmod {
        m: u64,
    },
    Dual {
        m: u64,
    },
    Matrix {
        n: usize,
        base: Box<RingDescriptor>,
    },
    TrivialExt {
        base: Box<RingDescriptor>,
    },
    MatrixOver {
        n: usize,
        base: Box<BimoduleDescriptor>,
    },
    Inflated {
        inner: Box<BimoduleDescriptor>,
        zero_rank: usize,
    },
}

impl Serialize for BimoduleDescriptor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = match self.clone() {
            BimoduleDescriptor::Regular(r) => match r {
                RingDescriptor::Zmod { m } => RawBimodule::Zmod { m },
                RingDescriptor::Dual { m } => RawBimodule::Dual { m },
                RingDescriptor::Matrix { n, base } => RawBimodule::Matrix { n, base },
                RingDescriptor::TrivialExt { base } => RawBimodule::TrivialExt { base },
            },
            BimoduleDescriptor::MatrixOver { n, base } => RawBimodule::MatrixOver { n, base },
            BimoduleDescriptor::Inflated { inner, zero_rank } => {
                RawBimodule::Inflated { inner, zero_rank }
            }
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BimoduleDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match RawBimodule::deserialize(deserializer)? {
            RawBimodule::Zmod { m } => BimoduleDescriptor::Regular(RingDescriptor::Zmod { m }),
            RawBimodule::Dual { m } => BimoduleDescriptor::Regular(RingDescriptor::Dual { m }),
            RawBimodule::Matrix { n, base } => {
                BimoduleDescriptor::Regular(RingDescriptor::Matrix { n, base })
            }
            RawBimodule::TrivialExt { base } => {
                BimoduleDescriptor::Regular(RingDescriptor::TrivialExt { base })
            }
            RawBimodule::MatrixOver { n, base } => BimoduleDescriptor::MatrixOver { n, base },
            RawBimodule::Inflated { inner, zero_rank } => {
                BimoduleDescriptor::Inflated { inner, zero_rank }
            }
        })
    }
}
