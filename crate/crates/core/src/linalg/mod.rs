//! Exact linear algebra over `Z/mZ` for arbitrary (not necessarily prime)
//! moduli.
//!
//! Row spans are canonicalized with the Howell normal form, which makes
//! submodule equality and membership syntactic checks.

mod howell;
mod matrix;
mod module;

pub use howell::{howell_form, solve_affine, solve_homogeneous};
pub(crate) use howell::howell_rows;
pub use matrix::ResidueMatrix;
pub use module::SolutionModule;

use crate::error::{Error, Result};

/// Largest supported modulus. Products of two residues then fit in `u64`
/// with room for a handful of additions before reduction.
pub const MAX_MODULUS: u64 = 1 << 31;

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    if (2..=MAX_MODULUS).contains(&m) {
        Ok(())
    } else {
        Err(Error::Modulus(m))
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

#[inline]
pub(crate) fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub(crate) fn reduce_i64(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd on non-negative inputs: returns `(g, s, t)` with
/// `s*a + t*b = g`.
pub(crate) fn xgcd(a: u64, b: u64) -> (u64, i64, i64) {
    let (mut old_r, mut r) = (a as i64, b as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r as u64, old_s, old_t)
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, s, _) = xgcd(a % m, m);
    (g == 1).then(|| reduce_i64(s, m))
}

/// A unit `u` with `u * a ≡ gcd(a, m) (mod m)`. Requires `a != 0 mod m`.
pub(crate) fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    let m_red = m / g;
    if m_red == 1 {
        return 1;
    }
    let base = inv_mod((a / g) % m_red, m_red).expect("a/g is a unit modulo m/g");
    // Any lift base + k*(m/g) works modulo m/g; pick the first one that is
    // also a unit modulo m. One always exists among k < g.
    let mut u = base;
    while gcd(u, m) != 1 {
        u += m_red;
    }
    u % m
}
