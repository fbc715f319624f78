//! Exact arithmetic over the prime field F_p.
//!
//! Everything in the crate is built on three value types:
//!
//! - [`MultiPoly`]: sparse polynomials in at most [`MAX_VARS`] variables,
//!   terms kept in descending graded-lexicographic order.
//! - [`RatFunc`]: reduced quotients of polynomials with a monic denominator.
//! - [`FpElem`]: a single residue, used at API boundaries.
//!
//! A [`Ring`] fixes the characteristic and the number of variables. It is a
//! small `Copy` value carried by every polynomial, so arithmetic needs no
//! external context; mixing values from different rings is a programming
//! error and panics.

mod gcd;
mod monomial;
mod multipoly;
mod ratfunc;

pub use gcd::{gcd, lcm};
pub use monomial::Monomial;
pub use multipoly::MultiPoly;
pub use ratfunc::{pth_power_cover, RatFunc};

use std::fmt;

use crate::error::{Error, Result};

/// Hard limit on the number of variables.
pub const MAX_VARS: usize = 4;

/// Largest supported characteristic. Coefficient products are formed in
/// `u64`, so anything below 2^32 would be sound; the bound keeps `f^p`
/// from producing absurd exponents.
pub const MAX_PRIME: u32 = 65_521;

/// The polynomial ring F_p[x_1, ..., x_n].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    p: u32,
    nvars: usize,
}

impl Ring {
    pub fn new(p: u32, nvars: usize) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharTwo);
        }
        if !(3..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::InvalidVariableCount(nvars));
        }
        Ok(Ring { p, nvars })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.nvars {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                nvars: self.nvars,
            })
        }
    }

    pub fn elem(&self, value: i64) -> FpElem {
        FpElem {
            value: self.reduce(value),
            p: self.p,
        }
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, value: i64) -> u32 {
        value.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.p - b)
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub(crate) fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce(t0))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[", self.p)?;
        for i in 0..self.nvars {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", var_name(self.nvars, i))?;
        }
        write!(f, "]")
    }
}

/// Display name of variable `i`: `x, y, z, w` for up to four variables.
pub fn var_name(nvars: usize, i: usize) -> &'static str {
    const LETTERS: [&str; MAX_VARS] = ["x", "y", "z", "w"];
    debug_assert!(nvars <= MAX_VARS);
    LETTERS[i]
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u32,
    p: u32,
}

impl FpElem {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FpElem> {
        let ring = Ring { p: self.p, nvars: 1 };
        ring.inv(self.value)
            .map(|value| FpElem { value, p: self.p })
            .ok_or(Error::InverseOfZero)
    }

    pub fn pow(&self, mut e: u64) -> FpElem {
        let ring = Ring { p: self.p, nvars: 1 };
        let (mut base, mut acc) = (self.value, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = ring.mul(acc, base);
            }
            base = ring.mul(base, base);
            e >>= 1;
        }
        FpElem { value: acc, p: self.p }
    }

    fn ring(&self, other: &FpElem) -> Ring {
        assert_eq!(self.p, other.p, "mixing residues of different characteristic");
        Ring { p: self.p, nvars: 1 }
    }
}

impl std::ops::Add for FpElem {
    type Output = FpElem;
    fn add(self, rhs: FpElem) -> FpElem {
        let value = self.ring(&rhs).add(self.value, rhs.value);
        FpElem { value, p: self.p }
    }
}

impl std::ops::Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        let value = self.ring(&rhs).sub(self.value, rhs.value);
        FpElem { value, p: self.p }
    }
}

impl std::ops::Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        let value = self.ring(&rhs).mul(self.value, rhs.value);
        FpElem { value, p: self.p }
    }
}

impl std::ops::Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        let value = if self.value == 0 { 0 } else { self.p - self.value };
        FpElem { value, p: self.p }
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
