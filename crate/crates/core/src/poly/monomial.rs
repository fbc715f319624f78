use std::cmp::Ordering;

use super::MAX_VARS;
use crate::error::{Error, Result};

/// Exponent vector `x_1^e_1 * ... * x_n^e_n`.
///
/// Slots beyond the ring's variable count are always zero. Ordering is
/// graded lexicographic with `x_1 > x_2 > ...`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial([u32; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn new(exponents: &[u32]) -> Monomial {
        assert!(exponents.len() <= MAX_VARS, "too many exponents");
        let mut e = [0; MAX_VARS];
        e[..exponents.len()].copy_from_slice(exponents);
        Monomial(e)
    }

    pub fn var(i: usize) -> Monomial {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Monomial(e)
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    #[inline]
    pub fn exponents(&self) -> &[u32; MAX_VARS] {
        &self.0
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut e = [0; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i]
                .checked_add(other.0[i])
                .ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial(e))
    }

    /// Product; panics on exponent overflow.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = [0; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Monomial(e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        Monomial(e)
    }

    /// Multiplies every exponent by `k`; panics on overflow.
    pub fn scale(&self, k: u32) -> Monomial {
        let mut e = self.0;
        for a in e.iter_mut() {
            *a = a.checked_mul(k).expect("monomial exponent overflow");
        }
        Monomial(e)
    }

    pub(crate) fn with_exponent(&self, i: usize, value: u32) -> Monomial {
        let mut e = self.0;
        e[i] = value;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x = Monomial::new(&[1, 0]);
        let y = Monomial::new(&[0, 1]);
        let x2 = Monomial::new(&[2, 0]);
        let xy = Monomial::new(&[1, 1]);
        assert!(x > y);
        assert!(y > Monomial::ONE);
        assert!(x2 > xy);
        assert!(xy > x);
    }

    #[test]
    fn division_and_overflow() {
        let a = Monomial::new(&[3, 1]);
        let b = Monomial::new(&[1, 1]);
        assert_eq!(a.div(&b), Some(Monomial::new(&[2, 0])));
        assert_eq!(b.div(&a), None);
        let big = Monomial::new(&[u32::MAX]);
        assert_eq!(big.checked_mul(&Monomial::var(0)), Err(Error::ExponentOverflow));
    }
}
