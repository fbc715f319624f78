use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{var_name, FpElem, Monomial, Ring, MAX_VARS};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over F_p.
///
/// Terms are stored in strictly descending graded-lex order with nonzero
/// coefficients, so structural equality is polynomial equality and the
/// first term is the leading term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ring: Ring,
    terms: Vec<(Monomial, u32)>,
}

impl MultiPoly {
    pub fn zero(ring: Ring) -> Self {
        MultiPoly {
            ring,
            terms: Vec::new(),
        }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: Ring, c: i64) -> Self {
        Self::monomial(ring, Monomial::ONE, c)
    }

    pub fn monomial(ring: Ring, m: Monomial, c: i64) -> Self {
        let c = ring.reduce(c);
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        MultiPoly { ring, terms }
    }

    /// The coordinate function `x_i`. Panics if `i` is out of range.
    pub fn var(ring: Ring, i: usize) -> Self {
        ring.check_index(i).expect("variable index out of range");
        Self::monomial(ring, Monomial::var(i), 1)
    }

    /// Builds a polynomial from possibly repeated, unreduced terms.
    pub fn from_terms<I>(ring: Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut acc: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert!(m.exponents()[ring.nvars()..].iter().all(|&e| e == 0));
            let c = ring.reduce(c);
            let slot = acc.entry(m).or_insert(0);
            *slot = ring.add(*slot, c);
        }
        let terms = acc.into_iter().rev().filter(|&(_, c)| c != 0).collect();
        MultiPoly { ring, terms }
    }

    /// Sorts and merges raw `u32` terms already reduced mod p.
    fn from_raw(ring: Ring, mut terms: Vec<(Monomial, u32)>) -> Self {
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = ring.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        MultiPoly { ring, terms: out }
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (Monomial, FpElem)> + '_ {
        let ring = self.ring;
        self.terms
            .iter()
            .map(move |&(m, c)| (m, ring.elem(c as i64)))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (Monomial::ONE, 1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> FpElem {
        let c = self
            .terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1)
            .unwrap_or(0);
        self.ring.elem(c as i64)
    }

    pub fn leading_term(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    pub fn leading_coeff(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Degree in `x_v` (0 for the zero polynomial).
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// Bit `i` set iff `x_i` occurs.
    pub fn variables(&self) -> u8 {
        let mut mask = 0u8;
        for (m, _) in &self.terms {
            for i in 0..MAX_VARS {
                if m.exponent(i) > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    pub fn scale(&self, c: u32) -> MultiPoly {
        let c = c % self.ring.p();
        if c == 0 {
            return MultiPoly::zero(self.ring);
        }
        let ring = self.ring;
        let terms = self.terms.iter().map(|&(m, a)| (m, ring.mul(a, c))).collect();
        MultiPoly { ring, terms }
    }

    /// Multiplies by the term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: u32) -> MultiPoly {
        let c = c % self.ring.p();
        if c == 0 {
            return MultiPoly::zero(self.ring);
        }
        let ring = self.ring;
        // monomial multiplication preserves the order
        let terms = self
            .terms
            .iter()
            .map(|&(t, a)| (t.mul(m), ring.mul(a, c)))
            .collect();
        MultiPoly { ring, terms }
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, c)) => self.scale(self.ring.inv(c).expect("nonzero")),
        }
    }

    fn merge(&self, other: &MultiPoly, negate_other: bool) -> MultiPoly {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let ring = self.ring;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: u32| if negate_other { ring.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0, fix(b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ring.add(a[i].1, fix(b[j].1));
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(m, c)| (m, fix(c))));
        MultiPoly { ring, terms: out }
    }

    fn product(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let ring = self.ring;
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return self.mul_term(&m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return other.mul_term(&m, c);
        }
        let p = ring.p() as u64;
        let mut acc: HashMap<Monomial, u64> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                let slot = acc.entry(ma.mul(&mb)).or_insert(0);
                *slot = (*slot + ca as u64 * cb as u64) % p;
            }
        }
        let terms: Vec<_> = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (m, c as u32))
            .collect();
        MultiPoly::from_raw(ring, terms)
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `f^p`, computed as `sum c * m^p` (coefficients of F_p are fixed by
    /// Frobenius). Equivalently the substitution `x_j -> x_j^p`.
    pub fn frobenius(&self) -> MultiPoly {
        let p = self.ring.p();
        let terms = self.terms.iter().map(|&(m, c)| (m.scale(p), c)).collect();
        MultiPoly {
            ring: self.ring,
            terms,
        }
    }

    /// Exact quotient `self / divisor`.
    pub fn divexact(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        assert_eq!(self.ring, divisor.ring, "ring mismatch");
        let ring = self.ring;
        let Some((lm, lc)) = divisor.leading_term() else {
            return Err(Error::ZeroDivisor);
        };
        if self.is_zero() {
            return Ok(MultiPoly::zero(ring));
        }
        let lc_inv = ring.inv(lc).expect("nonzero leading coefficient");
        if divisor.terms.len() == 1 {
            let terms = self
                .terms
                .iter()
                .map(|&(m, c)| {
                    m.div(&lm)
                        .map(|q| (q, ring.mul(c, lc_inv)))
                        .ok_or(Error::DivisionNotExact)
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(MultiPoly { ring, terms });
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&lm).ok_or(Error::DivisionNotExact)?;
            let qc = ring.mul(rc, lc_inv);
            quot.push((qm, qc));
            rem = rem.merge(&divisor.mul_term(&qm, qc), true);
        }
        // quotient terms were produced in descending order
        Ok(MultiPoly { ring, terms: quot })
    }

    pub fn partial_derivative(&self, i: usize) -> Result<MultiPoly> {
        self.ring.check_index(i)?;
        let ring = self.ring;
        let terms = self
            .terms
            .iter()
            .filter_map(|&(m, c)| {
                let e = m.exponent(i);
                let c = ring.mul(c, e % ring.p());
                (c != 0).then(|| (m.with_exponent(i, e - 1), c))
            })
            .collect();
        Ok(MultiPoly::from_raw(ring, terms))
    }

    /// The decomposition `f = sum_alpha g_alpha^p x^alpha` with every
    /// `alpha` in `{0..p-1}^n`. Only nonzero `g_alpha` are returned.
    pub fn p_basis_decompose(&self) -> BTreeMap<Monomial, MultiPoly> {
        let p = self.ring.p();
        let mut parts: BTreeMap<Monomial, Vec<(Monomial, u32)>> = BTreeMap::new();
        for &(m, c) in &self.terms {
            let (slot, root) = split_exponents(&m, p);
            parts.entry(slot).or_default().push((root, c));
        }
        parts
            .into_iter()
            .map(|(slot, terms)| (slot, MultiPoly::from_raw(self.ring, terms)))
            .collect()
    }

    /// The single component `g_alpha` of [`p_basis_decompose`](Self::p_basis_decompose).
    pub fn p_basis_component(&self, slot: &Monomial) -> MultiPoly {
        let p = self.ring.p();
        let terms = self
            .terms
            .iter()
            .filter_map(|&(m, c)| {
                let (s, root) = split_exponents(&m, p);
                (s == *slot).then_some((root, c))
            })
            .collect();
        // dividing exponents by p preserves the order within one slot
        MultiPoly {
            ring: self.ring,
            terms,
        }
    }

    /// `g` with `g^p = self`, which exists iff every exponent is divisible
    /// by p (every residue is its own p-th root).
    pub fn p_th_root(&self) -> Result<MultiPoly> {
        let p = self.ring.p();
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let (slot, root) = split_exponents(&m, p);
                if slot.is_one() {
                    Ok((root, c))
                } else {
                    Err(Error::NotAPthPower)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPoly {
            ring: self.ring,
            terms,
        })
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::ONE,
            Some(&(first, _)) => it.fold(first, |acc, (m, _)| acc.gcd(m)),
        }
    }

    pub(crate) fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|&(t, c)| (t.div(m).expect("monomial divides"), c))
            .collect();
        MultiPoly::from_raw(self.ring, terms)
    }

    /// Coefficients with respect to `x_v`: entry `k` is the coefficient of
    /// `x_v^k`, a polynomial free of `x_v`.
    pub fn coefficients_in(&self, v: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); deg + 1];
        for &(m, c) in &self.terms {
            buckets[m.exponent(v) as usize].push((m.with_exponent(v, 0), c));
        }
        buckets
            .into_iter()
            .map(|terms| MultiPoly::from_raw(self.ring, terms))
            .collect()
    }

    pub fn from_coefficients_in(ring: Ring, v: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for &(m, a) in &c.terms {
                debug_assert_eq!(m.exponent(v), 0);
                terms.push((m.with_exponent(v, k as u32), a));
            }
        }
        MultiPoly::from_raw(ring, terms)
    }

    /// Dense coefficient vector for a polynomial in the single variable
    /// `x_v` (index = exponent).
    pub(crate) fn to_dense(&self, v: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.degree_in(v) as usize + 1];
        for &(m, c) in &self.terms {
            out[m.exponent(v) as usize] = c;
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        if out == [0] {
            out.clear();
        }
        out
    }

    pub(crate) fn from_dense(ring: Ring, v: usize, coeffs: &[u32]) -> MultiPoly {
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|&(_, &c)| c != 0)
            .map(|(k, &c)| (Monomial::ONE.with_exponent(v, k as u32), c))
            .collect();
        MultiPoly { ring, terms }
    }
}

/// Splits `x^beta` into the residue slot `beta mod p` and the quotient
/// `beta div p`.
fn split_exponents(m: &Monomial, p: u32) -> (Monomial, Monomial) {
    let mut slot = [0u32; MAX_VARS];
    let mut root = [0u32; MAX_VARS];
    for i in 0..MAX_VARS {
        slot[i] = m.exponent(i) % p;
        root[i] = m.exponent(i) / p;
    }
    (Monomial::new(&slot), Monomial::new(&root))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                $body(self, rhs)
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                $body(&self, &rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &MultiPoly, b: &MultiPoly| a.merge(b, false));
forward_binop!(Sub, sub, |a: &MultiPoly, b: &MultiPoly| a.merge(b, true));
forward_binop!(Mul, mul, |a: &MultiPoly, b: &MultiPoly| a.product(b));

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let ring = self.ring;
        let terms = self.terms.iter().map(|&(m, c)| (m, ring.neg(c))).collect();
        MultiPoly { ring, terms }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn fmt_monomial(f: &mut fmt::Formatter<'_>, nvars: usize, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for i in 0..nvars {
        let e = m.exponent(i);
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", var_name(nvars, i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.ring.nvars();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if *c != 1 {
                    write!(f, "{c}*")?;
                }
                fmt_monomial(f, n, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self} over {})", self.ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, n: usize) -> Ring {
        Ring::new(p, n).unwrap()
    }

    fn poly(r: Ring, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(r, terms.iter().map(|(e, c)| (Monomial::new(e), *c)))
    }

    #[test]
    fn frobenius_additivity_char_3() {
        let r = ring(3, 1);
        let x1 = poly(r, &[(&[1], 1), (&[0], 1)]);
        let cube = &(&x1 * &x1) * &x1;
        assert_eq!(cube, poly(r, &[(&[3], 1), (&[0], 1)]));
        assert_eq!(x1.frobenius(), cube);
        assert_eq!(x1.pow(3), cube);
    }

    #[test]
    fn exact_division() {
        let r = ring(3, 1);
        let a = poly(r, &[(&[2], 1), (&[0], -1)]);
        let b = poly(r, &[(&[1], 1), (&[0], -1)]);
        assert_eq!(a.divexact(&b).unwrap(), poly(r, &[(&[1], 1), (&[0], 1)]));
        let c = poly(r, &[(&[1], 1), (&[0], 1)]);
        assert_eq!(b.divexact(&c), Err(Error::DivisionNotExact));
        assert_eq!(a.divexact(&MultiPoly::zero(r)), Err(Error::ZeroDivisor));
    }

    #[test]
    fn coefficients_cancel_mod_p() {
        let r = ring(5, 1);
        let a = poly(r, &[(&[1], 2), (&[0], 3)]);
        let b = poly(r, &[(&[1], 3), (&[0], 2)]);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn partial_derivatives() {
        let r = ring(3, 2);
        let x3 = poly(r, &[(&[3, 0], 1)]);
        assert!(x3.partial_derivative(0).unwrap().is_zero());
        let x2y = poly(r, &[(&[2, 1], 1)]);
        assert_eq!(x2y.partial_derivative(0).unwrap(), poly(r, &[(&[1, 1], 2)]));
        let f = poly(r, &[(&[4, 0], 1), (&[1, 0], 1)]);
        assert_eq!(
            f.partial_derivative(0).unwrap(),
            poly(r, &[(&[3, 0], 1), (&[0, 0], 1)])
        );
        assert_eq!(
            f.partial_derivative(2),
            Err(Error::IndexOutOfRange { index: 2, nvars: 2 })
        );
    }

    #[test]
    fn p_basis_examples() {
        let r = ring(3, 1);
        let d = poly(r, &[(&[7], 1)]).p_basis_decompose();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&Monomial::new(&[1])], poly(r, &[(&[2], 1)]));
        let d = poly(r, &[(&[2], 1)]).p_basis_decompose();
        assert_eq!(d[&Monomial::new(&[2])], MultiPoly::one(r));

        let r2 = ring(3, 2);
        let d = poly(r2, &[(&[3, 4], 2)]).p_basis_decompose();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&Monomial::new(&[0, 1])], poly(r2, &[(&[1, 1], 2)]));
    }

    #[test]
    fn p_th_roots() {
        let r = ring(3, 1);
        let f = poly(r, &[(&[6], 1), (&[3], 2)]);
        assert_eq!(f.p_th_root().unwrap(), poly(r, &[(&[2], 1), (&[1], 2)]));
        assert_eq!(poly(r, &[(&[2], 1)]).p_th_root(), Err(Error::NotAPthPower));
        let two = MultiPoly::constant(r, 2);
        assert_eq!(two.p_th_root().unwrap(), two);
    }

    #[test]
    fn display_is_descending_grlex() {
        let r = ring(5, 2);
        let f = poly(r, &[(&[0, 0], 2), (&[1, 0], 1), (&[2, 1], 3), (&[0, 2], -1)]);
        assert_eq!(f.to_string(), "3*x^2*y + 4*y^2 + x + 2");
    }
}
