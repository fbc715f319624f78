//! Scalar differential 1- and 2-forms with rational-function coefficients.
//!
//! A [`OneForm`] is `sum f_i dx_i`; a [`TwoForm`] is
//! `sum_{i<j} f_ij dx_i ^ dx_j`, stored only on the strict upper triangle.
//! Higher degrees are never needed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{var_name, MultiPoly, RatFunc, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OneForm {
    ring: Ring,
    coeffs: Vec<RatFunc>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwoForm {
    ring: Ring,
    coeffs: BTreeMap<(usize, usize), RatFunc>,
}

impl OneForm {
    pub fn zero(ring: Ring) -> Self {
        OneForm {
            ring,
            coeffs: vec![RatFunc::zero(ring); ring.nvars()],
        }
    }

    /// `dx_i`.
    pub fn basis(ring: Ring, i: usize) -> Self {
        let mut w = OneForm::zero(ring);
        w.coeffs[i] = RatFunc::one(ring);
        w
    }

    pub fn new(ring: Ring, coeffs: Vec<RatFunc>) -> Result<Self> {
        if coeffs.len() != ring.nvars() {
            return Err(Error::ShapeViolation(format!(
                "1-form needs {} coefficients, got {}",
                ring.nvars(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(OneForm { ring, coeffs })
    }

    /// `f dx_i`.
    pub fn single(f: RatFunc, i: usize) -> Self {
        let ring = f.ring();
        let mut w = OneForm::zero(ring);
        w.coeffs[i] = f;
        w
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coeff(&self, i: usize) -> &RatFunc {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    pub fn scale(&self, f: &RatFunc) -> OneForm {
        OneForm {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    /// `d(sum f_i dx_i) = sum_{i<j} (d_i f_j - d_j f_i) dx_i ^ dx_j`.
    pub fn exterior_derivative(&self) -> TwoForm {
        let n = self.ring.nvars();
        let mut out = TwoForm::zero(self.ring);
        for i in 0..n {
            for j in (i + 1)..n {
                let a = self.coeffs[j].partial_derivative(i).expect("index in range");
                let b = self.coeffs[i].partial_derivative(j).expect("index in range");
                out.set(i, j, &a - &b);
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        let n = self.ring.nvars();
        (0..n).all(|i| {
            ((i + 1)..n).all(|j| {
                self.coeffs[j].partial_derivative(i).expect("index in range")
                    == self.coeffs[i].partial_derivative(j).expect("index in range")
            })
        })
    }

    pub fn wedge(&self, other: &OneForm) -> TwoForm {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let n = self.ring.nvars();
        let mut out = TwoForm::zero(self.ring);
        for i in 0..n {
            for j in (i + 1)..n {
                let c = &(&self.coeffs[i] * &other.coeffs[j]) - &(&self.coeffs[j] * &other.coeffs[i]);
                out.set(i, j, c);
            }
        }
        out
    }

    /// Applies `f -> f^p` to every coefficient, i.e. the substitution
    /// `x_j -> x_j^p` on coefficients.
    pub fn frobenius_coeffs(&self) -> OneForm {
        OneForm {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(RatFunc::frobenius).collect(),
        }
    }

    fn zip(&self, other: &OneForm, f: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> OneForm {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        OneForm {
            ring: self.ring,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl TwoForm {
    pub fn zero(ring: Ring) -> Self {
        TwoForm {
            ring,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Coefficient of `dx_i ^ dx_j`, honouring antisymmetry for `i > j`.
    pub fn coeff(&self, i: usize, j: usize) -> RatFunc {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => RatFunc::zero(self.ring),
            std::cmp::Ordering::Less => self
                .coeffs
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| RatFunc::zero(self.ring)),
            std::cmp::Ordering::Greater => -self.coeff(j, i),
        }
    }

    /// Nonzero coefficients keyed by `(i, j)` with `i < j`.
    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), RatFunc> {
        &self.coeffs
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, c: RatFunc) {
        debug_assert!(i < j);
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    /// Builds `f dx_i ^ dx_j` for any `i != j`.
    pub fn single(f: RatFunc, i: usize, j: usize) -> Result<Self> {
        let ring = f.ring();
        ring.check_index(i)?;
        ring.check_index(j)?;
        let mut out = TwoForm::zero(ring);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => out.set(i, j, f),
            std::cmp::Ordering::Greater => out.set(j, i, -f),
            std::cmp::Ordering::Equal => {}
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, f: &RatFunc) -> TwoForm {
        let mut out = TwoForm::zero(self.ring);
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c * f);
        }
        out
    }

    fn combine(&self, other: &TwoForm, negate: bool) -> TwoForm {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = self.clone();
        for (&(i, j), c) in &other.coeffs {
            let cur = out.coeff(i, j);
            let next = if negate { &cur - c } else { &cur + c };
            out.set(i, j, next);
        }
        out
    }
}

/// The differential `df = sum d_i f dx_i`.
pub fn differential(f: &RatFunc) -> OneForm {
    let ring = f.ring();
    let coeffs = (0..ring.nvars())
        .map(|i| f.partial_derivative(i).expect("index in range"))
        .collect();
    OneForm { ring, coeffs }
}

/// Logarithmic differential `df / f`.
pub fn dlog(f: &RatFunc) -> Result<OneForm> {
    if f.is_zero() {
        return Err(Error::ZeroArgument);
    }
    // df/f = dn/n - dd/d for f = n/d; each piece is already near-reduced
    let ring = f.ring();
    let piece = |g: &MultiPoly| -> OneForm {
        if g.is_constant() {
            return OneForm::zero(ring);
        }
        let coeffs = (0..ring.nvars())
            .map(|i| {
                let d = g.partial_derivative(i).expect("index in range");
                RatFunc::new(d, g.clone()).expect("nonzero denominator")
            })
            .collect();
        OneForm { ring, coeffs }
    };
    Ok(&piece(f.num()) - &piece(f.den()))
}

macro_rules! forward_form_ops {
    ($ty:ident, $add:expr, $sub:expr, $neg:expr) => {
        impl Add<&$ty> for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                $add(self, rhs)
            }
        }
        impl Add<$ty> for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty {
                $add(&self, &rhs)
            }
        }
        impl Sub<&$ty> for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                $sub(self, rhs)
            }
        }
        impl Sub<$ty> for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                $sub(&self, &rhs)
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $neg(self)
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $neg(&self)
            }
        }
    };
}

forward_form_ops!(
    OneForm,
    |a: &OneForm, b: &OneForm| a.zip(b, |x, y| x + y),
    |a: &OneForm, b: &OneForm| a.zip(b, |x, y| x - y),
    |a: &OneForm| OneForm {
        ring: a.ring,
        coeffs: a.coeffs.iter().map(|c| -c).collect()
    }
);

forward_form_ops!(
    TwoForm,
    |a: &TwoForm, b: &TwoForm| a.combine(b, false),
    |a: &TwoForm, b: &TwoForm| a.combine(b, true),
    |a: &TwoForm| TwoForm {
        ring: a.ring,
        coeffs: a.coeffs.iter().map(|(k, c)| (*k, -c)).collect()
    }
);

/// Formats `c * atom`, parenthesizing compound coefficients.
fn fmt_scaled(f: &mut fmt::Formatter<'_>, c: &RatFunc, atom: &str) -> fmt::Result {
    if c.is_one() {
        write!(f, "{atom}")
    } else if c.is_polynomial() && c.num().num_terms() == 1 {
        write!(f, "{c}*{atom}")
    } else {
        write!(f, "({c})*{atom}")
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ring.nvars();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            fmt_scaled(f, c, &format!("d{}", var_name(n, i)))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ring.nvars();
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let atom = format!("d{}^d{}", var_name(n, i), var_name(n, j));
            fmt_scaled(f, c, &atom)?;
        }
        Ok(())
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OneForm({self})")
    }
}

impl fmt::Debug for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoForm({self})")
    }
}
