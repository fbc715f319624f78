use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{gcd, MultiPoly, Ring};
use crate::error::{Error, Result};

/// A reduced fraction `num / den` of polynomials over F_p.
///
/// Invariants: `den` is nonzero and monic in graded-lex order, and
/// `gcd(num, den) = 1`. Zero is `0 / 1`. With these, structural equality is
/// equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    /// Normalizing constructor.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if num.ring() != den.ring() {
            return Err(Error::RingMismatch);
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: MultiPoly, den: MultiPoly) -> Self {
        let ring = num.ring();
        if num.is_zero() {
            return RatFunc::zero(ring);
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.divexact(&g).expect("gcd divides"),
                    den.divexact(&g).expect("gcd divides"),
                )
            }
        };
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc == 1 {
            RatFunc { num, den }
        } else {
            let s = num.ring().inv(lc).expect("nonzero denominator");
            RatFunc {
                num: num.scale(s),
                den: den.scale(s),
            }
        }
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let den = MultiPoly::one(num.ring());
        RatFunc { num, den }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::from_poly(MultiPoly::zero(ring))
    }

    pub fn one(ring: Ring) -> Self {
        Self::from_poly(MultiPoly::one(ring))
    }

    pub fn constant(ring: Ring, c: i64) -> Self {
        Self::from_poly(MultiPoly::constant(ring, c))
    }

    pub fn var(ring: Ring, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(ring, i))
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.num.ring()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::InverseOfZero);
        }
        Ok(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: u32) -> RatFunc {
        let c = c % self.ring().p();
        if c == 0 {
            return RatFunc::zero(self.ring());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, f: &MultiPoly) -> RatFunc {
        self * &RatFunc::from_poly(f.clone())
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        // coprime factors stay coprime
        RatFunc {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// `f^p`; numerator and denominator stay coprime and the denominator
    /// monic, so no renormalization is needed.
    pub fn frobenius(&self) -> RatFunc {
        RatFunc {
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    pub fn p_th_root(&self) -> Result<RatFunc> {
        // a reduced fraction is a p-th power iff both sides are (the
        // denominator is monic, so no constant is lost)
        Ok(RatFunc {
            num: self.num.p_th_root()?,
            den: self.den.p_th_root()?,
        })
    }

    /// Quotient rule, exactly.
    pub fn partial_derivative(&self, i: usize) -> Result<RatFunc> {
        let dn = self.num.partial_derivative(i)?;
        if self.den.is_one() {
            return Ok(RatFunc::from_poly(dn));
        }
        let dd = self.den.partial_derivative(i)?;
        if dd.is_zero() {
            return Ok(Self::normalize(dn, self.den.clone()));
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Ok(Self::normalize(top, &self.den * &self.den))
    }

    /// Writes `self = m / r^p` with `m`, `r` polynomials and `r` as small
    /// as the squarefree structure of the denominator allows.
    pub fn over_pth_power(&self) -> (MultiPoly, MultiPoly) {
        let r = pth_power_cover(&self.den);
        let m = if r.is_one() {
            self.num.clone()
        } else {
            let cofactor = r.frobenius().divexact(&self.den).expect("den divides r^p");
            &self.num * &cofactor
        };
        (m, r)
    }

    fn sum(&self, other: &RatFunc, negate: bool) -> RatFunc {
        assert_eq!(self.ring(), other.ring(), "ring mismatch");
        let rhs_num = if negate { -&other.num } else { other.num.clone() };
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs_num);
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return RatFunc {
                num: rhs_num,
                den: other.den.clone(),
            };
        }
        if self.den == other.den {
            return Self::normalize(&self.num + &rhs_num, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let (b1, d1) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.divexact(&g).expect("gcd divides"),
                other.den.divexact(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &d1) + &(&rhs_num * &b1);
        let den = &b1 * &other.den;
        if num.is_zero() {
            return RatFunc::zero(self.ring());
        }
        if g.is_one() {
            return Self::with_monic_den(num, den);
        }
        // only factors of g can cancel
        let h = gcd(&num, &g);
        if h.is_one() {
            Self::with_monic_den(num, den)
        } else {
            Self::with_monic_den(
                num.divexact(&h).expect("gcd divides"),
                den.divexact(&h).expect("gcd divides"),
            )
        }
    }

    fn product(&self, other: &RatFunc) -> RatFunc {
        assert_eq!(self.ring(), other.ring(), "ring mismatch");
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.ring());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(&self.num * &other.num);
        }
        let cancel = |n: &MultiPoly, d: &MultiPoly| -> (MultiPoly, MultiPoly) {
            if d.is_one() || n.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (
                    n.divexact(&g).expect("gcd divides"),
                    d.divexact(&g).expect("gcd divides"),
                )
            }
        };
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        Self::with_monic_den(&a * &c, &b * &d)
    }
}

/// Smallest `r` (up to units) with `b | r^p`: `prod q^ceil(e_q / p)` over
/// the irreducible factorization `b = prod q^e_q`, found without factoring.
///
/// `gcd(b, d_1 b, ..., d_n b)` strips one power from every factor whose
/// multiplicity is prime to p, so `b / gcd` is the radical of that part.
/// Peeling it off `p` times at a time leaves a p-th power.
pub fn pth_power_cover(b: &MultiPoly) -> MultiPoly {
    let ring = b.ring();
    if b.is_constant() {
        return MultiPoly::one(ring);
    }
    if let Ok(root) = b.p_th_root() {
        return root.monic();
    }
    let mut g = b.clone();
    for i in 0..ring.nvars() {
        let d = b.partial_derivative(i).expect("index in range");
        if !d.is_zero() {
            g = gcd(&g, &d);
            if g.is_one() {
                break;
            }
        }
    }
    let radical = b.divexact(&g).expect("gcd divides").monic();
    debug_assert!(!radical.is_constant());
    let peeled = gcd(b, &radical.frobenius());
    let rest = b.divexact(&peeled).expect("gcd divides");
    (&radical * &pth_power_cover(&rest)).monic()
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                $body(self, rhs)
            }
        }
        impl $trait<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                $body(&self, &rhs)
            }
        }
        impl $trait<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &RatFunc, b: &RatFunc| a.sum(b, false));
forward_binop!(Sub, sub, |a: &RatFunc, b: &RatFunc| a.sum(b, true));
forward_binop!(Mul, mul, |a: &RatFunc, b: &RatFunc| a.product(b));

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

/// Wraps a polynomial's text in parentheses unless it is a single term.
pub(crate) fn paren_poly(p: &MultiPoly) -> String {
    if p.num_terms() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", paren_poly(&self.num), paren_poly(&self.den))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self} over {})", self.ring())
    }
}
