//! Exact multivariate gcd over F_p.
//!
//! Recursive content / primitive-part scheme: pick a main variable, split
//! off the content with respect to it (a gcd in fewer variables), and run a
//! primitive pseudo-remainder sequence on the primitive parts. Polynomials
//! in a single variable drop to dense Euclid over the field.

use super::{MultiPoly, Ring, MAX_VARS};

/// Monic gcd (graded-lex leading coefficient 1). `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    assert_eq!(a.ring(), b.ring(), "ring mismatch");
    gcd_rec(a, b).monic()
}

/// Monic lcm; zero if either argument is zero.
pub fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero(a.ring());
    }
    let g = gcd(a, b);
    (a * &b.divexact(&g).expect("gcd divides")).monic()
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let ring = a.ring();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(ring);
    }
    if a == b {
        return a.clone();
    }

    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let a = if ma.is_one() { a.clone() } else { a.div_monomial(&ma) };
    let b = if mb.is_one() { b.clone() } else { b.div_monomial(&mb) };
    let mono_poly = MultiPoly::monomial(ring, mono, 1);
    if a.is_constant() || b.is_constant() {
        return mono_poly;
    }

    let (va, vb) = (a.variables(), b.variables());
    let both = va & vb;
    if both == 0 {
        return mono_poly;
    }

    // a variable present in only one argument: the gcd divides the content
    // of that argument with respect to it
    if va != vb {
        let only = (va ^ vb).trailing_zeros() as usize;
        let g = if va & (1 << only) != 0 {
            gcd_rec(&content_in(&a, only), &b)
        } else {
            gcd_rec(&a, &content_in(&b, only))
        };
        return &mono_poly * &g;
    }

    if va.count_ones() == 1 {
        let v = va.trailing_zeros() as usize;
        let g = univariate_gcd(ring, &a.to_dense(v), &b.to_dense(v));
        return &mono_poly * &MultiPoly::from_dense(ring, v, &g);
    }

    let v = main_variable(&a, &b, both);
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.divexact(&ca).expect("content divides");
    let pb = b.divexact(&cb).expect("content divides");
    let g = primitive_prs(ring, v, pa.coefficients_in(v), pb.coefficients_in(v));
    &(&mono_poly * &c) * &g
}

/// The shared variable of smallest degree; shorter remainder sequences.
fn main_variable(a: &MultiPoly, b: &MultiPoly, mask: u8) -> usize {
    (0..MAX_VARS)
        .filter(|&v| mask & (1 << v) != 0)
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("nonempty mask")
}

/// gcd of the coefficients of `f` viewed as a polynomial in `x_v`.
fn content_in(f: &MultiPoly, v: usize) -> MultiPoly {
    let coeffs = f.coefficients_in(v);
    content_of(f.ring(), &coeffs)
}

fn content_of(ring: Ring, coeffs: &[MultiPoly]) -> MultiPoly {
    let mut nonzero: Vec<&MultiPoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    // small coefficients first: the running gcd collapses sooner
    nonzero.sort_by_key(|c| (c.total_degree(), c.num_terms()));
    let mut acc = MultiPoly::zero(ring);
    for c in nonzero {
        acc = gcd_rec(&acc, c);
        if acc.is_constant() {
            return MultiPoly::one(ring);
        }
    }
    acc.monic()
}

fn trim(v: &mut Vec<MultiPoly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn primitive_part(ring: Ring, mut coeffs: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let c = content_of(ring, &coeffs);
    if !c.is_one() {
        for x in coeffs.iter_mut() {
            *x = x.divexact(&c).expect("content divides");
        }
    }
    // normalize the leading coefficient's scalar to 1
    if let Some(lc) = coeffs.last() {
        let s = ring.inv(lc.leading_coeff()).expect("nonzero");
        if s != 1 {
            for x in coeffs.iter_mut() {
                *x = x.scale(s);
            }
        }
    }
    coeffs
}

fn pseudo_remainder(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut r: Vec<MultiPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let k = dr - db;
        for x in r.iter_mut() {
            *x = &*x * lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + k] = &r[j + k] - &(&lr * bj);
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
    }
    r
}

fn primitive_prs(ring: Ring, v: usize, a: Vec<MultiPoly>, b: Vec<MultiPoly>) -> MultiPoly {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        let r = pseudo_remainder(&a, &b);
        if r.is_empty() {
            return MultiPoly::from_coefficients_in(ring, v, &primitive_part(ring, b));
        }
        if r.len() == 1 {
            return MultiPoly::one(ring);
        }
        a = b;
        b = primitive_part(ring, r);
    }
}

fn univariate_gcd(ring: Ring, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = univariate_rem(ring, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let s = ring.inv(lc).expect("nonzero");
        for c in a.iter_mut() {
            *c = ring.mul(*c, s);
        }
    }
    a
}

fn univariate_rem(ring: Ring, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = ring.inv(b[db]).expect("nonzero");
    while r.len() > db {
        let dr = r.len() - 1;
        let q = ring.mul(r[dr], inv);
        if q != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[dr - db + j] = ring.sub(r[dr - db + j], ring.mul(q, bj));
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn r(p: u32, n: usize) -> Ring {
        Ring::new(p, n).unwrap()
    }

    fn poly(ring: Ring, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(ring, terms.iter().map(|(e, c)| (Monomial::new(e), *c)))
    }

    #[test]
    fn univariate() {
        let ring = r(3, 1);
        let a = poly(ring, &[(&[2], 1), (&[0], -1)]);
        let b = poly(ring, &[(&[1], 2), (&[0], 1)]); // 2x + 1 = 2(x - 1)
        assert_eq!(gcd(&a, &b), poly(ring, &[(&[1], 1), (&[0], -1)]));
        assert!(gcd(&a, &MultiPoly::constant(ring, 2)).is_one());
        assert_eq!(gcd(&a, &MultiPoly::zero(ring)), a.monic());
    }

    #[test]
    fn bivariate_common_factor() {
        let ring = r(5, 2);
        let f = poly(ring, &[(&[1, 1], 1), (&[0, 0], 1)]); // xy + 1
        let g = poly(ring, &[(&[2, 0], 1), (&[0, 1], 3)]); // x^2 + 3y
        let h = poly(ring, &[(&[0, 2], 1), (&[1, 0], 1), (&[0, 0], 2)]); // y^2 + x + 2
        let a = &(&f * &g) * &f;
        let b = &(&f * &h) * &poly(ring, &[(&[1, 0], 1)]);
        assert_eq!(gcd(&a, &b), f.monic());
        assert!(gcd(&g, &h).is_one());
    }

    #[test]
    fn monomial_and_content_factors() {
        let ring = r(3, 2);
        let x = MultiPoly::var(ring, 0);
        let y = MultiPoly::var(ring, 1);
        let a = &(&x * &x) * &(&y + &MultiPoly::one(ring));
        let b = &x * &(&y + &MultiPoly::one(ring)) * &(&x + &y);
        assert_eq!(gcd(&a, &b), (&x * &(&y + &MultiPoly::one(ring))).monic());
        // y occurs only in the second argument
        let c = &x * &(&x + &MultiPoly::one(ring));
        let d = &(&x + &MultiPoly::one(ring)) * &y;
        assert_eq!(gcd(&c, &d), &x + &MultiPoly::one(ring));
    }

    #[test]
    fn lcm_of_coprime_is_product() {
        let ring = r(7, 2);
        let x = MultiPoly::var(ring, 0);
        let y = MultiPoly::var(ring, 1);
        let a = &x + &y;
        let b = &x - &y;
        assert_eq!(lcm(&a, &b), (&a * &b).monic());
        assert_eq!(lcm(&a, &(&a * &a)), (&a * &a).monic());
    }
}
