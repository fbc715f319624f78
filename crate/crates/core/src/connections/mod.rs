//! Connections on trivial torsors as matrix-valued 1-forms.
//!
//! A connection is presented as `d + Omega` with `Omega` a matrix of
//! 1-forms in the Lie algebra of the structure group, embedded in `gl_r`.
//! This module computes the Maurer-Cartan form `g^-1 dg`, the curvature
//! `d Omega + Omega ^ Omega`, and the p-curvature
//! `psi(D) = (D + Omega(D))^p - (D^p + Omega(D^p))` by two routes: direct
//! operator iteration, and for abelian groups the closed formula in terms
//! of the Cartier operator.
//!
//! p-curvature values are stored raw, `psi(d_i)` for each coordinate
//! derivation. The abelian formula produces a form on the Frobenius twist;
//! it matches the raw values after the substitution `x_j -> x_j^p`.

mod matrix;

pub use matrix::{MatrixOneForm, MatrixTwoForm, RatMatrix};

use std::fmt;

use crate::cartier::cartier_of_closed;
use crate::error::{Error, Result};
use crate::forms::{differential, OneForm};
use crate::poly::{lcm, MultiPoly, RatFunc, Ring};

/// Structure groups with a fixed embedding into `GL_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// `G_m = GL_1`.
    Gm,
    /// `G_a`, either as `1x1` additive data or through `a -> ((1, a), (0, 1))`.
    Ga,
    Gl(usize),
    /// `aff(1)` through `(a, b) -> ((a, b), (0, 1))`.
    Aff1,
}

impl GroupTag {
    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupTag::Gm | GroupTag::Ga | GroupTag::Gl(1))
    }

    /// Validates that `g` is a group element in the tag's matrix shape.
    pub fn check_element(&self, g: &RatMatrix) -> Result<()> {
        let shape = |msg: &str| Err(Error::ShapeViolation(msg.to_string()));
        match *self {
            GroupTag::Gm => {
                if g.size() != 1 {
                    return shape("G_m elements are 1x1");
                }
                if g.get(0, 0).is_zero() {
                    return Err(Error::SingularMatrix);
                }
            }
            GroupTag::Ga => match g.size() {
                1 => {}
                2 => {
                    if !(g.get(0, 0).is_one() && g.get(1, 0).is_zero() && g.get(1, 1).is_one()) {
                        return shape("embedded G_a elements are ((1, a), (0, 1))");
                    }
                }
                _ => return shape("G_a elements are 1x1 or embedded 2x2"),
            },
            GroupTag::Gl(r) => {
                if g.size() != r {
                    return shape(&format!("GL_{r} elements are {r}x{r}"));
                }
            }
            GroupTag::Aff1 => {
                if g.size() != 2 || !g.get(1, 0).is_zero() || !g.get(1, 1).is_one() {
                    return shape("aff(1) elements are ((a, b), (0, 1))");
                }
                if g.get(0, 0).is_zero() {
                    return Err(Error::SingularMatrix);
                }
            }
        }
        Ok(())
    }

    /// Validates that `omega` takes values in the tag's Lie algebra.
    pub fn check_lie_shape(&self, omega: &MatrixOneForm) -> Result<()> {
        let shape = |msg: &str| Err(Error::ShapeViolation(msg.to_string()));
        match *self {
            GroupTag::Gm if omega.size() != 1 => shape("Lie(G_m) is 1x1"),
            GroupTag::Ga => match omega.size() {
                1 => Ok(()),
                2 if omega.get(0, 0).is_zero()
                    && omega.get(1, 0).is_zero()
                    && omega.get(1, 1).is_zero() =>
                {
                    Ok(())
                }
                _ => shape("Lie(G_a) is 1x1 or ((0, w), (0, 0))"),
            },
            GroupTag::Gl(r) if omega.size() != r => shape("size does not match GL_r"),
            GroupTag::Aff1
                if omega.size() != 2 || !omega.get(1, 0).is_zero() || !omega.get(1, 1).is_zero() =>
            {
                shape("Lie(aff(1)) is ((w, w'), (0, 0))")
            }
            _ => Ok(()),
        }
    }

    /// The restricted p-power map on the Lie algebra: `X -> X^p` for matrix
    /// groups, zero for `G_a`.
    pub fn lie_p_power(&self, x: &RatMatrix) -> RatMatrix {
        match self {
            GroupTag::Ga => RatMatrix::zero(x.ring(), x.size()),
            _ => x.pow(x.ring().p()),
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Gm => write!(f, "g_m"),
            GroupTag::Ga => write!(f, "g_a"),
            GroupTag::Gl(r) => write!(f, "gl({r})"),
            GroupTag::Aff1 => write!(f, "aff1"),
        }
    }
}

/// The Maurer-Cartan form `dlog(g) = g^-1 dg`; `da` for 1x1 `G_a` data.
///
/// For the `aff(1)` tag the result is normalized to
/// `((f^-1 df, -f^-1 df'), (0, 0))` for `g = ((f, f'), (0, 1))`, which is
/// `g^-1 dg` conjugated by `diag(1, -1)`. The conjugation is a Lie algebra
/// automorphism, so curvature and p-curvature vanish for both or neither.
pub fn maurer_cartan(g: &RatMatrix, tag: GroupTag) -> Result<MatrixOneForm> {
    tag.check_element(g)?;
    let ring = g.ring();
    if tag == GroupTag::Ga && g.size() == 1 {
        return Ok(MatrixOneForm::scalar(differential(g.get(0, 0))));
    }
    let inv = g.inverse()?;
    let dg = g.differential();
    let n = g.size();
    let mut rows: Vec<Vec<OneForm>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    (0..n).fold(OneForm::zero(ring), |acc, j| {
                        let a = inv.get(i, j);
                        if a.is_zero() {
                            acc
                        } else {
                            &acc + &dg.get(j, k).scale(a)
                        }
                    })
                })
                .collect()
        })
        .collect();
    if tag == GroupTag::Aff1 {
        rows[0][1] = -rows[0][1].clone();
    }
    MatrixOneForm::from_rows(ring, rows)
}

/// `d Omega + Omega ^ Omega`.
pub fn curvature(omega: &MatrixOneForm) -> MatrixTwoForm {
    let ring = omega.ring();
    let n = omega.size();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let mut c = omega.get(i, k).exterior_derivative();
            for j in 0..n {
                let (a, b) = (omega.get(i, j), omega.get(j, k));
                if !a.is_zero() && !b.is_zero() {
                    c = &c + &a.wedge(b);
                }
            }
            entries.push(c);
        }
    }
    MatrixTwoForm { ring, size: n, entries }
}

/// A vector field `D = sum f_i d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    ring: Ring,
    coeffs: Vec<RatFunc>,
}

impl Derivation {
    pub fn new(ring: Ring, coeffs: Vec<RatFunc>) -> Result<Self> {
        if coeffs.len() != ring.nvars() {
            return Err(Error::ShapeViolation(format!(
                "derivation needs {} coefficients, got {}",
                ring.nvars(),
                coeffs.len()
            )));
        }
        Ok(Derivation { ring, coeffs })
    }

    /// The coordinate derivation `d_i`.
    pub fn coordinate(ring: Ring, i: usize) -> Self {
        let mut coeffs = vec![RatFunc::zero(ring); ring.nvars()];
        coeffs[i] = RatFunc::one(ring);
        Derivation { ring, coeffs }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(RatFunc::zero(self.ring), |acc, (i, c)| {
                &acc + &(c * &f.partial_derivative(i).expect("index in range"))
            })
    }

    pub fn scale(&self, f: &RatFunc) -> Derivation {
        Derivation {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            ring: self.ring,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    /// `D^p`, again a derivation in characteristic p; its coefficients are
    /// `D^p(x_j)`.
    pub fn p_power(&self) -> Derivation {
        let p = self.ring.p();
        let coeffs = (0..self.ring.nvars())
            .map(|j| {
                let mut v = RatFunc::var(self.ring, j);
                for _ in 0..p {
                    v = self.apply(&v);
                }
                v
            })
            .collect();
        Derivation {
            ring: self.ring,
            coeffs,
        }
    }
}

/// Raw p-curvature values `psi(d_1), ..., psi(d_n)`.
///
/// For an integrable connection `psi` is p-linear, so
/// `psi(sum f_i d_i) = sum f_i^p psi(d_i)`; see [`PCurvature::evaluate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCurvature {
    psi: Vec<RatMatrix>,
}

impl PCurvature {
    pub fn components(&self) -> &[RatMatrix] {
        &self.psi
    }

    pub fn component(&self, i: usize) -> &RatMatrix {
        &self.psi[i]
    }

    pub fn is_zero(&self) -> bool {
        self.psi.iter().all(RatMatrix::is_zero)
    }

    /// `sum f_i^p psi(d_i)`. Agrees with [`pcurvature_at`] when the
    /// connection is flat.
    pub fn evaluate(&self, d: &Derivation) -> RatMatrix {
        let size = self.psi[0].size();
        self.psi
            .iter()
            .zip(d.coeffs())
            .fold(RatMatrix::zero(d.ring(), size), |acc, (m, f)| {
                acc.add(&m.scale(&f.frobenius()))
            })
    }

    /// Entry `(a, b)` as the 1-form `sum psi(d_i)[a][b] dx_i`.
    pub fn entry_form(&self, a: usize, b: usize) -> OneForm {
        let ring = self.psi[0].ring();
        let coeffs = self.psi.iter().map(|m| m.get(a, b).clone()).collect();
        OneForm::new(ring, coeffs).expect("one matrix per variable")
    }
}

/// `(D + B)^p` applied to each standard basis column, as a matrix.
fn iterate_operator(d: &Derivation, b: &RatMatrix) -> RatMatrix {
    let ring = d.ring();
    let n = b.size();
    let p = ring.p();
    let mut out = RatMatrix::zero(ring, n);
    for k in 0..n {
        let mut v: Vec<RatFunc> = (0..n)
            .map(|i| if i == k { RatFunc::one(ring) } else { RatFunc::zero(ring) })
            .collect();
        for _ in 0..p {
            let bv = b.mul_vec(&v);
            v = v.iter().zip(bv).map(|(vi, bvi)| &d.apply(vi) + &bvi).collect();
        }
        for (i, vi) in v.into_iter().enumerate() {
            out.set(i, k, vi);
        }
    }
    out
}

/// `(d_i + A)^p` on basis columns, with `A = M / Q` over a common
/// denominator. After `k` steps a column is `V / Q^k` with `V` polynomial:
/// `V' = Q d_i(V) - k d_i(Q) V + M V`. Only the final value is reduced.
fn iterate_coordinate(i: usize, a: &RatMatrix) -> RatMatrix {
    let ring = a.ring();
    let n = a.size();
    let p = ring.p();
    let q = a
        .rows()
        .flatten()
        .fold(MultiPoly::one(ring), |acc, e| lcm(&acc, e.den()));
    let m: Vec<MultiPoly> = a
        .rows()
        .flatten()
        .map(|e| e.num() * &q.divexact(e.den()).expect("lcm is a multiple"))
        .collect();
    let dq = q.partial_derivative(i).expect("index in range");
    let qp = q.frobenius();
    let mut out = RatMatrix::zero(ring, n);
    for col in 0..n {
        let mut v: Vec<MultiPoly> = (0..n)
            .map(|r| if r == col { MultiPoly::one(ring) } else { MultiPoly::zero(ring) })
            .collect();
        for k in 0..p {
            v = (0..n)
                .map(|r| {
                    let mut t = &v[r].partial_derivative(i).expect("index in range") * &q;
                    if k > 0 && !dq.is_zero() && !v[r].is_zero() {
                        t = &t - &(&v[r] * &dq).scale(k);
                    }
                    for c in 0..n {
                        let mrc = &m[r * n + c];
                        if !mrc.is_zero() && !v[c].is_zero() {
                            t = &t + &(mrc * &v[c]);
                        }
                    }
                    t
                })
                .collect();
        }
        for (r, vr) in v.into_iter().enumerate() {
            out.set(r, col, RatFunc::new(vr, qp.clone()).expect("nonzero denominator"));
        }
    }
    out
}

/// p-curvature by operator iteration: `psi(d_i) = (d_i + A_i)^p` on column
/// vectors (`d_i^p = 0`, so there is no correction term).
pub fn pcurvature_brute(omega: &MatrixOneForm) -> PCurvature {
    let ring = omega.ring();
    let psi = (0..ring.nvars())
        .map(|i| iterate_coordinate(i, &omega.component(i)))
        .collect();
    PCurvature { psi }
}

/// `psi(D) = (D + Omega(D))^p - (D^p + Omega(D^p))` for an arbitrary vector
/// field, computed without assuming p-linearity.
pub fn pcurvature_at(omega: &MatrixOneForm, d: &Derivation) -> RatMatrix {
    let top = iterate_operator(d, &omega.contract(d.coeffs()));
    let dp = d.p_power();
    top.sub(&omega.contract(dp.coeffs()))
}

/// Closed formula for abelian structure groups: `psi = w^[p] - C(w)`, i.e.
/// `w - C(w)` for `G_m` and `-C(w)` for `G_a`. The result lives on the
/// Frobenius twist; its coefficients with `x_j -> x_j^p` are the raw
/// p-curvature values.
pub fn pcurvature_abelian(w: &OneForm, tag: GroupTag) -> Result<OneForm> {
    if w.ring().p() == 2 {
        return Err(Error::CharTwo);
    }
    if !matches!(tag, GroupTag::Gm | GroupTag::Ga | GroupTag::Gl(1)) {
        return Err(Error::NotAbelian);
    }
    if !w.is_closed() {
        return Err(Error::NotClosed);
    }
    let c = cartier_of_closed(w);
    Ok(match tag {
        GroupTag::Ga => -c,
        _ => w - &c,
    })
}

/// Rank-one, one-variable p-curvature through Jacobson's identity
/// `(d + a)^p = a^p + d^(p-1)(a)`. An oracle for [`pcurvature_brute`].
pub fn rank1_pcurvature_oracle(w: &OneForm) -> Result<RatFunc> {
    let ring = w.ring();
    if ring.nvars() != 1 {
        return Err(Error::RequiresOneVariable(ring.nvars()));
    }
    let a = w.coeff(0);
    // d kills 1/r^p, so differentiate the cleared numerator only
    let (mut m, r) = a.over_pth_power();
    for _ in 0..(ring.p() - 1) {
        m = m.partial_derivative(0)?;
    }
    Ok(&a.frobenius() + &RatFunc::new(m, r.frobenius())?)
}

pub fn is_flat(omega: &MatrixOneForm) -> bool {
    curvature(omega).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::dlog;
    use crate::poly::Monomial;

    fn rf(ring: Ring, terms: &[(&[u32], i64)]) -> RatFunc {
        RatFunc::from_poly(MultiPoly::from_terms(
            ring,
            terms.iter().map(|(e, c)| (Monomial::new(e), *c)),
        ))
    }

    #[test]
    fn maurer_cartan_examples() {
        let r = Ring::new(3, 2).unwrap();
        let id = RatMatrix::identity(r, 2);
        assert!(maurer_cartan(&id, GroupTag::Gl(2)).unwrap().is_zero());

        let x = RatFunc::var(r, 0);
        let diag = RatMatrix::from_rows(
            r,
            vec![vec![x.clone(), RatFunc::zero(r)], vec![RatFunc::zero(r), RatFunc::one(r)]],
        )
        .unwrap();
        let mc = maurer_cartan(&diag, GroupTag::Gl(2)).unwrap();
        assert_eq!(mc.get(0, 0), &dlog(&x).unwrap());
        assert!(mc.get(0, 1).is_zero() && mc.get(1, 1).is_zero());

        let y = RatFunc::var(r, 1);
        let g = RatMatrix::from_rows(r, vec![vec![x.clone(), y.clone()], vec![RatFunc::zero(r), RatFunc::one(r)]])
            .unwrap();
        let mc = maurer_cartan(&g, GroupTag::Aff1).unwrap();
        assert_eq!(mc.get(0, 0), &dlog(&x).unwrap());
        assert_eq!(mc.get(0, 1), &-differential(&y).scale(&x.inv().unwrap()));
        let plain = maurer_cartan(&g, GroupTag::Gl(2)).unwrap();
        assert_eq!(plain.get(0, 1), &differential(&y).scale(&x.inv().unwrap()));
        assert!(curvature(&plain).is_zero());
        assert!(curvature(&mc).is_zero());
    }

    #[test]
    fn shape_checks() {
        let r = Ring::new(3, 1).unwrap();
        let g = RatMatrix::identity(r, 2);
        assert!(matches!(maurer_cartan(&g, GroupTag::Gm), Err(Error::ShapeViolation(_))));
        let zero = RatMatrix::zero(r, 1);
        assert_eq!(maurer_cartan(&zero, GroupTag::Gm), Err(Error::SingularMatrix));
        let bad = RatMatrix::from_rows(
            r,
            vec![vec![RatFunc::one(r), RatFunc::one(r)], vec![RatFunc::one(r), RatFunc::one(r)]],
        )
        .unwrap();
        assert!(matches!(maurer_cartan(&bad, GroupTag::Aff1), Err(Error::ShapeViolation(_))));
        assert_eq!(maurer_cartan(&bad, GroupTag::Gl(2)), Err(Error::SingularMatrix));
    }

    #[test]
    fn derivation_p_powers() {
        let r = Ring::new(3, 2).unwrap();
        assert_eq!(
            Derivation::coordinate(r, 0).p_power(),
            Derivation::new(r, vec![RatFunc::zero(r); 2]).unwrap()
        );
        let euler = Derivation::new(r, vec![RatFunc::var(r, 0), RatFunc::zero(r)]).unwrap();
        assert_eq!(euler.p_power(), euler);
        let sum = Derivation::new(r, vec![RatFunc::one(r), RatFunc::one(r)]).unwrap();
        assert!(sum.p_power().coeffs().iter().all(RatFunc::is_zero));
    }

    #[test]
    fn brute_force_examples() {
        let r = Ring::new(3, 1).unwrap();
        let x = RatFunc::var(r, 0);
        let psi = pcurvature_brute(&MatrixOneForm::scalar(OneForm::single(x.clone(), 0)));
        assert_eq!(psi.component(0).get(0, 0), &rf(r, &[(&[3], 1)]));

        let ga = MatrixOneForm::ga_embedded(OneForm::single(rf(r, &[(&[2], 1)]), 0));
        let psi = pcurvature_brute(&ga);
        let m = psi.component(0);
        assert_eq!(m.get(0, 1), &RatFunc::constant(r, 2));
        assert!(m.get(0, 0).is_zero() && m.get(1, 0).is_zero() && m.get(1, 1).is_zero());

        let psi = pcurvature_brute(&MatrixOneForm::scalar(dlog(&x).unwrap()));
        assert!(psi.is_zero());
    }

    #[test]
    fn pcurvature_at_examples() {
        let r = Ring::new(3, 1).unwrap();
        let x = RatFunc::var(r, 0);
        let omega = MatrixOneForm::scalar(OneForm::single(x.clone(), 0));
        let d = Derivation::coordinate(r, 0);
        assert_eq!(&pcurvature_at(&omega, &d), pcurvature_brute(&omega).component(0));
        let xd = d.scale(&x);
        assert_eq!(pcurvature_at(&omega, &xd).get(0, 0), &rf(r, &[(&[6], 1)]));
        assert!(pcurvature_at(&MatrixOneForm::zero(r, 2), &xd).is_zero());
    }

    #[test]
    fn abelian_formula_examples() {
        let r = Ring::new(3, 1).unwrap();
        let x2dx = OneForm::single(rf(r, &[(&[2], 1)]), 0);
        assert_eq!(
            pcurvature_abelian(&x2dx, GroupTag::Gm).unwrap(),
            OneForm::single(rf(r, &[(&[2], 1), (&[0], -1)]), 0)
        );
        assert!(pcurvature_abelian(&dlog(&RatFunc::var(r, 0)).unwrap(), GroupTag::Gm)
            .unwrap()
            .is_zero());
        assert_eq!(
            pcurvature_abelian(&x2dx, GroupTag::Ga).unwrap(),
            OneForm::single(RatFunc::constant(r, 2), 0)
        );
        assert_eq!(pcurvature_abelian(&x2dx, GroupTag::Aff1), Err(Error::NotAbelian));
        let r2 = Ring::new(3, 2).unwrap();
        let not_closed = OneForm::single(RatFunc::var(r2, 1), 0);
        assert_eq!(pcurvature_abelian(&not_closed, GroupTag::Gm), Err(Error::NotClosed));
    }

    #[test]
    fn rank1_oracle_examples() {
        let r = Ring::new(3, 1).unwrap();
        assert_eq!(
            rank1_pcurvature_oracle(&OneForm::single(RatFunc::var(r, 0), 0)).unwrap(),
            rf(r, &[(&[3], 1)])
        );
        assert_eq!(
            rank1_pcurvature_oracle(&OneForm::single(rf(r, &[(&[2], 1)]), 0)).unwrap(),
            rf(r, &[(&[6], 1), (&[0], 2)])
        );
        assert!(rank1_pcurvature_oracle(&OneForm::zero(r)).unwrap().is_zero());
    }
}
