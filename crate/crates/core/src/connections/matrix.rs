use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{differential, OneForm, TwoForm};
use crate::poly::{RatFunc, Ring};

/// Square matrix over the rational function field, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    ring: Ring,
    size: usize,
    entries: Vec<RatFunc>,
}

impl RatMatrix {
    pub fn zero(ring: Ring, size: usize) -> Self {
        RatMatrix {
            ring,
            size,
            entries: vec![RatFunc::zero(ring); size * size],
        }
    }

    pub fn identity(ring: Ring, size: usize) -> Self {
        let mut m = Self::zero(ring, size);
        for i in 0..size {
            m.entries[i * size + i] = RatFunc::one(ring);
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::ShapeViolation("matrix must be square and nonempty".into()));
        }
        let entries: Vec<RatFunc> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(RatMatrix { ring, size, entries })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.entries[i * self.size + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RatFunc::is_zero)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[RatFunc]> {
        self.entries.chunks(self.size)
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> RatMatrix {
        RatMatrix {
            ring: self.ring,
            size: self.size,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> RatMatrix {
        self.map(|e| e * c)
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.size, other.size, "size mismatch");
        RatMatrix {
            ring: self.ring,
            size: self.size,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.size, other.size, "size mismatch");
        RatMatrix {
            ring: self.ring,
            size: self.size,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.size, other.size, "size mismatch");
        let n = self.size;
        let mut out = RatMatrix::zero(self.ring, n);
        for i in 0..n {
            for k in 0..n {
                let mut acc = RatFunc::zero(self.ring);
                for j in 0..n {
                    let a = self.get(i, j);
                    let b = other.get(j, k);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, k, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        (0..self.size)
            .map(|i| {
                (0..self.size).fold(RatFunc::zero(self.ring), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &v[j])
                    }
                })
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> RatMatrix {
        (0..k).fold(RatMatrix::identity(self.ring, self.size), |acc, _| acc.mul(self))
    }

    /// Gauss-Jordan inverse over the rational function field.
    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.size;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(self.ring, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let s = a.get(col, col).inv()?;
            for j in 0..n {
                let v = a.get(col, j) * &s;
                a.set(col, j, v);
                let v = inv.get(col, j) * &s;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &(&f * a.get(col, j));
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &(&f * inv.get(col, j));
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Entry-wise differential `dg`.
    pub fn differential(&self) -> MatrixOneForm {
        MatrixOneForm {
            ring: self.ring,
            size: self.size,
            entries: self.entries.iter().map(differential).collect(),
        }
    }
}

/// An `r x r` matrix of 1-forms; a connection `d + Omega` on the trivial
/// rank-r bundle or, through a group embedding, on a trivial torsor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixOneForm {
    ring: Ring,
    size: usize,
    entries: Vec<OneForm>,
}

impl MatrixOneForm {
    pub fn zero(ring: Ring, size: usize) -> Self {
        MatrixOneForm {
            ring,
            size,
            entries: vec![OneForm::zero(ring); size * size],
        }
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<OneForm>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::ShapeViolation("matrix must be square and nonempty".into()));
        }
        let entries: Vec<OneForm> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(MatrixOneForm { ring, size, entries })
    }

    /// The rank-one connection `d + w`.
    pub fn scalar(w: OneForm) -> Self {
        MatrixOneForm {
            ring: w.ring(),
            size: 1,
            entries: vec![w],
        }
    }

    /// `((w, w'), (0, 0))`: the Lie algebra of aff(1) in GL_2.
    pub fn aff1(w: OneForm, wp: OneForm) -> Self {
        let ring = w.ring();
        MatrixOneForm {
            ring,
            size: 2,
            entries: vec![w, wp, OneForm::zero(ring), OneForm::zero(ring)],
        }
    }

    /// `((0, w), (0, 0))`: a G_a connection through `a -> ((1, a), (0, 1))`.
    pub fn ga_embedded(w: OneForm) -> Self {
        MatrixOneForm::aff1(OneForm::zero(w.ring()), w)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &OneForm {
        &self.entries[i * self.size + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(OneForm::is_zero)
    }

    /// The coefficient matrix `A_i` of `dx_i`.
    pub fn component(&self, i: usize) -> RatMatrix {
        RatMatrix {
            ring: self.ring,
            size: self.size,
            entries: self.entries.iter().map(|w| w.coeff(i).clone()).collect(),
        }
    }

    /// `Omega(D) = sum f_i A_i` for `D = sum f_i d_i`.
    pub fn contract(&self, coeffs: &[RatFunc]) -> RatMatrix {
        let mut out = RatMatrix::zero(self.ring, self.size);
        for (i, f) in coeffs.iter().enumerate() {
            if !f.is_zero() {
                out = out.add(&self.component(i).scale(f));
            }
        }
        out
    }
}

/// An `r x r` matrix of 2-forms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixTwoForm {
    pub(crate) ring: Ring,
    pub(crate) size: usize,
    pub(crate) entries: Vec<TwoForm>,
}

impl MatrixTwoForm {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &TwoForm {
        &self.entries[i * self.size + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TwoForm::is_zero)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
}

fn fmt_matrix<T: fmt::Display>(f: &mut fmt::Formatter<'_>, size: usize, entries: &[T]) -> fmt::Result {
    write!(f, "[")?;
    for (i, row) in entries.chunks(size).enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "[")?;
        for (j, e) in row.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")?;
    }
    write!(f, "]")
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_matrix(f, self.size, &self.entries)
    }
}

impl fmt::Display for MatrixOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_matrix(f, self.size, &self.entries)
    }
}

impl fmt::Display for MatrixTwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_matrix(f, self.size, &self.entries)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix({self})")
    }
}

impl fmt::Debug for MatrixOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixOneForm({self})")
    }
}

impl fmt::Debug for MatrixTwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixTwoForm({self})")
    }
}
