//! The Cartier operator on closed 1-forms and the machinery around it.
//!
//! Every rational coefficient is first written as `m / r^p` with `m`, `r`
//! polynomial (see [`RatFunc::over_pth_power`]). Since `r^p` is a
//! p-th power it commutes with `d` and with the Cartier operator up to the
//! factor `r`, so all work reduces to polynomials:
//!
//! - `C(m/r^p dx_i) = g / r` where `g` is the `(p-1) e_i` component of the
//!   p-basis decomposition of `m`.
//! - `gamma(g dx_i) = g^p x_i^(p-1) dx_i` is a right inverse.
//!
//! Outputs of `C` formally live on the Frobenius twist; over F_p they are
//! returned in the same coordinates.

use crate::error::{Error, Result};
use crate::forms::{dlog, OneForm};
use crate::poly::{lcm, Monomial, MultiPoly, RatFunc, Ring};

/// Hard limit on the number of generators of a [`Chart`].
pub const MAX_CHART_GENERATORS: usize = 6;

/// The Cartier operator. Fails with [`Error::NotClosed`] on non-closed input.
pub fn cartier(w: &OneForm) -> Result<OneForm> {
    if !w.is_closed() {
        return Err(Error::NotClosed);
    }
    Ok(cartier_of_closed(w))
}

/// The Cartier operator without the closedness check.
///
/// The result is meaningless unless `w` is closed; used by callers that
/// have already established closedness.
pub fn cartier_of_closed(w: &OneForm) -> OneForm {
    let ring = w.ring();
    let p = ring.p();
    let coeffs = (0..ring.nvars())
        .map(|i| {
            let c = w.coeff(i);
            if c.is_zero() {
                return RatFunc::zero(ring);
            }
            let (m, r) = c.over_pth_power();
            let slot = Monomial::ONE.with_exponent(i, p - 1);
            let g = m.p_basis_component(&slot);
            RatFunc::new(g, r).expect("nonzero denominator")
        })
        .collect();
    OneForm::new(ring, coeffs).expect("shape preserved")
}

/// `gamma(sum g_i dx_i) = sum g_i^p x_i^(p-1) dx_i`, always closed.
pub fn gamma(eta: &OneForm) -> OneForm {
    let ring = eta.ring();
    let p = ring.p();
    let coeffs = (0..ring.nvars())
        .map(|i| {
            let xi = MultiPoly::monomial(ring, Monomial::ONE.with_exponent(i, p - 1), 1);
            eta.coeff(i).frobenius().mul_poly(&xi)
        })
        .collect();
    OneForm::new(ring, coeffs).expect("shape preserved")
}

/// Clears all coefficient denominators to one common `q^p`:
/// returns polynomials `n_i` and `q` with `w = sum n_i / q^p dx_i`.
fn common_pth_denominator(w: &OneForm) -> (Vec<MultiPoly>, MultiPoly) {
    let ring = w.ring();
    let parts: Vec<(MultiPoly, MultiPoly)> = w.coeffs().iter().map(RatFunc::over_pth_power).collect();
    let q = parts
        .iter()
        .fold(MultiPoly::one(ring), |acc, (_, r)| lcm(&acc, r));
    let nums = parts
        .into_iter()
        .map(|(m, r)| {
            if r == q {
                m
            } else {
                &m * &q.divexact(&r).expect("lcm divisible").frobenius()
            }
        })
        .collect();
    (nums, q)
}

/// A function `f` with `df = w`, for closed `w` with `C(w) = 0`.
///
/// After clearing to `w = eta / q^p`, each term `c x^a dx_i` of `eta` is
/// sorted by the shifted exponent `a + e_i`. The class of exponents
/// divisible by p is exactly `gamma(C(eta))`, which vanishes; every other
/// monomial `x^g` of the potential gets coefficient `c / g_k` for the first
/// `k` with `g_k` prime to p.
pub fn antiderivative(w: &OneForm) -> Result<RatFunc> {
    if !w.is_closed() {
        return Err(Error::NotClosed);
    }
    if !cartier_of_closed(w).is_zero() {
        return Err(Error::NotExact);
    }
    let ring = w.ring();
    let p = ring.p();
    let (eta, q) = common_pth_denominator(w);

    let mut terms: Vec<(Monomial, i64)> = Vec::new();
    for (i, eta_i) in eta.iter().enumerate() {
        for (a, c) in eta_i.terms() {
            let g = a.mul(&Monomial::var(i));
            let Some(k) = (0..ring.nvars()).find(|&k| g.exponent(k) % p != 0) else {
                continue;
            };
            if k != i {
                continue;
            }
            let gk = ring.elem(g.exponent(k) as i64);
            let coeff = c * gk.inv().expect("exponent prime to p");
            terms.push((g, coeff.value() as i64));
        }
    }
    let potential = MultiPoly::from_terms(ring, terms);

    for (i, eta_i) in eta.iter().enumerate() {
        if &potential.partial_derivative(i)? != eta_i {
            return Err(Error::Internal(format!(
                "antiderivative check failed in component {i}"
            )));
        }
    }
    RatFunc::new(potential, q.frobenius())
}

/// One-variable Cartier operator through `C(a dx)^p = -d^(p-1)(a) dx^p`.
///
/// Shares nothing with [`cartier`] beyond denominator clearing; used as an
/// independent check.
pub fn cartier_1var_oracle(w: &OneForm) -> Result<OneForm> {
    let ring = w.ring();
    if ring.nvars() != 1 {
        return Err(Error::RequiresOneVariable(ring.nvars()));
    }
    let (mut m, r) = w.coeff(0).over_pth_power();
    for _ in 0..(ring.p() - 1) {
        m = m.partial_derivative(0)?;
    }
    let root = (-m).p_th_root()?;
    Ok(OneForm::single(RatFunc::new(root, r)?, 0))
}

/// A Zariski chart of affine space: the complement of the zero loci of the
/// generators. Generators are stored monic and must be pairwise
/// non-associate; their irreducibility is the caller's responsibility.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    ring: Ring,
    generators: Vec<MultiPoly>,
}

impl Chart {
    pub fn new(ring: Ring, generators: Vec<MultiPoly>) -> Result<Self> {
        if generators.len() > MAX_CHART_GENERATORS {
            return Err(Error::ChartTooLarge(generators.len()));
        }
        let mut gens: Vec<MultiPoly> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if g.is_constant() {
                return Err(Error::InvalidChart(format!("constant generator {g}")));
            }
            let g = g.monic();
            if gens.contains(&g) {
                return Err(Error::InvalidChart(format!("repeated generator {g}")));
            }
            gens.push(g);
        }
        Ok(Chart {
            ring,
            generators: gens,
        })
    }

    /// The whole affine space.
    pub fn affine_space(ring: Ring) -> Self {
        Chart {
            ring,
            generators: Vec::new(),
        }
    }

    /// Default chart for `w`: the members of `declared` (user-declared
    /// irreducibles) that divide some coefficient denominator of `w`.
    pub fn derive(w: &OneForm, declared: &[MultiPoly]) -> Result<Self> {
        let ring = w.ring();
        let mut gens = Vec::new();
        for q in declared {
            if q.is_constant() {
                continue;
            }
            let divides = w
                .coeffs()
                .iter()
                .any(|c| !c.den().is_one() && c.den().divexact(q).is_ok());
            let q = q.monic();
            if divides && !gens.contains(&q) {
                gens.push(q);
            }
        }
        Chart::new(ring, gens)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// `prod q_j^e_j`.
    pub fn unit(&self, exponents: &[u32]) -> RatFunc {
        let f = self
            .generators
            .iter()
            .zip(exponents)
            .fold(MultiPoly::one(self.ring), |acc, (q, &e)| &acc * &q.pow(e));
        RatFunc::from_poly(f)
    }
}

/// A unit `prod q_j^e_j` on a chart together with its exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogWitness {
    pub exponents: Vec<u32>,
    pub unit: RatFunc,
}

/// Finds `f = prod q_j^(m_j)` over the chart generators, `0 <= m_j < p`,
/// with `dlog(f) = w`.
///
/// Witnesses are unique up to p-th powers, so the exponent vectors in
/// `{0..p-1}^k` exhaust all candidates. The candidate set is exactly
/// `F_p^k` and the condition is linear in `m`, so the search is carried out
/// by Gaussian elimination on the coefficient equations of
/// `sum m_j (prod_{l != j} q_l) dq_j = (prod q_l) w`.
pub fn log_witness(w: &OneForm, chart: &Chart) -> Result<LogWitness> {
    if !w.is_closed() {
        return Err(Error::NotClosed);
    }
    if cartier_of_closed(w) != *w {
        return Err(Error::NotCartierFixed);
    }
    solve_log_witness(w, chart)
}

pub(crate) fn solve_log_witness(w: &OneForm, chart: &Chart) -> Result<LogWitness> {
    let ring = w.ring();
    if chart.ring != ring {
        return Err(Error::RingMismatch);
    }
    let gens = &chart.generators;
    let k = gens.len();
    let n = ring.nvars();
    let prod = gens.iter().fold(MultiPoly::one(ring), |acc, q| &acc * q);

    let mut target = Vec::with_capacity(n);
    for c in w.coeffs() {
        let t = c.mul_poly(&prod);
        if !t.is_polynomial() {
            return Err(Error::NoWitnessOnChart);
        }
        target.push(t.num().clone());
    }

    // columns[j][i] = (prod_{l != j} q_l) * d_i q_j
    let columns: Vec<Vec<MultiPoly>> = gens
        .iter()
        .map(|q| {
            let others = prod.divexact(q).expect("generator divides product");
            (0..n)
                .map(|i| &others * &q.partial_derivative(i).expect("index in range"))
                .collect()
        })
        .collect();

    // one equation per (component, monomial)
    let mut keys: Vec<(usize, Monomial)> = Vec::new();
    for i in 0..n {
        keys.extend(target[i].terms().map(|(m, _)| (i, m)));
        for col in &columns {
            keys.extend(col[i].terms().map(|(m, _)| (i, m)));
        }
    }
    keys.sort();
    keys.dedup();

    let rows: Vec<Vec<u32>> = keys
        .iter()
        .map(|(i, m)| {
            let mut row: Vec<u32> = columns.iter().map(|col| col[*i].coefficient(m).value()).collect();
            row.push(target[*i].coefficient(m).value());
            row
        })
        .collect();

    let exponents = solve_mod_p(ring, rows, k).ok_or(Error::NoWitnessOnChart)?;
    let unit = chart.unit(&exponents);
    debug_assert_eq!(dlog(&unit).as_ref(), Ok(w));
    Ok(LogWitness { exponents, unit })
}

/// Solves the augmented system `rows` (k unknowns + right-hand side) over
/// F_p; free unknowns are set to zero. `None` if inconsistent.
fn solve_mod_p(ring: Ring, mut rows: Vec<Vec<u32>>, k: usize) -> Option<Vec<u32>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ring.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = ring.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..=k {
                    let v = ring.mul(f, rows[r][c]);
                    rows[i][c] = ring.sub(rows[i][c], v);
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    if rows[r..].iter().any(|row| row[k] != 0) {
        return None;
    }
    let mut sol = vec![0u32; k];
    for (row, col) in pivots {
        sol[col] = rows[row][k];
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::differential;

    fn rf(ring: Ring, terms: &[(&[u32], i64)]) -> RatFunc {
        RatFunc::from_poly(MultiPoly::from_terms(
            ring,
            terms.iter().map(|(e, c)| (Monomial::new(e), *c)),
        ))
    }

    #[test]
    fn cartier_examples() {
        let r = Ring::new(3, 1).unwrap();
        let x2dx = OneForm::single(rf(r, &[(&[2], 1)]), 0);
        assert_eq!(cartier(&x2dx).unwrap(), OneForm::basis(r, 0));
        assert!(cartier(&OneForm::basis(r, 0)).unwrap().is_zero());
        let dlx = dlog(&RatFunc::var(r, 0)).unwrap();
        assert_eq!(cartier(&dlx).unwrap(), dlx);

        let r2 = Ring::new(3, 2).unwrap();
        let w = OneForm::single(rf(r2, &[(&[3, 2], 1)]), 1);
        assert_eq!(
            cartier(&w).unwrap(),
            OneForm::single(RatFunc::var(r2, 0), 1)
        );
        let not_closed = OneForm::single(RatFunc::var(r2, 1), 0);
        assert_eq!(cartier(&not_closed), Err(Error::NotClosed));
    }

    #[test]
    fn gamma_examples() {
        let r = Ring::new(3, 2).unwrap();
        assert_eq!(
            gamma(&OneForm::basis(r, 0)),
            OneForm::single(rf(r, &[(&[2, 0], 1)]), 0)
        );
        assert_eq!(
            gamma(&OneForm::single(RatFunc::var(r, 0), 1)),
            OneForm::single(rf(r, &[(&[3, 2], 1)]), 1)
        );
        assert!(gamma(&OneForm::zero(r)).is_zero());
    }

    #[test]
    fn antiderivative_examples() {
        let r = Ring::new(3, 1).unwrap();
        let xdx = OneForm::single(RatFunc::var(r, 0), 0);
        assert_eq!(antiderivative(&xdx).unwrap(), rf(r, &[(&[2], 2)]));
        let x2dx = OneForm::single(rf(r, &[(&[2], 1)]), 0);
        assert_eq!(antiderivative(&x2dx), Err(Error::NotExact));

        let r2 = Ring::new(5, 2).unwrap();
        let w = &OneForm::single(RatFunc::var(r2, 1), 0) + &OneForm::single(RatFunc::var(r2, 0), 1);
        assert_eq!(antiderivative(&w).unwrap(), rf(r2, &[(&[1, 1], 1)]));
    }

    #[test]
    fn antiderivative_with_denominators() {
        let r = Ring::new(5, 2).unwrap();
        let x = RatFunc::var(r, 0);
        let y = RatFunc::var(r, 1);
        let f = (&(&x * &y) + &RatFunc::one(r)).checked_div(&(&x + &y.pow(2))).unwrap();
        let w = differential(&f);
        let g = antiderivative(&w).unwrap();
        assert_eq!(differential(&g), w);
    }

    #[test]
    fn oracle_examples() {
        let r = Ring::new(3, 1).unwrap();
        let x2dx = OneForm::single(rf(r, &[(&[2], 1)]), 0);
        assert_eq!(cartier_1var_oracle(&x2dx).unwrap(), OneForm::basis(r, 0));
        let r5 = Ring::new(5, 1).unwrap();
        let x4dx = OneForm::single(rf(r5, &[(&[4], 1)]), 0);
        assert_eq!(cartier_1var_oracle(&x4dx).unwrap(), OneForm::basis(r5, 0));
        assert!(cartier_1var_oracle(&OneForm::basis(r5, 0)).unwrap().is_zero());
        let r2 = Ring::new(5, 2).unwrap();
        assert_eq!(
            cartier_1var_oracle(&OneForm::zero(r2)),
            Err(Error::RequiresOneVariable(2))
        );
    }

    #[test]
    fn log_witness_examples() {
        let r = Ring::new(3, 1).unwrap();
        let x = MultiPoly::var(r, 0);
        let x1 = &x + &MultiPoly::one(r);
        let chart = Chart::new(r, vec![x.clone()]).unwrap();
        let w = dlog(&RatFunc::var(r, 0)).unwrap().scale(&RatFunc::constant(r, 2));
        let found = log_witness(&w, &chart).unwrap();
        assert_eq!(found.exponents, vec![2]);
        assert_eq!(found.unit, RatFunc::from_poly(x.pow(2)));

        let chart2 = Chart::new(r, vec![x.clone(), x1.clone()]).unwrap();
        let w2 = &dlog(&RatFunc::from_poly(x.clone())).unwrap() - &dlog(&RatFunc::from_poly(x1.clone())).unwrap();
        let found = log_witness(&w2, &chart2).unwrap();
        assert_eq!(found.exponents, vec![1, 2]);
        assert_eq!(found.unit, RatFunc::from_poly(&x * &x1.pow(2)));

        let xdx = OneForm::single(RatFunc::var(r, 0), 0);
        assert_eq!(log_witness(&xdx, &chart), Err(Error::NotCartierFixed));

        // logarithmic, but the denominator is off the chart
        let w3 = dlog(&RatFunc::from_poly(x1)).unwrap();
        assert_eq!(log_witness(&w3, &chart), Err(Error::NoWitnessOnChart));
    }

    #[test]
    fn chart_validation() {
        let r = Ring::new(3, 1).unwrap();
        let x = MultiPoly::var(r, 0);
        assert!(matches!(
            Chart::new(r, vec![x.clone(), x.scale(2)]),
            Err(Error::InvalidChart(_))
        ));
        assert!(matches!(
            Chart::new(r, vec![MultiPoly::one(r)]),
            Err(Error::InvalidChart(_))
        ));
        let many: Vec<MultiPoly> = (0..7)
            .map(|c| &x + &MultiPoly::constant(r, c))
            .collect();
        assert_eq!(Chart::new(r, many), Err(Error::ChartTooLarge(7)));
    }

    #[test]
    fn derived_chart_uses_declared_factors_of_denominators() {
        let r = Ring::new(5, 2).unwrap();
        let x = MultiPoly::var(r, 0);
        let y = MultiPoly::var(r, 1);
        let xy1 = &(&x * &y) + &MultiPoly::one(r);
        let f = RatFunc::from_poly(&x * &xy1.pow(2));
        let w = dlog(&f).unwrap();
        let chart = Chart::derive(&w, &[x.clone(), y.clone(), xy1.clone()]).unwrap();
        assert_eq!(chart.generators(), &[x, xy1]);
        let found = log_witness(&w, &chart).unwrap();
        assert_eq!(found.unit, f);
    }
}
