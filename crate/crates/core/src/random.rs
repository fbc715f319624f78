//! Seeded generators for polynomials, rational functions, closed forms and
//! units, used by the cross-check batteries, the property tests and the
//! benches. Same seed, same stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartier::gamma;
use crate::forms::{differential, dlog, OneForm};
use crate::poly::{Monomial, MultiPoly, RatFunc, Ring};

/// A fixed list of irreducible polynomials, used as chart generators and
/// as the building blocks of random units: `x_i`, `x_i + 1` for every
/// variable, `x + 2` in one variable, and `x + y + 1`, `x*y + 1` in two or
/// more. At most six members.
pub fn irreducible_pool(ring: Ring) -> Vec<MultiPoly> {
    let n = ring.nvars();
    let one = MultiPoly::one(ring);
    let mut pool = Vec::new();
    for i in 0..n {
        let x = MultiPoly::var(ring, i);
        pool.push(x.clone());
        pool.push(&x + &one);
    }
    if n == 1 {
        pool.push(&MultiPoly::var(ring, 0) + &MultiPoly::constant(ring, 2));
    } else {
        let (x, y) = (MultiPoly::var(ring, 0), MultiPoly::var(ring, 1));
        pool.push(&(&x + &y) + &one);
        pool.push(&(&x * &y) + &one);
    }
    pool.truncate(crate::cartier::MAX_CHART_GENERATORS);
    pool
}

#[derive(Debug)]
pub struct Sampler {
    ring: Ring,
    rng: ChaCha8Rng,
    pool: Vec<MultiPoly>,
}

impl Sampler {
    pub fn new(ring: Ring, seed: u64) -> Self {
        Sampler {
            ring,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: irreducible_pool(ring),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn pool(&self) -> &[MultiPoly] {
        &self.pool
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coin(&mut self, prob: f64) -> bool {
        self.rng.gen_bool(prob)
    }

    pub fn coeff(&mut self) -> i64 {
        self.rng.gen_range(0..self.ring.p() as i64)
    }

    pub fn nonzero_coeff(&mut self) -> i64 {
        self.rng.gen_range(1..self.ring.p() as i64)
    }

    fn monomial(&mut self, max_deg: u32) -> Monomial {
        let n = self.ring.nvars();
        let total = self.rng.gen_range(0..=max_deg);
        let mut e = [0u32; 4];
        for _ in 0..total {
            e[self.rng.gen_range(0..n)] += 1;
        }
        Monomial::new(&e[..n])
    }

    /// Up to `max_terms` terms of total degree at most `max_deg`; may be zero.
    pub fn poly(&mut self, max_deg: u32, max_terms: usize) -> MultiPoly {
        let k = self.rng.gen_range(0..=max_terms);
        let terms: Vec<(Monomial, i64)> = (0..k)
            .map(|_| {
                let m = self.monomial(max_deg);
                (m, self.nonzero_coeff())
            })
            .collect();
        MultiPoly::from_terms(self.ring, terms)
    }

    pub fn nonzero_poly(&mut self, max_deg: u32, max_terms: usize) -> MultiPoly {
        loop {
            let f = self.poly(max_deg, max_terms.max(1));
            if !f.is_zero() {
                return f;
            }
        }
    }

    /// A random rational function: numerator of degree at most `max_deg`,
    /// denominator either 1, a product of pool members, or a random
    /// polynomial of small degree.
    pub fn ratfunc(&mut self, max_deg: u32) -> RatFunc {
        let num = self.poly(max_deg, 4);
        let den = match self.rng.gen_range(0..3) {
            0 => MultiPoly::one(self.ring),
            1 => self.pool_product(2),
            _ => self.nonzero_poly(max_deg.min(2), 3),
        };
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    pub fn nonzero_ratfunc(&mut self, max_deg: u32) -> RatFunc {
        loop {
            let f = self.ratfunc(max_deg);
            if !f.is_zero() {
                return f;
            }
        }
    }

    fn pool_product(&mut self, max_factors: usize) -> MultiPoly {
        let k = self.rng.gen_range(1..=max_factors);
        (0..k).fold(MultiPoly::one(self.ring), |acc, _| {
            let i = self.rng.gen_range(0..self.pool.len());
            &acc * &self.pool[i]
        })
    }

    /// `c * prod q_j^(e_j)` over the pool, exponents in `-p..=p`.
    pub fn pool_unit(&mut self) -> RatFunc {
        let p = self.ring.p() as i32;
        let mut num = MultiPoly::constant(self.ring, self.nonzero_coeff());
        let mut den = MultiPoly::one(self.ring);
        for q in self.pool.clone() {
            if !self.rng.gen_bool(0.5) {
                continue;
            }
            let e = self.rng.gen_range(-p..=p);
            if e >= 0 {
                num = &num * &q.pow(e as u32);
            } else {
                den = &den * &q.pow((-e) as u32);
            }
        }
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    /// A 1-form with independent random coefficients (usually not closed).
    pub fn one_form(&mut self, max_deg: u32) -> OneForm {
        let coeffs = (0..self.ring.nvars()).map(|_| self.ratfunc(max_deg)).collect();
        OneForm::new(self.ring, coeffs).expect("one coefficient per variable")
    }

    /// A closed form `df + gamma(eta) + dlog(u)`, each summand present with
    /// fixed probability. `eta` has small degree since `gamma` multiplies
    /// degrees by p.
    pub fn closed_form(&mut self, max_deg: u32) -> OneForm {
        let mut w = OneForm::zero(self.ring);
        if self.coin(0.6) {
            w = &w + &differential(&self.ratfunc(max_deg));
        }
        if self.coin(0.5) {
            let eta = self.small_form();
            w = &w + &gamma(&eta);
        }
        if self.coin(0.6) {
            w = &w + &self.log_form();
        }
        w
    }

    /// `dlog` of a random pool unit.
    pub fn log_form(&mut self) -> OneForm {
        dlog(&self.pool_unit()).expect("units are nonzero")
    }

    /// A 1-form with constant or linear coefficients, possibly with a pool
    /// denominator.
    pub fn small_form(&mut self) -> OneForm {
        let coeffs = (0..self.ring.nvars())
            .map(|_| {
                let num = self.poly(1, 2);
                if self.coin(0.3) {
                    let den = self.pool_product(1);
                    RatFunc::new(num, den).expect("nonzero denominator")
                } else {
                    RatFunc::from_poly(num)
                }
            })
            .collect();
        OneForm::new(self.ring, coeffs).expect("one coefficient per variable")
    }

    /// An invertible `size x size` matrix with polynomial entries of degree
    /// at most `max_deg`.
    pub fn invertible_matrix(&mut self, size: usize, max_deg: u32) -> crate::connections::RatMatrix {
        loop {
            let rows = (0..size)
                .map(|_| {
                    (0..size)
                        .map(|_| RatFunc::from_poly(self.poly(max_deg, 3)))
                        .collect()
                })
                .collect();
            let m = crate::connections::RatMatrix::from_rows(self.ring, rows).expect("square");
            if m.inverse().is_ok() {
                return m;
            }
        }
    }
}
