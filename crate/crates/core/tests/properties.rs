use charp_core::cartier::{antiderivative, cartier, cartier_1var_oracle, gamma, log_witness, Chart};
use charp_core::connections::{
    curvature, maurer_cartan, pcurvature_abelian, pcurvature_at, pcurvature_brute,
    rank1_pcurvature_oracle, Derivation, GroupTag, MatrixOneForm,
};
use charp_core::forms::{differential, dlog, OneForm};
use charp_core::poly::{gcd, MultiPoly, RatFunc, Ring};
use charp_core::random::Sampler;
use charp_core::torsor::{kummer_cocycle, ChartWitness};
use proptest::prelude::*;

fn setup() -> impl Strategy<Value = Sampler> {
    (prop::sample::select(vec![3u32, 5, 7]), 1usize..=2, any::<u64>())
        .prop_map(|(p, n, seed)| Sampler::new(Ring::new(p, n).unwrap(), seed))
}

fn setup_n(n: usize) -> impl Strategy<Value = Sampler> {
    (prop::sample::select(vec![3u32, 5, 7]), any::<u64>())
        .prop_map(move |(p, seed)| Sampler::new(Ring::new(p, n).unwrap(), seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_division_inverts_multiplication(mut s in setup()) {
        let a = s.poly(4, 4);
        let b = s.nonzero_poly(3, 3);
        prop_assert_eq!((&a * &b).divexact(&b).unwrap(), a);
    }

    #[test]
    fn gcd_finds_common_factor(mut s in setup()) {
        let (a, b, c) = (s.nonzero_poly(3, 3), s.nonzero_poly(3, 3), s.nonzero_poly(2, 3));
        let g = gcd(&(&a * &c), &(&b * &c));
        prop_assert!(g.divexact(&c).is_ok());
        prop_assert!((&a * &c).divexact(&g).is_ok());
        prop_assert!((&b * &c).divexact(&g).is_ok());
    }

    #[test]
    fn p_basis_reconstructs(mut s in setup()) {
        let ring = s.ring();
        let f = s.poly(12, 6);
        let sum = f.p_basis_decompose().into_iter().fold(MultiPoly::zero(ring), |acc, (slot, g)| {
            &acc + &(&MultiPoly::monomial(ring, slot, 1) * &g.frobenius())
        });
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn frobenius_is_pth_power_and_root_inverts_it(mut s in setup()) {
        let f = s.ratfunc(3);
        let p = s.ring().p();
        prop_assert_eq!(f.frobenius(), f.pow(p));
        prop_assert_eq!(f.frobenius().p_th_root().unwrap(), f);
    }

    #[test]
    fn ratfunc_field_laws(mut s in setup()) {
        let (a, b, c) = (s.ratfunc(3), s.ratfunc(3), s.nonzero_ratfunc(3));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert!((&c * &c.inv().unwrap()).is_one());
        let rebuilt = RatFunc::new(
            c.num() * &MultiPoly::constant(s.ring(), 2),
            c.den() * &MultiPoly::constant(s.ring(), 2),
        ).unwrap();
        prop_assert_eq!(rebuilt, c);
    }

    #[test]
    fn d_squared_is_zero(mut s in setup()) {
        let f = s.ratfunc(4);
        prop_assert!(differential(&f).exterior_derivative().is_zero());
    }

    #[test]
    fn wedge_is_antisymmetric(mut s in setup()) {
        let (a, b) = (s.one_form(3), s.one_form(3));
        prop_assert_eq!(a.wedge(&b), -b.wedge(&a));
        prop_assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn leibniz_rules(mut s in setup()) {
        let (f, g) = (s.ratfunc(3), s.ratfunc(3));
        let w = s.one_form(2);
        prop_assert_eq!(
            differential(&(&f * &g)),
            &differential(&f).scale(&g) + &differential(&g).scale(&f)
        );
        prop_assert_eq!(
            w.scale(&f).exterior_derivative(),
            &differential(&f).wedge(&w) + &w.exterior_derivative().scale(&f)
        );
    }

    #[test]
    fn dlog_is_additive(mut s in setup()) {
        let (f, g) = (s.nonzero_ratfunc(3), s.nonzero_ratfunc(3));
        prop_assert_eq!(dlog(&(&f * &g)).unwrap(), &dlog(&f).unwrap() + &dlog(&g).unwrap());
        prop_assert!(dlog(&f).unwrap().is_closed());
    }

    #[test]
    fn cartier_inverts_gamma(mut s in setup()) {
        let eta = s.small_form();
        prop_assert_eq!(cartier(&gamma(&eta)).unwrap(), eta);
    }

    #[test]
    fn cartier_fixes_logs_and_kills_exact_forms(mut s in setup()) {
        let f = s.ratfunc(4);
        prop_assert!(cartier(&differential(&f)).unwrap().is_zero());
        let u = s.pool_unit();
        let w = dlog(&u).unwrap();
        prop_assert_eq!(cartier(&w).unwrap(), w);
    }

    #[test]
    fn cartier_is_p_inverse_linear(mut s in setup()) {
        let (w, v) = (s.closed_form(3), s.closed_form(3));
        let h = s.ratfunc(2);
        let cw = cartier(&w).unwrap();
        prop_assert_eq!(cartier(&w.scale(&h.frobenius())).unwrap(), cw.scale(&h));
        prop_assert_eq!(cartier(&(&w + &v)).unwrap(), &cw + &cartier(&v).unwrap());
    }

    #[test]
    fn antiderivative_of_cartier_kernel(mut s in setup()) {
        let f = s.ratfunc(4);
        let w = differential(&f);
        let g = antiderivative(&w).unwrap();
        prop_assert_eq!(differential(&g), w);
    }

    #[test]
    fn one_variable_oracle_agrees(mut s in setup_n(1)) {
        let w = s.closed_form(5);
        prop_assert_eq!(cartier(&w).unwrap(), cartier_1var_oracle(&w).unwrap());
    }

    #[test]
    fn log_witness_reproduces_the_form(mut s in setup()) {
        let u = s.pool_unit();
        let w = dlog(&u).unwrap();
        let chart = Chart::new(s.ring(), s.pool().to_vec()).unwrap();
        let lw = log_witness(&w, &chart).unwrap();
        prop_assert_eq!(dlog(&lw.unit).unwrap(), w);
        prop_assert!(lw.exponents.iter().all(|&e| e < s.ring().p()));
    }

    #[test]
    fn witnesses_differ_by_pth_powers(mut s in setup()) {
        let ring = s.ring();
        let u = s.pool_unit();
        let w = dlog(&u).unwrap();
        let full = Chart::new(ring, s.pool().to_vec()).unwrap();
        let derived = Chart::derive(&w, s.pool()).unwrap();
        let a = log_witness(&w, &full).unwrap().unit;
        let b = log_witness(&w, &derived).unwrap().unit;
        prop_assert!(a.checked_div(&b).unwrap().p_th_root().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_one_oracle_agrees_with_brute_force(mut s in setup_n(1)) {
        let w = s.one_form(3);
        let psi = pcurvature_brute(&MatrixOneForm::scalar(w.clone()));
        prop_assert_eq!(psi.component(0).get(0, 0), &rank1_pcurvature_oracle(&w).unwrap());
    }

    #[test]
    fn abelian_formula_matches_brute_force(mut s in setup()) {
        let w = s.closed_form(3);
        let gm = pcurvature_brute(&MatrixOneForm::scalar(w.clone())).entry_form(0, 0);
        prop_assert_eq!(pcurvature_abelian(&w, GroupTag::Gm).unwrap().frobenius_coeffs(), gm);
        let ga = pcurvature_brute(&MatrixOneForm::ga_embedded(w.clone())).entry_form(0, 1);
        prop_assert_eq!(pcurvature_abelian(&w, GroupTag::Ga).unwrap().frobenius_coeffs(), ga);
    }

    #[test]
    fn flat_connections_have_p_linear_pcurvature(
        p in prop::sample::select(vec![3u32, 5]),
        n in 1usize..=2,
        seed in any::<u64>(),
    ) {
        let ring = Ring::new(p, n).unwrap();
        let mut s = Sampler::new(ring, seed);
        let omega = MatrixOneForm::scalar(s.closed_form(2));
        let coeffs = (0..n).map(|_| RatFunc::from_poly(s.poly(1, 2))).collect();
        let d = Derivation::new(ring, coeffs).unwrap();
        prop_assert_eq!(pcurvature_at(&omega, &d), pcurvature_brute(&omega).evaluate(&d));
    }

    #[test]
    fn maurer_cartan_forms_are_flat_with_zero_pcurvature(mut s in setup()) {
        let g = s.invertible_matrix(2, 2);
        let omega = maurer_cartan(&g, GroupTag::Gl(2)).unwrap();
        prop_assert!(curvature(&omega).is_zero());
        prop_assert!(pcurvature_brute(&omega).is_zero());
    }

    #[test]
    fn derivation_p_power_matches_iteration(mut s in setup()) {
        let ring = s.ring();
        let coeffs = (0..ring.nvars()).map(|_| RatFunc::from_poly(s.poly(2, 2))).collect();
        let d = Derivation::new(ring, coeffs).unwrap();
        let f = s.ratfunc(3);
        let mut iterated = f.clone();
        for _ in 0..ring.p() {
            iterated = d.apply(&iterated);
        }
        prop_assert_eq!(d.p_power().apply(&f), iterated);
    }

    #[test]
    fn kummer_cocycle_laws(mut s in setup()) {
        let ring = s.ring();
        let chart = Chart::new(ring, s.pool().to_vec()).unwrap();
        let f = s.pool_unit();
        let ws: Vec<ChartWitness> = (0..3)
            .map(|_| {
                let h = s.pool_unit();
                ChartWitness::new(chart.clone(), &f * &h.frobenius()).unwrap()
            })
            .collect();
        let u = kummer_cocycle(&ws).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let uij = &u[&(i, j)];
                prop_assert_eq!(uij.frobenius(), ws[i].f.checked_div(&ws[j].f).unwrap());
                for k in 0..3 {
                    if k != i && k != j {
                        prop_assert_eq!(uij * &u[&(j, k)], u[&(i, k)].clone());
                    }
                }
            }
        }
    }
}

#[test]
fn closed_zero_form_edge_cases() {
    let ring = Ring::new(3, 2).unwrap();
    let zero = OneForm::zero(ring);
    assert!(cartier(&zero).unwrap().is_zero());
    assert!(gamma(&zero).is_zero());
    assert!(antiderivative(&zero).unwrap().is_zero());
}
