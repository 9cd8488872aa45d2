use std::collections::BTreeSet;

use proptest::prelude::*;

use crepant::cartan::CartanData;
use crepant::coeffring::{BaseScalar, Monomial};
use crepant::corrections::{delta_eval, DeltaIndex};
use crepant::exactnum::{euler_phi, rat, Cyclotomic};
use crepant::isocheck::{transport_check, verify_at};
use crepant::mckay::LinearMap;
use crepant::ringtables::{cr_table, cup_table, qc_eval, qc_table};

const CONDUCTORS: [u64; 7] = [1, 3, 4, 5, 8, 9, 12];

fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    proptest::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| {
        let len = euler_phi(n) as usize;
        proptest::collection::vec((-6i64..=6, 1i64..=4), len).prop_map(move |cs| {
            let coeffs: Vec<_> = cs.into_iter().map(|(p, q)| rat(p, q)).collect();
            Cyclotomic::from_coefficients(n, &coeffs).unwrap()
        })
    })
}

/// Rationals strictly inside the unit disc, away from zero.
fn small_rational() -> impl Strategy<Value = Cyclotomic> {
    (1i64..=8, 9i64..=12, any::<bool>()).prop_map(|(p, q, neg)| {
        let v = rat(if neg { -p } else { p }, q);
        Cyclotomic::from_rational(v)
    })
}

fn base_scalar() -> impl Strategy<Value = BaseScalar> {
    proptest::collection::vec((0u32..3, 0u32..3, -5i64..=5), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .fold(BaseScalar::zero(2), |acc, (l, m, c)| {
                &acc + &BaseScalar::monomial(2, Monomial { l, m }).scale_rational(&rat(c, 1))
            })
    })
}

proptest! {
    #[test]
    fn field_axioms(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), Cyclotomic::one());
        }
    }

    #[test]
    fn conjugation_is_a_ring_automorphism(a in cyclotomic(), b in cyclotomic()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn lift_then_restrict_is_identity(a in cyclotomic(), k in 1u64..=4) {
        let lifted = a.lift(a.conductor() * k);
        prop_assert_eq!(&lifted, &a);
        prop_assert_eq!(lifted.try_restrict(a.conductor()), Some(a.clone()));
    }

    #[test]
    fn numeric_value_matches_exact_product(a in cyclotomic(), b in cyclotomic()) {
        let exact = (&a * &b).to_complex();
        let approx = a.to_complex() * b.to_complex();
        prop_assert!((exact - approx).norm() < 1e-9 * (1.0 + approx.norm()));
    }

    #[test]
    fn base_scalars_form_a_commutative_ring(a in base_scalar(), b in base_scalar(), c in base_scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn generator_swap_is_an_involution(a in base_scalar(), b in base_scalar()) {
        prop_assert_eq!(a.swap_generators().swap_generators(), a.clone());
        prop_assert_eq!((&a * &b).swap_generators(), &a.swap_generators() * &b.swap_generators());
        prop_assert_eq!(BaseScalar::kappa(2).swap_generators(), BaseScalar::kappa(2));
    }

    #[test]
    fn degrees_add_under_multiplication(l1 in 0u32..4, m1 in 0u32..4, l2 in 0u32..4, m2 in 0u32..4) {
        let x = BaseScalar::monomial(2, Monomial { l: l1, m: m1 });
        let y = BaseScalar::monomial(2, Monomial { l: l2, m: m2 });
        let expected: BTreeSet<u32> = [2 * (l1 + m1 + l2 + m2)].into();
        prop_assert_eq!((&x * &y).degrees(), expected);
    }

    #[test]
    fn correction_matches_geometric_series(q in proptest::collection::vec(small_rational(), 3), mu in 1u32..=3, span in 0u32..3) {
        let nu = (mu + span).min(3);
        let idx = DeltaIndex::new(mu, nu);
        let exact = delta_eval(idx, &q).unwrap();
        let p: f64 = q[mu as usize - 1..nu as usize].iter().map(|x| x.to_complex().re).product();
        let series: f64 = (1..400).map(|k| p.powi(k)).sum();
        prop_assert!((exact.to_complex().re - series).abs() < 1e-12);
        prop_assert!(exact.as_rational().is_some());
    }

    #[test]
    fn identity_map_transports_any_table(n in 1usize..=3, q in proptest::collection::vec(small_rational(), 3)) {
        let table = qc_eval(&qc_table(&CartanData::build(n)), &q[..n]).unwrap();
        let report = transport_check(&LinearMap::identity(n), &table, &table).unwrap();
        prop_assert!(report.pass());
    }

    #[test]
    fn scaling_a_solution_breaks_it(k in 2i64..=5) {
        let t = &Cyclotomic::i() * &Cyclotomic::from_int(-2 * k);
        let map = LinearMap::from_fn(1, |_, _| t.clone());
        prop_assert!(!verify_at(&map, &[Cyclotomic::from_int(-1)]).unwrap().pass());
    }

    #[test]
    fn evaluated_tables_stay_symmetric(n in 1usize..=3, q in proptest::collection::vec(small_rational(), 3)) {
        let table = qc_eval(&qc_table(&CartanData::build(n)), &q[..n]).unwrap();
        prop_assert!(table.is_symmetric());
    }
}

#[test]
fn orbifold_product_is_associative() {
    for n in 1..=6 {
        let report = cr_table(n).associativity_report();
        assert!(report.holds(), "rank {n}: {report:?}");
    }
}

#[test]
fn classical_product_is_associative() {
    for n in 1..=4 {
        let report = cup_table(&CartanData::build(n)).associativity_report();
        assert!(report.holds(), "rank {n}: {report:?}");
    }
}
