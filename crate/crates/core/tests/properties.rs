mod common;

use std::f64::consts::PI;

use proptest::prelude::*;

use paired_roots::catalog;
use paired_roots::datum::{validate, CoxeterDatum};
use paired_roots::dihedral::{p_closed_form, p_sequence, power_product, DihedralParams, ProductKind};
use paired_roots::group::{element_from_word, equals, length, n_set, reduced_word};
use paired_roots::roots::{decomposition_check, generate_roots, pairing_value, Side, DEFAULT_ROOT_CAP};

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..rank, 0..=max_len)
}

/// Two-generator data whose product is `cos^2(pi/m)`, split by `ratio`.
fn rank_two(m: u32, ratio: f64) -> CoxeterDatum {
    let g = (PI / m as f64).cos();
    let a = g * ratio;
    CoxeterDatum::from_pairing_rows(&[vec![1.0, -a], vec![-g * g / a, 1.0]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_matches_closed_form(gamma in -1.999f64..1.999, n in 0i64..60) {
        let seq = p_sequence(gamma, n as usize);
        let rec = seq[(n + 1) as usize];
        prop_assert!((rec - p_closed_form(gamma, n)).abs() <= 1e-8 * rec.abs().max(1.0));
        prop_assert!((rec - common::p_closed(gamma, n)).abs() <= 1e-8 * rec.abs().max(1.0));
    }

    #[test]
    fn products_match_oracle(gamma in -1.5f64..1.5, q in 0.5f64..2.0, x in 0.5f64..2.0, n in 0u32..8) {
        let params = DihedralParams::new(gamma, q, x).unwrap();
        let oracle = common::literal_products(gamma, q, x, n);
        for (k, kind) in ProductKind::ALL.iter().enumerate() {
            let (computed, predicted) = power_product(&params, *kind, n);
            prop_assert!(common::close2(&computed, &oracle[k], 1e-9));
            prop_assert!(common::close2(&predicted, &oracle[k], 1e-8));
        }
    }

    #[test]
    fn reduced_words_have_length(w in word(3, 12)) {
        let d = catalog::standard("B3").unwrap();
        let e = element_from_word(&d, &w).unwrap();
        let r = reduced_word(&d, &e).unwrap();
        prop_assert_eq!(r.len(), length(&d, &e).unwrap());
        prop_assert!(r.len() <= w.len() && r.len() % 2 == w.len() % 2);
        prop_assert!(equals(&element_from_word(&d, &r).unwrap(), &e, 1e-9));
    }

    #[test]
    fn inversion_sets_have_length(w in word(3, 10)) {
        let d = catalog::standard("H3").unwrap();
        let e = element_from_word(&d, &w).unwrap();
        let ell = length(&d, &e).unwrap();
        prop_assert_eq!(n_set(&d, &e, Side::One).unwrap().len(), ell);
        prop_assert_eq!(n_set(&d, &e, Side::Two).unwrap().len(), ell);
    }

    #[test]
    fn rescaled_dihedral_data_decompose(m in 2u32..9, ratio in 0.2f64..5.0) {
        let d = rank_two(m, ratio);
        prop_assert!(validate(&d).passed());
        let roots = generate_roots(&d, 4 * m as usize, DEFAULT_ROOT_CAP);
        prop_assert!(roots.complete());
        prop_assert_eq!(roots.positive_class_count(Side::One), m as usize);
        prop_assert!(decomposition_check(&d, 12, DEFAULT_ROOT_CAP).holds());
    }

    #[test]
    fn pairing_is_invariant(m in 3u32..9, ratio in 0.2f64..5.0, w in word(2, 9)) {
        let d = rank_two(m, ratio);
        let e = element_from_word(&d, &w).unwrap();
        let roots = generate_roots(&d, 4 * m as usize, DEFAULT_ROOT_CAP);
        for a in roots.pairs() {
            for b in roots.pairs() {
                let before = pairing_value(&d, &a.x, &b.y).unwrap();
                let after = pairing_value(&d, &e.apply(&a.x, Side::One), &e.apply(&b.y, Side::Two)).unwrap();
                prop_assert!((before - after).abs() <= 1e-8 * before.abs().max(1.0));
            }
        }
    }
}
