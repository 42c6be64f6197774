//! Structural invariants of randomly drawn models.

mod common;

use common::rng;
use proptest::prelude::*;
use valsem::dualgraph::classify;
use valsem::resolution::random_centers;
use valsem::build_model;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn value_matrix_inverts_the_negated_intersection_matrix(seed in any::<u64>(), s in 1usize..=10, bias in 0.0f64..0.8) {
        let model = build_model(&random_centers(&mut rng(seed), s, bias)).unwrap();
        let n = model.len();
        let a = model.value_matrix();
        let m = model.intersection_matrix();
        for i in 0..n {
            for j in 0..n {
                let entry: i64 = (0..n).map(|k| a[i][k] as i64 * -m[k][j]).sum();
                prop_assert_eq!(entry, i64::from(i == j));
                prop_assert_eq!(a[i][j], a[j][i]);
                prop_assert!(a[i][j] >= 1);
                prop_assert_eq!(m[i][j], m[j][i]);
            }
            prop_assert!(m[i][i] <= -1);
        }
    }

    #[test]
    fn dual_graph_is_a_tree(seed in any::<u64>(), s in 1usize..=10, bias in 0.0f64..0.8) {
        let model = build_model(&random_centers(&mut rng(seed), s, bias)).unwrap();
        let n = model.len();
        prop_assert_eq!(model.edges().len(), n - 1);
        for v in model.vertices() {
            prop_assert_eq!(model.path(1, v).first().copied(), Some(1));
            prop_assert_eq!(model.path(1, v).last().copied(), Some(v));
        }
        let g = classify(&model);
        for v in model.vertices() {
            prop_assert_eq!(g.is_dead_end(v), model.degree(v) <= 1);
            prop_assert_eq!(g.stars.contains(&v), model.degree(v) >= 3);
        }
    }

    #[test]
    fn minimal_submodel_keeps_values_and_is_minimal(seed in any::<u64>(), s in 1usize..=10, bias in 0.0f64..0.8, pick in any::<u64>()) {
        let mut rng = rng(seed);
        let full = build_model(&random_centers(&mut rng, s, bias)).unwrap();
        let n = full.len();
        let mut marked = vec![1 + (pick as usize % n)];
        let second = 1 + ((pick >> 32) as usize % n);
        if second != marked[0] {
            marked.push(second);
        }
        let (sub, renumber) = full.minimal_submodel(&marked).unwrap();
        let new_marked: Vec<usize> = marked.iter().map(|&v| renumber[v - 1].unwrap()).collect();
        prop_assert!(sub.validate_minimality(&new_marked).minimal);
        // Values among surviving divisors do not depend on later blow-ups.
        for old_a in 1..=n {
            for old_b in 1..=n {
                if let (Some(a), Some(b)) = (renumber[old_a - 1], renumber[old_b - 1]) {
                    prop_assert_eq!(sub.value(a, b), full.value(old_a, old_b));
                }
            }
        }
        // Minimal means every leaf of the point tree is marked; adding an
        // unmarked leaf breaks it.
        let mut extended = sub.centers().to_vec();
        extended.push(valsem::Center::free(sub.len() + 1, new_marked[0]));
        let bigger = build_model(&extended).unwrap();
        let report = bigger.validate_minimality(&new_marked);
        prop_assert!(!report.minimal);
        prop_assert!(report.offending.contains(&(sub.len() + 1)));
    }
}
