mod common;

use proptest::prelude::*;

use fuzzy_dematel::compare::{self, compare_results, PipelineConfig};
use fuzzy_dematel::dematel::{self, neumann_oracle, normalize, total_relation, RESIDUAL_TOLERANCE};
use fuzzy_dematel::fuzzy_dematel::fuzzy_total_relation;
use fuzzy_dematel::scale::{encode_crisp, encode_fuzzy};
use fuzzy_dematel::{
    io, CrispSource, FuzzyScaling, LevelMatrix, LinguisticScale, NormalizationMode,
};

fn level_matrix(max_n: usize) -> impl Strategy<Value = LevelMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0usize..4, n), n).prop_map(|mut cells| {
            for (i, row) in cells.iter_mut().enumerate() {
                row[i] = 0;
            }
            LevelMatrix::with_default_names(cells).unwrap()
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn permuted<T: Copy>(v: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&p| v[p]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relabeling_permutes_indicators(
        (m, perm) in level_matrix(7).prop_flat_map(|m| { let n = m.dim(); (Just(m), permutation(n)) })
    ) {
        let cfg = PipelineConfig::default();
        let pm = m.permuted(&perm).unwrap();
        for run in [compare::run_defuzzify_first, compare::run_defuzzify_last] {
            let (Ok(a), Ok(b)) = (run(&m, &cfg), run(&pm, &cfg)) else { continue };
            for (x, y) in [(&a.prominence, &b.prominence), (&a.relation, &b.relation)] {
                let expected = permuted(x, &perm);
                for (e, got) in expected.iter().zip(y.iter()) {
                    prop_assert!((e - got).abs() <= 1e-12);
                }
            }
            prop_assert_eq!(permuted(&a.prominence_rank, &perm), b.prominence_rank.clone());
            prop_assert_eq!(permuted(&a.relation_rank, &perm), b.relation_rank.clone());
        }
    }

    #[test]
    fn fixed_point_certificate_and_sum_zero(m in level_matrix(8)) {
        let scale = LinguisticScale::default_scale();
        for source in [CrispSource::Defuzzified, CrispSource::Levels] {
            let a = encode_crisp(&m, &scale, source).unwrap();
            let Ok(n) = normalize(&a, NormalizationMode::MaxRow) else { continue };
            prop_assert!(n.normalized.row_sums().iter().all(|&s| s <= 1.0 + 1e-12));
            let Ok(t) = total_relation(&n) else { continue };
            prop_assert!(t.residual <= RESIDUAL_TOLERANCE);
            prop_assert!(dematel::indicators(&t).relation_sum().abs() <= 1e-9);
        }
    }

    #[test]
    fn shared_upper_keeps_fuzzy_sums_ordered(m in level_matrix(7)) {
        let f = encode_fuzzy(&m, &LinguisticScale::default_scale()).unwrap();
        let Ok(t) = fuzzy_total_relation(&f, FuzzyScaling::SharedUpper, NormalizationMode::MaxRow) else {
            return Ok(());
        };
        prop_assert!(t.is_ordered());
        let fa = fuzzy_dematel::fuzzy_dematel::fuzzy_indicators(&t);
        for i in 0..m.dim() {
            prop_assert!(fa.r_tfn(i).is_ok());
            prop_assert!(fa.c_tfn(i).is_ok());
        }
    }

    #[test]
    fn flips_do_not_depend_on_pipeline_order(m in level_matrix(6)) {
        let cfg = PipelineConfig::default();
        let (Ok(a), Ok(b)) = (compare::run_defuzzify_first(&m, &cfg), compare::run_defuzzify_last(&m, &cfg)) else {
            return Ok(());
        };
        let forward = compare_results(a.clone(), b.clone()).unwrap();
        let backward = compare_results(b, a).unwrap();
        prop_assert_eq!(&forward.prominence_flips, &backward.prominence_flips);
        prop_assert_eq!(&forward.relation_flips, &backward.relation_flips);
        prop_assert_eq!(forward.kendall_tau_relation, backward.kendall_tau_relation);
        prop_assert_eq!(forward.diverged, !forward.prominence_flips.is_empty() || !forward.relation_flips.is_empty());
        if !forward.diverged {
            // no flips and no ties means perfect agreement
            let untied = |r: &[f64]| { let mut v = r.to_vec(); v.sort_by(f64::total_cmp); v.windows(2).all(|w| w[0] != w[1]) };
            if untied(&forward.crisp_result.relation_rank) && untied(&forward.fuzzy_result.relation_rank) {
                prop_assert_eq!(forward.kendall_tau_relation, Some(1.0));
            }
        }
    }

    #[test]
    fn compare_is_deterministic(m in level_matrix(6)) {
        let cfg = PipelineConfig::default();
        let a = compare::compare(&m, &cfg).ok().map(|r| serde_json::to_string(&r).unwrap());
        let b = compare::compare(&m, &cfg).ok().map(|r| serde_json::to_string(&r).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn symmetric_matrices_have_no_relation_flips(m in level_matrix(6)) {
        // R - C vanishes under symmetry; prominence can still flip
        let m = m.symmetrized();
        let cfg = PipelineConfig::default();
        if let Ok(rep) = compare::compare(&m, &cfg) {
            prop_assert!(rep.relation_flips.is_empty());
            prop_assert_eq!(rep.kendall_tau_relation, None);
            prop_assert!(rep.crisp_result.relation.iter().all(|v| v.abs() < 1e-9));
            prop_assert!(rep.fuzzy_result.relation.iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn csv_round_trip(m in level_matrix(8)) {
        let scale = LinguisticScale::default_scale();
        let text = io::level_matrix_to_csv(&m, &scale).unwrap();
        prop_assert_eq!(io::parse_level_matrix(text.as_bytes(), &scale).unwrap(), m);
    }

    #[test]
    fn oracle_matches_inversion(m in level_matrix(6)) {
        let a = encode_crisp(&m, &LinguisticScale::default_scale(), CrispSource::Defuzzified).unwrap();
        let Ok(n) = normalize(&a, NormalizationMode::MaxRowCol) else { return Ok(()) };
        let series = neumann_oracle(&n, 400, 1e-12);
        if series.converged {
            let t = total_relation(&n).unwrap();
            prop_assert!(t.entries.max_abs_diff(&series.sum) <= 1e-8);
        }
    }
}
