mod common;

use num_rational::Ratio;
use proptest::prelude::*;
use qpretzel::braidzel::{mirror_twists, Braidzel};
use qpretzel::cli::census::{canonical_representative, run_census, CensusOptions, Filter, Format, KRange};
use qpretzel::cli::{analyze, parse_surface, VERSION};
use qpretzel::seifert_oracle::{determinant, gs_signature_lower, seifert_matrix, signature};
use qpretzel::slice::{chi_s_combined, chi_s_upper_subset, chi_s_upper_subset_exhaustive, pretzel_subset, slice_report};

use common::{each_orientable, orientable_twists};

fn pretzel_twists(max_k: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_k).prop_flat_map(move |k| orientable_twists(k, bound))
}

proptest! {
    #[test]
    fn subset_bound_is_monotone(t in pretzel_twists(6, 7), band in 0usize..6) {
        prop_assume!(band < t.len());
        let mut bigger = t.clone();
        bigger[band] += 2;
        let before = pretzel_subset(&t).map(|b| b.bound);
        let after = pretzel_subset(&bigger).map(|b| b.bound);
        if let Some(a) = after {
            prop_assert!(before.is_some_and(|b| b <= a), "{:?} -> {:?}", before, after);
        }
    }

    #[test]
    fn combined_bound_is_mirror_symmetric(t in pretzel_twists(6, 7)) {
        prop_assert_eq!(chi_s_combined(&t).unwrap(), chi_s_combined(&mirror_twists(&t)).unwrap());
    }

    #[test]
    fn report_invariants(t in pretzel_twists(6, 7)) {
        let r = slice_report(&t).unwrap();
        if let Some(exact) = r.chi_s_exact {
            prop_assert_eq!(exact, r.chi_surface);
        }
        if let (Some(c), Some(s)) = (r.chi_s_mirror_combined, r.chi_s_upper_subset.as_ref()) {
            prop_assert!(c <= s.bound);
        }
        match (r.is_knot, r.chi_s_mirror_combined) {
            (true, Some(c)) => prop_assert_eq!(r.gs_lower, Some(Ratio::new(1 - c, 2))),
            _ => prop_assert_eq!(r.gs_lower, None),
        }
    }

    #[test]
    fn closed_form_matches_subset_search(t in pretzel_twists(7, 9)) {
        let p = Braidzel::pretzel(&t).unwrap();
        let closed = chi_s_upper_subset(&p).unwrap().map(|b| b.bound);
        let search = chi_s_upper_subset_exhaustive(&p).unwrap().map(|b| b.bound);
        prop_assert_eq!(closed, search);
    }

    #[test]
    fn specs_round_trip(t in pretzel_twists(6, 9)) {
        let p = Braidzel::pretzel(&t).unwrap();
        let spec = parse_surface(&p.to_string()).unwrap();
        prop_assert_eq!(&spec.braidzel, &p);
        prop_assert_eq!(parse_surface(&spec.canonical()).unwrap().braidzel, p);
    }

    #[test]
    fn records_round_trip(bz in common::braidzel(5, 8, 5)) {
        let text = serde_json::to_string(&bz).unwrap();
        prop_assert_eq!(parse_surface(&text).unwrap().braidzel, bz.clone());
        prop_assert_eq!(parse_surface(&bz.to_string()).unwrap().braidzel, bz);
    }

    #[test]
    fn analyze_embeds_version_and_input(t in orientable_twists(3, 7)) {
        let spec = parse_surface(&format!("P({},{},{})", t[0], t[1], t[2])).unwrap();
        let record = analyze(&spec, false).unwrap();
        prop_assert_eq!(record["version"].as_str(), Some(VERSION));
        let canonical = spec.canonical();
        prop_assert_eq!(record["input"].as_str(), Some(canonical.as_str()));
    }
}

#[test]
fn oracle_exhaustive_odd_knots() {
    for k in [3, 5] {
        each_orientable(k, 7, |t| {
            if t[0] % 2 == 0 {
                return;
            }
            let v = seifert_matrix(t).unwrap();
            let sig = signature(&v);
            assert_eq!(determinant(&v) % 2, 1, "{t:?}");
            assert_eq!(signature(&seifert_matrix(&mirror_twists(t)).unwrap()), -sig, "{t:?}");
            assert!((sig.unsigned_abs() as usize) < k, "{t:?}");
            let diag = v.symmetrized();
            assert!((0..v.n).all(|i| diag[i][i] % 2 == 0));
            let r = slice_report(t).unwrap();
            let seifert_genus = Ratio::new(1 - r.chi_surface, 2);
            assert!(gs_signature_lower(&v) <= seifert_genus, "{t:?}");
            if r.chi_s_exact.is_some() {
                assert_eq!(r.gs_lower, Some(Ratio::new(k as i64 - 1, 2)), "{t:?}");
                assert!(gs_signature_lower(&v) <= r.gs_lower.unwrap(), "{t:?}");
            }
        });
    }
}

#[test]
fn upper_bounds_never_beat_exact() {
    for k in 1..=6 {
        each_orientable(k, 7, |t| {
            let r = slice_report(t).unwrap();
            if let Some(exact) = r.chi_s_exact {
                assert!(r.chi_s_paper_formula.value >= exact, "{t:?}");
                assert!(r.chi_s_upper_subset.as_ref().is_none_or(|b| b.bound >= exact), "{t:?}");
                assert!(r.chi_s_mirror_combined.is_none_or(|c| c >= exact), "{t:?}");
            }
        });
    }
}

fn census(k: KRange, tmax: i64, odd_only: bool, filter: &str, format: Format, dedupe: bool) -> Vec<u8> {
    let opts = CensusOptions { k, tmax, odd_only, filter: filter.parse().unwrap(), format, dedupe };
    let mut out = Vec::new();
    run_census(&opts, &mut out).unwrap();
    out
}

#[test]
fn census_is_deterministic() {
    for format in [Format::Csv, Format::Jsonl] {
        for dedupe in [false, true] {
            let a = census(KRange { lo: 2, hi: 4 }, 4, false, "", format, dedupe);
            let b = census(KRange { lo: 2, hi: 4 }, 4, false, "", format, dedupe);
            assert_eq!(a, b);
            assert!(!a.is_empty());
        }
    }
}

#[test]
fn census_orders_and_dedupes() {
    let out = census(KRange { lo: 2, hi: 4 }, 3, true, "", Format::Jsonl, true);
    let rows: Vec<serde_json::Value> = String::from_utf8(out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let keys: Vec<(u64, Vec<i64>)> = rows
        .iter()
        .map(|r| (r["k"].as_u64().unwrap(), r["twists"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for (_, t) in &keys {
        assert_eq!(&canonical_representative(t), t);
    }
}

#[test]
fn census_qp_filter_matches_criterion() {
    let out = census(KRange { lo: 3, hi: 3 }, 5, false, "qp", Format::Jsonl, false);
    let got: Vec<Vec<i64>> = String::from_utf8(out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["twists"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
        .collect();
    let mut expected = Vec::new();
    each_orientable(3, 5, |t| {
        if common::pairwise_negative(t) {
            expected.push(t.to_vec());
        }
    });
    assert_eq!(got, expected);
}

#[test]
fn census_yu_filter_finds_showcase() {
    let out = String::from_utf8(census(KRange { lo: 3, hi: 3 }, 7, true, "yu_family ∧ not_slice", Format::Csv, false)).unwrap();
    assert!(out.lines().any(|l| l.starts_with("\"P(3,-5,-7)\"")));
    let neg: Filter = "!qp, knot".parse().unwrap();
    assert_ne!(neg, Filter::default());
}
