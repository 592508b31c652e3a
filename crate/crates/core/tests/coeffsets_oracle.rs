mod common;

use common::{dset_bounded_denominator, dset_oracle, from_lib, plus_oracle, q, to_lib, Q};
use fptlab_core::coeffsets::{contains, ddi_check, dset_below, largest_below, min_positive, plus_closure, CoeffSetSpec};
use fptlab_core::rational::r;
use fptlab_core::Rational;
use proptest::prelude::*;

fn spec(v: &[Q]) -> CoeffSetSpec {
    CoeffSetSpec::new(v.iter().map(to_lib).collect()).unwrap()
}

fn family() -> Vec<Vec<Q>> {
    vec![
        vec![],
        vec![q(1, 3)],
        vec![q(1, 2)],
        vec![q(2, 5)],
        vec![q(1, 2), q(1, 3)],
        vec![q(1, 4), q(2, 7)],
    ]
}

#[test]
fn plus_closure_matches_oracle() {
    for set in family() {
        let lib: Vec<Q> = plus_closure(&spec(&set)).elements.iter().map(from_lib).collect();
        let oracle: Vec<Q> = plus_oracle(&set).into_iter().collect();
        assert_eq!(lib, oracle, "{set:?}");
    }
}

#[test]
fn slices_match_denominator_bounded_oracle() {
    for set in family() {
        let bounded = dset_bounded_denominator(&set, 60);
        for cutoff in [q(1, 2), q(2, 3), q(9, 10), q(19, 20), q(59, 60)] {
            let slice = dset_below(&spec(&set), &to_lib(&cutoff)).unwrap();
            let lib: Vec<Q> = slice.elements.iter().map(from_lib).filter(|x| *x.denom() <= 60).collect();
            let want: Vec<Q> = bounded.iter().copied().filter(|x| *x < cutoff).collect();
            assert_eq!(lib, want, "I = {set:?}, cutoff = {cutoff}");
            // No element is missing regardless of denominator.
            let generated: Vec<Q> = dset_oracle(&set, &cutoff, 2000).into_iter().collect();
            let all: Vec<Q> = slice.elements.iter().map(from_lib).collect();
            assert_eq!(all, generated, "I = {set:?}, cutoff = {cutoff}");
        }
    }
}

#[test]
fn membership_matches_oracle_on_grid() {
    for set in family() {
        let bounded = dset_bounded_denominator(&set, 60);
        let s = spec(&set);
        for b in 1..=60i128 {
            for a in 0..b {
                let x = q(a, b);
                if *x.denom() != b {
                    continue;
                }
                assert_eq!(contains(&s, &to_lib(&x)), bounded.binary_search(&x).is_ok(), "{x}");
            }
        }
    }
}

#[test]
fn ddi_at_desk_scale() {
    for set in [vec![], vec![q(1, 3)], vec![q(1, 2), q(1, 3)]] {
        for c in [r(1, 2), r(2, 3), r(4, 5)] {
            assert!(ddi_check(&spec(&set), &c).unwrap(), "I = {set:?}, c = {c}");
        }
    }
}

#[test]
fn one_third_below_nine_tenths() {
    let slice = dset_below(&spec(&[q(1, 3)]), &r(9, 10)).unwrap();
    let want = [(0, 1), (1, 3), (1, 2), (2, 3), (3, 4), (7, 9), (4, 5), (5, 6), (6, 7), (13, 15), (7, 8), (8, 9)];
    let want: Vec<Rational> = want.iter().map(|&(a, b)| r(a, b)).collect();
    assert_eq!(slice.elements, want);
}

fn small_set() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((1i128..6, 2i128..9), 0..3).prop_map(|v| {
        let mut out: Vec<Q> = v.into_iter().filter(|(a, b)| a < b).map(|(a, b)| q(a, b)).collect();
        out.sort();
        out.dedup();
        out
    })
}

fn cutoff() -> impl Strategy<Value = Q> {
    (1i128..20, 2i128..21).prop_filter_map("below one", |(a, b)| (a < b).then(|| q(a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn slices_grow_with_cutoff(set in small_set(), c1 in cutoff(), c2 in cutoff()) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let s = spec(&set);
        let a = dset_below(&s, &to_lib(&lo)).unwrap();
        let b = dset_below(&s, &to_lib(&hi)).unwrap();
        prop_assert!(a.elements.iter().all(|x| b.contains(x)));
        prop_assert!(a.elements.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn slices_grow_with_set(set in small_set(), extra in (1i128..6, 2i128..9), c in cutoff()) {
        prop_assume!(extra.0 < extra.1);
        let mut bigger = set.clone();
        bigger.push(q(extra.0, extra.1));
        bigger.sort();
        bigger.dedup();
        let a = dset_below(&spec(&set), &to_lib(&c)).unwrap();
        let b = dset_below(&spec(&bigger), &to_lib(&c)).unwrap();
        prop_assert!(spec(&set).is_subset_of(&spec(&bigger)));
        prop_assert!(a.elements.iter().all(|x| b.contains(x)));
    }

    #[test]
    fn largest_below_is_slice_maximum(set in small_set(), c in cutoff(), fl in (0i128..10, 1i128..11)) {
        prop_assume!(fl.0 < fl.1);
        let floor = q(fl.0, fl.1);
        prop_assume!(floor <= c);
        let s = spec(&set);
        let got = largest_below(&s, &to_lib(&c), &to_lib(&floor)).unwrap();
        let slice = dset_below(&s, &to_lib(&c)).unwrap();
        let want = slice.elements.iter().filter(|x| **x >= to_lib(&floor)).max().cloned();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn min_positive_is_smallest_positive(set in small_set()) {
        let s = spec(&set);
        let slice = dset_below(&s, &r(99, 100)).unwrap();
        prop_assert_eq!(slice.positive().first().cloned(), Some(min_positive(&s)));
    }
}
