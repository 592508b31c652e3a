use fptlab_core::arith::primes_in;
use fptlab_core::bounds::p0;
use fptlab_core::coeffsets::{dset_below, CoeffSetSpec};
use fptlab_core::frobenius::{fpt_bracket_with, LineArrangement, OracleConfig, Slope};
use fptlab_core::pairs::{
    certify_batch, certify_sfr, certify_sfr_with, classify_p1, cone_transfer, klt_arrangements, P1Pair, Reason,
    Verdict,
};
use fptlab_core::rational::r;
use fptlab_core::thresholds::{klt_weighted, WeightedArrangement};
use fptlab_core::{Exec, Rational};
use proptest::prelude::*;

fn weight_list() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..12, 1i64..12), 1..6)
        .prop_map(|v| v.into_iter().map(|(a, b)| r(a, a.max(b) + (a >= b) as i64)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn cone_coherence(coeffs in weight_list()) {
        let pair = P1Pair::new(coeffs).unwrap();
        let w = cone_transfer(&pair).unwrap();
        prop_assert_eq!(classify_p1(&pair).log_fano, klt_weighted(&w));
    }

    #[test]
    fn certificates_are_sound(coeffs in weight_list(), pi in 0usize..8) {
        let p = [2u64, 3, 5, 7, 11, 13, 29, 31][pi];
        let w = WeightedArrangement::new(coeffs).unwrap();
        let c = certify_sfr(&w, p, 0).unwrap();
        if !klt_weighted(&w) {
            prop_assert_eq!(c.verdict, Verdict::NotKlt);
        }
        if c.verdict == Verdict::StronglyFRegular {
            prop_assert!(c.reason != Reason::None);
            prop_assert!(c.recheck());
        } else {
            prop_assert_eq!(c.reason, Reason::None);
        }
    }
}

#[test]
fn hara_monsky_never_contradicted_by_oracle() {
    let cfg = OracleConfig::default();
    for p in [5u64, 7, 11] {
        let slopes = [Slope::Finite(0), Slope::Finite(1), Slope::Infinity, Slope::Finite(2)];
        for w in klt_arrangements(&CoeffSetSpec::empty(), &r(7, 8), 4).unwrap() {
            let k = w.weights().len();
            let w = w.with_slopes(slopes[..k].to_vec()).unwrap();
            let c = certify_sfr_with(&w, p, 0, &cfg).unwrap();
            if c.reason != Reason::HaraMonskyRule {
                continue;
            }
            let arr = LineArrangement::new(p, slopes[..k].to_vec(), c.integral_mults.clone()).unwrap();
            for e in 1..=2 {
                let Ok(br) = fpt_bracket_with(&arr, e, &cfg) else { break };
                assert!(br.upper >= c.lambda, "p = {p}, {:?}", w.weights());
            }
        }
    }
}

#[test]
fn main_theorem_for_standard_coefficients() {
    let set = CoeffSetSpec::empty();
    let bound = p0(&set).unwrap().p0;
    let items = klt_arrangements(&set, &r(19, 20), 4).unwrap();
    assert!(!items.is_empty());
    let cfg = OracleConfig::default();
    for p in primes_in(bound + 1, bound + 50) {
        for c in certify_batch(&items, p, 0, &cfg, Exec::default()) {
            let c = c.unwrap();
            assert_eq!(c.verdict, Verdict::StronglyFRegular, "p = {p}");
            assert!(c.recheck());
        }
    }
}

#[test]
fn enumeration_covers_the_slice() {
    let set = CoeffSetSpec::new(vec![r(1, 3)]).unwrap();
    let slice = dset_below(&set, &r(19, 20)).unwrap();
    let items = klt_arrangements(&set, &r(19, 20), 6).unwrap();
    for a in slice.positive() {
        assert!(items.iter().any(|w| w.weights() == std::slice::from_ref(a)));
    }
    assert!(items.iter().all(|w| klt_weighted(w) && w.weights().windows(2).all(|p| p[0] <= p[1])));
}
