use fairdist::distribution::{stratum_pmf_bruteforce, stratum_pmf_fast, tv_distance};
use fairdist::{measure_value, stratum_count, ConfusionPair, MeasureId, Rational, Stratum};
use proptest::prelude::*;

fn stratum(max_n: u64) -> impl Strategy<Value = Stratum> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), 0..=n, 0..=n))
        .prop_map(|(n, p, n_p)| Stratum::new(n, p, n_p).unwrap())
}

fn measure() -> impl Strategy<Value = MeasureId> {
    prop::sample::select(MeasureId::ALL.to_vec())
}

fn pair() -> impl Strategy<Value = ConfusionPair> {
    prop::array::uniform8(0u64..20).prop_map(ConfusionPair::from_array)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_groups_mirrors_the_pmf(s in stratum(40), m in measure()) {
        let here = stratum_pmf_fast(m, &s).unwrap();
        let there = stratum_pmf_fast(m, &s.swap_groups()).unwrap();
        prop_assert_eq!(there, here.mirrored());
    }

    #[test]
    fn accuracy_equality_and_statistical_parity_coincide(s in stratum(40)) {
        prop_assert_eq!(
            stratum_pmf_fast(MeasureId::AccuracyEquality, &s).unwrap(),
            stratum_pmf_fast(MeasureId::StatisticalParity, &s).unwrap()
        );
    }

    #[test]
    fn class_swap_duality(s in stratum(40)) {
        let t = s.swap_classes();
        prop_assert_eq!(
            stratum_pmf_fast(MeasureId::PredictiveEquality, &s).unwrap(),
            stratum_pmf_fast(MeasureId::EqualOpportunity, &t).unwrap()
        );
        prop_assert_eq!(
            stratum_pmf_fast(MeasureId::NegativePredictiveParity, &s).unwrap(),
            stratum_pmf_fast(MeasureId::PositivePredictiveParity, &t).unwrap()
        );
    }

    #[test]
    fn fast_path_matches_bruteforce(s in stratum(14), m in measure()) {
        let fast = stratum_pmf_fast(m, &s).unwrap();
        prop_assert_eq!(fast.total(), stratum_count(&s).unwrap());
        prop_assert_eq!(fast, stratum_pmf_bruteforce(m, &s).unwrap());
    }

    #[test]
    fn pair_level_identities(p in pair(), m in measure()) {
        prop_assert_eq!(measure_value(m, &p.swap_groups()), -measure_value(m, &p));
        prop_assert_eq!(
            measure_value(MeasureId::PredictiveEquality, &p),
            measure_value(MeasureId::EqualOpportunity, &p.swap_classes())
        );
        prop_assert_eq!(
            measure_value(MeasureId::NegativePredictiveParity, &p),
            measure_value(MeasureId::PositivePredictiveParity, &p.invert_labels())
        );
        if let Some(v) = measure_value(m, &p).defined() {
            prop_assert!(-Rational::ONE <= v && v <= Rational::ONE);
        }
    }

    #[test]
    fn total_variation_is_a_symmetric_bounded_distance(a in stratum(20), b in stratum(20), m in measure()) {
        let (pa, pb) = (stratum_pmf_fast(m, &a).unwrap(), stratum_pmf_fast(m, &b).unwrap());
        let d = tv_distance(&pa, &pb).unwrap();
        prop_assert_eq!(d, tv_distance(&pb, &pa).unwrap());
        prop_assert!(Rational::ZERO <= d && d <= Rational::ONE);
        prop_assert_eq!(tv_distance(&pa, &pa).unwrap(), Rational::ZERO);
    }
}
