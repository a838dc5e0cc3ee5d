use pbf_core::classic::{gonen_bf10, gonen_log_asymptote, zellner_bf10};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gonen_decreases_in_prior_variance(t in -6f64..6.0, n1 in 2u64..60, n2 in 2u64..60, s in 0.01f64..1e4) {
        let lo = gonen_bf10(t, n1, n2, s).unwrap().log_bf10;
        let hi = gonen_bf10(t, n1, n2, s * 10.0).unwrap().log_bf10;
        if t.abs() < 3.0 {
            prop_assert!(hi < lo);
        }
        // as the prior spreads out the evidence eventually favours H0
        prop_assert!(gonen_bf10(t, n1, n2, 1e300).unwrap().log_bf10 < 0.0);
    }

    #[test]
    fn gonen_is_bounded_in_t(n1 in 2u64..60, n2 in 2u64..60, s in 0.01f64..100.0) {
        let limit = gonen_log_asymptote(n1, n2, s).exp();
        let at_large_t = gonen_bf10(1e6, n1, n2, s).unwrap().bf10();
        prop_assert!((at_large_t / limit - 1.0).abs() <= 0.01, "{at_large_t} vs {limit}");
    }

    #[test]
    fn zellner_null_r2_is_closed_form(n in 5u64..500, k in 1u64..4, g in 0.01f64..1e4) {
        prop_assume!(n > k + 1);
        let got = zellner_bf10(0.0, n, k, g).unwrap().log_bf10;
        let want = -(k as f64) / 2.0 * (1.0 + g).ln();
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
    }

    #[test]
    fn zellner_vanishes_as_g_grows(n in 5u64..500, k in 1u64..4, r2 in 0.0f64..0.99) {
        prop_assume!(n > k + 1);
        let at = |g: f64| zellner_bf10(r2, n, k, g).unwrap().log_bf10;
        prop_assert!(at(1e12) < at(1e10));
        // slope in ln g tends to -k/2, so the factor goes to zero
        let slope = (at(1e250) - at(1e200)) / (50.0 * 10f64.ln());
        prop_assert!((slope + k as f64 / 2.0).abs() <= 0.01 * k as f64 / 2.0, "{slope}");
    }
}
