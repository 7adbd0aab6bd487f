use proptest::prelude::*;
use qigf_core::*;

fn alpha(a: f64) -> AlphaValue {
    AlphaValue::new(a).unwrap()
}

fn unit_sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 2..60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parzen_quantile_interpolates_the_order_statistics(raw in unit_sample()) {
        let s = order_sample(&raw).unwrap();
        let n = s.len();
        prop_assert_eq!(parzen_quantile(&s, 0.0).unwrap(), 0.0);
        prop_assert_eq!(parzen_quantile(&s, 1.0).unwrap(), s.values()[n - 1]);
        for r in 1..=n {
            prop_assert_eq!(parzen_quantile(&s, r as f64 / n as f64).unwrap(), s.values()[r - 1]);
        }
        let mut prev = 0.0;
        for k in 0..=200 {
            let v = parzen_quantile(&s, k as f64 / 200.0).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn parzen_slope_is_the_cell_derivative(raw in unit_sample(), cell in 0usize..60, t in 0.1f64..0.9) {
        let s = order_sample(&raw).unwrap();
        let n = s.len();
        let r = cell % n + 1;
        let u = (r as f64 - 1.0 + t) / n as f64;
        let h = 1e-3 / n as f64;
        let fd = (parzen_quantile(&s, u + h).unwrap() - parzen_quantile(&s, u - h).unwrap()) / (2.0 * h);
        let q = parzen_q3(&s, u).unwrap();
        prop_assert!((fd - q).abs() <= 1e-6 * q.max(1.0));
    }

    #[test]
    fn endpoint_reductions_and_alpha_one(raw in unit_sample(), a in 0.05f64..3.0) {
        let s = order_sample(&raw).unwrap();
        let i = estimate_igf(&s, alpha(a)).unwrap().estimate;
        prop_assert!(i >= 0.0);
        prop_assert_eq!(estimate_residual(&s, alpha(a), 0.0).unwrap().estimate, i);
        prop_assert_eq!(estimate_past(&s, alpha(a), 1.0).unwrap().estimate, i);
        prop_assert_eq!(estimate_igf(&s, alpha(1.0)).unwrap().estimate, 1.0);
        prop_assert_eq!(estimate_residual(&s, alpha(1.0), 0.4).unwrap().estimate, 1.0);
        prop_assert_eq!(estimate_past(&s, alpha(1.0), 0.4).unwrap().estimate, 1.0);
    }

    #[test]
    fn estimates_are_nonnegative(raw in unit_sample(), a in 0.05f64..3.0, u in 0.01f64..0.99) {
        let s = order_sample(&raw).unwrap();
        prop_assert!(estimate_residual(&s, alpha(a), u).unwrap().estimate >= 0.0);
        prop_assert!(estimate_past(&s, alpha(a), u).unwrap().estimate >= 0.0);
    }

    #[test]
    fn exponential_pair_residual_is_flat(l1 in 0.2f64..5.0, l2 in 0.2f64..5.0, a in 0.1f64..0.95, u in 0.01f64..0.99) {
        let cfg = EvalConfig::default();
        let m = compose(QuantileModel::exponential(l1).unwrap(), QuantileModel::exponential(l2).unwrap()).unwrap();
        let i = igf(&m, alpha(a), &cfg).unwrap().value;
        let r = igf_residual(&m, alpha(a), u, &cfg).unwrap().value;
        prop_assert!((r - i).abs() <= 1e-12 * i);
        prop_assert!(i >= 0.0);
        // exact integral of c^(1-α) (1-p)^(k-1) over the clipped interval
        let (c, e) = (l1 / l2, cfg.endpoint_eps);
        let k = a + c * (1.0 - a);
        let clipped = c.powf(1.0 - a) * ((1.0 - e).powf(k) - e.powf(k)) / k;
        let q = qigf_core::igf::igf_quadrature(&m, alpha(a), &cfg).unwrap().value;
        prop_assert!((q - clipped).abs() <= 1e-7 * clipped, "{} {}", q, clipped);
    }

    #[test]
    fn hellinger_lies_in_unit_interval(theta in 0.1f64..10.0) {
        let cfg = EvalConfig::default();
        let m = distortion_to_composed(&DistortionSpec::ProportionalHazards { theta }).unwrap();
        let p = divergence_panel(&m, &[], &cfg).unwrap();
        prop_assert!((0.0..=1.0).contains(&p.hellinger));
        prop_assert!(p.kl >= -1e-9);
    }

    #[test]
    fn quantile_round_trip(mean in 0.1f64..10.0, scale in 0.5f64..5.0, shape in 0.3f64..3.0, p in 0.01f64..0.99) {
        let cfg = EvalConfig::default();
        for m in [
            QuantileModel::exponential(mean).unwrap(),
            QuantileModel::govindarajulu(scale, shape).unwrap(),
            QuantileModel::power(scale, shape).unwrap(),
            QuantileModel::power_pareto(scale, shape, 0.3).unwrap(),
        ] {
            let x = m.quantile(p).unwrap();
            prop_assert!((m.cdf(x, &cfg).unwrap() - p).abs() <= 1e-8);
        }
    }

    #[test]
    fn simulation_rows_respect_variance(seed in 0u64..1000) {
        let m = distortion_to_composed(&DistortionSpec::ProportionalHazards { theta: 2.0 }).unwrap();
        let s = SimScenario::new(m, 0.5, &[0.3], vec![10, 30], 8, seed).unwrap();
        let r = run_simulation(&s).unwrap();
        for row in &r.rows {
            prop_assert!(row.mse >= row.bias * row.bias - 1e-12);
        }
    }
}
