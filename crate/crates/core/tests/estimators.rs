mod common;

use common::*;
use jumpact::estimators::{
    beta_bar, beta_hat, deb_hat, ecf_statistic, estimate, gap_factors, kappa_hat, kappa_p_hat,
    local_scale, rescaled_increments, theoretical_L, EstimatorConfig,
};
use jumpact::rng::stream;
use jumpact::sampling::{generate_times, LambdaSpec};
use jumpact::stable::{stable_constants, PhiSpec, StableLaw};
use jumpact::Error;
use proptest::prelude::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn price_scale_invariance(seed in any::<u64>(), n in 120usize..260) {
        let (taus, xs) = synthetic(seed, n);
        let cfg = EstimatorConfig::default();
        let base = estimate(&taus, &xs, &cfg, None);
        for c in [1e-3, 17.0, 1e4] {
            let scaled: Vec<f64> = xs.iter().map(|x| c * x).collect();
            let other = estimate(&taus, &scaled, &cfg, None);
            match (&base, &other) {
                (Ok(a), Ok(b)) => {
                    prop_assert!(close(a.beta_hat, b.beta_hat), "{} vs {}", a.beta_hat, b.beta_hat);
                    prop_assert!(close(a.l_u, b.l_u));
                    prop_assert!(close(a.l_v, b.l_v));
                }
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "scaling changed success"),
            }
        }
    }

    #[test]
    fn delta_proxy_invariance(seed in any::<u64>(), n in 120usize..260, u in 0.05f64..2.0) {
        let (taus, xs) = synthetic(seed, n);
        let k = 20;
        let stat = |proxy: f64| {
            let incs = rescaled_increments(&taus, &xs, proxy).unwrap();
            let v = local_scale(&incs, 0.5, k).unwrap();
            ecf_statistic(&incs, &v, 0.5, u, k).unwrap()
        };
        let base = stat(1.0 / n as f64);
        prop_assert!((-1.0..=1.0).contains(&base));
        for proxy in [1e-3, 0.37, 7.5] {
            let other = stat(proxy);
            prop_assert!(close(base, other), "{} vs {}", base, other);
        }
    }

    #[test]
    fn uv_symmetry(l_u in -1.0f64..0.999_999, l_v in -1.0f64..0.999_999,
                   u in 1e-4f64..3.0, v in 1e-4f64..3.0) {
        prop_assume!(u != v);
        let a = beta_hat(l_u, l_v, u, v);
        let b = beta_hat(l_v, l_u, v, u);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "asymmetric failure"),
        }
    }

    #[test]
    fn first_order_model_is_inverted(beta in 0.2f64..2.0, c in 1e-3f64..5.0,
                                     u in 1e-3f64..0.5, rho in 0.1f64..3.0) {
        prop_assume!((rho - 1.0).abs() > 1e-3);
        let v = rho * u;
        let l_u = 1.0 - c * u.powf(beta);
        let l_v = 1.0 - c * v.powf(beta);
        prop_assume!(l_u > -1.0 && l_v > -1.0);
        let b = beta_hat(l_u, l_v, u, v).unwrap();
        prop_assert!((b - beta).abs() < 1e-10 * (1.0 / (1.0 - l_u).min(1.0 - l_v)).max(1.0),
                     "{} vs {}", b, beta);
    }

    #[test]
    fn bound_at_half_rho(seed in any::<u64>(), n in 120usize..400) {
        let (taus, xs) = synthetic(seed, n);
        if let Ok(r) = estimate(&taus, &xs, &EstimatorConfig::default(), None) {
            prop_assert!(r.beta_hat <= 2.0, "{}", r.beta_hat);
        }
    }
}

#[test]
fn regular_grid_gives_two() {
    let taus: Vec<f64> = (0..=500).map(|i| i as f64 * 0.37).collect();
    for b in [1.0, 1.2, 1.5, 1.9] {
        assert!((kappa_hat(&taus, b, 50).unwrap() - 2.0).abs() < 1e-12);
        assert!((kappa_p_hat(&taus, b, 0.5, 50).unwrap() - 2.0).abs() < 1e-12);
    }
    assert_eq!(kappa_hat(&taus, 1.0, 50).unwrap(), 2.0);
}

#[test]
fn kappa_p_at_p_equal_beta_is_kappa_hat() {
    let (taus, _) = synthetic(4, 400);
    let a = kappa_hat(&taus, 1.4, 60).unwrap();
    let b = kappa_p_hat(&taus, 1.4, 1.4, 60).unwrap();
    assert!((a - b).abs() < 1e-12 * a);
}

fn exp_scheme(seed: u64) -> Vec<f64> {
    generate_times(
        1e-4,
        &LambdaSpec::constant(1.0),
        &PhiSpec::default(),
        1.0,
        &mut stream(seed, 0),
    )
    .unwrap()
    .observed()
    .to_vec()
}

#[test]
fn kappa_hat_matches_phi_moment() {
    let taus = exp_scheme(1);
    let n = taus.len() - 1;
    let r = (n as f64).powf(0.8).ceil() as usize;
    let beta = 1.5;
    let got = kappa_hat(&taus, beta, r).unwrap();
    let oracle = 2.0 * phi_moment_oracle(1.0, 0.1, 1.0 - beta);
    assert!(((got - oracle) / oracle).abs() < 0.02, "{got} vs {oracle}");
}

#[test]
fn kappa_p_hat_matches_constants() {
    let taus = exp_scheme(2);
    let n = taus.len() - 1;
    let r = (n as f64).powf(0.8).ceil() as usize;
    let beta = 1.5;
    let got = kappa_p_hat(&taus, beta, 0.5, r).unwrap();
    let law = StableLaw::new(beta, 1.0).unwrap();
    let oracle = stable_constants(0.5, &law, &PhiSpec::default(), 1_000_000, 5)
        .unwrap()
        .kappa_p_beta;
    assert!(((got - oracle) / oracle).abs() < 0.02, "{got} vs {oracle}");
}

#[test]
fn debias_second_moment_matches_oracle() {
    let taus = exp_scheme(3);
    let n = taus.len() - 1;
    let r = (n as f64).powf(0.8).ceil() as usize;
    let beta = 1.5;
    let chi = gap_factors(&taus, beta, r).unwrap();
    let m2 = mean(&chi.iter().map(|c| c * c).collect::<Vec<_>>());

    let mut rng = oracle_rng(99);
    let e = 1.0 - beta;
    let draws = 10_000_000;
    let mut acc = 0.0;
    for _ in 0..draws {
        let g = phi_oracle(1.0, 0.1, &mut rng).powf(e) + phi_oracle(1.0, 0.1, &mut rng).powf(e);
        acc += g * g;
    }
    let oracle = acc / draws as f64;
    assert!(((m2 - oracle) / oracle).abs() < 0.03, "{m2} vs {oracle}");
}

#[test]
fn deb_hat_closed_forms() {
    let taus: Vec<f64> = (0..=300).map(|i| i as f64 / 300.0).collect();
    assert_eq!(deb_hat(&taus, 1.5, 0.0, 0.8, 30).unwrap(), 0.0);
    let (u, c) = (0.2f64, 0.8);
    let a = c * u.powf(1.5);
    let got = deb_hat(&taus, 1.5, u, c, 30).unwrap();
    let want = 2.0 * a * a - 4.0 / 3.0 * a * a * a;
    assert!((got - want).abs() < 1e-14, "{got} vs {want}");
}

#[test]
fn beta_bar_recovers_third_order_expansion() {
    let (beta, c) = (1.6, 0.9);
    let (u, v) = (0.05f64, 0.025f64);
    let expansion = |w: f64| {
        let a = 2.0 * c * w.powf(beta);
        1.0 - a + a * a / 2.0 - a * a * a / 6.0
    };
    let deb = |w: f64| {
        let a = c * w.powf(beta);
        a * a * 4.0 / 2.0 - a * a * a * 8.0 / 6.0
    };
    let b = beta_bar(expansion(u), expansion(v), u, v, deb(u), deb(v)).unwrap();
    assert!((b - beta).abs() < 1e-6, "{b}");
    assert_eq!(
        beta_bar(0.9, 0.95, u, v, 0.0, 0.0).unwrap(),
        beta_hat(0.9, 0.95, u, v).unwrap()
    );
}

#[test]
fn first_order_expansion_of_limit() {
    let beta = 1.5;
    let spec = PhiSpec::default();
    let law = StableLaw::new(beta, 1.0).unwrap();
    let c = stable_constants(0.5, &law, &spec, 1_000_000, 2).unwrap();
    let u = 1e-3f64;
    let l = theoretical_L(u, beta, &spec, &c, 1_000_000, 6);
    let slope = (1.0 - l) / u.powf(beta);
    let want = c.c_p_beta * c.kappa_beta_beta;
    assert!(((slope - want) / want).abs() < 0.005, "{slope} vs {want}");
}

#[test]
fn constant_prices_are_degenerate() {
    let taus: Vec<f64> = (0..=400).map(|i| i as f64 / 400.0).collect();
    let xs = vec![3.0; 401];
    assert!(matches!(
        estimate(&taus, &xs, &EstimatorConfig::default(), None),
        Err(Error::Data(_)) | Err(Error::Degenerate(_))
    ));
}

#[test]
fn ten_rows_are_insufficient() {
    let (taus, xs) = synthetic(1, 9);
    assert!(matches!(
        estimate(&taus, &xs, &EstimatorConfig::default(), None),
        Err(Error::InsufficientData { .. })
    ));
}

#[test]
fn report_invariants_on_simulated_paths() {
    use jumpact::{simulate_replication, ModelConfig, SchemeConfig};
    let model = ModelConfig::reference(1.5).unwrap();
    for seed in 0..20 {
        let path = simulate_replication(&model, &SchemeConfig::default(), seed).unwrap();
        let r = estimate(
            path.observed_times(),
            path.observed_values(),
            &EstimatorConfig::default(),
            Some(1.5),
        )
        .unwrap();
        assert!((-1.0..=1.0).contains(&r.l_u) && (-1.0..=1.0).contains(&r.l_v));
        assert!(r.ci_low <= r.beta_hat && r.beta_hat <= r.ci_high);
        assert_eq!(r.n_obs, path.times.n_obs);
        let expect = r.scaled_error.unwrap() / r.variance_hat.sqrt();
        assert_eq!(r.std_stat.unwrap(), expect);
    }
}
