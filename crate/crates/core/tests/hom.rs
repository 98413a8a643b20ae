use spdc_core::hom::{analyze_comb, symmetric_grid, HomModel as GenericHom};
use spdc_core::{BiphotonModel, CurveKind, HomModel, Scheme, SetupConfig};

fn model(xi: f64) -> HomModel {
    HomModel::from_setup(&SetupConfig::default(), xi).unwrap()
}

#[test]
fn probabilities_are_even_in_delay() {
    for xi in [0.04, 0.3, 0.81] {
        let h = model(xi);
        for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
            for k in 1..50 {
                let dt = k as f64 * 0.37 * h.timescales.t_decoh;
                assert_eq!(h.split_probability(scheme, dt), h.split_probability(scheme, -dt));
            }
        }
    }
}

#[test]
fn density_integrates_to_split_probability() {
    for xi in [0.1, 0.6] {
        let h = model(xi);
        let s = h.sigma;
        for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
            for dt in [0.0, h.timescales.t_osc * 2.5, 2.0 * h.timescales.t_decoh] {
                let n = 400_000;
                let lim = dt.abs() + 12.0 * s;
                let dx = 2.0 * lim / n as f64;
                let integral: f64 = (0..=n)
                    .map(|i| {
                        let wgt = if i == 0 || i == n { 0.5 } else { 1.0 };
                        wgt * h.density_raw(scheme, dt, -lim + i as f64 * dx)
                    })
                    .sum::<f64>()
                    * dx;
                let w = h.split_probability(scheme, dt);
                assert!((integral - w).abs() <= 1e-3 * w.max(1e-12), "ξ = {xi}, Δt = {dt}: {integral} vs {w}");
            }
        }
    }
}

#[test]
fn comb_period_matches_beat_period() {
    for xi in [0.1, 0.3, 0.6] {
        let h = model(xi);
        let t_osc = h.timescales.t_osc;
        let delays = symmetric_grid(6.0 * h.timescales.t_decoh, t_osc / 32.0);
        let curve = h.probability_curve(Scheme::FourSlit, CurveKind::SplitProbability, delays).unwrap();
        let period = analyze_comb(&curve).unwrap().period.unwrap();
        assert!((period / t_osc - 1.0).abs() < 0.02, "ξ = {xi}: {period} vs {t_osc}");
    }
}

#[test]
fn coarse_grid_is_rejected() {
    let h = model(0.1);
    let delays = symmetric_grid(1000.0, h.timescales.t_osc / 4.0);
    let curve = h.probability_curve(Scheme::FourSlit, CurveKind::SplitProbability, delays).unwrap();
    assert!(analyze_comb(&curve).is_err());
}

#[test]
fn single_precision_model_agrees() {
    let setup = SetupConfig::default();
    let m64 = BiphotonModel::from_setup(&setup, 0.1).unwrap();
    let h32 = GenericHom::<f32>::from_width(0.1, m64.sigma as f32).unwrap();
    let h64 = HomModel::new(&m64).unwrap();
    for dt in [0.0f32, 50.0, 400.0, 1200.0] {
        for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
            let a = h32.split_probability(scheme, dt) as f64;
            let b = h64.split_probability(scheme, dt as f64);
            assert!((a - b).abs() < 1e-5, "{scheme:?} {dt}: {a} vs {b}");
        }
    }
}
