use proptest::prelude::*;
use spdc_core::groupdelay::{a_minus, a_minus_zero};
use spdc_core::phasematch::{
    classify, collinear_angle, cone_geometry, effective_index, theta0, xi_max, NondegeneracyPoint,
};
use spdc_core::{CrystalDispersion, Regime};

const LP: f64 = 0.4047;

#[test]
fn collinear_angle_closes_the_cone() {
    let c = CrystalDispersion::bbo();
    for xi in [0.0, 0.2, 0.5, 0.8, 0.9] {
        let phi = collinear_angle(&c, LP, xi).unwrap();
        let t = theta0(&c, LP, phi, xi).unwrap();
        assert!(t.index_gap().abs() < 1e-10, "ξ = {xi}");
        assert_eq!(classify(&c, LP, phi, xi).unwrap(), Regime::Collinear);
        assert_eq!(classify(&c, LP, phi + 0.01, xi).unwrap(), Regime::Noncollinear);
        assert_eq!(classify(&c, LP, phi - 0.01, xi).unwrap(), Regime::Forbidden);
    }
}

#[test]
fn cone_opens_on_both_sides_of_theta0() {
    let c = CrystalDispersion::bbo();
    let g = cone_geometry(&c, LP, 5000.0, 0.7, 0.2).unwrap();
    assert!(g.theta_inner < g.theta0 && g.theta0 < g.theta_outer);
    assert!(g.validity_ratio.unwrap() > 10.0);
    assert!(cone_geometry(&c, LP, 5000.0, 0.3, 0.2).is_err());
}

#[test]
fn special_point_is_shared_by_a_minus_and_n_eff() {
    let c = CrystalDispersion::bbo();
    let z = a_minus_zero(&c, LP, 0.5, 0.9).unwrap();
    assert!((z - 0.8142).abs() < 0.005);
    let n = |x: f64| effective_index(&c, LP, x).unwrap();
    assert!(n(z) > n(z - 0.01) && n(z) > n(z + 0.01));
    assert!(a_minus(&c, LP, z - 0.01).unwrap() * a_minus(&c, LP, z + 0.01).unwrap() < 0.0);
}

proptest! {
    #[test]
    fn energy_is_conserved(xi in 0.0f64..0.93) {
        let p = NondegeneracyPoint::new(LP, xi).unwrap();
        prop_assert!((p.omega_h + p.omega_l - p.omega0).abs() <= 1e-15 * p.omega0);
        prop_assert!(((p.omega_h - p.omega_l) / p.omega0 - xi).abs() < 1e-12);
    }

    #[test]
    fn n_eff_is_even_in_xi(xi in 0.0f64..0.9) {
        let c = CrystalDispersion::bbo();
        prop_assert!((effective_index(&c, LP, xi).unwrap() - effective_index(&c, LP, -xi).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn sidebands_stay_in_window_up_to_xi_max(f in 0.0f64..1.0) {
        let c = CrystalDispersion::bbo();
        let xi = f * xi_max(&c, LP);
        prop_assert!(effective_index(&c, LP, xi).is_ok());
    }
}
