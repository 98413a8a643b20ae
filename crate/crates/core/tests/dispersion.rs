use proptest::prelude::*;
use spdc_core::dispersion::Branch;
use spdc_core::CrystalDispersion;

/// Group index from a five-point central difference of n(ω), independent of
/// the analytic slope used by the library.
fn group_index_fd(c: &CrystalDispersion, lambda: f64) -> f64 {
    let omega = 2.0 * std::f64::consts::PI * 0.299_792_458 / lambda;
    let k = |w: f64| w * c.index_ordinary(2.0 * std::f64::consts::PI * 0.299_792_458 / w).unwrap();
    let h = omega * 1e-3;
    (-k(omega + 2.0 * h) + 8.0 * k(omega + h) - 8.0 * k(omega - h) + k(omega - 2.0 * h)) / (12.0 * h)
}

#[test]
fn group_index_matches_finite_differences() {
    let c = CrystalDispersion::bbo();
    for lambda in [0.25, 0.4047, 0.5, 0.8094, 1.2, 3.0, 8.0, 12.0] {
        let analytic = c.group_index_at_wavelength(Branch::Ordinary, lambda).unwrap();
        let fd = group_index_fd(&c, lambda);
        assert!((analytic - fd).abs() < 1e-8, "λ = {lambda}: {analytic} vs {fd}");
    }
}

#[test]
fn window_edges_are_enforced() {
    let c = CrystalDispersion::bbo();
    assert!(c.index_ordinary(0.18).is_err());
    assert!(c.index_ordinary(13.3).is_err());
    assert!(c.group_index_at_wavelength(Branch::Ordinary, 13.29).is_err());
}

proptest! {
    #[test]
    fn ordinary_index_decreases_with_wavelength(a in 0.2f64..13.0, d in 1e-3f64..0.2) {
        let c = CrystalDispersion::bbo();
        prop_assert!(c.index_ordinary(a + d).unwrap() < c.index_ordinary(a).unwrap());
    }

    #[test]
    fn extraordinary_index_lies_between_principal_values(l in 0.2f64..13.0, phi in 0.0f64..std::f64::consts::FRAC_PI_2) {
        let c = CrystalDispersion::bbo();
        let (no, ne) = (c.index_ordinary(l).unwrap(), c.index_extraordinary(l).unwrap());
        let n = c.index_extraordinary_at_angle(l, phi).unwrap();
        prop_assert!(n <= no.max(ne) + 1e-15 && n >= no.min(ne) - 1e-15);
    }

    #[test]
    fn single_precision_tracks_double(l in 0.25f64..12.0) {
        let c64 = CrystalDispersion::bbo();
        let c32 = c64.cast::<f32>();
        let n64 = c64.index_ordinary(l).unwrap();
        let n32 = c32.index_ordinary(l as f32).unwrap();
        prop_assert!((n32 as f64 - n64).abs() < 1e-5);
    }
}
