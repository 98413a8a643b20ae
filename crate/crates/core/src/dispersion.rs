//! Refractive indices of a uniaxial crystal.
//!
//! Each polarization uses a four-term Sellmeier form
//! `n²(λ) = A + B/(λ² − C) − D·λ²` with λ in μm. The extraordinary index at an
//! angle φ to the optical axis follows the index ellipsoid
//! `n(φ)⁻² = cos²φ/n_o² + sin²φ/n_e²`.

use serde::{Deserialize, Serialize};

use crate::{Result, Scalar, SpdcError, SPEED_OF_LIGHT_UM_PER_FS};

/// Vacuum wavelength in μm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Wavelength<T>(T);

/// Angular frequency in rad/fs.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngularFrequency<T>(T);

impl<T: Scalar> Wavelength<T> {
    pub fn um(value: T) -> Result<Self> {
        if value > T::zero() && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(SpdcError::invalid("wavelength", format!("{value} μm is not positive")))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn to_angular_frequency(self) -> AngularFrequency<T> {
        AngularFrequency(T::two() * T::PI() * T::of(SPEED_OF_LIGHT_UM_PER_FS) / self.0)
    }
}

impl<T: Scalar> AngularFrequency<T> {
    pub fn rad_per_fs(value: T) -> Result<Self> {
        if value > T::zero() && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(SpdcError::invalid("angular frequency", format!("{value} rad/fs is not positive")))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn to_wavelength(self) -> Wavelength<T> {
        Wavelength(T::two() * T::PI() * T::of(SPEED_OF_LIGHT_UM_PER_FS) / self.0)
    }
}

/// `n² = a + b/(λ² − c) − d·λ²`, λ in μm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 4]", into = "[T; 4]")]
pub struct Sellmeier<T: Copy> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Copy> From<[T; 4]> for Sellmeier<T> {
    fn from([a, b, c, d]: [T; 4]) -> Self {
        Self { a, b, c, d }
    }
}

impl<T: Copy> From<Sellmeier<T>> for [T; 4] {
    fn from(s: Sellmeier<T>) -> Self {
        [s.a, s.b, s.c, s.d]
    }
}

impl<T: Scalar> Sellmeier<T> {
    pub fn index_squared(&self, lambda: T) -> T {
        let l2 = lambda * lambda;
        self.a + self.b / (l2 - self.c) - self.d * l2
    }

    /// d(n²)/dλ
    pub fn index_squared_derivative(&self, lambda: T) -> T {
        let l2 = lambda * lambda;
        let den = l2 - self.c;
        -T::two() * self.b * lambda / (den * den) - T::two() * self.d * lambda
    }

    /// `(n, dn/dλ)`; `n` is NaN where n² ≤ 0.
    pub fn index_and_slope(&self, lambda: T) -> (T, T) {
        let n = self.index_squared(lambda).sqrt();
        (n, self.index_squared_derivative(lambda) / (T::two() * n))
    }
}

/// Polarization branch used for group-index evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch<T> {
    Ordinary,
    /// Extraordinary wave propagating at `phi` (rad) to the optical axis.
    ExtraordinaryAt(T),
}

/// Sellmeier data of a uniaxial crystal plus its transparency window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrystalDispersion<T: Copy> {
    pub name: String,
    pub sellmeier_o: Sellmeier<T>,
    pub sellmeier_e: Sellmeier<T>,
    /// Closed interval `[lo, hi]` in μm.
    #[serde(rename = "window_um")]
    pub transparency_window: [T; 2],
}

/// Relative step of the finite-difference stencil that must fit inside the
/// window for a group index to be defined.
pub const STENCIL_REL_STEP: f64 = 1e-4;

impl<T: Scalar> CrystalDispersion<T> {
    /// β-barium borate, Eimerl et al. Sellmeier coefficients.
    ///
    /// The upper window edge sits just below the zero of the ordinary n²,
    /// the longest wavelength at which this dispersion model is evaluable.
    pub fn bbo() -> Self {
        Self {
            name: "BBO".to_string(),
            sellmeier_o: Sellmeier {
                a: T::of(2.7405),
                b: T::of(0.0184),
                c: T::of(0.0179),
                d: T::of(0.0155),
            },
            sellmeier_e: Sellmeier {
                a: T::of(2.3730),
                b: T::of(0.0128),
                c: T::of(0.0156),
                d: T::of(0.0044),
            },
            transparency_window: [T::of(0.19), T::of(13.29)],
        }
    }

    /// Built-in crystal presets by (case-insensitive) name.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bbo" => Some(Self::bbo()),
            _ => None,
        }
    }

    /// A crystal with wavelength-independent indices, for tests and
    /// dispersionless limits.
    pub fn constant(name: &str, n_o: T, n_e: T, window: [T; 2]) -> Self {
        let flat = |n: T| Sellmeier {
            a: n * n,
            b: T::zero(),
            c: T::zero(),
            d: T::zero(),
        };
        Self {
            name: name.to_string(),
            sellmeier_o: flat(n_o),
            sellmeier_e: flat(n_e),
            transparency_window: window,
        }
    }

    /// Converts the coefficients to another scalar type.
    pub fn cast<U: Scalar>(&self) -> CrystalDispersion<U> {
        let conv = |s: &Sellmeier<T>| Sellmeier {
            a: U::of(s.a.f64()),
            b: U::of(s.b.f64()),
            c: U::of(s.c.f64()),
            d: U::of(s.d.f64()),
        };
        CrystalDispersion {
            name: self.name.clone(),
            sellmeier_o: conv(&self.sellmeier_o),
            sellmeier_e: conv(&self.sellmeier_e),
            transparency_window: [
                U::of(self.transparency_window[0].f64()),
                U::of(self.transparency_window[1].f64()),
            ],
        }
    }

    pub fn window(&self) -> (T, T) {
        (self.transparency_window[0], self.transparency_window[1])
    }

    pub fn contains(&self, lambda_um: T) -> bool {
        let (lo, hi) = self.window();
        lambda_um >= lo && lambda_um <= hi
    }

    fn check_window(&self, lambda_um: T) -> Result<()> {
        if self.contains(lambda_um) {
            Ok(())
        } else {
            let (lo, hi) = self.window();
            Err(SpdcError::Transparency {
                wavelength_um: lambda_um.f64(),
                lo_um: lo.f64(),
                hi_um: hi.f64(),
            })
        }
    }

    fn checked_index(&self, s: &Sellmeier<T>, lambda_um: T) -> Result<T> {
        self.check_window(lambda_um)?;
        let n2 = s.index_squared(lambda_um);
        if n2 > T::zero() && n2.is_finite() {
            Ok(n2.sqrt())
        } else {
            Err(SpdcError::NonFinite(format!(
                "{}: n² = {} at {} μm",
                self.name, n2, lambda_um
            )))
        }
    }

    /// Ordinary index n_o(λ).
    pub fn index_ordinary(&self, lambda_um: T) -> Result<T> {
        self.checked_index(&self.sellmeier_o, lambda_um)
    }

    /// Principal extraordinary index n_e(λ).
    pub fn index_extraordinary(&self, lambda_um: T) -> Result<T> {
        self.checked_index(&self.sellmeier_e, lambda_um)
    }

    /// Index of an extraordinary wave travelling at `phi` to the optical axis.
    pub fn index_extraordinary_at_angle(&self, lambda_um: T, phi: T) -> Result<T> {
        if !(phi >= T::zero() && phi <= T::FRAC_PI_2()) {
            return Err(SpdcError::invalid("phi", format!("{phi} rad outside [0, π/2]")));
        }
        let n_o = self.index_ordinary(lambda_um)?;
        let n_e = self.index_extraordinary(lambda_um)?;
        Ok(ellipsoid_index(n_o, n_e, phi))
    }

    /// `(n, dn/dλ)` for a branch, without window checks.
    fn index_and_slope(&self, branch: Branch<T>, lambda_um: T) -> (T, T) {
        match branch {
            Branch::Ordinary => self.sellmeier_o.index_and_slope(lambda_um),
            Branch::ExtraordinaryAt(phi) => {
                let (n_o, dn_o) = self.sellmeier_o.index_and_slope(lambda_um);
                let (n_e, dn_e) = self.sellmeier_e.index_and_slope(lambda_um);
                let (s, c) = phi.sin_cos();
                let u = c * c / (n_o * n_o) + s * s / (n_e * n_e);
                let du = -T::two() * (c * c * dn_o / (n_o * n_o * n_o) + s * s * dn_e / (n_e * n_e * n_e));
                let n = T::one() / u.sqrt();
                (n, -T::half() * du * n * n * n)
            }
        }
    }

    /// Phase index of a branch at a wavelength (window checked).
    pub fn index(&self, branch: Branch<T>, lambda_um: T) -> Result<T> {
        match branch {
            Branch::Ordinary => self.index_ordinary(lambda_um),
            Branch::ExtraordinaryAt(phi) => self.index_extraordinary_at_angle(lambda_um, phi),
        }
    }

    /// Group index `c·dk/dω = n − λ·dn/dλ` at angular frequency `omega`.
    ///
    /// The wavelengths of a ±10⁻⁴·ω stencil must lie inside the window.
    pub fn group_index(&self, branch: Branch<T>, omega: AngularFrequency<T>) -> Result<T> {
        self.group_index_at_wavelength(branch, omega.to_wavelength().value())
    }

    pub fn group_index_at_wavelength(&self, branch: Branch<T>, lambda_um: T) -> Result<T> {
        self.check_window(lambda_um)?;
        let h = T::of(STENCIL_REL_STEP);
        let lo = lambda_um / (T::one() + h);
        let hi = lambda_um / (T::one() - h);
        if !self.contains(lo) || !self.contains(hi) {
            return Err(SpdcError::DerivativeDomain {
                wavelength_um: lambda_um.f64(),
            });
        }
        // validates n² > 0 for both principal indices
        self.index(branch, lambda_um)?;
        let (n, dn) = self.index_and_slope(branch, lambda_um);
        Ok(n - lambda_um * dn)
    }

    /// Checks the physical sanity of the coefficient sets on `samples` points
    /// of the window; returns a description of every violation.
    ///
    /// Both n² must be finite and positive everywhere in the window, and both
    /// indices must exceed 1 at the short-wavelength edge.
    pub fn check_invariants(&self, samples: usize) -> Vec<String> {
        let mut issues = Vec::new();
        let (lo, hi) = self.window();
        if !(lo > T::zero() && hi > lo && lo.is_finite()) {
            issues.push(format!("{}: invalid window [{lo}, {hi}] μm", self.name));
            return issues;
        }
        let n = samples.max(2);
        for (label, s) in [("n_o", &self.sellmeier_o), ("n_e", &self.sellmeier_e)] {
            let bad = (0..n)
                .map(|i| {
                    let t = T::of(i as f64 / (n - 1) as f64);
                    lo + (hi - lo) * t
                })
                .find(|&l| {
                    let n2 = s.index_squared(l);
                    !(n2 > T::zero() && n2.is_finite())
                });
            if let Some(l) = bad {
                issues.push(format!("{}: {label}² not positive at {l} μm", self.name));
            }
            let n_lo = s.index_squared(lo).sqrt();
            if !(n_lo > T::one()) {
                issues.push(format!("{}: {label} = {n_lo} ≤ 1 at {lo} μm", self.name));
            }
        }
        issues
    }

    pub fn validate(&self) -> Result<()> {
        match self.check_invariants(2001).into_iter().next() {
            None => Ok(()),
            Some(reason) => Err(SpdcError::config("crystal", reason)),
        }
    }
}

/// `n(φ)` from the principal indices via the index ellipsoid.
pub fn ellipsoid_index<T: Scalar>(n_o: T, n_e: T, phi: T) -> T {
    let (s, c) = phi.sin_cos();
    T::one() / (c * c / (n_o * n_o) + s * s / (n_e * n_e)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bbo() -> CrystalDispersion<f64> {
        CrystalDispersion::bbo()
    }

    #[test]
    fn ordinary_index_at_twice_pump() {
        let n = bbo().index_ordinary(0.8094).unwrap();
        // hand evaluation of the Sellmeier form: 1.66109
        assert!((n - 1.66).abs() < 0.01);
        assert!((n - 1.661_090_2).abs() < 1e-6);
    }

    #[test]
    fn outside_window_is_transparency_error() {
        let e = bbo().index_ordinary(14.0).unwrap_err();
        assert!(matches!(e, SpdcError::Transparency { .. }));
        assert!(bbo().index_ordinary(0.1).is_err());
    }

    #[test]
    fn window_is_closed() {
        let c = bbo();
        assert!(c.index_ordinary(0.19).is_ok());
        assert!(c.index_ordinary(13.29).is_ok());
    }

    #[test]
    fn angle_limits() {
        let c = bbo();
        let l = 0.4047;
        let n_o = c.index_ordinary(l).unwrap();
        let n_e = c.index_extraordinary(l).unwrap();
        assert!((c.index_extraordinary_at_angle(l, 0.0).unwrap() - n_o).abs() < 1e-15);
        let perp = c
            .index_extraordinary_at_angle(l, std::f64::consts::FRAC_PI_2)
            .unwrap();
        assert!((perp - n_e).abs() < 1e-15);
        let mid = c.index_extraordinary_at_angle(l, 0.500_758_9).unwrap();
        assert!(mid > n_e && mid < n_o);
    }

    #[test]
    fn angle_out_of_range() {
        assert!(bbo().index_extraordinary_at_angle(0.5, 1.7).is_err());
        assert!(bbo().index_extraordinary_at_angle(0.5, -0.1).is_err());
    }

    #[test]
    fn dispersionless_group_index_equals_phase_index() {
        let c = CrystalDispersion::<f64>::constant("flat", 1.5, 1.4, [0.2, 5.0]);
        let w = Wavelength::um(1.0).unwrap().to_angular_frequency();
        assert!((c.group_index(Branch::Ordinary, w).unwrap() - 1.5).abs() < 1e-15);
        let ge = c.group_index(Branch::ExtraordinaryAt(0.3), w).unwrap();
        assert!((ge - ellipsoid_index(1.5, 1.4, 0.3)).abs() < 1e-14);
    }

    #[test]
    fn group_index_exceeds_phase_index_in_normal_dispersion() {
        let c = bbo();
        for l in [0.4, 0.6, 0.8094, 1.2, 2.0] {
            let n = c.index_ordinary(l).unwrap();
            let ng = c.group_index_at_wavelength(Branch::Ordinary, l).unwrap();
            assert!(ng > n, "λ = {l}");
        }
    }

    #[test]
    fn group_index_at_window_edge_is_derivative_error() {
        let c = bbo();
        let e = c.group_index_at_wavelength(Branch::Ordinary, 13.29).unwrap_err();
        assert!(matches!(e, SpdcError::DerivativeDomain { .. }));
        let e = c.group_index_at_wavelength(Branch::Ordinary, 0.19).unwrap_err();
        assert!(matches!(e, SpdcError::DerivativeDomain { .. }));
    }

    #[test]
    fn wavelength_frequency_round_trip() {
        for l in [0.19_f64, 0.4047, 0.8094, 4.3, 13.29] {
            let back = Wavelength::um(l)
                .unwrap()
                .to_angular_frequency()
                .to_wavelength()
                .value();
            assert!(((back - l) / l).abs() <= 4.0 * f64::EPSILON);
        }
        assert!(Wavelength::um(0.0).is_err());
        assert!(AngularFrequency::rad_per_fs(-1.0).is_err());
    }

    #[test]
    fn bbo_passes_invariant_check_and_corruption_fails() {
        assert!(bbo().check_invariants(2001).is_empty());
        let mut bad = bbo();
        bad.sellmeier_o.a = 0.5;
        assert!(!bad.check_invariants(2001).is_empty());
        assert!(bad.validate().is_err());
    }

    #[test]
    fn negative_uniaxial_in_visible_and_near_ir() {
        let c = bbo();
        for i in 0..=200 {
            let l = 0.19 + (5.0 - 0.19) * i as f64 / 200.0;
            assert!(c.index_extraordinary(l).unwrap() < c.index_ordinary(l).unwrap());
        }
    }

    #[test]
    fn json_round_trip_shape() {
        let json = serde_json::to_value(bbo()).unwrap();
        assert_eq!(json["name"], "BBO");
        assert_eq!(json["sellmeier_o"][0], 2.7405);
        assert_eq!(json["window_um"][1], 13.29);
        let back: CrystalDispersion<f64> = serde_json::from_value(json).unwrap();
        assert_eq!(back, bbo());
    }

    #[test]
    fn f32_instantiation_tracks_f64() {
        let c32 = CrystalDispersion::<f32>::bbo();
        let n32 = c32.index_ordinary(0.8094).unwrap() as f64;
        let n64 = bbo().index_ordinary(0.8094).unwrap();
        assert!((n32 - n64).abs() < 1e-5);
    }
}
