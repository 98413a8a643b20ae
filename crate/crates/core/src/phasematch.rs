//! Coupling between frequency nondegeneracy and noncollinearity.
//!
//! A pump photon at λ_p splits into photons at ω_{h,l} = ω₀(1±ξ)/2. The
//! collinear mismatch is carried by the effective ordinary index n_eff(ξ);
//! where n_eff exceeds the pump index the photons leave on two cones whose
//! opening angles are θ₀/(1±ξ).

use crate::dispersion::{CrystalDispersion, Wavelength};
use crate::numeric::{brent, grid_then_golden_max, scan_bracket};
use crate::{Result, Scalar, SpdcError};

/// |n_eff − n_p| below this classifies as collinear.
pub const COLLINEAR_TOLERANCE: f64 = 1e-10;

/// Default bracket for the collinear orientation angle, rad.
pub const COLLINEAR_BRACKET: (f64, f64) = (0.05, 1.5);

/// Number of uniform ξ points used before local refinement in extremum scans.
pub const XI_SCAN_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Collinear,
    Noncollinear,
    Forbidden,
}

/// Central frequencies and wavelengths of a pair at nondegeneracy ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondegeneracyPoint<T> {
    pub xi: T,
    pub lambda_p: T,
    pub omega0: T,
    /// ω₀(1+ξ)/2
    pub omega_h: T,
    /// ω₀ − ω_h, so that ω_h + ω_l = ω₀ holds exactly.
    pub omega_l: T,
    /// 2λ_p/(1+ξ)
    pub lambda_plus: T,
    /// 2λ_p/(1−ξ)
    pub lambda_minus: T,
}

impl<T: Scalar> NondegeneracyPoint<T> {
    pub fn new(lambda_p_um: T, xi: T) -> Result<Self> {
        if !(xi >= T::zero() && xi < T::one()) {
            return Err(SpdcError::invalid("xi", format!("{xi} outside [0, 1)")));
        }
        let omega0 = Wavelength::um(lambda_p_um)?.to_angular_frequency().value();
        let omega_h = omega0 * (T::one() + xi) * T::half();
        let omega_l = omega0 - omega_h;
        let (lambda_plus, lambda_minus) = sideband_wavelengths(lambda_p_um, xi);
        Ok(Self {
            xi,
            lambda_p: lambda_p_um,
            omega0,
            omega_h,
            omega_l,
            lambda_plus,
            lambda_minus,
        })
    }
}

/// `(λ₊, λ₋) = (2λ_p/(1+ξ), 2λ_p/(1−ξ))`.
pub fn sideband_wavelengths<T: Scalar>(lambda_p: T, xi: T) -> (T, T) {
    let two_lp = T::two() * lambda_p;
    (two_lp / (T::one() + xi), two_lp / (T::one() - xi))
}

/// Effective ordinary index
/// `n_eff = (1+ξ)/2·n_o(λ₊) + (1−ξ)/2·n_o(λ₋)`.
///
/// Accepts |ξ| < 1; negative ξ swaps the roles of the two photons.
pub fn effective_index<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, xi: T) -> Result<T> {
    let (n_plus, n_minus) = sideband_indices(crystal, lambda_p, xi)?;
    Ok((T::one() + xi) * T::half() * n_plus + (T::one() - xi) * T::half() * n_minus)
}

fn sideband_indices<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, xi: T) -> Result<(T, T)> {
    if !(xi.abs() < T::one()) {
        return Err(SpdcError::invalid("xi", format!("|{xi}| must be < 1")));
    }
    let (l_plus, l_minus) = sideband_wavelengths(lambda_p, xi);
    Ok((crystal.index_ordinary(l_plus)?, crystal.index_ordinary(l_minus)?))
}

/// `N_eff = (1−ξ²)·n_o(λ₊)·n_o(λ₋)/n_eff(ξ)`, the index entering the
/// transverse part of the mismatch.
pub fn effective_index_n<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, xi: T) -> Result<T> {
    let (n_plus, n_minus) = sideband_indices(crystal, lambda_p, xi)?;
    let n_eff = (T::one() + xi) * T::half() * n_plus + (T::one() - xi) * T::half() * n_minus;
    Ok((T::one() - xi * xi) * n_plus * n_minus / n_eff)
}

/// Pump index n_p(φ₀) at λ_p.
pub fn pump_index<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, phi0: T) -> Result<T> {
    crystal.index_extraordinary_at_angle(lambda_p, phi0)
}

/// Outcome of the θ₀ evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta0<T> {
    pub regime: Regime,
    /// θ₀ in rad; zero when collinear, NaN when forbidden.
    pub theta0: T,
    /// θ₀² = 2N_eff(n_eff − n_p); negative when forbidden.
    pub radicand: T,
    pub n_eff: T,
    pub big_n_eff: T,
    pub n_p: T,
}

impl<T: Scalar> Theta0<T> {
    pub fn value(&self) -> Option<T> {
        match self.regime {
            Regime::Forbidden => None,
            _ => Some(self.theta0),
        }
    }

    /// n_eff − n_p
    pub fn index_gap(&self) -> T {
        self.n_eff - self.n_p
    }
}

/// Evaluates θ₀ and classifies the regime at orientation φ₀.
pub fn theta0<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, phi0: T, xi: T) -> Result<Theta0<T>> {
    let n_eff = effective_index(crystal, lambda_p, xi)?;
    let big_n_eff = effective_index_n(crystal, lambda_p, xi)?;
    let n_p = pump_index(crystal, lambda_p, phi0)?;
    let gap = n_eff - n_p;
    let radicand = T::two() * big_n_eff * gap;
    let (regime, theta0) = if gap.abs() < T::of(COLLINEAR_TOLERANCE) {
        (Regime::Collinear, T::zero())
    } else if gap > T::zero() {
        (Regime::Noncollinear, radicand.sqrt())
    } else {
        (Regime::Forbidden, T::nan())
    };
    Ok(Theta0 {
        regime,
        theta0,
        radicand,
        n_eff,
        big_n_eff,
        n_p,
    })
}

/// Regime classification only.
pub fn classify<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, phi0: T, xi: T) -> Result<Regime> {
    Ok(theta0(crystal, lambda_p, phi0, xi)?.regime)
}

/// Cone opening angles and the angular width of the sinc factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeGeometry<T> {
    pub xi: T,
    pub theta0: T,
    /// Opening angle of the high-frequency (inner) cone, θ₀/(1+ξ).
    pub theta_inner: T,
    /// Opening angle of the low-frequency (outer) cone, θ₀/(1−ξ).
    pub theta_outer: T,
    /// (δθ)_L = (λ_p/πL)·N_eff/θ₀; `None` in the collinear regime.
    pub delta_theta_l: Option<T>,
    pub regime: Regime,
    /// θ₀/(δθ)_L, identical to (n_eff − n_p)·2πL/λ_p; the two-sinc split
    /// needs it ≫ 1.
    pub validity_ratio: Option<T>,
    pub index_gap: T,
}

/// Cone geometry for crystal length `length_um`.
///
/// Forbidden orientations are an error.
pub fn cone_geometry<T: Scalar>(
    crystal: &CrystalDispersion<T>,
    lambda_p: T,
    length_um: T,
    phi0: T,
    xi: T,
) -> Result<ConeGeometry<T>> {
    let t = theta0(crystal, lambda_p, phi0, xi)?;
    if t.regime == Regime::Forbidden {
        return Err(SpdcError::Forbidden {
            phi0: phi0.f64(),
            xi: xi.f64(),
            index_gap: (-t.index_gap()).f64(),
        });
    }
    let theta0 = t.theta0;
    let (delta_theta_l, validity_ratio) = if t.regime == Regime::Noncollinear {
        let dtl = lambda_p / (T::PI() * length_um) * t.big_n_eff / theta0;
        (Some(dtl), Some(theta0 / dtl))
    } else {
        (None, None)
    };
    Ok(ConeGeometry {
        xi,
        theta0,
        theta_inner: theta0 / (T::one() + xi),
        theta_outer: theta0 / (T::one() - xi),
        delta_theta_l,
        regime: t.regime,
        validity_ratio,
        index_gap: t.index_gap(),
    })
}

impl<T: Scalar> ConeGeometry<T> {
    pub fn require_delta_theta_l(&self) -> Result<T> {
        self.delta_theta_l
            .ok_or(SpdcError::Collinear { xi: self.xi.f64() })
    }
}

/// Orientation φ₀ at which the process at ξ is collinear: root of
/// n_p(φ₀) − n_eff(ξ) on [0.05, 1.5] rad.
pub fn collinear_angle<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, xi: T) -> Result<T> {
    collinear_angle_in(crystal, lambda_p, xi, T::of(COLLINEAR_BRACKET.0), T::of(COLLINEAR_BRACKET.1))
}

pub fn collinear_angle_in<T: Scalar>(
    crystal: &CrystalDispersion<T>,
    lambda_p: T,
    xi: T,
    lo: T,
    hi: T,
) -> Result<T> {
    let n_eff = effective_index(crystal, lambda_p, xi)?;
    let n_o = crystal.index_ordinary(lambda_p)?;
    let n_e = crystal.index_extraordinary(lambda_p)?;
    let f = |phi: T| crate::dispersion::ellipsoid_index(n_o, n_e, phi) - n_eff;
    let no_solution = || SpdcError::NoCollinearSolution {
        xi: xi.f64(),
        lo_rad: lo.f64(),
        hi_rad: hi.f64(),
    };
    let (a, b) = scan_bracket(f, lo, hi, 64).ok_or_else(no_solution)?;
    if a == b {
        return Ok(a);
    }
    let xtol = if std::mem::size_of::<T>() >= 8 { T::of(1e-13) } else { T::of(1e-6) };
    brent(f, a, b, xtol, 200).map_err(|_| no_solution())
}

/// Largest ξ keeping λ₋ = 2λ_p/(1−ξ) inside the window:
/// `ξ_max = 1 − 2λ_p/λ_hi`, clamped at zero.
pub fn xi_max<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T) -> T {
    let (_, hi) = crystal.window();
    if hi.is_infinite() {
        return T::one();
    }
    let mut xi = (T::one() - T::two() * lambda_p / hi).max(T::zero());
    // rounding may put λ₋ a hair above the edge; step back until inside
    while xi > T::zero() && sideband_wavelengths(lambda_p, xi).1 > hi {
        xi = xi - T::epsilon() * xi.max(T::one());
    }
    xi
}

/// Location and value of the interior maximum of n_eff(ξ) on [0, ξ_max].
pub fn effective_index_maximum<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T) -> Result<(T, T)> {
    let top = xi_max(crystal, lambda_p);
    // validate the endpoints once so the closure below can unwrap to NaN
    effective_index(crystal, lambda_p, top)?;
    let f = |xi: T| effective_index(crystal, lambda_p, xi).unwrap_or_else(|_| T::nan());
    Ok(grid_then_golden_max(f, T::zero(), top, XI_SCAN_POINTS, T::of(1e-10)))
}

/// Extremes of the collinear locus φ₀^Coll(ξ) over ξ ∈ [0, ξ_max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollinearRange<T> {
    pub phi_min: T,
    pub xi_at_min: T,
    pub phi_max: T,
    pub xi_at_max: T,
}

pub fn collinear_angle_range<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T) -> Result<CollinearRange<T>> {
    let top = xi_max(crystal, lambda_p);
    collinear_angle(crystal, lambda_p, top)?;
    let phi = |xi: T| collinear_angle(crystal, lambda_p, xi).unwrap_or_else(|_| T::nan());
    let (xi_at_min, neg_min) = grid_then_golden_max(|x| -phi(x), T::zero(), top, XI_SCAN_POINTS, T::of(1e-10));
    let (xi_at_max, phi_max) = grid_then_golden_max(phi, T::zero(), top, XI_SCAN_POINTS, T::of(1e-10));
    Ok(CollinearRange {
        phi_min: -neg_min,
        xi_at_min,
        phi_max,
        xi_at_max,
    })
}

/// Samples of the collinear locus on `n` uniform ξ points of [0, ξ_max].
pub fn collinear_locus<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, n: usize) -> Result<Vec<(T, T)>> {
    let top = xi_max(crystal, lambda_p);
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let xi = top * T::of(i as f64 / (n - 1) as f64);
            Ok((xi, collinear_angle(crystal, lambda_p, xi)?))
        })
        .collect()
}
