//! First-order frequency expansion of the phase mismatch.
//!
//! `Δ₁ = [A₊(ω₁+ω₂−ω₀) − A₋(ω₁−ω₂−ξω₀)]/c` with
//! `A₊ = A_p − (A_h+A_l)/2` and `A₋ = (A_h−A_l)/2`, where `A_x` are group
//! indices. All times produced here are dimensionless (ω₀·t).

use crate::dispersion::{Branch, CrystalDispersion};
use crate::numeric::brent;
use crate::phasematch::{sideband_wavelengths, NondegeneracyPoint};
use crate::{Result, Scalar, SpdcError, SINC_GAUSS_ALPHA, SPEED_OF_LIGHT_UM_PER_FS};

/// |A₋| below this is flagged: the first-order model loses its temporal
/// widths there.
pub const FRAGILE_A_MINUS: f64 = 1e-3;

/// Pulses at least this many τ_gr long count as long.
pub const LONG_PULSE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupDelayCoefficients<T> {
    pub xi: T,
    pub phi0: T,
    /// Pump group index (extraordinary at φ₀) at ω₀.
    pub a_p: T,
    /// Ordinary group index at ω_h.
    pub a_h: T,
    /// Ordinary group index at ω_l.
    pub a_l: T,
    pub a_plus: T,
    pub a_minus: T,
}

impl<T: Scalar> GroupDelayCoefficients<T> {
    pub fn from_group_indices(xi: T, phi0: T, a_p: T, a_h: T, a_l: T) -> Self {
        Self {
            xi,
            phi0,
            a_p,
            a_h,
            a_l,
            a_plus: a_p - (a_h + a_l) * T::half(),
            a_minus: (a_h - a_l) * T::half(),
        }
    }

    pub fn is_model_fragile(&self) -> bool {
        self.a_minus.abs() < T::of(FRAGILE_A_MINUS)
    }
}

/// Group-delay coefficients at (φ₀, ξ).
pub fn coefficients<T: Scalar>(
    crystal: &CrystalDispersion<T>,
    lambda_p: T,
    phi0: T,
    xi: T,
) -> Result<GroupDelayCoefficients<T>> {
    let (l_plus, l_minus) = sideband_wavelengths(lambda_p, xi);
    let a_h = crystal.group_index_at_wavelength(Branch::Ordinary, l_plus)?;
    let a_l = crystal.group_index_at_wavelength(Branch::Ordinary, l_minus)?;
    let a_p = crystal.group_index_at_wavelength(Branch::ExtraordinaryAt(phi0), lambda_p)?;
    Ok(GroupDelayCoefficients::from_group_indices(xi, phi0, a_p, a_h, a_l))
}

/// A₋(ξ) alone; independent of the pump orientation.
pub fn a_minus<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, xi: T) -> Result<T> {
    let (l_plus, l_minus) = sideband_wavelengths(lambda_p, xi);
    let a_h = crystal.group_index_at_wavelength(Branch::Ordinary, l_plus)?;
    let a_l = crystal.group_index_at_wavelength(Branch::Ordinary, l_minus)?;
    Ok((a_h - a_l) * T::half())
}

/// Nonzero root of A₋(ξ) inside `(lo, hi)`.
pub fn a_minus_zero<T: Scalar>(crystal: &CrystalDispersion<T>, lambda_p: T, lo: T, hi: T) -> Result<T> {
    let f = |xi: T| a_minus(crystal, lambda_p, xi).unwrap_or_else(|_| T::nan());
    let (a, b) = crate::numeric::scan_bracket(f, lo, hi, 400).ok_or(SpdcError::NoSignChange {
        lo: lo.f64(),
        hi: hi.f64(),
    })?;
    if a == b {
        return Ok(a);
    }
    brent(f, a, b, T::of(1e-12), 200)
}

/// Characteristic times in units of 1/ω₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales<T> {
    pub omega0: T,
    /// Beat period 2π/ξ; infinite at ξ = 0.
    pub t_osc: T,
    /// √(2α)·L|A₋|/c
    pub t_decoh: T,
    /// L|A₊|/(2c)
    pub tau_gr: T,
}

impl<T: Scalar> TimeScales<T> {
    /// T_decoh/T_osc, a proxy for the number of visible beats.
    pub fn oscillation_count(&self) -> T {
        self.t_decoh / self.t_osc
    }

    /// Converts a dimensionless time to femtoseconds.
    pub fn to_fs(&self, t: T) -> T {
        t / self.omega0
    }
}

pub fn timescales<T: Scalar>(coeffs: &GroupDelayCoefficients<T>, omega0: T, length_um: T) -> TimeScales<T> {
    let c = T::of(SPEED_OF_LIGHT_UM_PER_FS);
    let t_osc = if coeffs.xi == T::zero() {
        T::infinity()
    } else {
        T::two() * T::PI() / coeffs.xi
    };
    TimeScales {
        omega0,
        t_osc,
        t_decoh: (T::two() * T::of(SINC_GAUSS_ALPHA)).sqrt() * length_um * coeffs.a_minus.abs() / c * omega0,
        tau_gr: length_um * coeffs.a_plus.abs() / (T::two() * c) * omega0,
    }
}

/// Coefficients and time scales for a setup at ξ.
pub fn for_setup<T: Scalar>(
    crystal: &CrystalDispersion<T>,
    lambda_p: T,
    length_um: T,
    phi0: T,
    xi: T,
) -> Result<(GroupDelayCoefficients<T>, TimeScales<T>)> {
    let point = NondegeneracyPoint::new(lambda_p, xi)?;
    let coeffs = coefficients(crystal, lambda_p, phi0, xi)?;
    Ok((coeffs, timescales(&coeffs, point.omega0, length_um)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseRegime {
    LongPulse,
    ShortPulse,
}

/// Long pulse iff τ ≥ 10·τ_gr (both in the same time unit).
pub fn pulse_regime<T: Scalar>(tau: T, tau_gr: T) -> PulseRegime {
    if tau >= T::of(LONG_PULSE_FACTOR) * tau_gr {
        PulseRegime::LongPulse
    } else {
        PulseRegime::ShortPulse
    }
}
