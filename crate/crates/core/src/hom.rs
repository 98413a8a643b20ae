//! Hong-Ou-Mandel interference of the pair at a 50/50 beamsplitter.
//!
//! With `s = √α·ω₀L|A₋|/c` and `E = exp(−ξ²s²/2)` (all times in units of
//! 1/ω₀) the split probabilities are
//!
//! ```text
//! two-slit:  w = ½[1 − E·exp(−Δt²/2s²)]
//! four-slit: w = ½[1 − exp(−Δt²/2s²)·(cos ξΔt + E)/(1 + E)]
//! ```
//!
//! and the coincidence densities over `x = t₁ − t₂` are obtained by
//! integrating `|A_split|²` over `t₁ + t₂`. The raw densities integrate to
//! `w`; [`HomModel::density`] rescales them to unit area.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::biphoton::{BiphotonModel, Scheme};
use crate::config::SetupConfig;
use crate::groupdelay::TimeScales;
use crate::{Result, Scalar, SpdcError};

mod comb;

pub use comb::{analyze_comb, CombReport};

/// Points per oscillation period in default grids.
pub const POINTS_PER_PERIOD: usize = 16;

/// `(A_unsplit, A_split) = (N/√2)(F₁₂ ± F₂₁)`.
pub fn beamsplitter_amplitudes<T: Scalar>(f12: Complex<T>, f21: Complex<T>, norm: T) -> (Complex<T>, Complex<T>) {
    let k = norm / T::two().sqrt();
    ((f12 + f21) * k, (f12 - f21) * k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    SplitProbability,
    UnsplitProbability,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveAxis {
    /// ω₀Δt
    Delay,
    /// ω₀(t₁ − t₂)
    ArrivalDifference,
}

impl CurveAxis {
    pub fn label(self) -> &'static str {
        match self {
            CurveAxis::Delay => "omega0_dt",
            CurveAxis::ArrivalDifference => "omega0_t1_minus_t2",
        }
    }
}

/// A sampled curve with what is needed to interpret it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomCurve<T> {
    pub kind: CurveKind,
    pub axis: CurveAxis,
    pub scheme: Scheme,
    pub xi: T,
    /// Fixed delay for density curves.
    pub delay: Option<T>,
    pub t_osc: T,
    pub t_decoh: T,
    /// Set when |A₋| is small enough that the first-order widths are suspect.
    pub fragile: bool,
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> HomCurve<T> {
    /// Level the curve relaxes to far from the interference region.
    pub fn baseline(&self) -> T {
        match self.kind {
            CurveKind::SplitProbability | CurveKind::UnsplitProbability => T::half(),
            CurveKind::Density => T::zero(),
        }
    }
}

/// Closed-form HOM observables for one ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomModel<T> {
    pub xi: T,
    /// s in units of 1/ω₀.
    pub sigma: T,
    pub timescales: TimeScales<T>,
    pub fragile: bool,
}

impl<T: Scalar> HomModel<T> {
    pub fn new(model: &BiphotonModel<T>) -> Result<Self> {
        model.require_long_pulse()?;
        model.require_nondegenerate_width()?;
        Ok(Self {
            xi: model.xi,
            sigma: model.sigma,
            timescales: model.timescales,
            fragile: model.is_model_fragile(),
        })
    }

    pub fn from_setup(setup: &SetupConfig, xi: T) -> Result<Self> {
        Self::new(&BiphotonModel::from_setup(setup, xi)?)
    }

    /// From the width alone; `t_decoh = √2·s` and `t_osc = 2π/ξ`.
    pub fn from_width(xi: T, sigma: T) -> Result<Self> {
        if !(sigma > T::zero() && sigma.is_finite()) {
            return Err(SpdcError::DegenerateWidth { xi: xi.f64() });
        }
        Ok(Self {
            xi,
            sigma,
            timescales: TimeScales {
                omega0: T::one(),
                t_osc: T::two() * T::PI() / xi,
                t_decoh: T::two().sqrt() * sigma,
                tau_gr: T::zero(),
            },
            fragile: false,
        })
    }

    /// exp(−ξ²s²/2)
    pub fn static_factor(&self) -> T {
        (-(self.xi * self.sigma).powi(2) * T::half()).exp()
    }

    fn delay_factor(&self, dt: T) -> T {
        (-dt * dt / (T::two() * self.sigma * self.sigma)).exp()
    }

    pub fn split_probability_two_slit(&self, dt: T) -> T {
        T::half() * (T::one() - self.static_factor() * self.delay_factor(dt))
    }

    pub fn split_probability_four_slit(&self, dt: T) -> T {
        let e = self.static_factor();
        T::half() * (T::one() - self.delay_factor(dt) * ((self.xi * dt).cos() + e) / (T::one() + e))
    }

    pub fn split_probability(&self, scheme: Scheme, dt: T) -> T {
        match scheme {
            Scheme::TwoSlit => self.split_probability_two_slit(dt),
            Scheme::FourSlit => self.split_probability_four_slit(dt),
        }
    }

    /// 1 − w_split, evaluated from the complementary branch so that the sum
    /// is exact to rounding.
    pub fn unsplit_probability(&self, scheme: Scheme, dt: T) -> T {
        let e = self.static_factor();
        let d = self.delay_factor(dt);
        let interference = match scheme {
            Scheme::TwoSlit => e * d,
            Scheme::FourSlit => d * ((self.xi * dt).cos() + e) / (T::one() + e),
        };
        T::half() * (T::one() + interference)
    }

    /// Two-slit coincidence density; integrates over x to w_split.
    ///
    /// Written as a sum of Gaussians rather than through cosh so that large
    /// `xΔt/s²` cannot overflow; it is exactly zero at `x = 0`.
    pub fn density_two_slit_raw(&self, dt: T, x: T) -> T {
        let s2 = self.sigma * self.sigma;
        let g = |u: T| (-u * u / (T::two() * s2)).exp();
        let cross = (-(x * x + dt * dt) / (T::two() * s2)).exp();
        let value = g(x - dt) + g(x + dt) - T::two() * cross * (self.xi * x).cos();
        let norm = T::of(4.0) * self.sigma * (T::two() * T::PI()).sqrt();
        value.max(T::zero()) / norm
    }

    /// Four-slit coincidence density; integrates over x to w_split.
    pub fn density_four_slit_raw(&self, dt: T, x: T) -> T {
        let s2 = self.sigma * self.sigma;
        let a = (-(x + dt).powi(2) / (T::of(4.0) * s2)).exp();
        let b = (-(x - dt).powi(2) / (T::of(4.0) * s2)).exp();
        let half_xi = self.xi * T::half();
        let amp = a * (half_xi * (x + dt)).cos() - b * (half_xi * (x - dt)).cos();
        let norm = T::two() * self.sigma * (T::two() * T::PI()).sqrt() * (T::one() + self.static_factor());
        amp * amp / norm
    }

    pub fn density_raw(&self, scheme: Scheme, dt: T, x: T) -> T {
        match scheme {
            Scheme::TwoSlit => self.density_two_slit_raw(dt, x),
            Scheme::FourSlit => self.density_four_slit_raw(dt, x),
        }
    }

    /// Density with unit integral over x; zero when no pair is split.
    pub fn density(&self, scheme: Scheme, dt: T, x: T) -> T {
        let w = self.split_probability(scheme, dt);
        if w > T::zero() {
            self.density_raw(scheme, dt, x) / w
        } else {
            T::zero()
        }
    }

    /// Half-span of default grids: max(6·T_decoh, 4·T_osc).
    pub fn default_half_span(&self) -> T {
        (T::of(6.0) * self.timescales.t_decoh).max(T::of(4.0) * self.timescales.t_osc)
    }

    /// Symmetric grid through zero with [`POINTS_PER_PERIOD`] points per T_osc.
    pub fn default_grid(&self) -> Vec<T> {
        symmetric_grid(self.default_half_span(), self.timescales.t_osc / T::of(POINTS_PER_PERIOD as f64))
    }

    fn curve(&self, kind: CurveKind, axis: CurveAxis, scheme: Scheme, delay: Option<T>, x: Vec<T>, y: Vec<T>) -> HomCurve<T> {
        HomCurve {
            kind,
            axis,
            scheme,
            xi: self.xi,
            delay,
            t_osc: self.timescales.t_osc,
            t_decoh: self.timescales.t_decoh,
            fragile: self.fragile,
            x,
            y,
        }
    }

    /// w_split or w_unsplit against delay.
    pub fn probability_curve(&self, scheme: Scheme, kind: CurveKind, delays: Vec<T>) -> Result<HomCurve<T>> {
        let y: Vec<T> = match kind {
            CurveKind::SplitProbability => delays.par_iter().map(|&d| self.split_probability(scheme, d)).collect(),
            CurveKind::UnsplitProbability => {
                delays.par_iter().map(|&d| self.unsplit_probability(scheme, d)).collect()
            }
            CurveKind::Density => {
                return Err(SpdcError::invalid("kind", "density is not a probability curve"));
            }
        };
        Ok(self.curve(kind, CurveAxis::Delay, scheme, None, delays, y))
    }

    /// Unit-area coincidence density against t₁ − t₂, optionally blurred by a
    /// Gaussian detector response of the given rms width.
    pub fn density_curve(&self, scheme: Scheme, dt: T, xs: Vec<T>, resolution: Option<T>) -> Result<HomCurve<T>> {
        let mut y: Vec<T> = xs.par_iter().map(|&x| self.density(scheme, dt, x)).collect();
        if let Some(r) = resolution {
            y = gaussian_smooth(&xs, &y, r)?;
        }
        Ok(self.curve(CurveKind::Density, CurveAxis::ArrivalDifference, scheme, Some(dt), xs, y))
    }
}

/// `k·step` for `|k·step| ≤ half_span`, always containing 0.
pub fn symmetric_grid<T: Scalar>(half_span: T, step: T) -> Vec<T> {
    let k = (half_span / step).ceil().to_i64().unwrap_or(0).max(1);
    (-k..=k).map(|i| T::of(i as f64) * step).collect()
}

/// Convolution with a normalized Gaussian of rms width `sigma` on a uniform
/// grid; weights are renormalized near the edges.
pub fn gaussian_smooth<T: Scalar>(x: &[T], y: &[T], sigma: T) -> Result<Vec<T>> {
    if !(sigma > T::zero()) {
        return Err(SpdcError::invalid("resolution", "must be positive"));
    }
    if x.len() < 2 {
        return Ok(y.to_vec());
    }
    let dx = x[1] - x[0];
    let reach = (T::of(5.0) * sigma / dx).ceil().to_usize().unwrap_or(0);
    let weights: Vec<T> = (0..=reach)
        .map(|k| {
            let u = T::of(k as f64) * dx / sigma;
            (-u * u * T::half()).exp()
        })
        .collect();
    Ok((0..y.len())
        .into_par_iter()
        .map(|i| {
            let lo = i.saturating_sub(reach);
            let hi = (i + reach).min(y.len() - 1);
            let (mut num, mut den) = (T::zero(), T::zero());
            for (j, &yj) in y.iter().enumerate().take(hi + 1).skip(lo) {
                let w = weights[i.abs_diff(j)];
                num = num + w * yj;
                den = den + w;
            }
            num / den
        })
        .collect())
}
