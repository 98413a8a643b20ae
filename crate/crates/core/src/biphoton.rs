//! Biphoton wavefunctions behind two- or four-slit angular selection.
//!
//! Frequencies are handled as dimensionless detunings from the pair centre
//! (ω_h, ω_l), in units of ω₀:
//! `ν₊ = ω₁ + ω₂ − ω₀` and `ν₋ = ω₁ − ω₂ − ξω₀`. Times are ω₀·t.
//!
//! The reduced two-frequency amplitude is
//! `Φ(ω₁, ω₂) = exp(−ν₊²τ²/2) · K(β ν₋) · exp(iω₁Δt)`, `β = ω₀LA₋/(2c)`,
//! with `K` either the exact sinc or its Gaussian stand-in `exp(−αx²)`. The
//! four-slit state adds the mirror pair, `Φ(ξ) + Φ(−ξ)`.
//!
//! With the Gaussian kernel the double Fourier transform
//! `Ψ̃(t₁,t₂) = ∫∫ dω₁dω₂ Ψ(ω₁,ω₂) e^{i(ω₁t₁+ω₂t₂)}` is
//! `C · e^{i(t₁+t₂+Δt)/2} · F(t₁,t₂)` where
//!
//! ```text
//! F₂(t₁,t₂) = e^{iξ(t₁−t₂+Δt)/2} · exp[−(t₁+t₂+Δt)²/(8τ²) − (t₁−t₂+Δt)²/(4s²)]
//! F₄(t₁,t₂) = cos[ξ(t₁−t₂+Δt)/2] · exp[ … same … ]
//! ```
//!
//! and `s² = α(ω₀LA₋/c)²`. [`TemporalWf::fourier_constant`] returns `C`.

use std::sync::OnceLock;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::config::SetupConfig;
use crate::dispersion::CrystalDispersion;
use crate::groupdelay::{self, pulse_regime, GroupDelayCoefficients, PulseRegime, TimeScales};
use crate::numeric::Integrator;
use crate::phasematch::{cone_geometry, ConeGeometry, NondegeneracyPoint, Regime};
use crate::scalar::sinc;
use crate::{Result, Scalar, SpdcError, SINC_GAUSS_ALPHA, SPEED_OF_LIGHT_UM_PER_FS};

/// Angular selection scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    TwoSlit,
    #[default]
    FourSlit,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::TwoSlit => "two_slit",
            Scheme::FourSlit => "four_slit",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = SpdcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" | "two_slit" | "2" => Ok(Scheme::TwoSlit),
            "four" | "four_slit" | "4" => Ok(Scheme::FourSlit),
            other => Err(SpdcError::invalid("scheme", format!("`{other}` (expected two|four)"))),
        }
    }
}

/// Frequency kernel standing in for the longitudinal sinc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SincKernel {
    Exact,
    #[default]
    GaussianModel,
}

impl SincKernel {
    pub fn eval<T: Scalar>(self, x: T) -> T {
        match self {
            SincKernel::Exact => sinc(x),
            SincKernel::GaussianModel => (-T::of(SINC_GAUSS_ALPHA) * x * x).exp(),
        }
    }
}

/// A point in the two-photon spectrum, as detunings in units of ω₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint<T> {
    /// ω₁ + ω₂ − ω₀
    pub nu_plus: T,
    /// ω₁ − ω₂ − ξω₀
    pub nu_minus: T,
}

impl<T: Scalar> SpectralPoint<T> {
    pub fn new(nu_plus: T, nu_minus: T) -> Self {
        Self { nu_plus, nu_minus }
    }

    /// From the detunings of each photon from its own centre,
    /// `δ₁ = ω₁ − ω_h`, `δ₂ = ω₂ − ω_l`.
    pub fn from_detunings(d1: T, d2: T) -> Self {
        Self::new(d1 + d2, d1 - d2)
    }

    /// From absolute frequencies in units of ω₀.
    pub fn from_absolute(omega1: T, omega2: T, xi: T) -> Self {
        Self::new(omega1 + omega2 - T::one(), omega1 - omega2 - xi)
    }

    /// ω₁/ω₀
    pub fn omega1(&self, xi: T) -> T {
        (T::one() + xi + self.nu_plus + self.nu_minus) * T::half()
    }

    /// ω₂/ω₀
    pub fn omega2(&self, xi: T) -> T {
        (T::one() - xi + self.nu_plus - self.nu_minus) * T::half()
    }

    /// The same pair of frequencies with the photon labels exchanged.
    pub fn transposed(&self, xi: T) -> Self {
        Self::new(self.nu_plus, -self.nu_minus - T::two() * xi)
    }
}

/// Pair-path label of the two-column structure: which photon goes through
/// the slit at positive θ_x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairPath {
    /// photon 1 at θ_x > 0, photon 2 at θ_x < 0
    PlusMinus,
    /// photon 1 at θ_x < 0, photon 2 at θ_x > 0
    MinusPlus,
}

/// Dimensionless parameters of the biphoton state at one ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonModel<T> {
    pub xi: T,
    /// ω₀ in rad/fs.
    pub omega0: T,
    pub lambda_p: T,
    pub length_um: T,
    pub phi0: T,
    pub waist_um: T,
    /// ω₀τ
    pub tau: T,
    /// ω₀LA₋/(2c), signed.
    pub beta: T,
    /// ω₀LA₊/(2c)
    pub beta_plus: T,
    /// s = √α·ω₀L|A₋|/c, the temporal width in the Gaussian model.
    pub sigma: T,
    pub coeffs: GroupDelayCoefficients<T>,
    pub timescales: TimeScales<T>,
    /// `None` when the orientation is forbidden at this ξ.
    pub cone: Option<ConeGeometry<T>>,
    pub slit_width: Option<T>,
}

impl<T: Scalar> BiphotonModel<T> {
    pub fn new(
        crystal: &CrystalDispersion<T>,
        lambda_p: T,
        length_um: T,
        phi0: T,
        tau_fs: T,
        waist_um: T,
        xi: T,
    ) -> Result<Self> {
        let point = NondegeneracyPoint::new(lambda_p, xi)?;
        let coeffs = groupdelay::coefficients(crystal, lambda_p, phi0, xi)?;
        let cone = cone_geometry(crystal, lambda_p, length_um, phi0, xi).ok();
        let mut model = Self::from_coefficients(point.omega0, coeffs, length_um, tau_fs);
        model.lambda_p = lambda_p;
        model.phi0 = phi0;
        model.waist_um = waist_um;
        model.cone = cone;
        Ok(model)
    }

    /// Builds the model straight from group-delay coefficients; the angular
    /// parts (cone, waist) are left unset.
    pub fn from_coefficients(omega0: T, coeffs: GroupDelayCoefficients<T>, length_um: T, tau_fs: T) -> Self {
        let c = T::of(SPEED_OF_LIGHT_UM_PER_FS);
        let beta = omega0 * length_um * coeffs.a_minus / (T::two() * c);
        let beta_plus = omega0 * length_um * coeffs.a_plus / (T::two() * c);
        let lambda_p = T::two() * T::PI() * c / omega0;
        Self {
            xi: coeffs.xi,
            omega0,
            lambda_p,
            length_um,
            phi0: coeffs.phi0,
            waist_um: T::zero(),
            tau: omega0 * tau_fs,
            beta,
            beta_plus,
            sigma: T::two() * T::of(SINC_GAUSS_ALPHA).sqrt() * beta.abs(),
            timescales: groupdelay::timescales(&coeffs, omega0, length_um),
            coeffs,
            cone: None,
            slit_width: None,
        }
    }

    pub fn from_setup(setup: &SetupConfig, xi: T) -> Result<Self> {
        setup.validate()?;
        let crystal = setup.crystal.resolve()?.cast::<T>();
        let mut model = Self::new(
            &crystal,
            T::of(setup.lambda_p_um),
            T::of(setup.length_um()),
            T::of(setup.phi0_rad),
            T::of(setup.tau_fs()),
            T::of(setup.waist_um),
            xi,
        )?;
        model.slit_width = match (setup.slit_width_rad, model.cone.and_then(|c| c.delta_theta_l)) {
            (Some(w), _) => Some(T::of(w)),
            (None, Some(dtl)) => Some(dtl * T::half()),
            (None, None) => None,
        };
        Ok(model)
    }

    pub fn pulse_regime(&self) -> PulseRegime {
        pulse_regime(self.tau, self.timescales.tau_gr)
    }

    pub fn require_long_pulse(&self) -> Result<()> {
        match self.pulse_regime() {
            PulseRegime::LongPulse => Ok(()),
            PulseRegime::ShortPulse => Err(SpdcError::UnsupportedRegime {
                tau: self.tau.f64(),
                threshold: (T::of(groupdelay::LONG_PULSE_FACTOR) * self.timescales.tau_gr).f64(),
            }),
        }
    }

    pub fn require_nondegenerate_width(&self) -> Result<()> {
        if self.beta == T::zero() || !self.sigma.is_finite() {
            Err(SpdcError::DegenerateWidth { xi: self.xi.f64() })
        } else {
            Ok(())
        }
    }

    pub fn is_model_fragile(&self) -> bool {
        self.coeffs.is_model_fragile()
    }

    /// Reduced two-frequency amplitude for a scheme and delay.
    pub fn two_frequency(&self, scheme: Scheme, delay: T, kernel: SincKernel) -> Result<TwoFrequencyWf<T>> {
        self.require_long_pulse()?;
        if let (Some(w), Some(dtl)) = (self.slit_width, self.cone.and_then(|c| c.delta_theta_l)) {
            if w >= dtl {
                return Err(SpdcError::invalid(
                    "slit_width_rad",
                    format!("{w} rad is not narrower than (δθ)_L = {dtl} rad"),
                ));
            }
        }
        Ok(TwoFrequencyWf {
            xi: self.xi,
            tau: self.tau,
            beta: self.beta,
            delay,
            scheme,
            kernel,
        })
    }

    /// Temporal wavefunction for a scheme and delay.
    pub fn temporal(&self, scheme: Scheme, delay: T, kernel: SincKernel) -> Result<TemporalWf<T>> {
        self.require_long_pulse()?;
        self.require_nondegenerate_width()?;
        Ok(TemporalWf {
            xi: self.xi,
            tau: self.tau,
            beta: self.beta,
            sigma: self.sigma,
            delay,
            scheme,
            kernel,
            norm: OnceLock::new(),
        })
    }

    /// Full angular-frequency amplitude (two-slit pair of slits).
    pub fn angular_frequency(&self) -> Result<AngularFrequencyWf<T>> {
        let cone = self.cone.ok_or(SpdcError::Forbidden {
            phi0: self.phi0.f64(),
            xi: self.xi.f64(),
            index_gap: f64::NAN,
        })?;
        if cone.regime != Regime::Noncollinear {
            return Err(SpdcError::Collinear { xi: self.xi.f64() });
        }
        let delta_theta_l = cone.require_delta_theta_l()?;
        Ok(AngularFrequencyWf {
            xi: self.xi,
            tau: self.tau,
            beta: self.beta,
            beta_plus: self.beta_plus,
            theta0: cone.theta0,
            theta_inner: cone.theta_inner,
            theta_outer: cone.theta_outer,
            delta_theta_l,
            angular_scale: T::PI() * self.waist_um / self.lambda_p,
            slit_width: self.slit_width.unwrap_or(delta_theta_l * T::half()),
        })
    }
}

/// Φ(ω₁, ω₂) for one scheme at a fixed delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoFrequencyWf<T> {
    pub xi: T,
    pub tau: T,
    pub beta: T,
    pub delay: T,
    pub scheme: Scheme,
    pub kernel: SincKernel,
}

impl<T: Scalar> TwoFrequencyWf<T> {
    /// Φ at a spectral point (photon 1 in the θ_x > 0 channel).
    pub fn amplitude(&self, p: SpectralPoint<T>) -> Complex<T> {
        let pump = (-(p.nu_plus * self.tau).powi(2) * T::half()).exp();
        let mut k = self.kernel.eval(self.beta * p.nu_minus);
        if self.scheme == Scheme::FourSlit {
            // mirror slit pair: ξ → −ξ
            k = k + self.kernel.eval(self.beta * (p.nu_minus + T::two() * self.xi));
        }
        Complex::from_polar(pump * k, p.omega1(self.xi) * self.delay)
    }

    /// Φ(ω₂, ω₁): the amplitude of the (−,+) pair path.
    pub fn amplitude_transposed(&self, p: SpectralPoint<T>) -> Complex<T> {
        self.amplitude(p.transposed(self.xi))
    }

    /// Both pair-path amplitudes at absolute frequencies (units of ω₀).
    pub fn at_frequencies(&self, omega1: T, omega2: T) -> (Complex<T>, Complex<T>) {
        let p = SpectralPoint::from_absolute(omega1, omega2, self.xi);
        (self.amplitude(p), self.amplitude_transposed(p))
    }
}

/// F(t₁, t₂) and its normalization.
#[derive(Debug)]
pub struct TemporalWf<T> {
    pub xi: T,
    pub tau: T,
    pub beta: T,
    pub sigma: T,
    pub delay: T,
    pub scheme: Scheme,
    pub kernel: SincKernel,
    norm: OnceLock<T>,
}

impl<T: Scalar> Clone for TemporalWf<T> {
    fn clone(&self) -> Self {
        Self {
            xi: self.xi,
            tau: self.tau,
            beta: self.beta,
            sigma: self.sigma,
            delay: self.delay,
            scheme: self.scheme,
            kernel: self.kernel,
            norm: self.norm.clone(),
        }
    }
}

impl<T: Scalar> TemporalWf<T> {
    /// Profile along X = t₁ − t₂ + Δt without the ξ-dependent factor.
    fn difference_profile(&self, x: T) -> T {
        match self.kernel {
            SincKernel::GaussianModel => (-x * x / (T::of(4.0) * self.sigma * self.sigma)).exp(),
            SincKernel::Exact => {
                // Fourier image of sinc: a box of half-width 2|β|
                let edge = T::two() * self.beta.abs();
                if x.abs() < edge {
                    T::one()
                } else if x.abs() == edge {
                    T::half()
                } else {
                    T::zero()
                }
            }
        }
    }

    fn sum_profile(&self, t_sum: T) -> T {
        (-t_sum * t_sum / (T::of(8.0) * self.tau * self.tau)).exp()
    }

    /// Unnormalized F(t₁, t₂).
    pub fn amplitude(&self, t1: T, t2: T) -> Complex<T> {
        let x = t1 - t2 + self.delay;
        let envelope = self.sum_profile(t1 + t2 + self.delay) * self.difference_profile(x);
        let half_phase = self.xi * x * T::half();
        match self.scheme {
            Scheme::TwoSlit => Complex::from_polar(envelope, half_phase),
            Scheme::FourSlit => Complex::new(envelope * half_phase.cos(), T::zero()),
        }
    }

    /// Amplitude of a pair path: `F(t₁,t₂)` for (+,−), `F(t₂,t₁)` for (−,+).
    pub fn path_amplitude(&self, path: PairPath, t1: T, t2: T) -> Complex<T> {
        match path {
            PairPath::PlusMinus => self.amplitude(t1, t2),
            PairPath::MinusPlus => self.amplitude(t2, t1),
        }
    }

    /// N·F(t₁, t₂)
    pub fn normalized_amplitude(&self, t1: T, t2: T) -> Complex<T> {
        self.amplitude(t1, t2) * self.normalization()
    }

    /// ∫∫|F|² dt₁dt₂ in closed form.
    pub fn norm_integral(&self) -> T {
        // dt₁dt₂ = ½ dT dX with T = t₁+t₂, X = t₁−t₂
        let sum_part = T::two() * self.tau * T::PI().sqrt();
        let diff_part = match (self.kernel, self.scheme) {
            (SincKernel::GaussianModel, Scheme::TwoSlit) => self.sigma * (T::two() * T::PI()).sqrt(),
            (SincKernel::GaussianModel, Scheme::FourSlit) => {
                let cross = (-(self.xi * self.sigma).powi(2) * T::half()).exp();
                T::half() * self.sigma * (T::two() * T::PI()).sqrt() * (T::one() + cross)
            }
            (SincKernel::Exact, Scheme::TwoSlit) => T::of(4.0) * self.beta.abs(),
            (SincKernel::Exact, Scheme::FourSlit) => {
                let a = T::two() * self.beta.abs();
                if self.xi == T::zero() {
                    T::two() * a
                } else {
                    a + (self.xi * a).sin() / self.xi
                }
            }
        };
        T::half() * sum_part * diff_part
    }

    /// N = (2∫∫|F|²)^(−1/2), computed once per instance.
    pub fn normalization(&self) -> T {
        *self
            .norm
            .get_or_init(|| (T::two() * self.norm_integral()).sqrt().recip())
    }

    /// The same constant by adaptive quadrature over (t₁+t₂, t₁−t₂).
    pub fn normalize_numerically(&self) -> Result<T> {
        let integ = Integrator::new(T::of(1e-300).max(T::min_positive_value()), T::of(1e-11));
        let span_sum = T::of(8.0) * T::two() * self.tau;
        let t0 = -self.delay;
        let sum_q = integ.integrate(|t| self.sum_profile(t + self.delay).powi(2), t0 - span_sum, t0 + span_sum)?;
        let diff_breaks: Vec<T> = match self.kernel {
            SincKernel::GaussianModel => {
                let span = T::of(12.0) * self.sigma;
                let osc = if self.xi > T::zero() { T::PI() / self.xi } else { span };
                crate::numeric::uniform_breaks(-span, span, osc.min(span))
            }
            SincKernel::Exact => {
                let edge = T::two() * self.beta.abs();
                vec![-edge, T::zero(), edge]
            }
        };
        let diff_q = integ.integrate_with_breaks(
            |x| {
                let k = self.difference_profile(x);
                let m = match self.scheme {
                    Scheme::TwoSlit => T::one(),
                    Scheme::FourSlit => (self.xi * x * T::half()).cos(),
                };
                (k * m).powi(2)
            },
            &diff_breaks,
        )?;
        let integral = T::half() * sum_q.value * diff_q.value;
        if !(integral > T::zero() && integral.is_finite()) {
            return Err(SpdcError::NonFinite(format!("norm integral {integral}")));
        }
        Ok((T::two() * integral).sqrt().recip())
    }

    /// `C` in `Ψ̃ = C · e^{i(t₁+t₂+Δt)/2} · F`, for the Fourier convention of
    /// [`TwoFrequencyWf`] in dimensionless variables.
    pub fn fourier_constant(&self) -> T {
        let sum_ft = (T::two() * T::PI()).sqrt() / self.tau;
        let diff_ft = match self.kernel {
            SincKernel::GaussianModel => (T::PI() / T::of(SINC_GAUSS_ALPHA)).sqrt() / self.beta.abs(),
            SincKernel::Exact => T::PI() / self.beta.abs(),
        };
        let copies = match self.scheme {
            Scheme::TwoSlit => T::one(),
            Scheme::FourSlit => T::two(),
        };
        T::half() * sum_ft * diff_ft * copies
    }

    /// e^{i(t₁+t₂+Δt)/2}, the optical carrier stripped from F.
    pub fn carrier(&self, t1: T, t2: T) -> Complex<T> {
        Complex::from_polar(T::one(), (t1 + t2 + self.delay) * T::half())
    }

    /// Samples N·F on a grid; rows are `(t1, t2, value)`.
    pub fn sample_grid(&self, t1s: &[T], t2s: &[T]) -> Vec<(T, T, Complex<T>)> {
        let n = self.normalization();
        t1s.iter()
            .flat_map(|&t1| t2s.iter().map(move |&t2| (t1, t2)))
            .map(|(t1, t2)| (t1, t2, self.amplitude(t1, t2) * n))
            .collect()
    }
}

/// Angular-frequency amplitude before the slit reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularFrequencyWf<T> {
    pub xi: T,
    pub tau: T,
    pub beta: T,
    pub beta_plus: T,
    pub theta0: T,
    pub theta_inner: T,
    pub theta_outer: T,
    pub delta_theta_l: T,
    /// πw/λ_p
    pub angular_scale: T,
    pub slit_width: T,
}

impl<T: Scalar> AngularFrequencyWf<T> {
    fn slit(&self, offset: T) -> T {
        if offset.abs() <= self.slit_width * T::half() {
            T::one()
        } else {
            T::zero()
        }
    }

    /// One ordering of the photons: `first` at the inner-cone slit, `second`
    /// at the outer-cone slit on the opposite side.
    fn term(&self, theta_first: T, theta_second: T, p: SpectralPoint<T>) -> T {
        let tt1 = (T::one() + self.xi) * theta_first;
        let tt2 = (T::one() - self.xi) * theta_second;
        let spectral = (-(p.nu_plus * self.tau).powi(2) * T::half()).exp();
        let angular = (-((tt1 + tt2) * self.angular_scale).powi(2) * T::half()).exp();
        let arg = (tt1 - tt2 - T::two() * self.theta0) / (T::two() * self.delta_theta_l)
            + self.beta_plus * p.nu_plus
            - self.beta * p.nu_minus;
        spectral
            * angular
            * sinc(arg)
            * self.slit(theta_first - self.theta_inner)
            * self.slit(theta_second + self.theta_outer)
    }

    /// Ψ(θ₁ₓ, ω₁; θ₂ₓ, ω₂), including the transposed term.
    pub fn amplitude(&self, theta1: T, theta2: T, p: SpectralPoint<T>) -> T {
        self.term(theta1, theta2, p) + self.term(theta2, theta1, p.transposed(self.xi))
    }
}
