//! Temporal wavefunction by discrete Fourier transform of Φ(ω₁, ω₂).
//!
//! Φ is sampled on a uniform grid of (ν₊, ν₋) and transformed with a 2-D
//! inverse FFT to the conjugate variables (t₁ + t₂, t₁ − t₂). Sampling a
//! function whose transform is confined to the grid's time window makes
//! the trapezoid sum spectrally accurate.

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::biphoton::{BiphotonModel, Scheme, SincKernel, SpectralPoint};
use crate::{Result, SpdcError, SINC_GAUSS_ALPHA};

/// Decay exponent at which Gaussian tails are cut.
const TAIL_EXPONENT: f64 = 50.0;

/// Sampling of the (ν₊, ν₋) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FftGrid {
    pub n_plus: usize,
    pub n_minus: usize,
    pub h_plus: f64,
    pub h_minus: f64,
}

impl FftGrid {
    /// A grid whose frequency span covers Φ and whose time window covers F.
    pub fn auto(model: &BiphotonModel<f64>, dt: f64, scheme: Scheme, kernel: SincKernel) -> Self {
        let cut = TAIL_EXPONENT.sqrt();
        let tau = model.tau;
        let beta = model.beta.abs();
        // time windows: |F| ∝ exp(−T²/8τ²) and exp(−x²/4s²) around −Δt
        let u_plus = dt.abs() + 2.0 * std::f64::consts::SQRT_2 * cut * tau;
        let (u_minus, nu_minus) = match kernel {
            SincKernel::GaussianModel => (
                dt.abs() + 2.0 * cut * model.sigma,
                cut / (SINC_GAUSS_ALPHA.sqrt() * beta),
            ),
            // the box has half-width 2|β|; keep a few hundred sinc lobes
            SincKernel::Exact => (dt.abs() + 4.0 * beta, 400.0 * std::f64::consts::PI / beta),
        };
        let nu_minus = match scheme {
            Scheme::TwoSlit => nu_minus,
            Scheme::FourSlit => nu_minus + 2.0 * model.xi.abs(),
        };
        let nu_plus = std::f64::consts::SQRT_2 * cut / tau;
        let h_plus = 2.0 * std::f64::consts::PI / u_plus;
        let h_minus = 2.0 * std::f64::consts::PI / u_minus;
        Self {
            n_plus: (2.0 * nu_plus / h_plus).ceil().max(16.0) as usize,
            n_minus: (2.0 * nu_minus / h_minus).ceil().max(16.0) as usize,
            h_plus,
            h_minus,
        }
        .rounded()
    }

    fn rounded(self) -> Self {
        Self {
            n_plus: self.n_plus.next_power_of_two(),
            n_minus: self.n_minus.next_power_of_two(),
            ..self
        }
    }

    /// Twice the samples at half the spacing: the same time step over a
    /// doubled window.
    pub fn doubled(&self) -> Self {
        Self {
            n_plus: 2 * self.n_plus,
            n_minus: 2 * self.n_minus,
            h_plus: 0.5 * self.h_plus,
            h_minus: 0.5 * self.h_minus,
        }
    }

    /// Time steps (t₁+t₂, t₁−t₂).
    pub fn time_steps(&self) -> (f64, f64) {
        (
            4.0 * std::f64::consts::PI / (self.n_plus as f64 * self.h_plus),
            4.0 * std::f64::consts::PI / (self.n_minus as f64 * self.h_minus),
        )
    }
}

/// Signed index of FFT slot `k` of an `n`-point transform.
fn signed(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// F(t₁, t₂) recovered from the transform, on the grid's time lattice.
#[derive(Debug, Clone)]
pub struct FftSample {
    pub grid: FftGrid,
    /// Row-major `[n_plus][n_minus]`, indexed by FFT slot.
    pub values: Vec<Complex<f64>>,
}

impl FftSample {
    /// (t₁+t₂, t₁−t₂) of slot (i, j).
    pub fn coordinates(&self, i: usize, j: usize) -> (f64, f64) {
        let (du_p, du_m) = self.grid.time_steps();
        (
            signed(i, self.grid.n_plus) as f64 * du_p,
            signed(j, self.grid.n_minus) as f64 * du_m,
        )
    }

    pub fn at(&self, i: usize, j: usize) -> Complex<f64> {
        self.values[i * self.grid.n_minus + j]
    }

    /// Slot holding signed indices (a, b).
    pub fn slot(&self, a: i64, b: i64) -> (usize, usize) {
        (
            a.rem_euclid(self.grid.n_plus as i64) as usize,
            b.rem_euclid(self.grid.n_minus as i64) as usize,
        )
    }
}

/// 2-D transform of the reduced two-frequency amplitude, rescaled so that it
/// estimates the temporal F of [`crate::biphoton::TemporalWf`].
pub fn fft_temporal_wf(
    model: &BiphotonModel<f64>,
    dt: f64,
    scheme: Scheme,
    kernel: SincKernel,
    grid: FftGrid,
) -> Result<FftSample> {
    let phi = model.two_frequency(scheme, dt, kernel)?;
    let wf = model.temporal(scheme, dt, kernel)?;
    let (np, nm) = (grid.n_plus, grid.n_minus);
    let mut data: Vec<Complex<f64>> = Vec::with_capacity(np * nm);
    for i in 0..np {
        let nu_p = signed(i, np) as f64 * grid.h_plus;
        for j in 0..nm {
            let nu_m = signed(j, nm) as f64 * grid.h_minus;
            data.push(phi.amplitude(SpectralPoint::new(nu_p, nu_m)));
        }
    }

    let mut planner = FftPlanner::new();
    let rows = planner.plan_fft_inverse(nm);
    rows.process(&mut data);
    let cols = planner.plan_fft_inverse(np);
    let mut column = vec![Complex::new(0.0, 0.0); np];
    for j in 0..nm {
        for i in 0..np {
            column[i] = data[i * nm + j];
        }
        cols.process(&mut column);
        for i in 0..np {
            data[i * nm + j] = column[i];
        }
    }

    // dω₁dω₂ = ½dν₊dν₋, then strip the carrier and the constant C
    let weight = 0.5 * grid.h_plus * grid.h_minus / wf.fourier_constant();
    let mut sample = FftSample { grid, values: data };
    for i in 0..np {
        for j in 0..nm {
            let (_, x) = sample.coordinates(i, j);
            let phase = Complex::from_polar(weight, 0.5 * (model.xi * x - dt));
            sample.values[i * nm + j] *= phase;
        }
    }
    Ok(sample)
}

/// Pointwise comparison of the transform with the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FftComparison {
    pub grid: FftGrid,
    /// max |F_fft − F| / max |F|
    pub rel_err: f64,
    /// Change at common points when the grid is doubled, relative to max |F|.
    pub doubling_change: f64,
}

fn max_deviation(model: &BiphotonModel<f64>, sample: &FftSample, dt: f64, scheme: Scheme) -> Result<(f64, f64)> {
    let wf = model.temporal(scheme, dt, SincKernel::GaussianModel)?;
    let (mut err, mut peak) = (0.0f64, 0.0f64);
    for i in 0..sample.grid.n_plus {
        for j in 0..sample.grid.n_minus {
            let (t_sum, x) = sample.coordinates(i, j);
            let exact = wf.amplitude(0.5 * (t_sum + x), 0.5 * (t_sum - x));
            err = err.max((sample.at(i, j) - exact).norm());
            peak = peak.max(exact.norm());
        }
    }
    Ok((err, peak))
}

/// FFT oracle for the Gaussian kernel, with a grid-doubling alias check.
pub fn fft_check(model: &BiphotonModel<f64>, dt: f64, scheme: Scheme, tolerance: f64) -> Result<FftComparison> {
    let grid = FftGrid::auto(model, dt, scheme, SincKernel::GaussianModel);
    let coarse = fft_temporal_wf(model, dt, scheme, SincKernel::GaussianModel, grid)?;
    let (err, peak) = max_deviation(model, &coarse, dt, scheme)?;
    let fine = fft_temporal_wf(model, dt, scheme, SincKernel::GaussianModel, grid.doubled())?;
    let mut change = 0.0f64;
    for i in 0..grid.n_plus {
        for j in 0..grid.n_minus {
            let (a, b) = (signed(i, grid.n_plus), signed(j, grid.n_minus));
            let (fi, fj) = fine.slot(a, b);
            change = change.max((coarse.at(i, j) - fine.at(fi, fj)).norm());
        }
    }
    let doubling_change = change / peak;
    if doubling_change > tolerance {
        return Err(SpdcError::Resolution(format!(
            "grid doubling changed the transform by {doubling_change:e}"
        )));
    }
    Ok(FftComparison {
        grid,
        rel_err: err / peak,
        doubling_change,
    })
}

/// Width of the exact-sinc temporal profile along t₁ − t₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SincProfileWidth {
    /// FWHM of |F| from the transform.
    pub fft_fwhm: f64,
    /// Width of the ideal box, 4|β|.
    pub box_width: f64,
    /// FWHM of the Gaussian model's |F|, 4s·√ln2.
    pub gaussian_fwhm: f64,
}

/// FWHM of |F| along t₁ − t₂ at the centre of t₁ + t₂ for the exact kernel.
pub fn exact_sinc_profile(model: &BiphotonModel<f64>) -> Result<SincProfileWidth> {
    let scheme = Scheme::TwoSlit;
    let grid = FftGrid::auto(model, 0.0, scheme, SincKernel::Exact);
    let sample = fft_temporal_wf(model, 0.0, scheme, SincKernel::Exact, grid)?;
    let nm = grid.n_minus as i64;
    let profile: Vec<(f64, f64)> = (-nm / 2..nm / 2)
        .map(|b| {
            let (i, j) = sample.slot(0, b);
            (sample.coordinates(i, j).1, sample.at(i, j).norm())
        })
        .collect();
    let top = profile.iter().map(|p| p.1).fold(0.0, f64::max);
    let centre = profile.len() / 2;
    let half = 0.5 * top;
    let cross = |a: (f64, f64), b: (f64, f64)| a.0 + (b.0 - a.0) * (a.1 - half) / (a.1 - b.1);
    let right = (centre..profile.len())
        .find(|&k| profile[k].1 < half)
        .map(|k| cross(profile[k - 1], profile[k]));
    let left = (0..=centre)
        .rev()
        .find(|&k| profile[k].1 < half)
        .map(|k| cross(profile[k + 1], profile[k]));
    let (Some(l), Some(r)) = (left, right) else {
        return Err(SpdcError::Resolution("profile does not fall to half maximum".into()));
    };
    Ok(SincProfileWidth {
        fft_fwhm: r - l,
        box_width: 4.0 * model.beta.abs(),
        gaussian_fwhm: 4.0 * model.sigma * std::f64::consts::LN_2.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SetupConfig;

    #[test]
    fn gaussian_kernel_matches_closed_form() {
        let model = BiphotonModel::from_setup(&SetupConfig::default(), 0.1).unwrap();
        for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
            let c = fft_check(&model, 30.0, scheme, 1e-8).unwrap();
            assert!(c.rel_err < 1e-6, "{scheme:?}: {}", c.rel_err);
        }
    }

    #[test]
    fn exact_kernel_gives_a_box() {
        let model = BiphotonModel::from_setup(&SetupConfig::default(), 0.1).unwrap();
        let w = exact_sinc_profile(&model).unwrap();
        assert!((w.fft_fwhm / w.box_width - 1.0).abs() < 0.1, "{w:?}");
    }
}
