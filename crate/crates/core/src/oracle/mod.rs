//! Independent numerical checks of the closed forms.
//!
//! Three oracles re-derive the HOM observables without using the closed
//! forms they check:
//!
//! * [`quadrature`] integrates |A_split|² and |A_unsplit|² of the temporal
//!   amplitudes over both arrival times,
//! * [`fft`] transforms the two-frequency amplitude to the time domain,
//! * [`monte_carlo`] counts split and unsplit pairs on sampled detections.
//!
//! Every check yields an [`OracleReport`]; [`run_suite`] runs them on the
//! pinned grid together with the phase-matching anchors. This module works
//! in `f64` only.

pub mod fft;
pub mod monte_carlo;
pub mod quadrature;

use serde::Serialize;
use serde_json::{json, Value};

use crate::biphoton::{BiphotonModel, Scheme, SincKernel};
use crate::config::SetupConfig;
use crate::groupdelay::{a_minus_zero, TimeScales};
use crate::hom::HomModel;
use crate::phasematch::{collinear_angle_range, effective_index_maximum, sideband_wavelengths, xi_max};
use crate::Result;

pub use fft::{exact_sinc_profile, fft_check, fft_temporal_wf, FftComparison, FftGrid};
pub use monte_carlo::{monte_carlo_hom, monte_carlo_scaling, McRun, McScaling};
pub use quadrature::{quadrature_split_probability, QuadratureResult, QuadratureSpec};

/// Nondegeneracy values of the pinned verification grid.
pub const PINNED_XI: [f64; 5] = [0.01, 0.04, 0.1, 0.6, 0.81];

/// Closed form vs quadrature, relative.
pub const QUADRATURE_TOLERANCE: f64 = 1e-6;
/// FFT vs closed form, relative to the peak amplitude.
pub const FFT_TOLERANCE: f64 = 1e-6;
/// Grid-doubling change of the FFT estimate.
pub const FFT_DOUBLING_TOLERANCE: f64 = 1e-8;
/// Analytic vs integrated normalization.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;
/// Exact sinc vs Gaussian model, two-slit, ξ = 0.1, Δt = 0.
pub const SINC_MODEL_TOLERANCE: f64 = 0.05;
/// Monte-Carlo agreement in binomial standard errors.
pub const MC_SIGMAS: f64 = 3.0;

/// Delays of the pinned grid: 0, T_osc, 5·T_osc, 3·T_decoh.
pub fn pinned_delays(ts: &TimeScales<f64>) -> [f64; 4] {
    [0.0, ts.t_osc, 5.0 * ts.t_osc, 3.0 * ts.t_decoh]
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub check: String,
    pub params: Value,
    pub analytic: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl OracleReport {
    /// Passes when `|oracle − analytic| ≤ rel_tol·|analytic| + abs_tol`.
    pub fn compare(check: &str, params: Value, analytic: f64, oracle: f64, rel_tol: f64, abs_tol: f64) -> Self {
        let diff = (oracle - analytic).abs();
        let rel_err = if analytic != 0.0 { diff / analytic.abs() } else { diff };
        Self {
            check: check.into(),
            params,
            analytic,
            oracle,
            rel_err,
            pass: diff <= rel_tol * analytic.abs() + abs_tol,
            note: None,
        }
    }

    pub fn failed(check: &str, params: Value, reason: String) -> Self {
        Self {
            check: check.into(),
            params,
            analytic: f64::NAN,
            oracle: f64::NAN,
            rel_err: f64::NAN,
            pass: false,
            note: Some(reason),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn guard(check: &str, params: Value, r: Result<Vec<OracleReport>>) -> Vec<OracleReport> {
    r.unwrap_or_else(|e| vec![OracleReport::failed(check, params, e.to_string())])
}

/// Phase-matching anchors and crystal invariants.
pub fn anchor_checks(setup: &SetupConfig) -> Result<Vec<OracleReport>> {
    let crystal = setup.crystal.resolve_unchecked()?;
    let lp = setup.lambda_p_um;
    let p = json!({ "crystal": crystal.name, "lambda_p_um": lp });
    let mut out = Vec::new();
    let violations = crystal.check_invariants(2_000);
    out.push(OracleReport {
        check: "crystal_invariants".into(),
        params: p.clone(),
        analytic: 0.0,
        oracle: violations.len() as f64,
        rel_err: violations.len() as f64,
        pass: violations.is_empty(),
        note: (!violations.is_empty()).then(|| violations.join("; ")),
    });
    if !violations.is_empty() {
        return Ok(out);
    }
    let xm = xi_max(&crystal, lp);
    out.push(OracleReport::compare("xi_max", p.clone(), 0.9391, xm, 0.0, 1e-3));
    let (_, lm) = sideband_wavelengths(lp, xm);
    out.push(OracleReport::compare("lambda_minus_at_xi_max_um", p.clone(), 13.29, lm, 0.0, 0.02));
    let range = collinear_angle_range(&crystal, lp)?;
    out.push(OracleReport::compare("phi0_coll_min", p.clone(), 0.37734, range.phi_min, 0.0, 3e-3));
    out.push(OracleReport::compare("phi0_coll_max", p.clone(), 0.678486, range.phi_max, 0.0, 3e-3));
    let (xi_neff, _) = effective_index_maximum(&crystal, lp)?;
    out.push(OracleReport::compare("n_eff_maximum_xi", p.clone(), 0.8142, xi_neff, 0.0, 5e-3));
    let zero = a_minus_zero(&crystal, lp, 0.5, 0.93)?;
    out.push(OracleReport::compare("a_minus_zero_xi", p.clone(), 0.8142, zero, 0.0, 5e-3));
    out.push(OracleReport::compare("extremum_coincidence", p, xi_neff, zero, 0.0, 1e-6));
    Ok(out)
}

fn case_params(xi: f64, dt: f64, scheme: Scheme) -> Value {
    json!({ "xi": xi, "omega0_dt": dt, "scheme": scheme.label() })
}

/// Quadrature of the amplitude pipeline against the closed forms, plus the
/// normalization and completeness invariants, at one grid point.
pub fn quadrature_case(model: &BiphotonModel<f64>, dt: f64, scheme: Scheme) -> Result<Vec<OracleReport>> {
    let hom = HomModel::new(model)?;
    let p = case_params(model.xi, dt, scheme);
    let q = quadrature_split_probability(model, dt, scheme, SincKernel::GaussianModel, &QuadratureSpec::default())?;
    let wf = model.temporal(scheme, dt, SincKernel::GaussianModel)?;
    let analytic = hom.split_probability(scheme, dt);
    Ok(vec![
        OracleReport::compare("quadrature_w_split", p.clone(), analytic, q.w_split, QUADRATURE_TOLERANCE, 1e-12),
        OracleReport::compare("quadrature_completeness", p.clone(), 1.0, q.w_split + q.w_unsplit, 0.0, 1e-12),
        OracleReport::compare(
            "normalization",
            p,
            wf.normalization(),
            q.normalization,
            NORMALIZATION_TOLERANCE,
            0.0,
        ),
    ])
}

pub fn quadrature_checks(setup: &SetupConfig) -> Vec<OracleReport> {
    let mut out = Vec::new();
    for xi in PINNED_XI {
        let p = json!({ "xi": xi });
        let model = match BiphotonModel::from_setup(setup, xi) {
            Ok(m) => m,
            Err(e) => {
                out.push(OracleReport::failed("quadrature_w_split", p, e.to_string()));
                continue;
            }
        };
        for dt in pinned_delays(&model.timescales) {
            for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
                out.extend(guard("quadrature_w_split", case_params(xi, dt, scheme), quadrature_case(&model, dt, scheme)));
            }
        }
    }
    out
}

/// Exact sinc against its Gaussian model: the probability at the dip and
/// the temporal width.
pub fn exact_sinc_checks(setup: &SetupConfig) -> Vec<OracleReport> {
    let xi = 0.1;
    let run = || -> Result<Vec<OracleReport>> {
        let model = BiphotonModel::from_setup(setup, xi)?;
        let spec = QuadratureSpec::default();
        let gauss = quadrature_split_probability(&model, 0.0, Scheme::TwoSlit, SincKernel::GaussianModel, &spec)?;
        let exact = quadrature_split_probability(&model, 0.0, Scheme::TwoSlit, SincKernel::Exact, &spec)?;
        let width = exact_sinc_profile(&model)?;
        Ok(vec![
            OracleReport::compare(
                "exact_sinc_vs_gaussian_w_split",
                case_params(xi, 0.0, Scheme::TwoSlit),
                gauss.w_split,
                exact.w_split,
                SINC_MODEL_TOLERANCE,
                0.0,
            ),
            OracleReport::compare("exact_sinc_box_width", json!({ "xi": xi }), width.box_width, width.fft_fwhm, 0.1, 0.0)
                .with_note(format!(
                    "Gaussian-model FWHM {:.6e}; exact/Gaussian width ratio {:.4}",
                    width.gaussian_fwhm,
                    width.fft_fwhm / width.gaussian_fwhm
                )),
        ])
    };
    guard("exact_sinc", json!({ "xi": xi }), run())
}

pub fn fft_checks(setup: &SetupConfig) -> Vec<OracleReport> {
    let mut out = Vec::new();
    for xi in PINNED_XI {
        let model = match BiphotonModel::from_setup(setup, xi) {
            Ok(m) => m,
            Err(e) => {
                out.push(OracleReport::failed("fft_temporal_wf", json!({ "xi": xi }), e.to_string()));
                continue;
            }
        };
        for dt in pinned_delays(&model.timescales) {
            for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
                let p = case_params(xi, dt, scheme);
                out.push(match fft_check(&model, dt, scheme, FFT_DOUBLING_TOLERANCE) {
                    Ok(c) => OracleReport {
                        check: "fft_temporal_wf".into(),
                        params: p,
                        analytic: 0.0,
                        oracle: c.rel_err,
                        rel_err: c.rel_err,
                        pass: c.rel_err <= FFT_TOLERANCE,
                        note: Some(format!(
                            "grid {}x{}, doubling change {:.2e}",
                            c.grid.n_plus, c.grid.n_minus, c.doubling_change
                        )),
                    },
                    Err(e) => OracleReport::failed("fft_temporal_wf", p, e.to_string()),
                });
            }
        }
    }
    out
}

pub fn monte_carlo_checks(setup: &SetupConfig, n_samples: u64, seed: u64) -> Vec<OracleReport> {
    let mut out = Vec::new();
    for xi in PINNED_XI {
        let run = || -> Result<Vec<OracleReport>> {
            let model = BiphotonModel::from_setup(setup, xi)?;
            let hom = HomModel::new(&model)?;
            let mut v = Vec::new();
            for dt in pinned_delays(&model.timescales) {
                for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
                    let expected = hom.split_probability(scheme, dt);
                    let mc = monte_carlo_hom(&model, dt, scheme, n_samples, seed)?;
                    let mut r = OracleReport::compare(
                        "monte_carlo_w_split",
                        json!({ "xi": xi, "omega0_dt": dt, "scheme": scheme.label(), "n": n_samples, "seed": seed }),
                        expected,
                        mc.w_split,
                        0.0,
                        0.0,
                    );
                    r.pass = mc.agrees_with(expected, MC_SIGMAS);
                    v.push(r.with_note(format!("{} split / {} unsplit", mc.n_split, mc.n_unsplit)));
                }
            }
            Ok(v)
        };
        out.extend(guard("monte_carlo_w_split", json!({ "xi": xi }), run()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteOptions {
    /// Skip the Monte-Carlo runs.
    pub quick: bool,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            quick: false,
            mc_samples: 100_000,
            seed: 20_240_601,
        }
    }
}

/// All checks; failures are reported, never propagated.
pub fn run_suite(setup: &SetupConfig, opts: &SuiteOptions) -> Vec<OracleReport> {
    let mut out = guard("anchors", json!({}), anchor_checks(setup));
    out.extend(quadrature_checks(setup));
    out.extend(exact_sinc_checks(setup));
    out.extend(fft_checks(setup));
    if !opts.quick {
        out.extend(monte_carlo_checks(setup, opts.mc_samples, opts.seed));
    }
    out
}
