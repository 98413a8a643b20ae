//! Split probabilities by direct integration of |A_split|² over arrival times.

use num_complex::Complex;
use serde::Serialize;

use crate::biphoton::{BiphotonModel, Scheme, SincKernel, TemporalWf};
use crate::hom::beamsplitter_amplitudes;
use crate::numeric::{uniform_breaks, Integrator, Quadrature};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Half-width of the domain in standard deviations of |F|².
    pub width_multiple: f64,
    /// Tolerance of the outer (t₁ − t₂) integral relative to the norm.
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Tolerance of the inner (t₁ + t₂) integral.
    pub inner_rel_tol: f64,
    /// Largest outer panel, in units of T_osc.
    pub max_panel_periods: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            width_multiple: 8.0,
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            inner_rel_tol: 1e-11,
            max_panel_periods: 4.0,
            max_panels: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub w_split: f64,
    pub w_unsplit: f64,
    /// N from the integrated ∫∫|F|².
    pub normalization: f64,
    /// Largest reported error estimate, relative to ∫∫|F|².
    pub error: f64,
}

/// Integration limits and break points of the (t₁ + t₂, t₁ − t₂) domain.
struct Domain {
    sum: (f64, f64),
    diff_breaks: Vec<f64>,
}

fn domain(wf: &TemporalWf<f64>, model: &BiphotonModel<f64>, spec: &QuadratureSpec) -> Domain {
    let dt = wf.delay;
    // |F|² ∝ exp(−(T+Δt)²/4τ²): standard deviation √2·τ
    let w_sum = spec.width_multiple * std::f64::consts::SQRT_2 * wf.tau;
    let sum = (-dt - w_sum, -dt + w_sum);
    let t_osc = model.timescales.t_osc;
    // The two pair paths are centred at t₁ − t₂ = ∓Δt.
    let (lo, hi, mut edges) = match wf.kernel {
        SincKernel::GaussianModel => {
            let w = spec.width_multiple * wf.sigma;
            (-dt.abs() - w, dt.abs() + w, Vec::new())
        }
        SincKernel::Exact => {
            let e = 2.0 * wf.beta.abs();
            (-dt.abs() - e, dt.abs() + e, vec![-e - dt, e - dt, dt - e, dt + e])
        }
    };
    let mut breaks = uniform_breaks(lo, hi, spec.max_panel_periods * t_osc);
    breaks.append(&mut edges);
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breaks"));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    Domain { sum, diff_breaks: breaks }
}

/// ∫∫ g(F₁₂, F₂₁) dt₁dt₂ with dt₁dt₂ = ½ d(t₁+t₂) d(t₁−t₂).
///
/// `peak` bounds |g|; it sets the absolute floor of the inner integral so
/// that slices where g vanishes to round-off do not chase relative accuracy.
fn integrate_pairs<G>(
    wf: &TemporalWf<f64>,
    dom: &Domain,
    spec: &QuadratureSpec,
    outer_abs: f64,
    peak: f64,
    g: G,
) -> Result<Quadrature<f64>>
where
    G: Fn(Complex<f64>, Complex<f64>) -> f64 + Sync,
{
    let width = dom.sum.1 - dom.sum.0;
    let inner_breaks = uniform_breaks(dom.sum.0, dom.sum.1, width / 4.0);
    let inner = Integrator::new(spec.inner_rel_tol * peak * width, spec.inner_rel_tol).with_max_panels(spec.max_panels);
    let outer = Integrator::new(outer_abs, spec.rel_tol).with_max_panels(spec.max_panels);
    let mut failure = None;
    let q = outer.integrate_with_breaks(
        |x| {
            let r = inner.integrate_with_breaks(
                |t| {
                    let (t1, t2) = ((t + x) * 0.5, (t - x) * 0.5);
                    g(wf.amplitude(t1, t2), wf.amplitude(t2, t1))
                },
                &inner_breaks,
            );
            match r {
                Ok(q) => 0.5 * q.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &dom.diff_breaks,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    q
}

/// w_split and w_unsplit from the temporal amplitudes, with the
/// normalization itself integrated rather than taken from closed form.
pub fn quadrature_split_probability(
    model: &BiphotonModel<f64>,
    dt: f64,
    scheme: Scheme,
    kernel: SincKernel,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let wf = model.temporal(scheme, dt, kernel)?;
    let dom = domain(&wf, model, spec);
    // Rough magnitude of ∫∫|F|² for the absolute tolerance: peak × area.
    let scale = (dom.sum.1 - dom.sum.0) * wf.sigma.max(wf.beta.abs());

    let norm_q = integrate_pairs(&wf, &dom, spec, spec.abs_tol * scale, 1.0, |a, _| a.norm_sqr())?;
    let n = (2.0 * norm_q.value).sqrt().recip();
    let split_q = integrate_pairs(&wf, &dom, spec, 0.1 * spec.abs_tol, 4.0 * n * n, |a, b| beamsplitter_amplitudes(a, b, n).1.norm_sqr())?;
    let unsplit_q = integrate_pairs(&wf, &dom, spec, 0.1 * spec.abs_tol, 4.0 * n * n, |a, b| beamsplitter_amplitudes(a, b, n).0.norm_sqr())?;
    let error = [norm_q.error / norm_q.value, split_q.error, unsplit_q.error]
        .into_iter()
        .fold(0.0, f64::max);
    Ok(QuadratureResult {
        w_split: split_q.value,
        w_unsplit: unsplit_q.value,
        normalization: n,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SetupConfig;
    use crate::hom::HomModel;

    #[test]
    fn two_slit_matches_closed_form() {
        let setup = SetupConfig::default();
        let model = BiphotonModel::from_setup(&setup, 0.04).unwrap();
        let hom = HomModel::new(&model).unwrap();
        for dt in [0.0, 60.0] {
            let q = quadrature_split_probability(&model, dt, Scheme::TwoSlit, SincKernel::GaussianModel, &QuadratureSpec::default())
                .unwrap();
            let a = hom.split_probability_two_slit(dt);
            assert!(((q.w_split - a) / a).abs() < 1e-8, "{dt}: {} vs {a}", q.w_split);
            assert!((q.w_split + q.w_unsplit - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn four_slit_dip_is_exactly_zero() {
        let model = BiphotonModel::from_setup(&SetupConfig::default(), 0.1).unwrap();
        let q = quadrature_split_probability(&model, 0.0, Scheme::FourSlit, SincKernel::GaussianModel, &QuadratureSpec::default())
            .unwrap();
        assert_eq!(q.w_split, 0.0);
    }
}
