//! Feature extraction from sampled interference curves.
//!
//! Fringes are the local maxima of the curve; the envelope is traced by the
//! local maxima of the deviation from the curve's baseline (½ for
//! probabilities, 0 for densities). Combs are separated either by gaps
//! where the deviation is negligible or by valleys in the envelope.

use serde::Serialize;

use super::HomCurve;
use crate::{Result, Scalar, SpdcError};

/// Deviations below this fraction of the largest one are ignored.
pub const PEAK_THRESHOLD: f64 = 1e-3;

/// A valley must dip below this fraction of the lower neighbouring maximum
/// to separate two combs.
pub const VALLEY_RATIO: f64 = 0.98;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombReport<T> {
    /// Refined fringe maxima positions.
    pub peaks: Vec<T>,
    /// Median spacing of adjacent fringes.
    pub period: Option<T>,
    /// Full width at half maximum of the tallest comb's envelope.
    pub envelope_fwhm: Option<T>,
    pub comb_count: usize,
    pub comb_centers: Vec<T>,
    pub comb_separation: Option<T>,
}

impl<T> CombReport<T> {
    fn empty() -> Self {
        Self {
            peaks: Vec::new(),
            period: None,
            envelope_fwhm: None,
            comb_count: 0,
            comb_centers: Vec::new(),
            comb_separation: None,
        }
    }
}

/// Parabolic vertex through three equally spaced samples: (offset, value).
fn refine<T: Scalar>(l: T, c: T, r: T) -> (T, T) {
    let denom = l - T::two() * c + r;
    if denom == T::zero() {
        return (T::zero(), c);
    }
    let off = (T::half() * (l - r) / denom).max(-T::half()).min(T::half());
    (off, c - T::of(0.25) * (l - r) * off)
}

fn local_maxima<T: Scalar>(x: &[T], y: &[T], keep: impl Fn(usize) -> bool) -> Vec<(T, T)> {
    let dx = x[1] - x[0];
    (1..y.len() - 1)
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && keep(i))
        .map(|i| {
            let (off, v) = refine(y[i - 1], y[i], y[i + 1]);
            (x[i] + off * dx, v)
        })
        .collect()
}

fn median<T: Scalar>(mut v: Vec<T>) -> Option<T> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite spacings"));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) * T::half()
    })
}

/// Splits sorted points wherever consecutive positions are further apart
/// than `gap`.
fn clusters<T: Scalar>(points: &[(T, T)], gap: T) -> Vec<&[(T, T)]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..points.len() {
        if points[i].0 - points[i - 1].0 > gap {
            out.push(&points[start..i]);
            start = i;
        }
    }
    if !points.is_empty() {
        out.push(&points[start..]);
    }
    out
}

/// Modes of an envelope sequence, as their positions.
fn modes<T: Scalar>(env: &[(T, T)], window: T) -> Vec<T> {
    // Upper envelope: a running maximum over about one fringe period, which
    // flattens the alternation between fringe maxima and minima.
    let upper: Vec<(T, T)> = env
        .iter()
        .map(|&(x, _)| {
            let m = env
                .iter()
                .filter(|(xj, _)| (*xj - x).abs() <= window)
                .map(|&(_, v)| v)
                .fold(T::zero(), T::max);
            (x, m)
        })
        .collect();
    // Compress plateaus to (centre position, value).
    let mut runs: Vec<(T, T)> = Vec::new();
    let mut i = 0;
    while i < upper.len() {
        let mut j = i;
        while j + 1 < upper.len() && upper[j + 1].1 == upper[i].1 {
            j += 1;
        }
        runs.push(((upper[i].0 + upper[j].0) * T::half(), upper[i].1));
        i = j + 1;
    }
    let n = runs.len();
    let mut found: Vec<(T, T)> = Vec::new();
    let mut valley = T::infinity();
    for k in 0..n {
        let left_ok = k == 0 || runs[k].1 > runs[k - 1].1;
        let right_ok = k + 1 == n || runs[k].1 > runs[k + 1].1;
        if left_ok && right_ok {
            if let Some(last) = found.last_mut() {
                if valley >= T::of(VALLEY_RATIO) * last.1.min(runs[k].1) {
                    // too shallow a valley: same comb, keep the taller maximum
                    if runs[k].1 > last.1 {
                        *last = runs[k];
                    }
                    valley = T::infinity();
                    continue;
                }
            }
            found.push(runs[k]);
            valley = T::infinity();
        } else if !found.is_empty() {
            valley = valley.min(runs[k].1);
        }
    }
    found.into_iter().map(|(x, _)| x).collect()
}

/// FWHM of the envelope around its tallest point, within one cluster.
fn fwhm<T: Scalar>(env: &[(T, T)]) -> Option<T> {
    let (m, &(_, top)) = env
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).expect("finite envelope"))?;
    let half = top * T::half();
    let cross = |a: (T, T), b: (T, T)| a.0 + (b.0 - a.0) * (a.1 - half) / (a.1 - b.1);
    let right = (m + 1..env.len()).find(|&k| env[k].1 < half).map(|k| cross(env[k - 1], env[k]))?;
    let left = (0..m).rev().find(|&k| env[k].1 < half).map(|k| cross(env[k + 1], env[k]))?;
    Some(right - left)
}

/// Extracts fringes, period, envelope width and comb structure.
pub fn analyze_comb<T: Scalar>(curve: &HomCurve<T>) -> Result<CombReport<T>> {
    let (x, y) = (&curve.x, &curve.y);
    if x.len() != y.len() || x.len() < 3 {
        return Err(SpdcError::Resolution(format!("need at least 3 samples, got {}", x.len())));
    }
    let dx = x[1] - x[0];
    if !(dx > T::zero()) {
        return Err(SpdcError::Resolution("abscissa must be increasing".into()));
    }
    if curve.t_osc.is_finite() && dx > curve.t_osc / T::of(8.0) {
        return Err(SpdcError::Resolution(format!(
            "grid step {dx} exceeds T_osc/8 = {}",
            curve.t_osc / T::of(8.0)
        )));
    }
    let base = curve.baseline();
    let dev: Vec<T> = y.iter().map(|&v| (v - base).abs()).collect();
    let top = dev.iter().copied().fold(T::zero(), T::max);
    let scale = y.iter().fold(base.abs(), |m, v| m.max(v.abs())).max(T::one());
    if !(top > T::of(1e-12) * scale) {
        return Ok(CombReport::empty());
    }
    let thr = T::of(PEAK_THRESHOLD) * top;

    let peaks = local_maxima(x, y, |i| dev[i] >= thr);
    let envelope = local_maxima(x, &dev, |i| dev[i] >= thr);

    let gap = if curve.t_osc.is_finite() {
        T::two() * curve.t_osc
    } else {
        let spacing = median(envelope.windows(2).map(|w| w[1].0 - w[0].0).collect());
        spacing.map_or(T::infinity(), |s| T::of(3.0) * s)
    };
    let window = if curve.t_osc.is_finite() {
        T::of(0.6) * curve.t_osc
    } else {
        T::zero()
    };

    let groups = clusters(&envelope, gap);
    let mut centers = Vec::new();
    for g in &groups {
        centers.extend(modes(g, window));
    }
    let tallest = groups.iter().max_by(|a, b| {
        let ma = a.iter().map(|p| p.1).fold(T::zero(), T::max);
        let mb = b.iter().map(|p| p.1).fold(T::zero(), T::max);
        ma.partial_cmp(&mb).expect("finite envelope")
    });
    let envelope_fwhm = tallest.and_then(|g| fwhm(g));

    let spacings: Vec<T> = peaks
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .filter(|&s| s <= gap)
        .collect();
    let comb_count = centers.len();
    Ok(CombReport {
        period: median(spacings),
        envelope_fwhm,
        comb_count,
        comb_separation: (comb_count == 2).then(|| (centers[1] - centers[0]).abs()),
        comb_centers: centers,
        peaks: peaks.into_iter().map(|p| p.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::Scheme;
    use crate::hom::{CurveAxis, CurveKind};

    fn synthetic(xi: f64, width: f64, f: impl Fn(f64) -> f64) -> HomCurve<f64> {
        let t_osc = 2.0 * std::f64::consts::PI / xi;
        let x = crate::hom::symmetric_grid(6.0 * width.max(t_osc), t_osc / 32.0);
        let y = x.iter().map(|&t| f(t)).collect();
        HomCurve {
            kind: CurveKind::Density,
            axis: CurveAxis::ArrivalDifference,
            scheme: Scheme::FourSlit,
            xi,
            delay: None,
            t_osc,
            t_decoh: width,
            fragile: false,
            x,
            y,
        }
    }

    #[test]
    fn modulated_gaussian_period() {
        let xi = 0.3;
        let c = synthetic(xi, 2000.0, |t| (-(t / 2000.0).powi(2)).exp() * (xi * t / 2.0).cos().powi(2));
        let r = analyze_comb(&c).unwrap();
        let t_osc = 2.0 * std::f64::consts::PI / xi;
        assert!((r.period.unwrap() - t_osc).abs() < 1e-3 * t_osc);
        assert_eq!(r.comb_count, 1);
    }

    #[test]
    fn flat_curve_has_no_comb() {
        let c = synthetic(0.3, 10.0, |_| 0.0);
        let r = analyze_comb(&c).unwrap();
        assert_eq!(r.comb_count, 0);
        assert!(r.peaks.is_empty());
    }

    #[test]
    fn separated_combs_are_counted() {
        let xi = 0.5;
        let g = |t: f64| (-(t / 20.0).powi(2)).exp() * (xi * t / 2.0).cos().powi(2);
        let c = synthetic(xi, 60.0, |t| g(t - 150.0) + g(t + 150.0));
        let r = analyze_comb(&c).unwrap();
        assert_eq!(r.comb_count, 2);
        assert!((r.comb_separation.unwrap() - 300.0).abs() < 2.0 * 2.0 * std::f64::consts::PI / xi);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let mut c = synthetic(0.3, 10.0, |t| t.cos());
        c.t_osc = (c.x[1] - c.x[0]) * 4.0;
        assert!(matches!(analyze_comb(&c), Err(SpdcError::Resolution(_))));
    }

    #[test]
    fn gaussian_envelope_width() {
        let xi = 1.0;
        let w = 40.0;
        let c = synthetic(xi, w, |t| (-(t * t) / (2.0 * w * w)).exp() * (xi * t / 2.0).cos().powi(2));
        let r = analyze_comb(&c).unwrap();
        let expected = 2.0 * (2.0 * 2f64.ln()).sqrt() * w;
        assert!((r.envelope_fwhm.unwrap() - expected).abs() < 0.05 * expected);
    }
}
