//! Scalar root finding, extremum location and adaptive quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Result, Scalar, SpdcError};

/// Brent's method on a bracketing interval `[a, b]`.
///
/// Converges when the bracket is narrower than `xtol` (absolute) or the
/// function value is exactly zero.
pub fn brent<T, F>(mut f: F, a: T, b: T, xtol: T, max_iter: usize) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if !fa.is_finite() || !fb.is_finite() || fa.signum() == fb.signum() {
        return Err(SpdcError::NoSignChange {
            lo: a.f64(),
            hi: b.f64(),
        });
    }

    let two = T::two();
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = two * T::epsilon() * b.abs() + T::half() * xtol;
        let m = T::half() * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when only two points are distinct
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            let three = T::of(3.0);
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        if d.abs() > tol {
            b = b + d;
        } else {
            b = b + if m > T::zero() { tol } else { -tol };
        }
        fb = f(b);
        if !fb.is_finite() {
            return Err(SpdcError::NonFinite(format!("function value at x = {}", b)));
        }
    }
    Ok(b)
}

/// Scans `n` uniform sub-intervals of `[a, b]` and returns the first one with
/// a sign change.
pub fn scan_bracket<T, F>(mut f: F, a: T, b: T, n: usize) -> Option<(T, T)>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let n = n.max(1);
    let step = (b - a) / T::of(n as f64);
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { b } else { a + step * T::of(i as f64) };
        let f1 = f(x1);
        if f0 == T::zero() {
            return Some((x0, x0));
        }
        if f0.is_finite() && f1.is_finite() && f0.signum() != f1.signum() {
            return Some((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == T::zero() {
        return Some((x0, x0));
    }
    None
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x, f(x))`.
pub fn golden_section_max<T, F>(mut f: F, a: T, b: T, xtol: T) -> (T, T)
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let inv_phi = (T::of(5.0).sqrt() - T::one()) * T::half();
    let (mut a, mut b) = (a, b);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut guard = 0;
    while (b - a).abs() > xtol && guard < 500 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        guard += 1;
    }
    let x = T::half() * (a + b);
    (x, f(x))
}

/// Locates the maximum of `f` over `[a, b]` by a uniform scan of `n` points
/// followed by golden-section refinement around the best grid point.
pub fn grid_then_golden_max<T, F>(mut f: F, a: T, b: T, n: usize, xtol: T) -> (T, T)
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let n = n.max(3);
    let step = (b - a) / T::of((n - 1) as f64);
    let mut best = (0usize, T::neg_infinity());
    for i in 0..n {
        let x = a + step * T::of(i as f64);
        let v = f(x);
        if v > best.1 {
            best = (i, v);
        }
    }
    let lo = if best.0 == 0 { a } else { a + step * T::of((best.0 - 1) as f64) };
    let hi = if best.0 == n - 1 { b } else { a + step * T::of((best.0 + 1) as f64) };
    let (x, v) = golden_section_max(&mut f, lo, hi, xtol);
    if v >= best.1 {
        (x, v)
    } else {
        (a + step * T::of(best.0 as f64), best.1)
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule (abscissae and weights
// on [-1, 1], non-negative half).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss–Kronrod 7/15 panel: `(kronrod estimate, |kronrod - gauss|)`.
pub fn gauss_kronrod_15<T, F>(f: &mut F, a: T, b: T) -> (T, T)
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let center = T::half() * (a + b);
    let half = T::half() * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::of(WGK[7]);
    let mut gauss = fc * T::of(WG[3]);
    for j in 0..7 {
        let dx = half * T::of(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::of(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::of(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar> Eq for Panel<T> {}
impl<T: Scalar> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
}

/// Globally adaptive Gauss–Kronrod integrator.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol·|I|)`.
#[derive(Debug, Clone, Copy)]
pub struct Integrator<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_panels: usize,
}

impl<T: Scalar> Default for Integrator<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::of(1e-12),
            rel_tol: T::of(1e-10),
            max_panels: 20_000,
        }
    }
}

impl<T: Scalar> Integrator<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    pub fn integrate<F>(&self, f: F, a: T, b: T) -> Result<Quadrature<T>>
    where
        F: FnMut(T) -> T,
    {
        self.integrate_with_breaks(f, &[a, b])
    }

    /// Integrates over `[breaks[0], breaks[last]]`, starting from one panel
    /// per consecutive pair of break points. Break points must be sorted.
    pub fn integrate_with_breaks<F>(&self, mut f: F, breaks: &[T]) -> Result<Quadrature<T>>
    where
        F: FnMut(T) -> T,
    {
        if breaks.len() < 2 {
            return Err(SpdcError::invalid("breaks", "need at least two break points"));
        }
        let mut heap = BinaryHeap::with_capacity(breaks.len() * 4);
        let mut total = T::zero();
        let mut total_err = T::zero();
        for w in breaks.windows(2) {
            if w[1] == w[0] {
                continue;
            }
            let (value, error) = gauss_kronrod_15(&mut f, w[0], w[1]);
            total = total + value;
            total_err = total_err + error;
            heap.push(Panel {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }

        loop {
            if !total.is_finite() {
                return Err(SpdcError::NonFinite("quadrature estimate".into()));
            }
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if total_err <= target {
                break;
            }
            if heap.len() >= self.max_panels {
                return Err(SpdcError::Quadrature {
                    estimate: total.f64(),
                    error: total_err.f64(),
                    tolerance: target.f64(),
                });
            }
            let worst = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            let mid = T::half() * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // panel cannot be split further in this precision
                return Err(SpdcError::Quadrature {
                    estimate: total.f64(),
                    error: total_err.f64(),
                    tolerance: target.f64(),
                });
            }
            let (v1, e1) = gauss_kronrod_15(&mut f, worst.a, mid);
            let (v2, e2) = gauss_kronrod_15(&mut f, mid, worst.b);
            total = total - worst.value + v1 + v2;
            total_err = total_err - worst.error + e1 + e2;
            heap.push(Panel {
                a: worst.a,
                b: mid,
                value: v1,
                error: e1,
            });
            heap.push(Panel {
                a: mid,
                b: worst.b,
                value: v2,
                error: e2,
            });
        }

        // re-sum to shed the drift of the incremental updates
        let mut value = T::zero();
        let mut error = T::zero();
        let mut comp = T::zero();
        for p in heap.iter() {
            let y = p.value - comp;
            let t = value + y;
            comp = (t - value) - y;
            value = t;
            error = error + p.error;
        }
        Ok(Quadrature {
            value,
            error,
            panels: heap.len(),
        })
    }
}

/// Uniform break points covering `[a, b]` with panels no wider than `width`.
pub fn uniform_breaks<T: Scalar>(a: T, b: T, width: T) -> Vec<T> {
    let n = ((b - a) / width).ceil().to_usize().unwrap_or(1).max(1);
    let step = (b - a) / T::of(n as f64);
    (0..=n)
        .map(|i| if i == n { b } else { a + step * T::of(i as f64) })
        .collect()
}
