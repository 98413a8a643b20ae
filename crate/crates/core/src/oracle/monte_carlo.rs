//! Split/unsplit counting on simulated pair detections.
//!
//! Arrival times are drawn from the pair density `N²(|F₁₂|² + |F₂₁|²)`: one
//! of the two pair paths is picked with probability ½, then (t₁, t₂) is
//! drawn from that path's |F|² (exactly for Gaussian profiles, by rejection
//! from the Gaussian envelope for the four-slit cosine). Each pair is then
//! counted as split with probability `|A_split|²/(|A_split|² + |A_unsplit|²)`
//! at its arrival times.
//!
//! Batches use independent ChaCha8 streams derived from the seed, so counts
//! do not depend on the number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::biphoton::{BiphotonModel, Scheme, SincKernel, TemporalWf};
use crate::hom::beamsplitter_amplitudes;
use crate::{Result, SpdcError};

pub const MIN_SAMPLES: u64 = 1_000;
const BATCH: u64 = 4_096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McRun {
    pub n_samples: u64,
    pub seed: u64,
    pub n_split: u64,
    pub n_unsplit: u64,
    pub w_split: f64,
    pub w_unsplit: f64,
    /// Binomial standard error of either estimate.
    pub std_err: f64,
}

impl McRun {
    fn from_counts(n_samples: u64, seed: u64, n_split: u64) -> Self {
        let n = n_samples as f64;
        let w = n_split as f64 / n;
        Self {
            n_samples,
            seed,
            n_split,
            n_unsplit: n_samples - n_split,
            w_split: w,
            w_unsplit: (n_samples - n_split) as f64 / n,
            std_err: (w * (1.0 - w) / n).sqrt(),
        }
    }

    /// Whether `expected` lies within `k` binomial standard errors, using the
    /// expected probability for the error so that w = 0 demands zero counts.
    pub fn agrees_with(&self, expected: f64, k: f64) -> bool {
        let sigma = (expected * (1.0 - expected) / self.n_samples as f64).sqrt();
        (self.w_split - expected).abs() <= k * sigma
    }
}

/// (t₁, t₂) from |F(t₁,t₂)|², centred at t₁ + t₂ = t₁ − t₂ = −Δt.
fn sample_path<R: Rng>(wf: &TemporalWf<f64>, rng: &mut R, sum: &Normal<f64>, diff: &Normal<f64>) -> (f64, f64) {
    loop {
        let t = sum.sample(rng);
        let x = diff.sample(rng);
        let accept = match wf.scheme {
            Scheme::TwoSlit => true,
            Scheme::FourSlit => {
                let c = (0.5 * wf.xi * (x + wf.delay)).cos();
                rng.random::<f64>() < c * c
            }
        };
        if accept {
            return (0.5 * (t + x), 0.5 * (t - x));
        }
    }
}

fn count_batch(wf: &TemporalWf<f64>, seed: u64, batch: u64, n: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    let sum = Normal::new(-wf.delay, std::f64::consts::SQRT_2 * wf.tau).expect("positive width");
    let diff = Normal::new(-wf.delay, wf.sigma).expect("positive width");
    let norm = wf.normalization();
    let mut split = 0;
    for _ in 0..n {
        let (mut t1, mut t2) = sample_path(wf, &mut rng, &sum, &diff);
        if rng.random::<bool>() {
            std::mem::swap(&mut t1, &mut t2);
        }
        let (u, s) = beamsplitter_amplitudes(wf.amplitude(t1, t2), wf.amplitude(t2, t1), norm);
        let (pu, ps) = (u.norm_sqr(), s.norm_sqr());
        let p = if pu + ps > 0.0 { ps / (pu + ps) } else { 0.5 };
        if rng.random::<f64>() < p {
            split += 1;
        }
    }
    split
}

/// Counts split and unsplit pairs among `n_samples` simulated detections.
pub fn monte_carlo_hom(model: &BiphotonModel<f64>, dt: f64, scheme: Scheme, n_samples: u64, seed: u64) -> Result<McRun> {
    if n_samples < MIN_SAMPLES {
        return Err(SpdcError::invalid("n_samples", format!("{n_samples} < {MIN_SAMPLES}")));
    }
    let wf = model.temporal(scheme, dt, SincKernel::GaussianModel)?;
    let batches = n_samples.div_ceil(BATCH);
    let n_split: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let n = BATCH.min(n_samples - b * BATCH);
            count_batch(&wf, seed, b, n)
        })
        .sum();
    Ok(McRun::from_counts(n_samples, seed, n_split))
}

/// Spread of estimates over seeds at each sample size, next to the binomial
/// prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McScaling {
    pub n: Vec<u64>,
    pub observed_std: Vec<f64>,
    pub binomial_std: Vec<f64>,
}

impl McScaling {
    /// Largest factor by which observed and predicted spreads differ.
    pub fn worst_ratio(&self) -> f64 {
        self.observed_std
            .iter()
            .zip(&self.binomial_std)
            .map(|(o, b)| (o / b).max(b / o))
            .fold(1.0, f64::max)
    }
}

pub fn monte_carlo_scaling(
    model: &BiphotonModel<f64>,
    dt: f64,
    scheme: Scheme,
    expected: f64,
    sizes: &[u64],
    seeds: u64,
) -> Result<McScaling> {
    let mut out = McScaling {
        n: sizes.to_vec(),
        observed_std: Vec::new(),
        binomial_std: Vec::new(),
    };
    for &n in sizes {
        let estimates = (0..seeds)
            .map(|s| monte_carlo_hom(model, dt, scheme, n, 1_000 + s).map(|r| r.w_split))
            .collect::<Result<Vec<f64>>>()?;
        let mean = estimates.iter().sum::<f64>() / seeds as f64;
        let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (seeds as f64 - 1.0);
        out.observed_std.push(var.sqrt());
        out.binomial_std.push((expected * (1.0 - expected) / n as f64).sqrt());
    }
    Ok(out)
}
