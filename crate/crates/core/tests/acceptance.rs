//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use spdc_core::{BiphotonModel, HomModel};
use spdc_core::groupdelay::a_minus_zero;
use spdc_core::hom::{analyze_comb, CurveKind};
use spdc_core::oracle::{self, pinned_delays, SuiteOptions, PINNED_XI};
use spdc_core::phasematch::{collinear_angle_range, effective_index_maximum, sideband_wavelengths, xi_max};
use spdc_core::{CrystalDispersion, Scheme, SetupConfig, SincKernel};

/// ξ of the narrow four-slit curve compared with ξ = 0.04.
const NARROW_XI: f64 = 0.81397;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if elapsed > budget {
        o.pass = false;
    }
    o.detail = format!("{} [{:.2} s / {:.0} s]", o.detail, elapsed.as_secs_f64(), budget.as_secs_f64());
    o
}

fn setup() -> SetupConfig {
    SetupConfig::default()
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(1), || {
        let c = CrystalDispersion::bbo();
        let xm = xi_max(&c, 0.4047);
        let (_, lm) = sideband_wavelengths(0.4047, xm);
        outcome(
            within(xm, 0.9391, 1e-3) && within(lm, 13.29, 0.02),
            format!("xi_max = {xm:.5}, lambda_- = {lm:.4} um"),
        )
    })
}

fn criterion_2() -> Outcome {
    timed(Duration::from_secs(5), || {
        let c = CrystalDispersion::bbo();
        let r = collinear_angle_range(&c, 0.4047).unwrap();
        let (xi_n, _) = effective_index_maximum(&c, 0.4047).unwrap();
        let zero = a_minus_zero(&c, 0.4047, 0.5, 0.93).unwrap();
        let pass = within(r.phi_min, 0.37734, 3e-3)
            && within(r.phi_max, 0.678486, 3e-3)
            && within(xi_n, 0.8142, 5e-3)
            && within(zero, 0.8142, 5e-3)
            && within(r.xi_at_min, 0.8142, 5e-3);
        outcome(
            pass,
            format!(
                "phi_coll in [{:.5}, {:.5}], n_eff max at {xi_n:.5}, A_- zero at {zero:.5}, phi_coll min at {:.5}",
                r.phi_min, r.phi_max, r.xi_at_min
            ),
        )
    })
}

fn criterion_3() -> Outcome {
    let w1 = HomModel::from_setup(&setup(), 0.01).unwrap().split_probability_two_slit(0.0);
    let w4 = HomModel::from_setup(&setup(), 0.04).unwrap().split_probability_two_slit(0.0);
    let depth = 0.5 - w4;
    outcome(
        w1 < 0.02 && depth < 0.05,
        format!("w_split(xi=0.01) = {w1:.5}, dip depth(xi=0.04) = {depth:.5}"),
    )
}

fn criterion_4() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut worst = 0.0f64;
        for xi in [0.04, 0.1, 0.6, 0.807, 0.81, 0.813] {
            let w = HomModel::from_setup(&setup(), xi).unwrap().split_probability_four_slit(0.0);
            worst = worst.max(w.abs());
        }
        outcome(worst < 1e-10, format!("max four-slit w_split(0) = {worst:e}"))
    })
}

fn four_slit_curve(xi: f64) -> spdc_core::HomCurve {
    let h = HomModel::from_setup(&setup(), xi).unwrap();
    h.probability_curve(Scheme::FourSlit, CurveKind::SplitProbability, h.default_grid())
        .unwrap()
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for xi in [0.1, 0.6] {
        let c = four_slit_curve(xi);
        let r = analyze_comb(&c).unwrap();
        let period = r.period.unwrap_or(f64::NAN);
        let err = (period / c.t_osc - 1.0).abs();
        pass &= err < 0.02;
        parts.push(format!("period(xi={xi}) off by {:.3}%", 100.0 * err));
    }
    let wide = analyze_comb(&four_slit_curve(0.04)).unwrap().envelope_fwhm;
    let narrow = analyze_comb(&four_slit_curve(NARROW_XI)).unwrap().envelope_fwhm;
    let ratio = match (wide, narrow) {
        (Some(a), Some(b)) => a / b,
        _ => f64::NAN,
    };
    pass &= within(ratio, 20.0, 4.0);
    parts.push(format!("envelope ratio xi=0.04 / xi={NARROW_XI}: {ratio:.2}"));
    outcome(pass, parts.join(", "))
}

fn criterion_6() -> Outcome {
    timed(Duration::from_secs(60), || {
        let reports = oracle::run_suite(&setup(), &SuiteOptions::default());
        let wanted = |c: &str| c.starts_with("quadrature_w_split") || c == "fft_temporal_wf" || c == "monte_carlo_w_split";
        let relevant: Vec<_> = reports.iter().filter(|r| wanted(&r.check)).collect();
        let failed: Vec<String> = relevant
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{} {}", r.check, r.params))
            .collect();
        let worst_quad = relevant
            .iter()
            .filter(|r| r.check == "quadrature_w_split")
            .map(|r| r.rel_err)
            .fold(0.0, f64::max);
        let worst_fft = relevant
            .iter()
            .filter(|r| r.check == "fft_temporal_wf")
            .map(|r| r.rel_err)
            .fold(0.0, f64::max);
        outcome(
            failed.is_empty() && relevant.len() == 120,
            format!(
                "{} checks, worst quadrature rel {worst_quad:.1e}, worst FFT rel {worst_fft:.1e}{}",
                relevant.len(),
                if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join("; ")) }
            ),
        )
    })
}

/// Largest delay on a fine scan at which the four-slit density still forms
/// a single comb.
fn merge_threshold(h: &HomModel) -> f64 {
    let t_decoh = h.timescales.t_decoh;
    let grid = spdc_core::hom::symmetric_grid(3.0 * t_decoh + 8.0 * h.sigma, h.timescales.t_osc / 32.0);
    let mut last_single = 0.0;
    for k in 1..=300 {
        let dt = t_decoh * (0.2 + 1.8 * k as f64 / 300.0);
        let c = h.density_curve(Scheme::FourSlit, dt, grid.clone(), None).unwrap();
        if analyze_comb(&c).unwrap().comb_count <= 1 {
            last_single = dt;
        }
    }
    last_single
}

fn criterion_7() -> Outcome {
    let xi = 0.1;
    let h = HomModel::from_setup(&setup(), xi).unwrap();
    let t_decoh = h.timescales.t_decoh;
    let mut pass = true;
    let mut parts = Vec::new();

    let dt = 3.0 * t_decoh;
    let grid = h.default_grid();
    let c = h.density_curve(Scheme::FourSlit, dt, grid.clone(), None).unwrap();
    let r = analyze_comb(&c).unwrap();
    let centred = r.comb_count == 2
        && r.comb_centers.iter().any(|&x| (x + dt).abs() < h.timescales.t_osc)
        && r.comb_centers.iter().any(|&x| (x - dt).abs() < h.timescales.t_osc);
    pass &= centred;
    parts.push(format!("combs at {:?} for dt = {dt:.1}", r.comb_centers.iter().map(|x| x.round()).collect::<Vec<_>>()));

    let thr = merge_threshold(&h);
    pass &= within(thr / t_decoh, 1.0, 0.2);
    parts.push(format!("merge threshold {:.3} T_decoh", thr / t_decoh));

    let zero4 = grid.iter().map(|&x| h.density_four_slit_raw(0.0, x).abs()).fold(0.0, f64::max);
    let zero2 = (0..50)
        .map(|k| h.density_two_slit_raw(k as f64 * 17.0, 0.0).abs())
        .fold(0.0, f64::max);
    pass &= zero4 == 0.0 && zero2 == 0.0;
    parts.push(format!("four-slit density at dt=0 max {zero4:e}, two-slit at t1=t2 max {zero2:e}"));
    outcome(pass, parts.join(", "))
}

fn criterion_8() -> Outcome {
    let mut worst_sum = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut in_range = true;
    for xi in PINNED_XI {
        let model = BiphotonModel::from_setup(&setup(), xi).unwrap();
        let h = HomModel::new(&model).unwrap();
        for dt in pinned_delays(&model.timescales) {
            for scheme in [Scheme::TwoSlit, Scheme::FourSlit] {
                let (w, u) = (h.split_probability(scheme, dt), h.unsplit_probability(scheme, dt));
                worst_sum = worst_sum.max((w + u - 1.0).abs());
                in_range &= (0.0..=1.0).contains(&w) && (0.0..=1.0).contains(&u);
                let wf = model.temporal(scheme, dt, SincKernel::GaussianModel).unwrap();
                let n = wf.normalization();
                let q = wf.normalize_numerically().unwrap();
                worst_norm = worst_norm.max(((n - q) / n).abs());
            }
        }
    }
    outcome(
        worst_sum <= 1e-12 && in_range && worst_norm <= 1e-8,
        format!("|w_s + w_u - 1| <= {worst_sum:e}, normalization rel err <= {worst_norm:.1e}, probabilities in [0,1]: {in_range}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("xi_max anchor", criterion_1),
        ("collinear-locus anchors", criterion_2),
        ("two-slit HOM dip degradation", criterion_3),
        ("four-slit interference restoration", criterion_4),
        ("comb metrology", criterion_5),
        ("oracle equivalence", criterion_6),
        ("coincidence-density structure", criterion_7),
        ("normalization/probability invariants", criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {} ({name}): {} - {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
