use clap::ValueEnum;
use serde::Serialize;
use spdc_core::groupdelay::{a_minus, coefficients, for_setup};
use spdc_core::output::{fmt_sig, Table};
use spdc_core::phasematch::{collinear_angle, effective_index, effective_index_n, theta0, xi_max};
use spdc_core::{HomModel, Regime, Scheme, SetupConfig, SpdcError};

use crate::artifact::Artifact;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    #[value(name = "n_eff")]
    NEff,
    #[value(name = "N_eff")]
    BigNEff,
    #[value(name = "theta0")]
    Theta0,
    #[value(name = "theta_pm")]
    ThetaPm,
    #[value(name = "phi0_coll")]
    Phi0Coll,
    #[value(name = "A_plus")]
    APlus,
    #[value(name = "A_minus")]
    AMinus,
    #[value(name = "T_osc")]
    TOsc,
    #[value(name = "T_decoh")]
    TDecoh,
    #[value(name = "w_split_2")]
    WSplit2,
    #[value(name = "w_split_4")]
    WSplit4,
}

impl Quantity {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::NEff => &["n_eff"],
            Quantity::BigNEff => &["N_eff"],
            Quantity::Theta0 => &["theta0"],
            Quantity::ThetaPm => &["theta_plus", "theta_minus"],
            Quantity::Phi0Coll => &["phi0_coll"],
            Quantity::APlus => &["A_plus"],
            Quantity::AMinus => &["A_minus"],
            Quantity::TOsc => &["omega0_T_osc"],
            Quantity::TDecoh => &["omega0_T_decoh"],
            Quantity::WSplit2 => &["w_split_2"],
            Quantity::WSplit4 => &["w_split_4"],
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Xi,
    Phi0,
    Dt,
}

impl Axis {
    fn column(self) -> &'static str {
        match self {
            Axis::Xi => "xi",
            Axis::Phi0 => "phi0",
            Axis::Dt => "omega0_dt",
        }
    }
}

/// A uniform sweep of one quantity; the parameters off the axis stay fixed.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub axis: Axis,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub xi: f64,
    pub phi0: f64,
    pub dt: f64,
}

impl SweepSpec {
    /// Fills the range from the axis defaults where not given.
    pub fn new(
        quantity: Quantity,
        axis: Axis,
        range: (Option<f64>, Option<f64>),
        points: usize,
        fixed: (Option<f64>, Option<f64>, Option<f64>),
        setup: &SetupConfig,
    ) -> CliResult<Self> {
        let crystal = setup.crystal.resolve()?;
        let (lo, hi) = match axis {
            Axis::Xi => (0.0, xi_max(&crystal, setup.lambda_p_um)),
            Axis::Phi0 => (0.35, 0.8),
            Axis::Dt => (0.0, 2000.0),
        };
        let spec = Self {
            quantity,
            axis,
            from: range.0.unwrap_or(lo),
            to: range.1.unwrap_or(hi),
            points,
            xi: fixed.0.unwrap_or(0.2),
            phi0: fixed.1.unwrap_or(setup.phi0_rad),
            dt: fixed.2.unwrap_or(0.0),
        };
        if points < 2 {
            return Err(CliError::Validation(format!("--points must be at least 2, got {points}")));
        }
        if !(spec.from.is_finite() && spec.to.is_finite() && spec.from < spec.to) {
            return Err(CliError::Validation(format!(
                "sweep range must satisfy from < to, got [{}, {}]",
                spec.from, spec.to
            )));
        }
        Ok(spec)
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| self.from + (self.to - self.from) * i as f64 / (self.points - 1) as f64)
            .collect()
    }
}

fn evaluate(q: Quantity, setup: &SetupConfig, xi: f64, phi0: f64, dt: f64) -> spdc_core::Result<Vec<f64>> {
    let crystal = setup.crystal.resolve()?;
    let lp = setup.lambda_p_um;
    let forbidden_check = || -> spdc_core::Result<f64> {
        let t = theta0(&crystal, lp, phi0, xi)?;
        if t.regime == Regime::Forbidden {
            return Err(SpdcError::Forbidden {
                phi0,
                xi,
                index_gap: -t.index_gap(),
            });
        }
        Ok(t.theta0)
    };
    Ok(match q {
        Quantity::NEff => vec![effective_index(&crystal, lp, xi)?],
        Quantity::BigNEff => vec![effective_index_n(&crystal, lp, xi)?],
        Quantity::Theta0 => vec![forbidden_check()?],
        Quantity::ThetaPm => {
            let t = forbidden_check()?;
            vec![t / (1.0 + xi), t / (1.0 - xi)]
        }
        Quantity::Phi0Coll => vec![collinear_angle(&crystal, lp, xi)?],
        Quantity::APlus => vec![coefficients(&crystal, lp, phi0, xi)?.a_plus],
        Quantity::AMinus => vec![a_minus(&crystal, lp, xi)?],
        Quantity::TOsc | Quantity::TDecoh => {
            let (_, ts) = for_setup(&crystal, lp, setup.length_um(), phi0, xi)?;
            vec![if q == Quantity::TOsc { ts.t_osc } else { ts.t_decoh }]
        }
        Quantity::WSplit2 | Quantity::WSplit4 => {
            let s = SetupConfig {
                phi0_rad: phi0,
                ..setup.clone()
            };
            let scheme = if q == Quantity::WSplit2 { Scheme::TwoSlit } else { Scheme::FourSlit };
            vec![HomModel::from_setup(&s, xi)?.split_probability(scheme, dt)]
        }
    })
}

fn status(e: &SpdcError) -> &'static str {
    match e {
        SpdcError::Forbidden { .. } => "forbidden",
        SpdcError::Collinear { .. } => "collinear",
        SpdcError::Transparency { .. } | SpdcError::DerivativeDomain { .. } => "opaque",
        SpdcError::NoCollinearSolution { .. } => "no_solution",
        SpdcError::UnsupportedRegime { .. } => "short_pulse",
        SpdcError::DegenerateWidth { .. } => "degenerate",
        _ => "invalid",
    }
}

pub fn run(spec: &SweepSpec, setup: &SetupConfig) -> Artifact {
    let value_cols = spec.quantity.columns();
    let mut cols = vec![spec.axis.column()];
    cols.extend(value_cols);
    let mut t = Table::new(&cols)
        .with_meta("quantity", spec.quantity.name())
        .with_meta("axis", spec.axis.column());
    for (axis, key, v) in [(Axis::Xi, "xi", spec.xi), (Axis::Phi0, "phi0", spec.phi0), (Axis::Dt, "omega0_dt", spec.dt)] {
        if axis != spec.axis {
            t = t.with_meta(key, fmt_sig(v));
        }
    }
    let mut flags = Vec::with_capacity(spec.points);
    for v in spec.grid() {
        let (xi, phi0, dt) = match spec.axis {
            Axis::Xi => (v, spec.phi0, spec.dt),
            Axis::Phi0 => (spec.xi, v, spec.dt),
            Axis::Dt => (spec.xi, spec.phi0, v),
        };
        let mut row = vec![Some(v)];
        match evaluate(spec.quantity, setup, xi, phi0, dt) {
            Ok(vals) => {
                row.extend(vals.into_iter().map(Some));
                flags.push("ok".to_string());
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(None, value_cols.len()));
                flags.push(status(&e).to_string());
            }
        }
        t.push(row);
    }
    let mut a = Artifact::new(
        format!("sweep_{}_{}", spec.quantity.name(), spec.axis.column()),
        format!("{} vs {}", spec.quantity.name(), spec.axis.column()),
        t,
    )
    .labels(spec.axis.column(), &spec.quantity.name())
    .trace_all();
    a.status = Some(flags);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(q: Quantity, axis: Axis, range: (Option<f64>, Option<f64>), points: usize, fixed: (Option<f64>, Option<f64>, Option<f64>)) -> Artifact {
        let setup = SetupConfig::default();
        let spec = SweepSpec::new(q, axis, range, points, fixed, &setup).unwrap();
        run(&spec, &setup)
    }

    #[test]
    fn a_minus_changes_sign_near_special_point() {
        let a = sweep(Quantity::AMinus, Axis::Xi, (Some(0.0), Some(0.93)), 500, (None, None, None));
        let xs = a.table.column("xi").unwrap();
        let ys = a.table.column("A_minus").unwrap();
        let crossings: Vec<f64> = (1..ys.len())
            .filter(|&i| matches!((ys[i - 1], ys[i]), (Some(p), Some(q)) if p * q < 0.0))
            .map(|i| xs[i].unwrap())
            .collect();
        assert_eq!(crossings.len(), 1, "{crossings:?}");
        assert!((crossings[0] - 0.8142).abs() < 0.005);
    }

    #[test]
    fn forbidden_points_are_flagged() {
        let a = sweep(Quantity::ThetaPm, Axis::Phi0, (Some(0.3), Some(0.7)), 41, (Some(0.2), None, None));
        let status = a.status.unwrap();
        assert!(status.iter().any(|s| s == "forbidden"));
        assert!(status.iter().any(|s| s == "ok"));
        let first = &a.table.rows[0];
        assert_eq!(first[1], None);
        assert_eq!(first[2], None);
        assert_eq!(a.table.columns, ["phi0", "theta_plus", "theta_minus"]);
    }

    #[test]
    fn four_slit_sweep_over_delay_is_a_dip() {
        let a = sweep(Quantity::WSplit4, Axis::Dt, (Some(-500.0), Some(500.0)), 101, (Some(0.04), None, None));
        let w = a.table.column("w_split_4").unwrap();
        assert_eq!(w[50], Some(0.0));
        assert!(w.iter().all(|v| v.unwrap() <= 1.0));
    }

    #[test]
    fn rejects_bad_ranges() {
        let setup = SetupConfig::default();
        assert!(SweepSpec::new(Quantity::NEff, Axis::Xi, (Some(0.5), Some(0.1)), 10, (None, None, None), &setup).is_err());
        assert!(SweepSpec::new(Quantity::NEff, Axis::Xi, (None, None), 1, (None, None, None), &setup).is_err());
    }
}
