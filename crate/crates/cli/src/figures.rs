use serde_json::{json, Value};
use spdc_core::groupdelay::{a_minus, coefficients, for_setup};
use spdc_core::hom::{analyze_comb, symmetric_grid};
use spdc_core::output::{fmt_sig, Table};
use spdc_core::phasematch::{collinear_angle, cone_geometry, effective_index, effective_index_n, theta0, xi_max};
use spdc_core::{BiphotonModel, CrystalDispersion, CurveKind, HomCurve, HomModel, Scheme, SetupConfig};

use crate::artifact::Artifact;
use crate::error::{CliError, CliResult};
use crate::presets::{self, FigurePreset, Panel, PanelSpec};

/// Points on ξ axes.
const XI_POINTS: usize = 401;
/// Points around a cone cross-section.
const CONE_POINTS: usize = 181;

/// Flag values that replace preset parameters.
#[derive(Debug, Clone, Copy, Default)]
pub struct FigureOverrides {
    pub xi: Option<f64>,
    pub phi0: Option<f64>,
    pub dt: Option<f64>,
    pub scheme: Option<Scheme>,
}

impl FigureOverrides {
    pub fn to_json(self) -> Value {
        json!({
            "xi": self.xi,
            "phi0": self.phi0,
            "dt": self.dt,
            "scheme": self.scheme.map(|s| s.label()),
        })
    }

    fn xi(&self, preset: f64) -> f64 {
        self.xi.unwrap_or(preset)
    }

    fn phi0(&self, preset: f64) -> f64 {
        self.phi0.unwrap_or(preset)
    }

    fn xis(&self, preset: &[f64]) -> Vec<f64> {
        self.xi.map_or_else(|| preset.to_vec(), |x| vec![x])
    }

    fn phis(&self, preset: &[f64]) -> Vec<f64> {
        self.phi0.map_or_else(|| preset.to_vec(), |p| vec![p])
    }

    fn scheme(&self, preset: Scheme) -> Scheme {
        self.scheme.unwrap_or(preset)
    }
}

pub fn select_panels(fig: &'static FigurePreset, panel: Option<&str>) -> CliResult<Vec<&'static Panel>> {
    match panel {
        None => Ok(fig.panels.iter().collect()),
        Some(name) => fig
            .panels
            .iter()
            .find(|p| p.name == name)
            .map(|p| vec![p])
            .ok_or_else(|| {
                let names: Vec<_> = fig.panels.iter().map(|p| p.name).filter(|n| !n.is_empty()).collect();
                CliError::Validation(if names.is_empty() {
                    format!("{} has no panels", fig.id)
                } else {
                    format!("{} has no panel `{name}` (panels: {})", fig.id, names.join(", "))
                })
            }),
    }
}

pub fn lookup(id: &str) -> CliResult<&'static FigurePreset> {
    presets::find(id).ok_or_else(|| {
        let ids: Vec<_> = presets::FIGURES.iter().map(|f| f.id).collect();
        CliError::Validation(format!("unknown figure `{id}` (expected one of {})", ids.join(", ")))
    })
}

pub fn render(
    fig: &FigurePreset,
    panel: &Panel,
    setup: &SetupConfig,
    ov: &FigureOverrides,
) -> CliResult<Artifact> {
    let ctx = Context::new(setup)?;
    let stem = if panel.name.is_empty() {
        fig.id.to_string()
    } else {
        format!("{}_{}", fig.id, panel.name)
    };
    let title = if panel.name.is_empty() {
        format!("{}: {}", fig.id, fig.title)
    } else {
        format!("{}({}): {}", fig.id, panel.name, fig.title)
    };
    let mut a = match panel.spec {
        PanelSpec::EffectiveIndex => ctx.effective_index()?,
        PanelSpec::CollinearAngle => ctx.collinear_angle(),
        PanelSpec::Cones { phi0, xi } => ctx.cones(ov.phi0(phi0), ov.xi(xi))?,
        PanelSpec::ConeAngles { phi0 } => ctx.cone_angles(&ov.phis(phi0)),
        PanelSpec::SlitSelection { phi0, xi0 } => ctx.slit_selection(ov.phi0(phi0), ov.xi(xi0))?,
        PanelSpec::GroupDelay { phi0 } => ctx.group_delay(&ov.phis(phi0)),
        PanelSpec::SlitRays { scheme, phi0, xi } => ctx.slit_rays(ov.scheme(scheme), ov.phi0(phi0), ov.xi(xi))?,
        PanelSpec::BeamSplitter { xi } => ctx.beamsplitter(ov.xi(xi))?,
        PanelSpec::SplitVsDelay { scheme, xi } => ctx.split_vs_delay(ov.scheme(scheme), &ov.xis(xi))?,
        PanelSpec::TimeScales { xi_lo, xi_hi } => ctx.time_scales(xi_lo, xi_hi),
        PanelSpec::Density { scheme, xi, dt } => {
            ctx.density(ov.scheme(scheme), ov.xi(xi), ov.dt.unwrap_or(dt))?
        }
    };
    a.stem = stem;
    a.title = title;
    Ok(a)
}

struct Context<'a> {
    setup: &'a SetupConfig,
    crystal: CrystalDispersion,
    lp: f64,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

impl<'a> Context<'a> {
    fn new(setup: &'a SetupConfig) -> CliResult<Self> {
        Ok(Self {
            setup,
            crystal: setup.crystal.resolve()?,
            lp: setup.lambda_p_um,
        })
    }

    fn xi_axis(&self) -> Vec<f64> {
        linspace(0.0, xi_max(&self.crystal, self.lp), XI_POINTS)
    }

    fn effective_index(&self) -> CliResult<Artifact> {
        let mut t = Table::new(&["xi", "n_eff", "N_eff"]);
        for xi in self.xi_axis() {
            t.push(vec![
                Some(xi),
                Some(effective_index(&self.crystal, self.lp, xi)?),
                Some(effective_index_n(&self.crystal, self.lp, xi)?),
            ]);
        }
        Ok(Artifact::new("", "", t).labels("xi", "n_eff").trace("xi", "n_eff", "n_eff"))
    }

    fn collinear_angle(&self) -> Artifact {
        let mut t = Table::new(&["xi", "phi0_coll"]);
        for xi in self.xi_axis() {
            t.push(vec![Some(xi), collinear_angle(&self.crystal, self.lp, xi).ok()]);
        }
        Artifact::new("", "", t).labels("xi", "phi0_coll (rad)").trace_all()
    }

    fn cones(&self, phi0: f64, xi: f64) -> CliResult<Artifact> {
        let g = cone_geometry(&self.crystal, self.lp, self.setup.length_um(), phi0, xi)?;
        let mut t = Table::new(&["alpha", "x_inner", "y_inner", "x_outer", "y_outer"])
            .with_meta("phi0", fmt_sig(phi0))
            .with_meta("xi", fmt_sig(xi))
            .with_meta("theta0", fmt_sig(g.theta0))
            .with_meta("theta_inner", fmt_sig(g.theta_inner))
            .with_meta("theta_outer", fmt_sig(g.theta_outer))
            .with_meta("pair", "omega_h on the inner cone at alpha, omega_l on the outer cone at alpha + pi");
        for alpha in linspace(0.0, 2.0 * std::f64::consts::PI, CONE_POINTS) {
            let (s, c) = alpha.sin_cos();
            t.push(vec![
                Some(alpha),
                Some(g.theta_inner * c),
                Some(g.theta_inner * s),
                Some(g.theta_outer * c),
                Some(g.theta_outer * s),
            ]);
        }
        Ok(Artifact::new("", "", t)
            .labels("theta_x (rad)", "theta_y (rad)")
            .trace("x_inner", "y_inner", "inner cone (omega_h)")
            .trace("x_outer", "y_outer", "outer cone (omega_l)"))
    }

    fn cone_angles(&self, phis: &[f64]) -> Artifact {
        let mut cols = vec!["xi".to_string()];
        for p in phis {
            for name in ["theta_minus", "theta_plus", "theta0"] {
                cols.push(format!("{name}_phi0={p}"));
            }
        }
        let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
        let mut t = Table::new(&col_refs);
        for xi in self.xi_axis() {
            let mut row = vec![Some(xi)];
            for &p in phis {
                let th = theta0(&self.crystal, self.lp, p, xi).ok().and_then(|t| t.value());
                row.push(th.map(|v| v / (1.0 - xi)));
                row.push(th.map(|v| v / (1.0 + xi)));
                row.push(th);
            }
            t.push(row);
        }
        Artifact::new("", "", t).labels("xi", "angle (rad)").trace_all()
    }

    fn slit_selection(&self, phi0: f64, xi0: f64) -> CliResult<Artifact> {
        let model = BiphotonModel::new(
            &self.crystal,
            self.lp,
            self.setup.length_um(),
            phi0,
            self.setup.tau_fs(),
            self.setup.waist_um,
            xi0,
        )?;
        let cone = model.cone.ok_or(spdc_core::SpdcError::Collinear { xi: xi0 })?;
        let slit = self
            .setup
            .slit_width_rad
            .or(model.slit_width)
            .or(cone.delta_theta_l.map(|d| 0.5 * d))
            .unwrap_or(f64::NAN);
        let mut t = Table::new(&["xi", "theta_minus", "theta_plus"])
            .with_meta("phi0", fmt_sig(phi0))
            .with_meta("xi0", fmt_sig(xi0))
            .with_meta("slit_theta_plus", fmt_sig(cone.theta_inner))
            .with_meta("slit_theta_minus", fmt_sig(cone.theta_outer))
            .with_meta("slit_width", fmt_sig(slit));
        for xi in self.xi_axis() {
            let th = theta0(&self.crystal, self.lp, phi0, xi).ok().and_then(|t| t.value());
            t.push(vec![Some(xi), th.map(|v| v / (1.0 - xi)), th.map(|v| v / (1.0 + xi))]);
        }
        Ok(Artifact::new("", "", t).labels("xi", "cone angle (rad)").trace_all())
    }

    fn group_delay(&self, phis: &[f64]) -> Artifact {
        let mut cols = vec!["xi".to_string(), "A_minus".to_string()];
        cols.extend(phis.iter().map(|p| format!("A_plus_phi0={p}")));
        let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
        let mut t = Table::new(&col_refs);
        for xi in self.xi_axis() {
            let mut row = vec![Some(xi), a_minus(&self.crystal, self.lp, xi).ok()];
            for &p in phis {
                row.push(coefficients(&self.crystal, self.lp, p, xi).ok().map(|c| c.a_plus));
            }
            t.push(row);
        }
        Artifact::new("", "", t).labels("xi", "A").trace_all()
    }

    fn slit_rays(&self, scheme: Scheme, phi0: f64, xi: f64) -> CliResult<Artifact> {
        let g = cone_geometry(&self.crystal, self.lp, self.setup.length_um(), phi0, xi)?;
        let (th, tl) = (g.theta_inner.tan(), g.theta_outer.tan());
        let mut cols = vec!["z", "x_h", "x_l"];
        if scheme == Scheme::FourSlit {
            cols.extend(["x_h_mirror", "x_l_mirror"]);
        }
        let mut t = Table::new(&cols)
            .with_meta("scheme", scheme.label())
            .with_meta("phi0", fmt_sig(phi0))
            .with_meta("xi", fmt_sig(xi))
            .with_meta("slit_theta_h", fmt_sig(g.theta_inner))
            .with_meta("slit_theta_l", fmt_sig(-g.theta_outer));
        for z in linspace(0.0, 1.0, 11) {
            let mut row = vec![Some(z), Some(z * th), Some(-z * tl)];
            if scheme == Scheme::FourSlit {
                row.extend([Some(-z * th), Some(z * tl)]);
            }
            t.push(row);
        }
        let mut a = Artifact::new("", "", t).labels("z (distance to slits = 1)", "x");
        for c in &cols[1..] {
            a = a.trace("z", c, c);
        }
        Ok(a)
    }

    fn hom(&self, xi: f64) -> CliResult<HomModel> {
        Ok(HomModel::from_setup(self.setup, xi)?)
    }

    fn beamsplitter(&self, xi: f64) -> CliResult<Artifact> {
        let h = self.hom(xi)?;
        let mut t = Table::new(&["omega0_dt", "w_split_two", "w_unsplit_two", "w_split_four", "w_unsplit_four"])
            .with_meta("xi", fmt_sig(xi));
        for dt in h.default_grid() {
            t.push(vec![
                Some(dt),
                Some(h.split_probability(Scheme::TwoSlit, dt)),
                Some(h.unsplit_probability(Scheme::TwoSlit, dt)),
                Some(h.split_probability(Scheme::FourSlit, dt)),
                Some(h.unsplit_probability(Scheme::FourSlit, dt)),
            ]);
        }
        Ok(Artifact::new("", "", t).labels("omega0 dt", "probability").trace_all())
    }

    fn split_vs_delay(&self, scheme: Scheme, xis: &[f64]) -> CliResult<Artifact> {
        let models = xis.iter().map(|&x| self.hom(x)).collect::<CliResult<Vec<_>>>()?;
        let half = models.iter().map(|h| h.default_half_span()).fold(0.0, f64::max);
        let step = models
            .iter()
            .map(|h| h.timescales.t_osc / spdc_core::hom::POINTS_PER_PERIOD as f64)
            .fold(f64::INFINITY, f64::min);
        let delays = symmetric_grid(half, step);
        let mut cols = vec!["omega0_dt".to_string()];
        cols.extend(xis.iter().map(|x| format!("w_split_xi={x}")));
        let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
        let mut t = Table::new(&col_refs).with_meta("scheme", scheme.label());
        let curves = models
            .iter()
            .map(|h| h.probability_curve(scheme, CurveKind::SplitProbability, delays.clone()))
            .collect::<spdc_core::Result<Vec<_>>>()?;
        for (x, c) in xis.iter().zip(&curves) {
            describe(&mut t, Some(&format!("xi={x}")), c, true);
        }
        for (i, &d) in delays.iter().enumerate() {
            let mut row = vec![Some(d)];
            row.extend(curves.iter().map(|c| Some(c.y[i])));
            t.push(row);
        }
        Ok(Artifact::new("", "", t).labels("omega0 dt", "w_split").trace_all())
    }

    fn time_scales(&self, lo: f64, hi: f64) -> Artifact {
        let mut t = Table::new(&["xi", "omega0_T_osc", "omega0_T_decoh"]);
        for xi in linspace(lo, hi, XI_POINTS) {
            let ts = for_setup(&self.crystal, self.lp, self.setup.length_um(), self.setup.phi0_rad, xi).ok();
            t.push(vec![Some(xi), ts.map(|(_, s)| s.t_osc), ts.map(|(_, s)| s.t_decoh)]);
        }
        Artifact::new("", "", t).labels("xi", "omega0 t").trace_all()
    }

    fn density(&self, scheme: Scheme, xi: f64, dt: f64) -> CliResult<Artifact> {
        let h = self.hom(xi)?;
        let ts = h.timescales;
        let half = dt.abs() + 4.0 * ts.t_decoh.max(ts.t_osc);
        let xs = symmetric_grid(half, ts.t_osc / spdc_core::hom::POINTS_PER_PERIOD as f64);
        let curve = h.density_curve(scheme, dt, xs, None)?;
        let mut t = Table::from(&curve);
        describe(&mut t, None, &curve, false);
        Ok(Artifact::new("", "", t)
            .labels("omega0 (t1 - t2)", "density")
            .trace_all())
    }
}

/// Adds the time scales (unless already present) and comb metrics of
/// `curve` to the table metadata; `key` tags them when several curves share
/// one table.
fn describe(t: &mut Table, key: Option<&str>, curve: &HomCurve, scales: bool) {
    let name = |n: &str| match key {
        Some(k) => format!("{n}[{k}]"),
        None => n.to_string(),
    };
    if scales {
        t.meta.push((name("omega0_t_osc"), fmt_sig(curve.t_osc)));
        t.meta.push((name("omega0_t_decoh"), fmt_sig(curve.t_decoh)));
        if curve.fragile {
            t.meta.push((name("model_fragile"), "true".into()));
        }
    }
    if let Ok(r) = analyze_comb(curve) {
        t.meta.push((name("comb_count"), r.comb_count.to_string()));
        if let Some(p) = r.period {
            t.meta.push((name("period"), fmt_sig(p)));
        }
        if let Some(w) = r.envelope_fwhm {
            t.meta.push((name("envelope_fwhm"), fmt_sig(w)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(id: &str, panel: Option<&str>, ov: FigureOverrides) -> Vec<Artifact> {
        let setup = SetupConfig::default();
        let fig = lookup(id).unwrap();
        select_panels(fig, panel)
            .unwrap()
            .into_iter()
            .map(|p| render(fig, p, &setup, &ov).unwrap())
            .collect()
    }

    #[test]
    fn every_figure_renders() {
        for f in presets::FIGURES {
            for a in run(f.id, None, FigureOverrides::default()) {
                assert!(!a.table.rows.is_empty(), "{}", a.stem);
                assert!(!a.traces.is_empty(), "{}", a.stem);
            }
        }
    }

    #[test]
    fn panel_selection_and_stems() {
        let a = run("fig10", Some("c"), FigureOverrides::default());
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].stem, "fig10_c");
        assert_eq!(a[0].table.columns[1], "w_split_xi=0.6");
        assert_eq!(run("fig1", None, FigureOverrides::default())[0].stem, "fig1");
        let fig = lookup("fig1").unwrap();
        assert!(select_panels(fig, Some("a")).is_err());
        assert!(lookup("fig99").is_err());
    }

    #[test]
    fn overrides_replace_preset_values() {
        let ov = FigureOverrides {
            xi: Some(0.2),
            dt: Some(150.0),
            ..Default::default()
        };
        let a = &run("fig13", Some("a"), ov)[0];
        assert!(a.table.meta.contains(&("xi".into(), fmt_sig(0.2))));
        assert!(a.table.meta.contains(&("omega0_dt".into(), fmt_sig(150.0))));

        let ov = FigureOverrides {
            phi0: Some(0.6),
            ..Default::default()
        };
        assert_eq!(run("fig4", None, ov)[0].table.columns.len(), 4);
    }

    #[test]
    fn fig9_dip_flattens_with_xi() {
        let a = &run("fig9", None, FigureOverrides::default())[0];
        let zero = a.table.column("omega0_dt").unwrap().iter().position(|v| *v == Some(0.0)).unwrap();
        let w01 = a.table.rows[zero][1].unwrap();
        let w04 = a.table.rows[zero][5].unwrap();
        assert!(w01 < 0.02);
        assert!(w04 > w01 && 0.5 - w04 < 0.05);
    }
}
