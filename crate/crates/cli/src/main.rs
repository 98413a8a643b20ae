//! `spdc`: figures, sweeps, verification and coefficient dumps for the
//! SPDC/HOM simulation core.

mod artifact;
mod error;
mod figures;
mod manifest;
mod presets;
mod settings;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use spdc_core::groupdelay::{for_setup, pulse_regime};
use spdc_core::oracle::{run_suite, OracleReport, SuiteOptions};
use spdc_core::phasematch::{sideband_wavelengths, theta0, NondegeneracyPoint};
use spdc_core::{BiphotonModel, Scheme, SetupConfig, SpdcError};

use artifact::{emit, ensure_dir, write_file, Format};
use error::{CliError, CliResult};
use figures::FigureOverrides;
use manifest::RunManifest;
use settings::SetupOverrides;
use sweep::{Axis, Quantity, SweepSpec};

const DEFAULT_OUT: &str = "out";

#[derive(Debug, Parser)]
#[command(name = "spdc", version, about = "Noncollinear nondegenerate SPDC and HOM interference simulator")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON setup file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default `out`; `coeffs` writes files only when given).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; figures default to csv and svg.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Nondegeneracy parameter ξ.
    #[arg(long, global = true)]
    xi: Option<f64>,
    /// Angle between the optical axis and the pump, rad.
    #[arg(long, global = true)]
    phi0: Option<f64>,
    /// Delay ω₀Δt.
    #[arg(long, global = true, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Slit scheme: two | four.
    #[arg(long, global = true, value_parser = settings::parse_scheme)]
    scheme: Option<Scheme>,
    /// Seed of the Monte-Carlo checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproduce a figure (fig1 … fig14) as CSV/SVG.
    Figure {
        id: String,
        /// Single panel (a, b, c) instead of all.
        #[arg(long)]
        panel: Option<String>,
    },
    /// Uniform sweep of one quantity along ξ, φ₀ or Δt.
    Sweep {
        #[arg(value_enum)]
        quantity: Quantity,
        /// Swept variable; the others are held at --xi, --phi0, --dt
        #[arg(long, value_enum, default_value = "xi")]
        axis: Axis,
        /// Start of the range (ξ: 0, φ₀: 0.35, Δt: 0)
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        /// End of the range (ξ: ξ_max, φ₀: 0.8, Δt: 2000)
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        /// Number of samples, endpoints included
        #[arg(long, default_value_t = 501)]
        points: usize,
    },
    /// Run the oracle suite and the anchor checks; exit 2 on any failure.
    Verify {
        /// Skip the Monte-Carlo runs.
        #[arg(long)]
        quick: bool,
        /// Monte-Carlo sample count per check.
        #[arg(long, default_value_t = SuiteOptions::default().mc_samples)]
        samples: u64,
    },
    /// Group-delay coefficients, cone geometry and time scales as JSON.
    Coeffs,
}

impl Common {
    fn setup_overrides(&self) -> SetupOverrides {
        SetupOverrides {
            phi0: self.phi0,
            scheme: self.scheme,
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spdc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    settings::configure_threads()?;
    let c = &cli.common;
    match &cli.command {
        Command::Figure { id, panel } => cmd_figure(c, id, panel.as_deref()),
        Command::Sweep {
            quantity,
            axis,
            from,
            to,
            points,
        } => cmd_sweep(c, *quantity, *axis, (*from, *to), *points),
        Command::Verify { quick, samples } => cmd_verify(c, *quick, *samples),
        Command::Coeffs => cmd_coeffs(c),
    }
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn cmd_figure(c: &Common, id: &str, panel: Option<&str>) -> CliResult<()> {
    let fig = figures::lookup(id)?;
    let panels = figures::select_panels(fig, panel)?;
    let setup = settings::resolve(c.config.as_deref(), &c.setup_overrides())?;
    let ov = FigureOverrides {
        xi: c.xi,
        phi0: c.phi0,
        dt: c.dt,
        scheme: c.scheme,
    };
    let formats = c.format.map_or_else(|| vec![Format::Csv, Format::Svg], |f| vec![f]);
    let dir = c.out_dir();
    for p in panels {
        let artifact = figures::render(fig, p, &setup, &ov)?;
        let params = json!({ "figure": fig.id, "panel": p.name, "overrides": ov.to_json() });
        print_written(&emit(&dir, &[artifact], &formats, "figure", &params, &setup)?);
    }
    Ok(())
}

fn cmd_sweep(c: &Common, quantity: Quantity, axis: Axis, range: (Option<f64>, Option<f64>), points: usize) -> CliResult<()> {
    let setup = settings::resolve(c.config.as_deref(), &c.setup_overrides())?;
    let spec = SweepSpec::new(quantity, axis, range, points, (c.xi, c.phi0, c.dt), &setup)?;
    let artifact = sweep::run(&spec, &setup);
    let formats = [c.format.unwrap_or(Format::Csv)];
    let params = serde_json::to_value(&spec).expect("sweep spec serializes");
    print_written(&emit(&c.out_dir(), &[artifact], &formats, "sweep", &params, &setup)?);
    Ok(())
}

fn cmd_verify(c: &Common, quick: bool, samples: u64) -> CliResult<()> {
    if matches!(c.format, Some(f) if f != Format::Json) {
        return Err(CliError::Validation("verify writes a JSON report; use --format json".into()));
    }
    let setup = settings::resolve_unchecked(c.config.as_deref(), &c.setup_overrides())?;
    match setup.validate() {
        // a broken crystal is what the invariant checks are for
        Err(SpdcError::Config { ref field, .. }) if field == "crystal" => {}
        Err(e) => return Err(e.into()),
        Ok(()) => {}
    }
    let opts = SuiteOptions {
        quick,
        mc_samples: samples,
        seed: c.seed.unwrap_or(SuiteOptions::default().seed),
    };
    let reports = run_suite(&setup, &opts);
    let failed: Vec<&OracleReport> = reports.iter().filter(|r| !r.pass).collect();

    let dir = c.out_dir();
    ensure_dir(&dir)?;
    let report = json!({
        "passed": failed.is_empty(),
        "n_checks": reports.len(),
        "n_failed": failed.len(),
        "checks": reports,
    });
    let report_path = dir.join("verify_report.json");
    write_file(&report_path, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
    let mut manifest = RunManifest::new("verify", serde_json::to_value(opts).expect("options serialize"), &setup);
    manifest.outputs.push("verify_report.json".into());
    write_manifest(&dir.join("verify_report.manifest.json"), &manifest)?;

    for r in &failed {
        println!("FAIL {} {} {}", r.check, r.params, r.note.as_deref().unwrap_or(""));
    }
    println!("{}/{} checks passed; report in {}", reports.len() - failed.len(), reports.len(), report_path.display());
    if failed.is_empty() {
        Ok(())
    } else {
        let mut counts: Vec<(&str, usize)> = Vec::new();
        for r in &failed {
            match counts.iter_mut().find(|(n, _)| *n == r.check) {
                Some((_, k)) => *k += 1,
                None => counts.push((&r.check, 1)),
            }
        }
        let names: Vec<String> = counts.iter().map(|(n, k)| format!("{n} ×{k}")).collect();
        Err(CliError::Verification(format!("{} failed check(s): {}", failed.len(), names.join(", "))))
    }
}

fn write_manifest(path: &Path, m: &RunManifest) -> CliResult<()> {
    write_file(path, &serde_json::to_string_pretty(m).expect("manifest serializes"))
}

fn coefficients_json(setup: &SetupConfig, xi: f64) -> CliResult<Value> {
    let crystal = setup.crystal.resolve()?;
    let lp = setup.lambda_p_um;
    let phi0 = setup.phi0_rad;
    let point = NondegeneracyPoint::new(lp, xi)?;
    let (l_plus, l_minus) = sideband_wavelengths(lp, xi);
    let (g, ts) = for_setup(&crystal, lp, setup.length_um(), phi0, xi)?;
    let t0 = theta0(&crystal, lp, phi0, xi)?;
    let tau = setup.tau_fs() * point.omega0;
    let mut v = json!({
        "xi": xi,
        "phi0_rad": phi0,
        "omega0_rad_per_fs": point.omega0,
        "lambda_plus_um": l_plus,
        "lambda_minus_um": l_minus,
        "regime": t0.regime,
        "n_eff": t0.n_eff,
        "N_eff": t0.big_n_eff,
        "n_p": t0.n_p,
        "theta0_rad": t0.value(),
        "theta_plus_rad": t0.value().map(|t| t / (1.0 + xi)),
        "theta_minus_rad": t0.value().map(|t| t / (1.0 - xi)),
        "A_p": g.a_p,
        "A_h": g.a_h,
        "A_l": g.a_l,
        "A_plus": g.a_plus,
        "A_minus": g.a_minus,
        "model_fragile": g.is_model_fragile(),
        "omega0_T_osc": ts.t_osc,
        "omega0_T_decoh": ts.t_decoh,
        "omega0_tau_gr": ts.tau_gr,
        "omega0_tau": tau,
        "pulse_regime": pulse_regime(tau, ts.tau_gr),
    });
    if let Ok(model) = BiphotonModel::from_setup(setup, xi) {
        v["omega0_sigma"] = json!(model.sigma);
        if let Some(cone) = model.cone {
            v["delta_theta_L_rad"] = json!(cone.delta_theta_l);
            v["validity_ratio"] = json!(cone.validity_ratio);
        }
        v["slit_width_rad"] = json!(model.slit_width);
    }
    Ok(v)
}

fn cmd_coeffs(c: &Common) -> CliResult<()> {
    if matches!(c.format, Some(f) if f != Format::Json) {
        return Err(CliError::Validation("coeffs emits JSON only".into()));
    }
    let setup = settings::resolve(c.config.as_deref(), &c.setup_overrides())?;
    let xi = c.xi.ok_or_else(|| CliError::Validation("coeffs needs --xi".into()))?;
    let text = serde_json::to_string_pretty(&coefficients_json(&setup, xi)?).expect("coefficients serialize");
    println!("{text}");
    if let Some(dir) = &c.out {
        ensure_dir(dir)?;
        write_file(&dir.join("coeffs.json"), &text)?;
        let mut manifest = RunManifest::new("coeffs", json!({ "xi": xi }), &setup);
        manifest.outputs.push("coeffs.json".into());
        write_manifest(&dir.join("coeffs.manifest.json"), &manifest)?;
    }
    Ok(())
}
