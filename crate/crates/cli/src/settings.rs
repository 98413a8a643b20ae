//! Resolution of the setup: command-line flags over the config file over the
//! built-in defaults.

use std::path::Path;

use spdc_core::{Scheme, SetupConfig, SpdcError};

use crate::error::{CliError, CliResult};

/// Setup-level flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct SetupOverrides {
    pub phi0: Option<f64>,
    pub scheme: Option<Scheme>,
}

pub fn read_config(path: &Path) -> CliResult<SetupConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// The setup before validation, so that `verify` can report a broken crystal
/// as a failed check instead of refusing to start.
pub fn resolve_unchecked(config: Option<&Path>, overrides: &SetupOverrides) -> CliResult<SetupConfig> {
    let mut setup = match config {
        Some(path) => read_config(path)?,
        None => SetupConfig::default(),
    };
    if let Some(phi0) = overrides.phi0 {
        setup.phi0_rad = phi0;
    }
    if let Some(scheme) = overrides.scheme {
        setup.scheme = scheme;
    }
    Ok(setup)
}

pub fn resolve(config: Option<&Path>, overrides: &SetupOverrides) -> CliResult<SetupConfig> {
    let setup = resolve_unchecked(config, overrides)?;
    setup.validate()?;
    Ok(setup)
}

pub fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: SpdcError| e.to_string())
}

/// Caps the global rayon pool from `SPDC_SIM_THREADS`.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("SPDC_SIM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("SPDC_SIM_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join(format!("spdc-settings-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("setup.json");
        std::fs::write(&path, r#"{"phi0_rad":0.6,"scheme":"two_slit","L_cm":1.0}"#).unwrap();

        let from_file = resolve(Some(&path), &SetupOverrides::default()).unwrap();
        assert_eq!(from_file.phi0_rad, 0.6);
        assert_eq!(from_file.length_cm, 1.0);

        let flags = SetupOverrides {
            phi0: Some(0.7),
            scheme: Some(Scheme::FourSlit),
        };
        let merged = resolve(Some(&path), &flags).unwrap();
        assert_eq!(merged.phi0_rad, 0.7);
        assert_eq!(merged.scheme, Scheme::FourSlit);
        assert_eq!(merged.length_cm, 1.0);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let e = resolve(Some(Path::new("/nonexistent/setup.json")), &SetupOverrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn out_of_range_flag_is_a_validation_error() {
        let flags = SetupOverrides {
            phi0: Some(3.0),
            scheme: None,
        };
        assert_eq!(resolve(None, &flags).unwrap_err().exit_code(), 1);
    }
}
