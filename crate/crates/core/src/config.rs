//! Experimental setup description and its JSON form.

use serde::{Deserialize, Serialize};

use crate::biphoton::Scheme;
use crate::dispersion::CrystalDispersion;
use crate::{Result, SpdcError};

/// A crystal given either by preset name or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CrystalSpec {
    Named(String),
    Inline(CrystalDispersion<f64>),
}

impl Default for CrystalSpec {
    fn default() -> Self {
        CrystalSpec::Named("BBO".into())
    }
}

impl CrystalSpec {
    pub fn resolve(&self) -> Result<CrystalDispersion<f64>> {
        let crystal = self.resolve_unchecked()?;
        crystal.validate()?;
        Ok(crystal)
    }

    /// The crystal without the physical sanity checks, for reporting them.
    pub fn resolve_unchecked(&self) -> Result<CrystalDispersion<f64>> {
        match self {
            CrystalSpec::Named(name) => CrystalDispersion::preset(name)
                .ok_or_else(|| SpdcError::config("crystal", format!("unknown preset `{name}`"))),
            CrystalSpec::Inline(c) => Ok(c.clone()),
        }
    }
}

/// Parameters of one measurement configuration, in the units of the JSON
/// document (μm, cm, rad, ps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SetupConfig {
    pub crystal: CrystalSpec,
    pub lambda_p_um: f64,
    #[serde(rename = "L_cm")]
    pub length_cm: f64,
    pub phi0_rad: f64,
    pub tau_ps: f64,
    pub waist_um: f64,
    pub scheme: Scheme,
    /// Angular width of the top-hat slits; `None` picks half of (δθ)_L.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slit_width_rad: Option<f64>,
}

impl Default for SetupConfig {
    fn default() -> Self {
        Self {
            crystal: CrystalSpec::default(),
            lambda_p_um: 0.4047,
            length_cm: 0.5,
            phi0_rad: 0.500_758_9,
            tau_ps: 10.0,
            waist_um: 500.0,
            scheme: Scheme::FourSlit,
            slit_width_rad: None,
        }
    }
}

impl SetupConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SetupConfig =
            serde_json::from_str(text).map_err(|e| SpdcError::config("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("setup config serializes")
    }

    pub fn length_um(&self) -> f64 {
        self.length_cm * 1e4
    }

    pub fn tau_fs(&self) -> f64 {
        self.tau_ps * 1e3
    }

    /// Field-level validation; returns the first offending field.
    pub fn validate(&self) -> Result<()> {
        let positive = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SpdcError::config(field, format!("must be positive and finite, got {v}")))
            }
        };
        positive("lambda_p_um", self.lambda_p_um)?;
        positive("L_cm", self.length_cm)?;
        positive("tau_ps", self.tau_ps)?;
        positive("waist_um", self.waist_um)?;
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.phi0_rad) {
            return Err(SpdcError::config(
                "phi0_rad",
                format!("must lie in [0, π/2], got {}", self.phi0_rad),
            ));
        }
        if let Some(w) = self.slit_width_rad {
            positive("slit_width_rad", w)?;
        }
        let crystal = self.crystal.resolve()?;
        if !crystal.contains(self.lambda_p_um) {
            return Err(SpdcError::config(
                "lambda_p_um",
                format!("{} μm outside the {} transparency window", self.lambda_p_um, crystal.name),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setup() {
        let c = SetupConfig::default();
        assert_eq!(c.lambda_p_um, 0.4047);
        assert_eq!(c.length_um(), 5000.0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn parses_named_and_inline_crystal() {
        let cfg = SetupConfig::from_json(
            r#"{"crystal":"BBO","lambda_p_um":0.4047,"L_cm":0.5,"phi0_rad":0.7,
                "tau_ps":5,"waist_um":300,"scheme":"two_slit"}"#,
        )
        .unwrap();
        assert_eq!(cfg.scheme, Scheme::TwoSlit);
        assert_eq!(cfg.phi0_rad, 0.7);

        let inline = r#"{"crystal":{"name":"flat","sellmeier_o":[2.25,0,0,0],
            "sellmeier_e":[2.0,0,0,0],"window_um":[0.2,5.0]}}"#;
        let cfg = SetupConfig::from_json(inline).unwrap();
        assert_eq!(cfg.crystal.resolve().unwrap().name, "flat");
    }

    #[test]
    fn missing_fields_fall_back_to_defaults() {
        let cfg = SetupConfig::from_json(r#"{"phi0_rad":0.6}"#).unwrap();
        assert_eq!(cfg.length_cm, 0.5);
        assert_eq!(cfg.phi0_rad, 0.6);
    }

    #[test]
    fn field_level_errors() {
        let e = SetupConfig::from_json(r#"{"L_cm":-1}"#).unwrap_err();
        assert!(matches!(e, SpdcError::Config { ref field, .. } if field == "L_cm"));
        let e = SetupConfig::from_json(r#"{"crystal":"quartz"}"#).unwrap_err();
        assert!(matches!(e, SpdcError::Config { ref field, .. } if field == "crystal"));
        let e = SetupConfig::from_json(r#"{"phi0_rad":2.0}"#).unwrap_err();
        assert!(matches!(e, SpdcError::Config { ref field, .. } if field == "phi0_rad"));
        assert!(SetupConfig::from_json(r#"{"bogus":1}"#).is_err());
    }
}
