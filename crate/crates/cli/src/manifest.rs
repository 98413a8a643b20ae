use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use spdc_core::SetupConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Run record written next to every output.
///
/// `config_hash` covers everything that determines the output bytes: the
/// command, its resolved parameters, the setup and the tool version.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Value,
    pub setup: SetupConfig,
    pub config_hash: String,
    pub outputs: Vec<String>,
}

#[derive(Serialize)]
struct Hashed<'a> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    parameters: &'a Value,
    setup: &'a SetupConfig,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, setup: &SetupConfig) -> Self {
        let hashed = Hashed {
            tool: "spdc",
            version: TOOL_VERSION,
            command,
            parameters: &parameters,
            setup,
        };
        let bytes = serde_json::to_vec(&hashed).expect("manifest serializes");
        Self {
            tool: "spdc",
            version: TOOL_VERSION,
            command: command.to_string(),
            parameters,
            setup: setup.clone(),
            config_hash: hex::encode(Sha256::digest(&bytes)),
            outputs: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_tracks_parameters_and_setup() {
        let setup = SetupConfig::default();
        let a = RunManifest::new("figure", json!({"id": "fig1"}), &setup);
        let b = RunManifest::new("figure", json!({"id": "fig1"}), &setup);
        assert_eq!(a.config_hash, b.config_hash);
        assert_eq!(a.config_hash.len(), 64);

        let c = RunManifest::new("figure", json!({"id": "fig2"}), &setup);
        assert_ne!(a.config_hash, c.config_hash);

        let other = SetupConfig {
            length_cm: 1.0,
            ..SetupConfig::default()
        };
        assert_ne!(a.config_hash, RunManifest::new("figure", json!({"id": "fig1"}), &other).config_hash);
    }
}
