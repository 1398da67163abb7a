use std::path::Path;

use crate::hyperfine::PhysicalConstants;

use super::CliError;

/// Environment variable consulted when no `--config` flag is given.
pub const CONFIG_ENV_VAR: &str = "PERTURBA_CONFIG";

/// Contents of a `key = value` config file.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConfigFile {
    pub constants: PhysicalConstants,
    pub b_field: Option<f64>,
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// keys not listed here are rejected.
pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let mut cfg = ConfigFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::InvalidConfig(format!("line {}: expected key = value", i + 1)))?;
        let key = key.trim();
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::InvalidConfig(format!("line {}: {:?} is not a number", i + 1, value.trim())))?;
        match key {
            "mu_e" => cfg.constants.mu_e = value,
            "delta_nu_h" => cfg.constants.delta_nu_h = value,
            "planck_h" => cfg.constants.planck_h = value,
            "elementary_charge" => cfg.constants.elementary_charge = value,
            "b_field" => cfg.b_field = Some(value),
            other => return Err(CliError::InvalidConfig(format!("line {}: unknown key {other:?}", i + 1))),
        }
    }
    cfg.constants.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    parse_config(&std::fs::read_to_string(path)?)
}
