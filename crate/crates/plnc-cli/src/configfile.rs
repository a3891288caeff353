//! `key = value` config files, one pair per line.
//!
//! Keys match the long CLI flag names (without the leading dashes); flags
//! always override file values. `#` starts a comment. The file carries
//! parameters only; the subcommand always comes from the command line.

use std::collections::HashMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{origin}:{}: expected `key = value`, got `{raw}`",
                    line_no + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    /// CLI value if given, else the parsed file value.
    pub fn merge<T: std::str::FromStr>(
        &self,
        cli_value: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        if cli_value.is_some() {
            return Ok(cli_value);
        }
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Config(format!("config key `{key}`: cannot parse `{raw}`"))
            }),
        }
    }

    pub fn merge_flag(&self, cli_value: bool, key: &str) -> Result<bool, CliError> {
        if cli_value {
            return Ok(true);
        }
        match self.get(key) {
            None => Ok(false),
            Some(raw) => raw.parse::<bool>().map_err(|_| {
                CliError::Config(format!("config key `{key}`: cannot parse `{raw}` as bool"))
            }),
        }
    }
}
