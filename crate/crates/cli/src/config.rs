//! Flat `key = value` config files. Command-line flags override config
//! values, which override the RAQM_SEED environment fallback and the
//! built-in defaults.

use std::collections::HashMap;
use std::path::Path;

const KNOWN_KEYS: &[&str] = &[
    "L",
    "seed",
    "runs",
    "tolerance",
    "out",
    "format",
    "a",
    "b",
    "c",
    "nominal",
    "window",
    "word",
    "m",
    "n",
    "cos_ab",
    "cos_bc",
    "phi",
    "max_level",
];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key = value", lineno + 1));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(format!("line {}: unknown key {key:?}", lineno + 1));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// flag > config > default
    pub fn resolve<T: Clone + std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(text) => text
                .parse()
                .map_err(|_| format!("config key {key:?}: cannot parse {text:?}")),
            None => Ok(default),
        }
    }

    /// Seed resolution adds the RAQM_SEED environment fallback between the
    /// config file and the default.
    pub fn resolve_seed(&self, flag: Option<u64>) -> Result<u64, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(text) = self.get("seed") {
            return text
                .parse()
                .map_err(|_| format!("config key \"seed\": cannot parse {text:?}"));
        }
        match std::env::var("RAQM_SEED") {
            Ok(text) => text
                .parse()
                .map_err(|_| format!("RAQM_SEED: cannot parse {text:?}")),
            Err(_) => Ok(0),
        }
    }
}
