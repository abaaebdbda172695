//! Threshold and feature configuration files.
//!
//! One `key = value` per line, `#` starts a comment:
//!
//! ```text
//! bicep_curl.upper_arm_range = 35
//! features.median_window = 5
//! ```

use std::path::Path;

use posetrainer_core::classifier::FeatureConfig;
use posetrainer_core::heuristics::ThresholdConfig;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub thresholds: ThresholdConfig,
    pub features: FeatureConfig,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Settings> {
        let mut settings = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config { line: n + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let value: f64 = value.parse().map_err(|_| err(format!("{value:?} is not a number")))?;
            let applied = if key.starts_with("features.") {
                settings.features.set(key, value)
            } else {
                settings.thresholds.set(key, value)
            };
            applied.map_err(|e| err(e.to_string()))?;
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Settings::parse(&text).map_err(|e| e.in_file(path))
    }

    pub fn load_optional(path: Option<&Path>) -> Result<Settings> {
        path.map_or_else(|| Ok(Settings::default()), Settings::load)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let s = Settings::parse("# tuned\nbicep_curl.curl_min = 65 # degrees\n\nfeatures.median_window=3\n").unwrap();
        assert_eq!(s.thresholds.bicep_curl.curl_min, 65.0);
        assert_eq!(s.features.median_window, 3);
        assert_eq!(s.thresholds.front_raise, ThresholdConfig::default().front_raise);
    }

    #[test]
    fn reports_line_numbers() {
        for text in ["\nbicep_curl.nope = 1", "\nbicep_curl.curl_min = 200", "\nfeatures.median_window = 4", "\njunk"] {
            match Settings::parse(text) {
                Err(Error::Config { line: 2, .. }) => {}
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn default_text_parses_back() {
        let text = ThresholdConfig::default().to_text();
        assert_eq!(Settings::parse(&text).unwrap(), Settings::default());
    }
}
