//! `key = value` configuration, loaded from the path in `MATHIEU_CONFIG`.
//!
//! Recognized keys: `tol`, `quad_order`, `scan_ceiling`, `svg_samples`.
//! Lines starting with `#` are comments. Flags always override these values.

use membrane::error::Error;

#[derive(Debug, Clone)]
pub struct Config {
    pub tol: f64,
    pub quad_order: usize,
    pub scan_ceiling: usize,
    pub svg_samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { tol: 1e-9, quad_order: 64, scan_ceiling: 4000, svg_samples: 256 }
    }
}

impl Config {
    pub fn from_env() -> Result<Self, Error> {
        match std::env::var_os("MATHIEU_CONFIG") {
            Some(path) => {
                let text = std::fs::read_to_string(&path)?;
                Self::parse(&text)
            }
            None => Ok(Self::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("config line {} is not key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::InvalidInput(format!("config line {}: bad {what} '{value}'", lineno + 1))
            };
            match key {
                "tol" => cfg.tol = value.parse().map_err(|_| bad("float"))?,
                "quad_order" => cfg.quad_order = value.parse().map_err(|_| bad("integer"))?,
                "scan_ceiling" => cfg.scan_ceiling = value.parse().map_err(|_| bad("integer"))?,
                "svg_samples" => cfg.svg_samples = value.parse().map_err(|_| bad("integer"))?,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "config line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }
}
