//! Flat `key = value` run configuration.

use std::path::{Path, PathBuf};

use shellbuck_core::spectra::SpectralConfig;
use shellbuck_core::ShellParams;

use crate::CliError;

pub const KEYS: [&str; 12] =
    ["h_list", "L", "E", "nu", "eps", "beta0", "m_max_factor", "k_ax_factor", "p_rad", "tol", "out_dir", "seed"];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub h_list: Vec<f64>,
    pub length: f64,
    pub young: f64,
    pub nu: f64,
    pub eps: f64,
    pub beta0: f64,
    pub m_max_factor: f64,
    pub k_ax_factor: f64,
    pub p_rad: usize,
    pub tol: f64,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            h_list: vec![0.1, 0.05, 0.02, 0.01, 0.005],
            length: 2.0,
            young: 1.0,
            nu: 0.3,
            eps: 0.0,
            beta0: 1.0,
            m_max_factor: 6.0,
            k_ax_factor: 1.0,
            p_rad: 3,
            tol: 1e-6,
            out_dir: PathBuf::from("results"),
            seed: 0,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse '{value}'")))
}

impl RunConfig {
    /// Parse a config file body on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got '{raw}'", lineno + 1)))?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        cfg.apply(&pairs)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Apply `(key, value)` pairs. Every unknown key is reported at once.
    pub fn apply(&mut self, pairs: &[(String, String)]) -> Result<(), CliError> {
        let unknown: Vec<&str> =
            pairs.iter().map(|(k, _)| k.as_str()).filter(|k| !KEYS.contains(k)).collect();
        if !unknown.is_empty() {
            return Err(CliError::Config(format!(
                "unknown config keys: {} (valid keys: {})",
                unknown.join(", "),
                KEYS.join(", ")
            )));
        }
        for (key, value) in pairs {
            match key.as_str() {
                "h_list" => {
                    self.h_list = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| parse_num(key, s))
                        .collect::<Result<_, _>>()?
                }
                "L" => self.length = parse_num(key, value)?,
                "E" => self.young = parse_num(key, value)?,
                "nu" => self.nu = parse_num(key, value)?,
                "eps" => self.eps = parse_num(key, value)?,
                "beta0" => self.beta0 = parse_num(key, value)?,
                "m_max_factor" => self.m_max_factor = parse_num(key, value)?,
                "k_ax_factor" => self.k_ax_factor = parse_num(key, value)?,
                "p_rad" => self.p_rad = parse_num(key, value)?,
                "tol" => self.tol = parse_num(key, value)?,
                "out_dir" => self.out_dir = PathBuf::from(value),
                "seed" => self.seed = parse_num(key, value)?,
                _ => unreachable!(),
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.h_list.is_empty() {
            return Err(CliError::Config("h_list is empty".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        for &h in &self.h_list {
            ShellParams::new(h, self.length, self.young, self.nu).map_err(|e| CliError::Config(e.to_string()))?;
        }
        self.spectral().validate().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn params(&self, h: f64) -> Result<ShellParams, CliError> {
        ShellParams::new(h, self.length, self.young, self.nu).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn spectral(&self) -> SpectralConfig {
        SpectralConfig {
            k_ax_factor: self.k_ax_factor,
            p_rad: self.p_rad,
            m_max_factor: self.m_max_factor,
            ..SpectralConfig::default()
        }
    }

    /// Canonical `key = value` text, in the fixed key order.
    pub fn canonical(&self) -> String {
        let hs: Vec<String> = self.h_list.iter().map(|h| format!("{h:e}")).collect();
        let values = [
            hs.join(","),
            format!("{:e}", self.length),
            format!("{:e}", self.young),
            format!("{:e}", self.nu),
            format!("{:e}", self.eps),
            format!("{:e}", self.beta0),
            format!("{:e}", self.m_max_factor),
            format!("{:e}", self.k_ax_factor),
            self.p_rad.to_string(),
            format!("{:e}", self.tol),
            self.out_dir.display().to_string(),
            self.seed.to_string(),
        ];
        KEYS.iter().zip(values).map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// The canonical text without `out_dir`: what the results depend on.
    pub fn input_text(&self) -> String {
        self.canonical().lines().filter(|l| !l.starts_with("out_dir ")).map(|l| format!("{l}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_lists() {
        let cfg = RunConfig::parse("# sweep\nh_list = 0.1, 0.05,0.02\nnu = 0.25  # Poisson\nout_dir = out\n").unwrap();
        assert_eq!(cfg.h_list, vec![0.1, 0.05, 0.02]);
        assert_eq!(cfg.nu, 0.25);
        assert_eq!(cfg.out_dir, PathBuf::from("out"));
        assert_eq!(cfg.length, 2.0);
    }

    #[test]
    fn unknown_keys_are_all_listed() {
        let err = RunConfig::parse("foo = 1\nnu = 0.3\nbar = 2\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("foo") && msg.contains("bar"), "{msg}");
    }

    #[test]
    fn bad_values_rejected() {
        assert!(RunConfig::parse("nu = abc").is_err());
        assert!(RunConfig::parse("h_list = 1.5").is_err());
        assert!(RunConfig::parse("nu = 0.7").is_err());
        assert!(RunConfig::parse("tol = 0").is_err());
        assert!(RunConfig::parse("just text").is_err());
    }

    #[test]
    fn input_text_ignores_output_location() {
        let a = RunConfig::parse("out_dir = a").unwrap();
        let b = RunConfig::parse("out_dir = b").unwrap();
        assert_ne!(a.canonical(), b.canonical());
        assert_eq!(a.input_text(), b.input_text());
    }

    #[test]
    fn canonical_round_trips() {
        let cfg = RunConfig::parse("h_list = 0.1,0.02\neps = 0.5\nseed = 9").unwrap();
        assert_eq!(RunConfig::parse(&cfg.canonical()).unwrap(), cfg);
    }
}
