//! Run configuration: a TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spinfactor::{ChainConfig, PotentialKind, ProbeSettings, Tolerances};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid time grid `{0}` (use `start:stop:step` or a comma-separated list)")]
    TimeGridSyntax(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    VerifyAlgebra,
    Reversibility,
    Project,
    Classify,
    Sweep,
    Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub sites: Vec<usize>,
    /// One Pauli index (0..=3) per site.
    pub paulis: Vec<usize>,
    #[serde(default = "one")]
    pub coeff: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PotentialSpec {
    pub kind: String,
    #[serde(rename = "J", alias = "j")]
    pub j: f64,
    pub h: f64,
    pub terms: Vec<TermSpec>,
}

impl Default for PotentialSpec {
    fn default() -> Self {
        Self {
            kind: "ising_transverse".into(),
            j: 1.0,
            h: 1.0,
            terms: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n_sites: usize,
    /// Size guard; raise it explicitly for chains longer than six sites.
    pub max_sites: usize,
    pub potential: PotentialSpec,
    pub time_grid: Option<Vec<f64>>,
    pub analyses: Vec<Analysis>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Random pure states drawn by the `project` positivity check.
    pub samples: usize,
    /// Random mixed states drawn by the same check.
    pub mixed_samples: usize,
    pub probe: ProbeSettings,
    pub max_word_length: usize,
    /// Sweep worker threads; 0 uses every core.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_sites: 3,
            max_sites: spinfactor::chain::DEFAULT_MAX_SITES,
            potential: PotentialSpec::default(),
            time_grid: None,
            analyses: Vec::new(),
            tolerances: Tolerances::default(),
            seed: 0,
            output_dir: PathBuf::from("out"),
            samples: 10_000,
            mixed_samples: 1_000,
            probe: ProbeSettings::default(),
            max_word_length: spinfactor::reversibility::DEFAULT_MAX_LEN,
            jobs: 1,
        }
    }
}

pub const DEFAULT_SWEEP: &str = "0:1:0.1";

impl RunConfig {
    pub fn from_toml_str(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn chain(&self) -> Result<ChainConfig, ConfigError> {
        ChainConfig::with_max_sites(self.n_sites, self.max_sites)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn potential_kind(&self) -> Result<PotentialKind, ConfigError> {
        self.potential
            .kind
            .parse()
            .map_err(|e: spinfactor::Error| ConfigError::Invalid(e.to_string()))
    }

    /// Grid used by the sweep: the configured one or `0, 0.1, …, 1`.
    pub fn sweep_grid(&self) -> Vec<f64> {
        match &self.time_grid {
            Some(g) => g.clone(),
            None => parse_time_grid(DEFAULT_SWEEP).expect("valid default grid"),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.chain()?;
        self.potential_kind()?;
        if !self.potential.j.is_finite() || !self.potential.h.is_finite() {
            return Err(ConfigError::Invalid("couplings must be finite".into()));
        }
        for term in &self.potential.terms {
            if term.sites.len() != term.paulis.len() || term.sites.is_empty() {
                return Err(ConfigError::Invalid(format!(
                    "custom term needs one Pauli index per site: {term:?}"
                )));
            }
            if term.sites.iter().any(|&x| x >= self.n_sites) {
                return Err(ConfigError::Invalid(format!("term site out of range: {term:?}")));
            }
            if term.paulis.iter().any(|&p| p > 3) || !term.coeff.is_finite() {
                return Err(ConfigError::Invalid(format!("bad custom term: {term:?}")));
            }
        }
        if let Some(grid) = &self.time_grid {
            if grid.iter().any(|t| !t.is_finite()) {
                return Err(ConfigError::Invalid("time grid must be finite".into()));
            }
            if grid.windows(2).any(|w| w[0] > w[1]) {
                return Err(ConfigError::Invalid("time grid must be sorted".into()));
            }
        }
        let t = &self.tolerances;
        let positive = [
            t.herm_tol,
            t.eig_tol,
            t.spin_tol,
            t.closure_tol,
            t.cp_tol,
            t.dist_tol,
            t.ppt_tol,
            t.witness_margin,
        ];
        if positive.iter().any(|v| v.is_nan() || *v <= 0.0 || !v.is_finite()) {
            return Err(ConfigError::Invalid("tolerances must be positive".into()));
        }
        if self.max_word_length < 2 {
            return Err(ConfigError::Invalid("max_word_length must be at least 2".into()));
        }
        Ok(())
    }
}

/// `start:stop:step` (inclusive, values rounded to 1e-12) or `t0,t1,…`.
pub fn parse_time_grid(spec: &str) -> Result<Vec<f64>, ConfigError> {
    let bad = || ConfigError::TimeGridSyntax(spec.to_string());
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if step.is_nan() || step <= 0.0 || stop < start || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
            .collect())
    } else {
        spec.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_range_syntax() {
        let g = parse_time_grid("0:1:0.1").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(g[10], 1.0);
        assert_eq!(parse_time_grid("0.5, 0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_time_grid("0:1").is_err());
        assert!(parse_time_grid("0:1:0").is_err());
        assert!(parse_time_grid("a,b").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            n_sites = 2
            seed = 9
            analyses = ["verify_algebra", "sweep"]
            time_grid = [0.0, 0.5]

            [potential]
            kind = "custom"
            J = 0.0
            terms = [{ sites = [0, 1], paulis = [1, 3], coeff = 0.5 }]

            [tolerances]
            dist_tol = 1e-7
        "#;
        let cfg = RunConfig::from_toml_str(text, Path::new("inline")).unwrap();
        assert_eq!(cfg.n_sites, 2);
        assert_eq!(cfg.analyses, vec![Analysis::VerifyAlgebra, Analysis::Sweep]);
        assert_eq!(cfg.potential.terms[0].paulis, vec![1, 3]);
        assert_eq!(cfg.tolerances.dist_tol, 1e-7);
        assert_eq!(cfg.tolerances.ppt_tol, 1e-9);
        cfg.validate().unwrap();
    }

    #[test]
    fn validation_failures() {
        let mut cfg = RunConfig::default();
        cfg.n_sites = 9;
        assert!(cfg.validate().is_err());
        cfg.max_sites = 9;
        assert!(cfg.validate().is_ok());

        let mut cfg = RunConfig::default();
        cfg.potential.kind = "ising_longitudinal".into();
        assert!(cfg.validate().is_err());

        let mut cfg = RunConfig::default();
        cfg.time_grid = Some(vec![0.5, 0.1]);
        assert!(cfg.validate().is_err());

        assert!(RunConfig::from_toml_str("bogus_key = 1", Path::new("x")).is_err());
    }
}
