//! Run configuration: TOML file, overridden by command-line flags.
//!
//! ```toml
//! model = "disc"            # used when no isotopy file is given
//! isotopy = "twist.json"    # relative to the config file
//! qm = ["lk:1,2"]
//! n = 2
//! samples = 10000
//! seed = 1
//! powers = [1, 2, 4, 8, 16]
//! output_dir = "out"
//! workers = 2
//! points = [[0.1, 0.2], [0.3, 0.4]]   # trace only
//!
//! [experiment]
//! sites = [1, 2]
//! word = "a^2 b a^-2 b^-1"
//! epsilon = 0.1
//! exponents = [[1, 0], [5, 0]]
//! family = ["collar", "disc"]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{GgError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sites: Option<Vec<u8>>,
    pub word: Option<String>,
    pub epsilon: Option<f64>,
    pub area_samples: Option<usize>,
    pub half_width: Option<f64>,
    pub conjugate: Option<bool>,
    /// Exponent vectors for the norm bounds.
    pub exponents: Option<Vec<Vec<i64>>>,
    /// Metric family members: `collar`, `disc`.
    pub family: Option<Vec<String>>,
    pub max_power: Option<u32>,
    pub height: Option<f64>,
    pub small_oscillation: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<String>,
    pub isotopy: Option<PathBuf>,
    #[serde(default)]
    pub qm: Vec<String>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub powers: Option<Vec<u32>>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub experiment: ExperimentConfig,
}

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;

impl RunConfig {
    /// Read a TOML file; relative paths inside are resolved against its
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| GgError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| GgError::Config(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        if let Some(p) = &cfg.isotopy {
            if p.is_relative() {
                cfg.isotopy = Some(dir.join(p));
            }
        }
        Ok(cfg)
    }

    /// Fields set in `other` replace those of `self`.
    pub fn overlay(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(model, isotopy, n, samples, seed, powers, output_dir, workers, points);
        if !other.qm.is_empty() {
            self.qm = other.qm;
        }
        let (mut e, o) = (self.experiment, other.experiment);
        macro_rules! take_e {
            ($($f:ident),*) => { $( if o.$f.is_some() { e.$f = o.$f; } )* };
        }
        take_e!(sites, word, epsilon, area_samples, half_width, conjugate, exponents, family, max_power, height, small_oscillation);
        self.experiment = e;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = &self.isotopy {
            if !p.is_file() {
                return Err(GgError::Config(format!("isotopy file {} does not exist", p.display())));
            }
        }
        if self.samples == Some(0) {
            return Err(GgError::Config("samples must be positive".into()));
        }
        if self.n == Some(0) {
            return Err(GgError::Config("n must be positive".into()));
        }
        Ok(())
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// SHA-256 of the canonical JSON form, with the isotopy file content in
    /// place of its path. Worker count and output location do not enter.
    pub fn hash(&self) -> Result<String> {
        let mut c = self.clone();
        c.workers = None;
        c.output_dir = None;
        let iso = match &c.isotopy {
            Some(p) => std::fs::read_to_string(p)?,
            None => String::new(),
        };
        c.isotopy = None;
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&c).map_err(|e| GgError::Config(e.to_string()))?);
        h.update([0u8]);
        h.update(iso.as_bytes());
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}
