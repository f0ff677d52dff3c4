use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::catmap::CatMap;
use crate::experiments::{Quantization, DEFAULT_K_COUNT, MAX_K_COUNT};
use crate::metaplectic::PhaseMode;
use crate::quantizer::{BumpSpec, SymbolResolution, DEFAULT_GRID, DEFAULT_K_MAX};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSetting {
    None,
    #[default]
    Leading,
}

impl From<PhaseSetting> for PhaseMode {
    fn from(p: PhaseSetting) -> Self {
        match p {
            PhaseSetting::None => PhaseMode::None,
            PhaseSetting::Leading => PhaseMode::LeadingRealPositive,
        }
    }
}

fn default_k_count() -> usize {
    DEFAULT_K_COUNT
}

fn default_k_max() -> usize {
    DEFAULT_K_MAX
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

/// One experiment run, read from a JSON document. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub matrix: [i64; 4],
    pub n_list: Vec<usize>,
    pub cutoff: BumpSpec,
    #[serde(default)]
    pub quantization: Quantization,
    #[serde(default)]
    pub phase: PhaseSetting,
    #[serde(default = "default_k_count")]
    pub k_count: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub out_csv: Option<PathBuf>,
    #[serde(default)]
    pub out_svg: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        let [a, b, c, d] = self.matrix;
        if let Err(e) = CatMap::new(a, b, c, d) {
            return invalid(format!("matrix: {e}"));
        }
        if self.n_list.is_empty() {
            return invalid("n_list is empty".into());
        }
        if let Some(n) = self.n_list.iter().find(|&&n| n == 0 || n % 2 == 1) {
            return invalid(format!("n_list entries must be even and positive, got {n}"));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("n_list must be strictly ascending".into());
        }
        if let Err(e) = self.cutoff.validate() {
            return invalid(format!("cutoff: {e}"));
        }
        if !(1..=MAX_K_COUNT).contains(&self.k_count) {
            return invalid(format!(
                "k_count must be in 1..={MAX_K_COUNT}, got {}",
                self.k_count
            ));
        }
        if self.k_max == 0 {
            return invalid("k_max must be positive".into());
        }
        if self.grid < 4 * self.k_max {
            return invalid(format!(
                "grid {} must be at least 4 * k_max = {}",
                self.grid,
                4 * self.k_max
            ));
        }
        Ok(())
    }

    pub fn cat_map(&self) -> CatMap {
        let [a, b, c, d] = self.matrix;
        CatMap { a, b, c, d }
    }

    pub fn resolution(&self) -> SymbolResolution {
        SymbolResolution {
            k_max: self.k_max,
            grid: self.grid,
        }
    }
}
