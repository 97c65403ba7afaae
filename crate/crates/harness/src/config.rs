//! Run configuration: a TOML file of defaults, overridden by the
//! `CUBELAB_WORKERS` environment variable and by command-line flags.
//!
//! ```toml
//! seed = 1              # default seed for sampled runs
//! node_budget = 4294967296  # elements an extremal search may evaluate
//! samples = 1000000     # Monte Carlo draws
//! workers = 8           # worker threads; 0 or absent means all cores
//! run_dir = "runs"      # where reports.jsonl is appended
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const WORKERS_ENV: &str = "CUBELAB_WORKERS";

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub node_budget: u64,
    pub samples: u64,
    pub workers: Option<usize>,
    /// `None` disables persistence.
    pub run_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 1,
            node_budget: 1 << 32,
            samples: 1_000_000,
            workers: None,
            run_dir: None,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut c: Config = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        if c.workers == Some(0) {
            c.workers = None;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Applies `CUBELAB_WORKERS` when set.
    pub fn with_env(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var(WORKERS_ENV) {
            let w: usize = v
                .trim()
                .parse()
                .map_err(|_| HarnessError::Config(format!("{WORKERS_ENV}={v:?} is not a count")))?;
            self.workers = (w > 0).then_some(w);
        }
        Ok(self)
    }

    /// Runs `job` on a pool with the configured worker count.
    pub fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.workers {
            builder = builder.num_threads(w);
        }
        let pool = builder
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
        Ok(pool.install(job))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_keys() {
        let c = Config::from_toml("seed = 7\nworkers = 2\nrun_dir = \"out\"").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.workers, Some(2));
        assert_eq!(c.run_dir, Some(PathBuf::from("out")));
        assert_eq!(c.samples, 1_000_000);
        assert!(Config::from_toml("sede = 7").is_err());
        assert_eq!(Config::from_toml("workers = 0").unwrap().workers, None);
    }

    #[test]
    fn pool_size() {
        let c = Config {
            workers: Some(3),
            ..Config::default()
        };
        assert_eq!(c.install(rayon::current_num_threads).unwrap(), 3);
    }
}
