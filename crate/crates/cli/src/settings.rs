//! Effective run settings: defaults, then the config file, then flags, then
//! the `SCHUR_ORDER_SEED` environment variable.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use schur_order_core::counterexamples::{SearchConfig, T_GRID_POINTS};
use schur_order_core::linalg::DEFAULT_PSD_TOL;
use schur_order_core::order_testing::{TrialConfig, DEFAULT_CHECK_TOL, DEFAULT_SEED, DEFAULT_TRIALS};

pub const SEED_ENV: &str = "SCHUR_ORDER_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub seed: u64,
    pub trials: usize,
    #[serde(alias = "tol")]
    pub check_tol: f64,
    pub psd_tol: f64,
    /// Sampling half-width; unset means the function's own domain.
    pub alpha: Option<f64>,
    pub lambdas: Vec<f64>,
    /// Points of the `t` scan used by the witness searches.
    pub grid_points: u32,
}

impl Default for Settings {
    fn default() -> Self {
        let t = TrialConfig::default();
        Self {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            check_tol: DEFAULT_CHECK_TOL,
            psd_tol: DEFAULT_PSD_TOL,
            alpha: None,
            lambdas: t.lambdas,
            grid_points: T_GRID_POINTS,
        }
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
    /// Raw value of the seed environment variable.
    pub env_seed: Option<String>,
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Settings = toml::from_str(text).context("invalid config file")?;
        Ok(s)
    }

    pub fn load(config: Option<&Path>, over: &Overrides) -> Result<Self> {
        let mut s = match config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
                Self::from_toml(&text).with_context(|| format!("in {}", p.display()))?
            }
            None => Self::default(),
        };
        if let Some(seed) = over.seed {
            s.seed = seed;
        }
        if let Some(tol) = over.tol {
            s.check_tol = tol;
        }
        if let Some(trials) = over.trials {
            s.trials = trials;
        }
        if let Some(raw) = &over.env_seed {
            s.seed = raw
                .trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}={raw:?} is not an unsigned 64-bit integer"))?;
        }
        s.normalize();
        s.validate()?;
        Ok(s)
    }

    fn normalize(&mut self) {
        if self.alpha.is_some_and(f64::is_infinite) {
            self.alpha = None;
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if !(self.check_tol > 0.0 && self.psd_tol > 0.0) {
            bail!("tolerances must be positive");
        }
        if self.grid_points == 0 {
            bail!("grid_points must be at least 1");
        }
        self.trial_config(1).validate()?;
        Ok(())
    }

    pub fn trial_config(&self, n: usize) -> TrialConfig {
        TrialConfig {
            n,
            alpha: self.alpha,
            trials: self.trials,
            seed: self.seed,
            psd_tol: self.psd_tol,
            check_tol: self.check_tol,
            lambdas: self.lambdas.clone(),
        }
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig { check_tol: self.check_tol, psd_tol: self.psd_tol, grid_points: self.grid_points }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("settings serialize");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let s = Settings::from_toml("seed = 5\ntrials = 12\ntol = 1e-7\n").unwrap();
        assert_eq!((s.seed, s.trials, s.check_tol), (5, 12, 1e-7));
        assert_eq!(s.psd_tol, DEFAULT_PSD_TOL);

        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "seed = 5\ntrials = 12\n").unwrap();
        let over = Overrides { seed: Some(9), trials: None, tol: None, env_seed: None };
        let s = Settings::load(Some(&p), &over).unwrap();
        assert_eq!((s.seed, s.trials), (9, 12));
        let over = Overrides { env_seed: Some("77".into()), ..over };
        assert_eq!(Settings::load(Some(&p), &over).unwrap().seed, 77);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Settings::from_toml("sed = 5").is_err());
        assert!(Settings::from_toml("trials = -1").is_err());
        let over = Overrides { env_seed: Some("x".into()), ..Default::default() };
        assert!(Settings::load(None, &over).is_err());
        let over = Overrides { trials: Some(0), ..Default::default() };
        assert!(Settings::load(None, &over).is_err());
    }

    #[test]
    fn infinite_alpha_means_domain() {
        let mut s = Settings::from_toml("alpha = inf").unwrap();
        s.normalize();
        assert_eq!(s.alpha, None);
    }

    #[test]
    fn hash_tracks_content() {
        let a = Settings::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed += 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
