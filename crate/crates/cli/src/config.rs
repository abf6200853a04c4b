//! Run configuration: JSON config file, flag overrides, preset parsing, and
//! the reproducibility hash of the effective configuration.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use jacobi_spectral::vexp::ExponentFunction;
use jacobi_spectral::JacobiParams;

/// File-level configuration; every field optional, flags take precedence.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub exponent: Option<String>,
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {path}"))?;
        serde_json::from_str(&text).with_context(|| format!("cannot parse config file {path}"))
    }
}

/// Effective configuration after merging file values and flags; recorded in
/// every output's metadata block.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub k: usize,
    pub r: usize,
    pub exponent: String,
    pub order: usize,
    pub seed: u64,
}

impl EffectiveConfig {
    pub fn params(&self) -> Result<JacobiParams> {
        JacobiParams::new(self.alpha, self.beta).map_err(|e| anyhow!("{e}"))
    }

    pub fn exponent_function(&self) -> Result<(ExponentFunction, String)> {
        Ok((parse_exponent(&self.exponent)?, self.exponent.clone()))
    }

    /// Reproducibility hash over the canonical JSON of this struct.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Merge order: defaults, then file, then explicit flags.
pub struct ConfigMerge {
    pub file: FileConfig,
}

impl ConfigMerge {
    #[allow(clippy::too_many_arguments)]
    pub fn effective(
        &self,
        alpha: Option<f64>,
        beta: Option<f64>,
        gamma: Option<f64>,
        k: Option<usize>,
        r: Option<usize>,
        exponent: Option<String>,
        order: Option<usize>,
        seed: Option<u64>,
    ) -> EffectiveConfig {
        EffectiveConfig {
            alpha: alpha.or(self.file.alpha).unwrap_or(0.5),
            beta: beta.or(self.file.beta).unwrap_or(0.5),
            gamma: gamma.or(self.file.gamma).unwrap_or(0.5),
            k: k.or(self.file.k).unwrap_or(1),
            r: r.or(self.file.r).unwrap_or(1),
            exponent: exponent
                .or_else(|| self.file.exponent.clone())
                .unwrap_or_else(|| "const:2".into()),
            order: order.or(self.file.order).unwrap_or(2048),
            seed: seed.or(self.file.seed).unwrap_or(20240901),
        }
    }
}

/// Parses exponent preset names: `const:<p>`, `two:<left>:<right>[:<split>]`,
/// `sin`, `ramp`, `logsmooth`.
pub fn parse_exponent(name: &str) -> Result<ExponentFunction> {
    let parts: Vec<&str> = name.split(':').collect();
    match parts[0] {
        "const" => {
            let p: f64 = parts
                .get(1)
                .ok_or_else(|| anyhow!("const exponent needs a value, e.g. const:2"))?
                .parse()
                .context("exponent value")?;
            ExponentFunction::constant(p).map_err(|e| anyhow!("{e}"))
        }
        "two" => {
            if parts.len() < 3 {
                bail!("two-valued exponent needs two values, e.g. two:2:4[:split]");
            }
            let left: f64 = parts[1].parse().context("left exponent")?;
            let right: f64 = parts[2].parse().context("right exponent")?;
            let split: f64 = match parts.get(3) {
                Some(s) => s.parse().context("split point")?,
                None => std::f64::consts::PI / 2.0,
            };
            ExponentFunction::two_valued(split, left, right).map_err(|e| anyhow!("{e}"))
        }
        "sin" => Ok(ExponentFunction::sin_plus_two()),
        "ramp" => Ok(ExponentFunction::linear_ramp()),
        "logsmooth" => Ok(ExponentFunction::log_smoothed()),
        other => bail!(
            "unknown exponent preset '{other}' (expected const:<p>, two:<l>:<r>[:<split>], sin, ramp, logsmooth)"
        ),
    }
}

/// Thread-count resolution: flag, then the JS_THREADS variable, then all cores.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    if let Some(n) = flag {
        return n.max(1);
    }
    if let Ok(v) = std::env::var("JS_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
