//! Deterministic output assembly: every artifact is built fully in memory
//! (so failures leave no partial files) and written with a metadata header
//! carrying the version, config hash and seed.

use anyhow::{Context, Result};

use crate::config::EffectiveConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Full-precision scientific notation (17 significant digits) for CSV cells.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Metadata header lines shared by all outputs: version, config hash, seed,
/// and the full effective configuration (defaults included). Deliberately
/// excludes timestamps so reruns with the same config are byte-identical.
pub fn metadata_header(cfg: &EffectiveConfig, extra: &[(&str, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# version={VERSION}\n"));
    out.push_str(&format!("# config_hash={}\n", cfg.hash()));
    out.push_str(&format!("# seed={}\n", cfg.seed));
    out.push_str(&format!(
        "# config={}\n",
        serde_json::to_string(cfg).expect("config serializes")
    ));
    for (k, v) in extra {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out
}

/// A fully assembled output artifact.
pub struct Artifact {
    pub path: String,
    pub content: String,
}

/// Writes all artifacts, or stdout for those with the pseudo-path `-`.
pub fn write_all(artifacts: &[Artifact]) -> Result<()> {
    for a in artifacts {
        if a.path == "-" {
            print!("{}", a.content);
        } else {
            std::fs::write(&a.path, &a.content)
                .with_context(|| format!("cannot write {}", a.path))?;
        }
    }
    Ok(())
}

/// Simple CSV builder with a metadata header.
pub struct Csv {
    content: String,
}

impl Csv {
    pub fn new(cfg: &EffectiveConfig, extra: &[(&str, String)], columns: &str) -> Csv {
        let mut content = metadata_header(cfg, extra);
        content.push_str(columns);
        content.push('\n');
        Csv { content }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.content.push_str(&cells.join(","));
        self.content.push('\n');
    }

    pub fn finish(self) -> String {
        self.content
    }
}
