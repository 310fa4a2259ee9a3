use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use vdeform::algebra::{Param, ParamPoly};
use vdeform::genus_expansion::DeformOptions;

pub const CACHE_ENV: &str = "VDEFORM_CACHE_DIR";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Settings shared by all subcommands. A JSON config file mirrors this
/// struct; command-line flags override it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionConfig {
    pub g_max: usize,
    pub m_max: usize,
    /// Cap on the `s`-degree of each `H_g`; `None` uses `4g`.
    pub s_deg_cap: Option<usize>,
    /// Jet cutoff `K`; `None` uses the engine default.
    pub cutoff: Option<usize>,
    /// Values substituted for named parameters in derived artifacts.
    pub params: BTreeMap<String, ParamPoly>,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
}

impl Default for SessionConfig {
    fn default() -> SessionConfig {
        SessionConfig {
            g_max: 2,
            m_max: 3,
            s_deg_cap: None,
            cutoff: None,
            params: BTreeMap::new(),
            cache_dir: None,
            format: Format::Json,
        }
    }
}

impl SessionConfig {
    pub fn load(path: &Path) -> Result<SessionConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.g_max == 0 || self.m_max == 0 {
            bail!("g_max and m_max must be positive");
        }
        if let Some(k) = self.cutoff {
            let need = 3 * self.g_max - 2;
            if k < need.max(1) {
                bail!("jet cutoff {k} is below 3·g_max − 2 = {need}");
            }
        }
        Ok(())
    }

    pub fn deform_options(&self) -> DeformOptions {
        DeformOptions { s_deg_cap: self.s_deg_cap, cutoff: self.cutoff }
    }

    /// Explicit setting, then the environment, then the platform cache dir.
    pub fn cache_root(&self) -> PathBuf {
        if let Some(d) = &self.cache_dir {
            return d.clone();
        }
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return PathBuf::from(d);
        }
        std::env::temp_dir().join("vdeform-cache")
    }

    pub fn substitutions(&self) -> Vec<(Param, &ParamPoly)> {
        self.params.iter().map(|(k, v)| (Param::named(k), v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_bound() {
        let mut c = SessionConfig { g_max: 3, cutoff: Some(6), ..Default::default() };
        assert!(c.validate().is_err());
        c.cutoff = Some(7);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn reads_partial_json() {
        let c: SessionConfig = serde_json::from_str(r#"{"g_max": 3, "params": {"s": "1"}, "format": "text"}"#).unwrap();
        assert_eq!(c.g_max, 3);
        assert_eq!(c.m_max, 3);
        assert_eq!(c.format, Format::Text);
        assert!(serde_json::from_str::<SessionConfig>(r#"{"gmax": 3}"#).is_err());
    }
}
