//! Declarative run configuration (TOML) with command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::SpinOrbitalConvention;
use crate::mapping::MappingKind;
use crate::pauli::{DEFAULT_DENSE_LIMIT, DEFAULT_THRESHOLD};
use crate::symmetry::{Method, SymmetryKind};

/// Penalty parameter for the spectral shift, in hartree. The per-unit shift
/// `mu/2` is 8.
pub const DEFAULT_MU: f64 = 16.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            other => Err(Error::Usage(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Table => "table",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// FCIDUMP file; when absent, `fixture` names a bundled data set.
    pub fcidump: Option<PathBuf>,
    pub fixture: Option<String>,
    pub mapping: MappingKind,
    pub ordering: SpinOrbitalConvention,
    pub threshold: f64,
    pub mu: f64,
    pub symmetry: SymmetryKind,
    /// Electron count (number) or spin `S` (spin). Defaults to the
    /// reference electron count, or `S = 0`.
    pub target: Option<f64>,
    /// `None` runs every method of the standard grid.
    pub method: Option<Method>,
    pub include_vnn: bool,
    pub dense_limit: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Random trials per property in `verify`.
    pub trials: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fcidump: None,
            fixture: None,
            mapping: MappingKind::JordanWigner,
            ordering: SpinOrbitalConvention::Interleaved,
            threshold: DEFAULT_THRESHOLD,
            mu: DEFAULT_MU,
            symmetry: SymmetryKind::Number,
            target: None,
            method: None,
            include_vnn: false,
            dense_limit: DEFAULT_DENSE_LIMIT,
            out: None,
            format: OutputFormat::Json,
            trials: 200,
            seed: 7,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::parse(line, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        // relative data paths are taken from the config file's directory
        if let (Some(f), Some(dir)) = (&cfg.fcidump, path.parent()) {
            if f.is_relative() {
                cfg.fcidump = Some(dir.join(f));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold >= 0.0) || !self.threshold.is_finite() {
            return Err(Error::Usage(format!("threshold must be non-negative (got {})", self.threshold)));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::Usage(format!("mu must be positive (got {})", self.mu)));
        }
        if self.fcidump.is_some() && self.fixture.is_some() {
            return Err(Error::Usage("give either fcidump or fixture, not both".into()));
        }
        if let Some(t) = self.target {
            if !t.is_finite() {
                return Err(Error::Usage("target must be finite".into()));
            }
        }
        Ok(())
    }

    /// Name recorded in provenance: the fixture id or the FCIDUMP file stem.
    pub fn source_id(&self) -> Option<String> {
        if let Some(id) = &self.fixture {
            return Some(id.clone());
        }
        self.fcidump
            .as_ref()
            .and_then(|p| p.file_stem())
            .map(|s| s.to_string_lossy().into_owned())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config is serializable")
    }
}
