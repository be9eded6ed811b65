use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pir::fixture::named_suite;
use crate::pir::{CodeSuite, SchemeParams};
use crate::ring::{ResidueMatrix, RingPoly};
use crate::zm::NfConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// One JSON object per trial record.
    #[default]
    Json,
    /// The summary as `metric,value` rows.
    Csv,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Either a built-in fixture name or explicit generator polynomials, given
/// as coefficient lists in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteSpec {
    Named(String),
    Generators {
        g_in: Vec<i64>,
        tilde: Vec<Vec<i64>>,
        m_mat: Vec<Vec<i64>>,
    },
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec::Named("repairable".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: u64,
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub t: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub suite: SuiteSpec,
    pub trials: usize,
    pub seed: u64,
    pub nf_convention: NfConvention,
    pub repair: bool,
    /// Record wall time per phase. Off by default so that replays are
    /// byte-identical.
    pub timing: bool,
    /// Values of `t` for the attack timing table.
    pub t_sweep: Vec<usize>,
    /// Attacks timed per sweep point.
    pub sweep_reps: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m: 36,
            n: 5,
            s: 3,
            r: 2,
            t: 5,
            l: 3,
            suite: SuiteSpec::default(),
            trials: 100,
            seed: 0,
            nf_convention: NfConvention::default(),
            repair: true,
            timing: false,
            t_sweep: Vec::new(),
            sweep_reps: 3,
            out: None,
            format: OutputFormat::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<SchemeParams> {
        SchemeParams::new(self.m, self.n, self.s, self.r, self.t, self.l)
    }

    pub fn with_t(&self, t: usize) -> Self {
        Self { t, ..self.clone() }
    }

    pub fn suite(&self) -> Result<CodeSuite> {
        let params = self.params()?;
        match &self.suite {
            SuiteSpec::Named(name) => named_suite(name, &params),
            SuiteSpec::Generators { g_in, tilde, m_mat } => {
                let poly = |c: &[i64]| RingPoly::new(c, self.n, self.m);
                let tilde = tilde.iter().map(|c| poly(c)).collect::<Result<Vec<_>>>()?;
                let m_mat = ResidueMatrix::from_rows_with_width(m_mat, self.s, self.m)?;
                CodeSuite::new(poly(g_in)?, tilde, m_mat)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        self.params()?;
        self.suite()?;
        Ok(())
    }
}
