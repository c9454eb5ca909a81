use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::operator_engine::GridSpec;

use super::CHECK_IDS;

/// Output format for reports and data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Configuration(format!(
                "unknown format {other:?} (expected json or csv)"
            ))),
        }
    }
}

/// Everything a suite run depends on. Keys of the flat config file are the
/// field names; tolerances are `tol.<report id>`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub zero_count: usize,
    /// Cutoffs for the diagonal and off-diagonal inner product checks.
    pub lambdas: Vec<f64>,
    /// Cutoff for the closed-form inner product check.
    pub inner_lambda: f64,
    pub pnt_lambdas: Vec<f64>,
    pub grid: GridSpec,
    pub out_dir: PathBuf,
    pub format: Format,
    pub jobs: Option<usize>,
    /// Overrides of the built-in tolerance, keyed by report id.
    pub tolerances: BTreeMap<String, f64>,
    /// Record wall-clock times; off by default so reports are byte-stable.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            zero_count: 10,
            lambdas: vec![1e3, 1e4, 1e5],
            inner_lambda: 1e3,
            pnt_lambdas: vec![1e2, 1e3, 1e4, 1e5, 1e6],
            grid: GridSpec::default(),
            out_dir: PathBuf::from("zetaspec-out"),
            format: Format::Json,
            jobs: None,
            tolerances: BTreeMap::new(),
            timing: false,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Configuration(format!("{key}: not a number: {v:?}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|p| parse_f64(key, p)).collect()
}

impl RunConfig {
    /// Tolerance for a report, falling back to `default`.
    pub fn tolerance(&self, report_id: &str, default: f64) -> f64 {
        self.tolerances.get(report_id).copied().unwrap_or(default)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "zero_count" => {
                self.zero_count = value
                    .parse()
                    .map_err(|_| Error::Configuration(format!("zero_count: {value:?}")))?
            }
            "lambdas" => self.lambdas = parse_list(key, value)?,
            "inner_lambda" => self.inner_lambda = parse_f64(key, value)?,
            "pnt_lambdas" => self.pnt_lambdas = parse_list(key, value)?,
            "grid" => self.grid = GridSpec::parse(value)?,
            "out" => self.out_dir = PathBuf::from(value),
            "format" => self.format = value.parse()?,
            "jobs" => {
                self.jobs = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Configuration(format!("jobs: {value:?}")))?,
                )
            }
            "timing" => {
                self.timing = value
                    .parse()
                    .map_err(|_| Error::Configuration(format!("timing: {value:?}")))?
            }
            k if k.starts_with("tol.") => {
                let id = &k[4..];
                let base = id.split('.').next().unwrap_or(id);
                if !CHECK_IDS.contains(&base) {
                    return Err(Error::Configuration(format!(
                        "tolerance for unknown check {id:?}"
                    )));
                }
                self.tolerances
                    .insert(id.to_string(), parse_f64(key, value)?);
            }
            other => {
                return Err(Error::Configuration(format!(
                    "unknown config key {other:?}"
                )))
            }
        }
        Ok(())
    }

    /// Applies a flat `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Configuration(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Configuration(format!("{}: {e}", path.display())))?;
        let mut c = Self::default();
        c.apply_text(&text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.zero_count == 0 || self.zero_count > crate::zero_finder::MAX_ZEROS {
            return Err(Error::Configuration(format!(
                "zero_count must lie in 1..={}",
                crate::zero_finder::MAX_ZEROS
            )));
        }
        for (id, t) in &self.tolerances {
            if !(*t > 0.0 && t.is_finite()) {
                return Err(Error::Configuration(format!(
                    "tolerance for {id} must be positive"
                )));
            }
        }
        for l in self
            .lambdas
            .iter()
            .chain(&self.pnt_lambdas)
            .chain([&self.inner_lambda])
        {
            if !(*l > 1.0 && l.is_finite()) {
                return Err(Error::Configuration(format!("cutoff {l} must exceed 1")));
            }
        }
        if self.jobs == Some(0) {
            return Err(Error::Configuration("jobs must be positive".into()));
        }
        self.grid.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_text() {
        let mut c = RunConfig::default();
        c.apply_text("# comment\nzero_count = 5\nlambdas=1e3, 1e4\ngrid = 2:40:50\ntol.eigen = 1e-8\nformat=csv\n")
            .unwrap();
        assert_eq!(c.zero_count, 5);
        assert_eq!(c.lambdas, vec![1e3, 1e4]);
        assert_eq!(c.grid.count, 50);
        assert_eq!(c.tolerance("eigen", 1.0), 1e-8);
        assert_eq!(c.tolerance("adjoint", 1.0), 1.0);
        assert_eq!(c.format, Format::Csv);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("bogus = 1").is_err());
        assert!(c.apply_text("tol.nonsense = 1").is_err());
        assert!(c.apply_text("zero_count").is_err());
        c.apply_text("tol.eigen = -1").unwrap();
        assert!(c.validate().is_err());
    }
}
