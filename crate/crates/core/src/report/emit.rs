use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{Format, VerificationReport};
use crate::error::{Error, Result};
use crate::zero_finder::CriticalZero;

/// Plot data written next to the reports as `<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl DataTable {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io_err("csv"))?;
        for r in &self.rows {
            w.write_record(r).map_err(io_err("csv"))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn io_err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> Error + '_ {
    move |e| Error::Io(format!("{ctx}: {e}"))
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let ctx = path.display().to_string();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(&ctx))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp).map_err(io_err(&ctx))?;
        f.write_all(contents).map_err(io_err(&ctx))?;
        f.sync_all().map_err(io_err(&ctx))?;
    }
    fs::rename(&tmp, path).map_err(io_err(&ctx))
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn join_map<V>(m: &std::collections::BTreeMap<String, V>, fmt: impl Fn(&V) -> String) -> String {
    m.iter()
        .map(|(k, v)| format!("{k}={}", fmt(v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Reports as JSON or as CSV with columns
/// check_id,paper_anchor,params,metrics,tolerance,pass,runtime_ms.
pub fn reports_to_string(reports: &[VerificationReport], format: Format) -> Result<String> {
    match format {
        Format::Json => json(reports),
        Format::Csv => {
            let mut t = DataTable::new(
                "reports",
                &[
                    "check_id",
                    "paper_anchor",
                    "params",
                    "metrics",
                    "tolerance",
                    "pass",
                    "runtime_ms",
                ],
            );
            for r in reports {
                t.push(vec![
                    r.check_id.clone(),
                    r.paper_anchor.clone(),
                    join_map(&r.params, |v| v.clone()),
                    join_map(&r.metrics, |v| format!("{v:e}")),
                    format!("{:e}", r.tolerance),
                    r.pass.to_string(),
                    r.runtime_ms.to_string(),
                ]);
            }
            t.to_csv()
        }
    }
}

/// Writes `reports.<json|csv>` and one CSV per data table into `dir`.
/// Returns the paths written, in order.
pub fn emit(
    reports: &[VerificationReport],
    data: &[DataTable],
    format: Format,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let name = match format {
        Format::Json => "reports.json",
        Format::Csv => "reports.csv",
    };
    let path = dir.join(name);
    write_atomic(&path, reports_to_string(reports, format)?.as_bytes())?;
    written.push(path);
    for t in data {
        let path = dir.join(format!("{}.csv", t.name));
        write_atomic(&path, t.to_csv()?.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

/// Zero table with header index,t,residual,E.
pub fn zero_table_csv(zeros: &[CriticalZero]) -> Result<String> {
    let mut t = DataTable::new("zeros", &["index", "t", "residual", "E"]);
    for z in zeros {
        t.push(vec![
            z.index.to_string(),
            format!("{:.12}", z.t),
            format!("{:e}", z.residual),
            format!("{:.12}", z.eigenvalue.re),
        ]);
    }
    t.to_csv()
}

pub fn zero_table_json(zeros: &[CriticalZero]) -> Result<String> {
    json(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_list_is_empty_array() {
        let s = reports_to_string(&[], Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, serde_json::json!([]));
    }

    #[test]
    fn csv_columns_are_stable() {
        let r =
            VerificationReport::new("bk", "a", &[("zero", "001".into())], &[("m", 1e-13)], 1e-12);
        let s = reports_to_string(&[r], Format::Csv).unwrap();
        let mut lines = s.lines();
        assert_eq!(
            lines.next().unwrap(),
            "check_id,paper_anchor,params,metrics,tolerance,pass,runtime_ms"
        );
        assert_eq!(lines.next().unwrap(), "bk,a,zero=001,m=1e-13,1e-12,true,0");
    }
}
