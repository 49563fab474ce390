//! Result containers and their on-disk form.
//!
//! Files are named `<experiment>-<hash>[-<part>].<ext>` with `hash` the config
//! hash, so identical configs overwrite identical files.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use bmhd_core::mhd::MHDState;
use bmhd_core::spectral::checkpoint::write_checkpoint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{HarnessError, Result};

/// One CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Series {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_f64(&mut self, row: &[f64]) {
        self.push(row.iter().map(|v| v.to_string()).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 cells")
    }
}

/// What one experiment produced.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub label: String,
    pub passed: bool,
    pub summary: Value,
    pub series: Vec<Series>,
    /// Named states written as BMHD1 checkpoints (`u` components, then `b`).
    pub checkpoints: Vec<(String, MHDState)>,
}

impl RunResult {
    pub fn new(label: &str, passed: bool, summary: impl Serialize) -> Self {
        Self {
            label: label.into(),
            passed,
            summary: serde_json::to_value(summary).expect("summary serializes"),
            series: Vec::new(),
            checkpoints: Vec::new(),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

fn write_state(path: &Path, state: &MHDState) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let fields = state.components();
    write_checkpoint(&mut w, state.t, &fields).map_err(|e| match e {
        bmhd_core::Error::Io(io) => HarnessError::io(path, io),
        other => other.into(),
    })?;
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Writes the summary JSON, one CSV per series and one checkpoint per state.
///
/// Non-finite numbers in summaries become `null`.
pub fn emit_reports(results: &[RunResult], cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let stem = format!("{}-{}", cfg.experiment.name, cfg.hash());
    let mut paths = Vec::new();
    let summary = json!({
        "experiment": cfg.experiment.name.as_str(),
        "config_hash": cfg.hash(),
        "seed": cfg.seed,
        "passed": results.iter().all(|r| r.passed),
        "results": results
            .iter()
            .map(|r| json!({ "label": r.label, "passed": r.passed, "summary": r.summary }))
            .collect::<Vec<_>>(),
    });
    let path = dir.join(format!("{stem}.json"));
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    write_file(&path, text.as_bytes())?;
    paths.push(path);
    for r in results {
        for s in &r.series {
            let path = dir.join(format!("{stem}-{}.csv", s.name));
            write_file(&path, s.to_csv().as_bytes())?;
            paths.push(path);
        }
        for (name, state) in &r.checkpoints {
            let path = dir.join(format!("{stem}-{name}.bmhd"));
            write_state(&path, state)?;
            paths.push(path);
        }
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut s = Series::new("x", &["t", "v"]);
        s.push_f64(&[0.0, 1.5]);
        s.push_f64(&[0.1, f64::INFINITY]);
        s.push(vec!["a,b".into(), "2".into()]);
        assert_eq!(s.to_csv(), "t,v\n0,1.5\n0.1,inf\n\"a,b\",2\n");
    }
}
