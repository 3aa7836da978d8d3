//! Result files: plot traces, JSON lines, and the grouped summary table.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::ExperimentMatrix;
use crate::metrics::RunResult;
use crate::{Error, Result};

pub const TRACE_HEADER: &str = "index,predicted,truth,drift_flag";

/// Writes the per-point trace as CSV. Floats use the shortest representation
/// that round-trips, so the bytes depend only on the result.
pub fn emit_plot_data(result: &RunResult, path: &Path) -> Result<()> {
    let trace = result.trace.as_ref().ok_or(Error::MissingTrace)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "{TRACE_HEADER}").map_err(io)?;
    for p in trace {
        writeln!(w, "{},{:?},{:?},{}", p.index, p.predicted, p.truth, u8::from(p.drift)).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// One JSON object per line.
pub fn write_results(path: &Path, results: &[RunResult]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    for r in results {
        let line = serde_json::to_string(r).expect("result serializes");
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_results(path: &Path) -> Result<Vec<RunResult>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l).map_err(|e| Error::Malformed {
                file: path.to_owned(),
                message: e.to_string(),
            })
        })
        .collect()
}

const ROWS: [&str; 7] = [
    "Drift detector",
    "Is baseline",
    "Model updates",
    "RMSE",
    "Prediction count",
    "Total execution time (s)",
    "Processing rate (rec/s)",
];

fn cell(row: usize, r: &RunResult) -> String {
    match row {
        0 => r.info.detector.clone(),
        1 => (r.info.detector == "none").to_string(),
        2 => r.model_updates.to_string(),
        3 => format!("{:.4}", r.rmse),
        4 => r.prediction_count.to_string(),
        5 => format!("{:.3}", r.total_execution_seconds),
        _ => format!("{:.0}", r.processing_rate),
    }
}

/// Renders results grouped by dataset/target, one column per experiment in
/// matrix order. Failed experiments show `FAILED` and are listed below.
pub fn render_table(matrix: &ExperimentMatrix, results: &[Result<RunResult>]) -> String {
    let mut groups: Vec<(String, String, Vec<usize>)> = Vec::new();
    for (i, e) in matrix.experiments.iter().enumerate() {
        match groups.last_mut() {
            Some((d, t, idx)) if *d == e.dataset && *t == e.target => idx.push(i),
            _ => groups.push((e.dataset.clone(), e.target.clone(), vec![i])),
        }
    }
    let mut out = String::new();
    for (dataset, target, idx) in &groups {
        let _ = writeln!(out, "{} - Target Variable : {}", dataset.to_uppercase(), target);
        let widths: Vec<usize> = idx
            .iter()
            .map(|&i| matrix.experiments[i].label.len().max(12))
            .collect();
        let _ = write!(out, "{:<26}", "Metric");
        for (&i, w) in idx.iter().zip(&widths) {
            let _ = write!(out, "  {:>w$}", matrix.experiments[i].label);
        }
        out.push('\n');
        for (row, name) in ROWS.iter().enumerate() {
            let _ = write!(out, "{name:<26}");
            for (&i, w) in idx.iter().zip(&widths) {
                let text = match &results[i] {
                    Ok(r) => cell(row, r),
                    Err(_) => "FAILED".to_owned(),
                };
                let _ = write!(out, "  {text:>w$}");
            }
            out.push('\n');
        }
        out.push('\n');
    }
    let failures: Vec<_> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    if !failures.is_empty() {
        let _ = writeln!(out, "Failed experiments:");
        for e in failures {
            let _ = writeln!(out, "  {e}");
        }
    }
    out
}
