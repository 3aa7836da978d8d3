//! Dataset manifest and loaders for the UCI regression datasets.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const BUILTIN_MANIFEST: &str = include_str!("../config/datasets.toml");

/// What to do with cells holding a dataset's missing-value sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SentinelPolicy {
    /// Keep the sentinel as an ordinary number.
    #[default]
    Retain,
    /// Drop every row with a sentinel in a used column.
    Drop,
    /// Replace a sentinel with the previous valid value of its column (the
    /// next valid value for a leading run).
    ForwardFill,
}

impl SentinelPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Retain => "retain",
            Self::Drop => "drop",
            Self::ForwardFill => "forward-fill",
        }
    }
}

impl fmt::Display for SentinelPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentinelPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "retain" => Ok(Self::Retain),
            "drop" => Ok(Self::Drop),
            "forward-fill" => Ok(Self::ForwardFill),
            _ => Err(Error::Config(format!(
                "sentinel policy must be retain, drop or forward-fill, got {s:?}"
            ))),
        }
    }
}

/// Per-target post-processing applied after loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetTransform {
    #[default]
    None,
    /// Population z-score over the whole loaded column.
    Zscore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    #[serde(default)]
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetEntry {
    pub name: String,
    /// Alternative name accepted on the command line and in configs.
    #[serde(default)]
    pub alias: Option<String>,
    #[serde(default)]
    pub transform: TargetTransform,
}

/// One dataset in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub name: String,
    #[serde(default)]
    pub url: Option<String>,
    pub files: Vec<FileEntry>,
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
    #[serde(default)]
    pub decimal_comma: bool,
    #[serde(default)]
    pub missing_sentinel: Option<f64>,
    #[serde(default)]
    pub sentinel_policy: SentinelPolicy,
    #[serde(default)]
    pub expected_instances: Option<usize>,
    /// Candidate input columns; the selected target is removed from these.
    pub features: Vec<String>,
    pub targets: Vec<TargetEntry>,
}

fn default_delimiter() -> String {
    ",".to_owned()
}

impl DatasetEntry {
    pub fn target(&self, name: &str) -> Result<&TargetEntry> {
        self.targets
            .iter()
            .find(|t| t.name == name || t.alias.as_deref() == Some(name))
            .ok_or_else(|| Error::UnknownTarget {
                dataset: self.name.clone(),
                target: name.to_owned(),
            })
    }

    /// Resolves a loadable spec for `target` with files under `dir`.
    pub fn spec(&self, dir: &Path, target: &str, policy: Option<SentinelPolicy>) -> Result<DatasetSpec> {
        let t = self.target(target)?;
        let feature_columns: Vec<String> = self
            .features
            .iter()
            .filter(|c| **c != t.name)
            .cloned()
            .collect();
        let delimiter = match self.delimiter.as_bytes() {
            [b] => *b,
            _ => {
                return Err(Error::Config(format!(
                    "dataset {}: delimiter must be one byte",
                    self.name
                )))
            }
        };
        Ok(DatasetSpec {
            name: self.name.clone(),
            files: self.files.iter().map(|f| dir.join(&f.name)).collect(),
            feature_columns,
            target_column: t.name.clone(),
            target_transform: t.transform,
            missing_sentinel: self.missing_sentinel,
            sentinel_policy: policy.unwrap_or(self.sentinel_policy),
            delimiter,
            decimal_comma: self.decimal_comma,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(rename = "dataset")]
    pub datasets: Vec<DatasetEntry>,
}

impl Manifest {
    /// The manifest compiled into the binary.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_MANIFEST).expect("built-in dataset manifest is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("dataset manifest: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn dataset(&self, name: &str) -> Result<&DatasetEntry> {
        self.datasets
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Error::UnknownDataset(name.to_owned()))
    }
}

/// Everything needed to load one (dataset, target) stream.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub name: String,
    /// Read in order and concatenated.
    pub files: Vec<PathBuf>,
    /// Column names, or `#<index>` for positional selection.
    pub feature_columns: Vec<String>,
    pub target_column: String,
    pub target_transform: TargetTransform,
    pub missing_sentinel: Option<f64>,
    pub sentinel_policy: SentinelPolicy,
    pub delimiter: u8,
    pub decimal_comma: bool,
}

/// One sample in file order, before standardization.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamRecord {
    pub index: usize,
    pub features: Vec<f64>,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub records: Vec<StreamRecord>,
    /// Rows skipped because every used cell was blank.
    pub blank_rows: usize,
    /// Rows dropped by [`SentinelPolicy::Drop`].
    pub dropped_rows: usize,
    /// Cells rewritten by [`SentinelPolicy::ForwardFill`].
    pub filled_cells: usize,
}

/// Loads `spec` into records in file order. Rows whose used cells are all
/// blank (trailing separator lines) are skipped; any other unparsable cell is
/// an error naming its row and column.
pub fn load(spec: &DatasetSpec) -> Result<LoadedDataset> {
    if spec.feature_columns.contains(&spec.target_column) {
        return Err(Error::Config(format!(
            "target {} is also listed as a feature",
            spec.target_column
        )));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut blank_rows = 0;
    for file in &spec.files {
        let table = read_table(file, spec)?;
        blank_rows += table.blank_rows;
        rows.extend(table.rows);
    }

    // rows are [features..., target]
    let mut dropped_rows = 0;
    let mut filled_cells = 0;
    if let Some(sentinel) = spec.missing_sentinel {
        match spec.sentinel_policy {
            SentinelPolicy::Retain => {}
            SentinelPolicy::Drop => {
                let before = rows.len();
                rows.retain(|r| !r.contains(&sentinel));
                dropped_rows = before - rows.len();
            }
            SentinelPolicy::ForwardFill => filled_cells = forward_fill(&mut rows, sentinel),
        }
    }

    if spec.target_transform == TargetTransform::Zscore && !rows.is_empty() {
        let t = spec.feature_columns.len();
        let n = rows.len() as f64;
        let mean = rows.iter().map(|r| r[t]).sum::<f64>() / n;
        let sd = (rows.iter().map(|r| (r[t] - mean).powi(2)).sum::<f64>() / n).sqrt();
        if sd > 0.0 {
            for r in &mut rows {
                r[t] = (r[t] - mean) / sd;
            }
        }
    }

    let records = rows
        .into_iter()
        .enumerate()
        .map(|(index, mut values)| {
            let target = values.pop().expect("row has a target cell");
            StreamRecord {
                index,
                features: values,
                target,
            }
        })
        .collect();
    Ok(LoadedDataset {
        records,
        blank_rows,
        dropped_rows,
        filled_cells,
    })
}

fn forward_fill(rows: &mut [Vec<f64>], sentinel: f64) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut filled = 0;
    for c in 0..width {
        let first_valid = rows.iter().map(|r| r[c]).find(|v| *v != sentinel);
        let Some(mut last) = first_valid else {
            continue;
        };
        for r in rows.iter_mut() {
            if r[c] == sentinel {
                r[c] = last;
                filled += 1;
            } else {
                last = r[c];
            }
        }
    }
    filled
}

struct Table {
    rows: Vec<Vec<f64>>,
    blank_rows: usize,
}

fn is_spreadsheet(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("xls" | "xlsx" | "xlsb" | "ods")
    )
}

fn read_table(path: &Path, spec: &DatasetSpec) -> Result<Table> {
    let (header, body) = if is_spreadsheet(path) {
        read_spreadsheet(path)?
    } else {
        read_delimited(path, spec.delimiter)?
    };
    let mut wanted: Vec<&str> = spec.feature_columns.iter().map(String::as_str).collect();
    wanted.push(&spec.target_column);
    let positions = wanted
        .iter()
        .map(|c| column_position(&header, c).ok_or_else(|| Error::SchemaMismatch {
            file: path.to_owned(),
            column: (*c).to_owned(),
        }))
        .collect::<Result<Vec<usize>>>()?;

    let mut rows = Vec::with_capacity(body.len());
    let mut blank_rows = 0;
    for (i, cells) in body.iter().enumerate() {
        let cell = |p: usize| cells.get(p).map_or("", |s| s.trim());
        if positions.iter().all(|&p| cell(p).is_empty()) {
            blank_rows += 1;
            continue;
        }
        let mut values = Vec::with_capacity(positions.len());
        for (&p, name) in positions.iter().zip(&wanted) {
            let raw = cell(p);
            let parsed = if spec.decimal_comma {
                raw.replace(',', ".").parse::<f64>()
            } else {
                raw.parse::<f64>()
            };
            match parsed {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::Parse {
                        file: path.to_owned(),
                        // 1-based, counting the header line
                        row: i + 2,
                        column: (*name).to_owned(),
                        value: raw.to_owned(),
                    })
                }
            }
        }
        rows.push(values);
    }
    Ok(Table { rows, blank_rows })
}

fn column_position(header: &[String], selector: &str) -> Option<usize> {
    if let Some(idx) = selector.strip_prefix('#') {
        return idx.parse::<usize>().ok().filter(|i| *i < header.len());
    }
    let norm = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
    let wanted = norm(selector);
    header.iter().position(|h| norm(h) == wanted)
}

type RawTable = (Vec<String>, Vec<Vec<String>>);

fn read_delimited(path: &Path, delimiter: u8) -> Result<RawTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .has_headers(true)
        .from_reader(BufReader::new(file));
    let malformed = |e: csv::Error| Error::Malformed {
        file: path.to_owned(),
        message: e.to_string(),
    };
    let header = reader
        .headers()
        .map_err(malformed)?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_owned())
        .collect();
    let mut body = Vec::new();
    for record in reader.records() {
        let record = record.map_err(malformed)?;
        body.push(record.iter().map(str::to_owned).collect());
    }
    Ok((header, body))
}

fn read_spreadsheet(path: &Path) -> Result<RawTable> {
    use calamine::{open_workbook_auto, Data, Reader};

    if !path.exists() {
        return Err(Error::FileNotFound(path.to_owned()));
    }
    let malformed = |message: String| Error::Malformed {
        file: path.to_owned(),
        message,
    };
    let mut workbook = open_workbook_auto(path).map_err(|e| malformed(e.to_string()))?;
    let sheet = workbook
        .sheet_names()
        .first()
        .cloned()
        .ok_or_else(|| malformed("workbook has no sheets".into()))?;
    let range = workbook
        .worksheet_range(&sheet)
        .map_err(|e| malformed(e.to_string()))?;
    let text = |d: &Data| match d {
        Data::Empty => String::new(),
        Data::Float(f) => f.to_string(),
        Data::Int(i) => i.to_string(),
        other => other.to_string(),
    };
    let mut rows = range.rows();
    let header = rows
        .next()
        .ok_or_else(|| malformed("sheet is empty".into()))?
        .iter()
        .map(text)
        .collect();
    let body = rows.map(|r| r.iter().map(text).collect()).collect();
    Ok((header, body))
}
