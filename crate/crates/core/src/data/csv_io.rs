use std::collections::HashMap;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{Dataset, TaskKind, Targets};
use crate::error::{Error, Result};

/// Which column holds the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetColumn {
    First,
    Last,
    Index(usize),
    /// Looked up in the header row.
    Name(String),
}

/// Column roles for a CSV file. Every column other than the target is a
/// feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub target: TargetColumn,
    pub task: TaskKind,
    #[serde(default = "default_true")]
    pub has_header: bool,
    /// Expected number of feature columns, if known.
    #[serde(default)]
    pub n_features: Option<usize>,
}

fn default_true() -> bool {
    true
}

impl CsvSchema {
    pub fn regression(n_features: usize) -> Self {
        CsvSchema {
            target: TargetColumn::Last,
            task: TaskKind::Regression,
            has_header: true,
            n_features: Some(n_features),
        }
    }

    pub fn classification(n_features: usize) -> Self {
        CsvSchema {
            task: TaskKind::Classification,
            ..CsvSchema::regression(n_features)
        }
    }
}

fn ingest(path: &Path, row: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Ingest {
        path: path.to_path_buf(),
        row,
        column,
        message: message.into(),
    }
}

/// Reads a comma-separated file. Row and column numbers in errors are
/// 1-based and count the header line.
///
/// Classification labels are kept as strings and numbered in order of first
/// appearance.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Dataset {
                path: path.to_path_buf(),
                message: format!("{other:?}"),
            },
        })?;

    let mut records = reader.records();
    let mut header: Option<Vec<String>> = None;
    if schema.has_header {
        match records.next() {
            Some(rec) => {
                let rec = rec.map_err(|e| ingest(path, 1, 0, e.to_string()))?;
                header = Some(rec.iter().map(str::to_owned).collect());
            }
            None => return Err(no_rows(path)),
        }
    }

    let mut width = header.as_ref().map(Vec::len);
    let mut target_col = None;
    let mut flat = Vec::new();
    let mut raw_targets: Vec<String> = Vec::new();
    let first_line = if schema.has_header { 2 } else { 1 };

    for (offset, rec) in records.enumerate() {
        let line = first_line + offset;
        let rec = rec.map_err(|e| ingest(path, line, 0, e.to_string()))?;
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        let w = *width.get_or_insert(rec.len());
        if rec.len() != w {
            return Err(ingest(
                path,
                line,
                rec.len().min(w) + 1,
                format!("expected {w} columns, found {}", rec.len()),
            ));
        }
        let t = match target_col {
            Some(t) => t,
            None => {
                let t = resolve_target(path, &schema.target, w, header.as_deref())?;
                if let Some(expected) = schema.n_features {
                    if w - 1 != expected {
                        return Err(ingest(
                            path,
                            line,
                            0,
                            format!("expected {expected} feature columns, found {}", w - 1),
                        ));
                    }
                }
                target_col = Some(t);
                t
            }
        };
        for (j, cell) in rec.iter().enumerate() {
            if j == t {
                raw_targets.push(cell.to_owned());
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| ingest(path, line, j + 1, format!("non-numeric value {cell:?}")))?;
            if !v.is_finite() {
                return Err(ingest(path, line, j + 1, format!("non-finite value {cell:?}")));
            }
            flat.push(v);
        }
    }

    let (Some(w), Some(t)) = (width, target_col) else {
        return Err(no_rows(path));
    };
    let n = raw_targets.len();
    if w < 2 {
        return Err(Error::Dataset {
            path: path.to_path_buf(),
            message: "need at least one feature column besides the target".into(),
        });
    }

    let targets = match schema.task {
        TaskKind::Regression => {
            let mut values = Vec::with_capacity(n);
            for (i, cell) in raw_targets.iter().enumerate() {
                let v: f64 = cell.parse().map_err(|_| {
                    ingest(path, first_line + i, t + 1, format!("non-numeric target {cell:?}"))
                })?;
                values.push(v);
            }
            Targets::Regression(values)
        }
        TaskKind::Classification => {
            let mut index: HashMap<&str, usize> = HashMap::new();
            let labels = raw_targets
                .iter()
                .map(|cell| {
                    let next = index.len();
                    *index.entry(cell.as_str()).or_insert(next)
                })
                .collect();
            Targets::Classes {
                labels,
                n_classes: index.len(),
            }
        }
    };

    let features = Array2::from_shape_vec((n, w - 1), flat).expect("row widths checked");
    let dataset = Dataset::new(features, targets)?;
    match header {
        Some(names) => {
            let names = names
                .into_iter()
                .enumerate()
                .filter(|&(j, _)| j != t)
                .map(|(_, s)| s)
                .collect();
            dataset.with_feature_names(names)
        }
        None => Ok(dataset),
    }
}

fn no_rows(path: &Path) -> Error {
    Error::Dataset {
        path: PathBuf::from(path),
        message: "no data rows".into(),
    }
}

fn resolve_target(
    path: &Path,
    target: &TargetColumn,
    width: usize,
    header: Option<&[String]>,
) -> Result<usize> {
    let t = match target {
        TargetColumn::First => 0,
        TargetColumn::Last => width - 1,
        TargetColumn::Index(i) => *i,
        TargetColumn::Name(name) => {
            let header = header.ok_or_else(|| Error::Dataset {
                path: path.to_path_buf(),
                message: format!("target column {name:?} named but file has no header"),
            })?;
            header.iter().position(|h| h == name).ok_or_else(|| Error::Dataset {
                path: path.to_path_buf(),
                message: format!("no column named {name:?}"),
            })?
        }
    };
    if t >= width {
        return Err(Error::Dataset {
            path: path.to_path_buf(),
            message: format!("target column {t} out of range for {width} columns"),
        });
    }
    Ok(t)
}

/// Writes features followed by the target column, with a header row.
/// Class targets are written as their indices.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref()).map_err(csv_err)?;
    let mut header: Vec<String> = match dataset.feature_names() {
        Some(names) => names.to_vec(),
        None => (0..dataset.n_features()).map(|j| format!("x{j}")).collect(),
    };
    header.push(match dataset.task() {
        TaskKind::Regression => "y".into(),
        TaskKind::Classification => "class".into(),
    });
    writer.write_record(&header).map_err(csv_err)?;
    for i in 0..dataset.n_samples() {
        let mut row: Vec<String> = dataset.row(i).iter().map(|v| format!("{v:?}")).collect();
        row.push(match dataset.targets() {
            Targets::Regression(v) => format!("{:?}", v[i]),
            Targets::Classes { labels, .. } => labels[i].to_string(),
        });
        writer.write_record(&row).map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::config(format!("csv: {other:?}")),
    }
}
