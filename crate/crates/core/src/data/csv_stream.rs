use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::path::{Path, PathBuf};

use csv::StringRecord;

use super::schema::{ColumnKind, StreamSchema};
use super::Labelled;
use crate::error::{Error, Result};
use crate::types::{BinaryLabel, Instance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Replace missing or unparseable numeric cells by 0 instead of failing.
    pub impute_missing: bool,
}

/// Streaming reader yielding instances in file order.
pub struct CsvStream {
    path: PathBuf,
    reader: csv::Reader<File>,
    schema: StreamSchema,
    options: LoadOptions,
    feature_idx: Vec<usize>,
    label_idx: usize,
    ordinal_codes: Vec<HashMap<String, usize>>,
    pending: Option<StringRecord>,
    row: usize,
    tokens: BTreeSet<String>,
    imputed: usize,
    finished: bool,
}

/// Opens `path` and checks its header against `schema`. Files without a
/// header or without data rows are rejected here.
pub fn load_csv(
    path: impl AsRef<Path>,
    schema: &StreamSchema,
    options: LoadOptions,
) -> Result<CsvStream> {
    let path = path.as_ref().to_path_buf();
    schema.validate()?;
    let ingest = |row: usize, column: &str, reason: String| Error::Ingest {
        path: path.clone(),
        row,
        column: column.to_string(),
        reason,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(&path)?;
    let header = reader.headers()?.clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(ingest(0, "", "empty file".into()));
    }
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ingest(0, name, "column missing from header".into()))
    };
    let feature_idx = schema
        .features
        .iter()
        .map(|f| find(f))
        .collect::<Result<Vec<_>>>()?;
    let label_idx = find(&schema.label)?;

    let mut first = StringRecord::new();
    if !reader.read_record(&mut first)? {
        return Err(ingest(1, "", "empty file: no data rows".into()));
    }
    Ok(CsvStream {
        path,
        reader,
        ordinal_codes: vec![HashMap::new(); schema.arity()],
        schema: schema.clone(),
        options,
        feature_idx,
        label_idx,
        pending: Some(first),
        row: 0,
        tokens: BTreeSet::new(),
        imputed: 0,
        finished: false,
    })
}

impl CsvStream {
    pub fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    /// Distinct label tokens observed so far.
    pub fn label_tokens(&self) -> &BTreeSet<String> {
        &self.tokens
    }

    /// Number of numeric cells replaced by 0.
    pub fn imputed(&self) -> usize {
        self.imputed
    }

    fn error(&self, column: &str, reason: String) -> Error {
        Error::Ingest {
            path: self.path.clone(),
            row: self.row,
            column: column.to_string(),
            reason,
        }
    }

    fn parse_record(&mut self, record: &StringRecord) -> Result<Labelled> {
        let mut features = Vec::with_capacity(self.feature_idx.len());
        for j in 0..self.feature_idx.len() {
            let name = &self.schema.features[j];
            let cell = record.get(self.feature_idx[j]).unwrap_or("");
            let value = match self.schema.kinds[j] {
                ColumnKind::Ordinal => {
                    let codes = &mut self.ordinal_codes[j];
                    let next = codes.len();
                    *codes.entry(cell.to_string()).or_insert(next) as f64
                }
                ColumnKind::Numeric => match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => v,
                    _ if self.options.impute_missing => {
                        self.imputed += 1;
                        0.0
                    }
                    Ok(v) => return Err(self.error(name, format!("non-finite value {v}"))),
                    Err(_) if cell.is_empty() => {
                        return Err(self.error(name, "missing numeric value".into()))
                    }
                    Err(_) => {
                        return Err(self.error(name, format!("cannot parse `{cell}` as a number")))
                    }
                },
            };
            features.push(value);
        }
        let token = record.get(self.label_idx).unwrap_or("");
        if token.is_empty() {
            return Err(self.error(&self.schema.label.clone(), "missing label".into()));
        }
        if !self.tokens.contains(token) {
            self.tokens.insert(token.to_string());
        }
        let label = if token == self.schema.positive {
            BinaryLabel::Positive
        } else {
            BinaryLabel::Negative
        };
        let seq = (self.row - 1) as u64;
        Ok((Instance::new(seq, features)?, label))
    }

    fn finish(&mut self) {
        if !self.finished {
            self.finished = true;
            log::info!(
                "{}: {} rows, label tokens {:?} (positive = {:?}), {} imputed cells",
                self.schema.name,
                self.row,
                self.tokens,
                self.schema.positive,
                self.imputed
            );
        }
    }
}

impl Iterator for CsvStream {
    type Item = Result<Labelled>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        let record = match self.pending.take() {
            Some(r) => r,
            None => {
                let mut r = StringRecord::new();
                match self.reader.read_record(&mut r) {
                    Ok(true) => r,
                    Ok(false) => {
                        self.finish();
                        return None;
                    }
                    Err(e) => {
                        self.finished = true;
                        return Some(Err(e.into()));
                    }
                }
            }
        };
        self.row += 1;
        let item = self.parse_record(&record);
        if item.is_err() {
            self.finished = true;
        }
        Some(item)
    }
}

/// Writes labelled items in the schema's column order. Labels are written as
/// the positive token or [`StreamSchema::negative_token`].
pub fn write_csv<'a>(
    path: impl AsRef<Path>,
    schema: &StreamSchema,
    items: impl IntoIterator<Item = &'a Labelled>,
) -> Result<usize> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = schema.features.clone();
    header.push(schema.label.clone());
    w.write_record(&header)?;
    let negative = schema.negative_token();
    let mut rows = 0;
    for (x, y) in items {
        if x.dim() != schema.arity() {
            return Err(Error::Data(format!(
                "instance {} has {} features, schema has {}",
                x.seq(),
                x.dim(),
                schema.arity()
            )));
        }
        let mut rec: Vec<String> = x.features().iter().map(|v| v.to_string()).collect();
        rec.push(match y {
            BinaryLabel::Positive => schema.positive.clone(),
            BinaryLabel::Negative => negative.clone(),
        });
        w.write_record(&rec)?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}
