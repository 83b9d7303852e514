//! Models-by-datasets tables built from one or more results files.

use std::collections::HashMap;
use std::fmt::Write;

use gentleboost::RunRecord;

use crate::error::{CliError, Result};
use crate::results::Metric;

pub const MISSING: &str = "—";

/// Concatenates record sets, dropping exact duplicates (timing aside).
/// Two records with the same (dataset, model, seed) but different outcomes
/// are a merge error.
pub fn merge(sets: impl IntoIterator<Item = Vec<RunRecord>>) -> Result<Vec<RunRecord>> {
    let mut out: Vec<RunRecord> = Vec::new();
    let mut index: HashMap<(String, String, u64), usize> = HashMap::new();
    for record in sets.into_iter().flatten() {
        match index.get(&record.key()) {
            Some(&i) => {
                if !out[i].same_outcome(&record) {
                    return Err(CliError::Merge {
                        dataset: record.dataset,
                        model: record.model,
                        seed: record.seed,
                    });
                }
            }
            None => {
                index.insert(record.key(), out.len());
                out.push(record);
            }
        }
    }
    Ok(out)
}

/// One metric, models as rows and datasets as columns. Each cell is the
/// mean over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metric: Metric,
    pub models: Vec<String>,
    pub datasets: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
}

fn first_seen<'a>(it: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for s in it {
        if !seen.iter().any(|x| x == s) {
            seen.push(s.to_string());
        }
    }
    seen
}

impl Table {
    /// Rows and columns keep their order of first appearance.
    pub fn build(metric: Metric, records: &[RunRecord]) -> Self {
        let models = first_seen(records.iter().map(|r| r.model.as_str()));
        let datasets = first_seen(records.iter().map(|r| r.dataset.as_str()));
        let cells = models
            .iter()
            .map(|m| {
                datasets
                    .iter()
                    .map(|d| {
                        let values: Vec<f64> = records
                            .iter()
                            .filter(|r| &r.model == m && &r.dataset == d)
                            .filter_map(|r| metric.of(r))
                            .collect();
                        (!values.is_empty())
                            .then(|| values.iter().sum::<f64>() / values.len() as f64)
                    })
                    .collect()
            })
            .collect();
        Self {
            metric,
            models,
            datasets,
            cells,
        }
    }

    pub fn render_text(&self) -> String {
        let fmt = |c: &Option<f64>| c.map_or_else(|| MISSING.to_string(), |v| format!("{v:.6}"));
        let mut rows = vec![std::iter::once(self.metric.to_string())
            .chain(self.datasets.iter().cloned())
            .collect::<Vec<_>>()];
        for (m, cells) in self.models.iter().zip(&self.cells) {
            rows.push(
                std::iter::once(m.clone())
                    .chain(cells.iter().map(fmt))
                    .collect(),
            );
        }
        let ncols = self.datasets.len() + 1;
        let widths: Vec<usize> = (0..ncols)
            .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                let pad = widths[j] - cell.chars().count();
                if j == 0 {
                    write!(out, "{cell}{}", " ".repeat(pad)).unwrap();
                } else {
                    write!(out, "  {}{cell}", " ".repeat(pad)).unwrap();
                }
            }
            out.push('\n');
            if i == 0 {
                let total = widths.iter().sum::<usize>() + 2 * (ncols - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        out
    }

    /// Rows of `metric,model,<dataset>...` with a header row.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut csv::Writer<W>) -> Result<()> {
        let mut header = vec!["metric".to_string(), "model".to_string()];
        header.extend(self.datasets.iter().cloned());
        w.write_record(&header)?;
        for (m, cells) in self.models.iter().zip(&self.cells) {
            let mut row = vec![self.metric.to_string(), m.clone()];
            row.extend(
                cells
                    .iter()
                    .map(|c| c.map_or_else(|| MISSING.to_string(), |v| v.to_string())),
            );
            w.write_record(&row)?;
        }
        Ok(())
    }
}
