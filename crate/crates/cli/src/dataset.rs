//! Dataset references as they appear on the command line and in config
//! files: either `synthetic:<generator>[:k=v,...]` or the path of a schema
//! file whose `file` key names the CSV.

use std::path::PathBuf;

use gentleboost::data::{generate, load_csv, BoxStream, LoadOptions, StreamSchema, SyntheticSpec};
use gentleboost::Error;

use crate::error::{CliError, Result};

const SYNTHETIC_PREFIX: &str = "synthetic:";

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Synthetic(SyntheticSpec),
    Csv { schema: StreamSchema, path: PathBuf },
}

impl DatasetSource {
    /// Resolves a reference without reading any data rows.
    pub fn resolve(reference: &str) -> Result<Self> {
        if let Some(rest) = reference.strip_prefix(SYNTHETIC_PREFIX) {
            return Ok(Self::Synthetic(rest.parse()?));
        }
        let schema_path = PathBuf::from(reference);
        let schema = StreamSchema::from_path(&schema_path).map_err(|e| match e {
            Error::Io(io) => CliError::Config(format!("cannot read schema `{reference}`: {io}")),
            other => other.into(),
        })?;
        let path = schema
            .file
            .clone()
            .ok_or_else(|| CliError::Config(format!("schema `{reference}` has no `file` entry")))?;
        Ok(Self::Csv { schema, path })
    }

    /// Name used in result rows.
    pub fn id(&self) -> String {
        match self {
            Self::Synthetic(spec) => format!("{SYNTHETIC_PREFIX}{}", spec.id()),
            Self::Csv { schema, .. } => schema.name.clone(),
        }
    }

    /// Opens a fresh stream from the first instance.
    pub fn open(&self, options: LoadOptions) -> Result<BoxStream> {
        Ok(match self {
            Self::Synthetic(spec) => Box::new(generate(spec)?.into_iter().map(Ok)),
            Self::Csv { schema, path } => Box::new(load_csv(path, schema, options)?),
        })
    }
}
