//! Stream sources: CSV files described by schema files, and seeded
//! synthetic generators.

mod csv_stream;
mod schema;
mod synth;

pub use csv_stream::{load_csv, write_csv, CsvStream, LoadOptions};
pub use schema::{ColumnKind, StreamSchema};
pub use synth::{generate, Generator, SyntheticSpec};

use crate::error::Result;
use crate::types::{BinaryLabel, Instance};

/// A labelled item as streams yield it.
pub type Labelled = (Instance, BinaryLabel);

/// Boxed stream of labelled items.
pub type BoxStream = Box<dyn Iterator<Item = Result<Labelled>> + Send>;
