//! Binary model snapshots.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "GBSNAP\r\n"
//! version  u16
//! section* u16 tag | u64 length | payload
//! ```
//!
//! Sections are `META` (tool version, dataset id, instances seen), `MODEL`
//! (the full model, RNG state included) and a final `CHECKSUM` holding the
//! SHA-256 of every byte before it. Payloads are bincode encoded, which
//! stores floats as their exact bit patterns.

use std::fs;
use std::path::Path;

use gentleboost::Model;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::results::TOOL_VERSION;

pub const MAGIC: [u8; 8] = *b"GBSNAP\r\n";
pub const FORMAT_VERSION: u16 = 1;

const TAG_META: u16 = 1;
const TAG_MODEL: u16 = 2;
const TAG_CHECKSUM: u16 = 0xFFFF;
const SECTION_HEADER: usize = 2 + 8;
const PREAMBLE: usize = MAGIC.len() + 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub tool: String,
    /// Dataset the model was trained on, if known.
    pub dataset: Option<String>,
    /// Number of stream instances already learned.
    pub instances_seen: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub meta: SnapshotMeta,
    pub model: Model,
}

impl Snapshot {
    pub fn new(model: Model, dataset: Option<String>, instances_seen: u64) -> Self {
        Self {
            meta: SnapshotMeta {
                tool: TOOL_VERSION.to_string(),
                dataset,
                instances_seen,
            },
            model,
        }
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        buf.extend_from_slice(&MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        put_section(&mut buf, TAG_META, &encode_payload(&self.meta)?);
        put_section(&mut buf, TAG_MODEL, &encode_payload(&self.model)?);
        let digest = Sha256::digest(&buf);
        put_section(&mut buf, TAG_CHECKSUM, &digest);
        Ok(buf)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < PREAMBLE || bytes[..MAGIC.len()] != MAGIC {
            return Err(CliError::Corrupt("not a snapshot file (bad magic)".into()));
        }
        let version = u16::from_le_bytes([bytes[8], bytes[9]]);
        if version != FORMAT_VERSION {
            return Err(CliError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }

        let mut meta = None;
        let mut model = None;
        let mut pos = PREAMBLE;
        loop {
            let (tag, payload, next) = take_section(bytes, pos)?;
            match tag {
                TAG_META if meta.is_none() => meta = Some(payload),
                TAG_MODEL if model.is_none() => model = Some(payload),
                TAG_CHECKSUM => {
                    if Sha256::digest(&bytes[..pos]).as_slice() != payload {
                        return Err(CliError::Corrupt("checksum mismatch".into()));
                    }
                    if next != bytes.len() {
                        return Err(CliError::Corrupt("trailing bytes after checksum".into()));
                    }
                    break;
                }
                other => {
                    return Err(CliError::Corrupt(format!(
                        "unexpected section tag {other:#06x} at byte {pos}"
                    )))
                }
            }
            pos = next;
        }
        let missing = |what: &str| CliError::Corrupt(format!("missing {what} section"));
        Ok(Self {
            meta: decode_payload(meta.ok_or_else(|| missing("meta"))?)?,
            model: decode_payload(model.ok_or_else(|| missing("model"))?)?,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.encode()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::decode(&fs::read(path)?)
    }
}

fn encode_payload<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    bincode::serialize(value).map_err(|e| CliError::Corrupt(format!("cannot encode: {e}")))
}

fn decode_payload<'a, T: Deserialize<'a>>(bytes: &'a [u8]) -> Result<T> {
    bincode::deserialize(bytes)
        .map_err(|e| CliError::Corrupt(format!("cannot decode payload: {e}")))
}

fn put_section(buf: &mut Vec<u8>, tag: u16, payload: &[u8]) {
    buf.extend_from_slice(&tag.to_le_bytes());
    buf.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    buf.extend_from_slice(payload);
}

fn take_section(bytes: &[u8], pos: usize) -> Result<(u16, &[u8], usize)> {
    let truncated = || CliError::Corrupt(format!("truncated section at byte {pos}"));
    let header = bytes.get(pos..pos + SECTION_HEADER).ok_or_else(truncated)?;
    let tag = u16::from_le_bytes([header[0], header[1]]);
    let len = u64::from_le_bytes(header[2..].try_into().expect("8-byte slice"));
    let start = pos + SECTION_HEADER;
    let end = usize::try_from(len)
        .ok()
        .and_then(|l| start.checked_add(l))
        .filter(|&e| e <= bytes.len())
        .ok_or_else(truncated)?;
    Ok((tag, &bytes[start..end], end))
}
