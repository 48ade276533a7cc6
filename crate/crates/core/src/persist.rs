//! JSON and CSV forms of a [`ValueTable`].
//!
//! The JSON document carries a SHA-256 checksum of the CSV rendering of its
//! entries, so a cached dictionary that was edited or truncated is rejected
//! on load.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::board::{enumerate_canonical, CanonicalBoard};
use crate::monoid::{ElementParseError, MonoidElement};
use crate::quotient::{TableError, ValueTable};

pub const FORMAT: &str = "notakto-value-table/1";
pub const CSV_HEADER: &str = "code,board,value,dead";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub code: u16,
    pub board: String,
    pub value: String,
    pub dead: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub format: String,
    pub checksum: String,
    pub entries: Vec<TableRecord>,
}

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("malformed table document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported table format {0:?}")]
    Format(String),
    #[error("checksum mismatch: document says {stored}, entries hash to {computed}")]
    Checksum { stored: String, computed: String },
    #[error("record for code {code}: {reason}")]
    Record { code: u16, reason: String },
    #[error("record for code {code}: {source}")]
    Value {
        code: u16,
        #[source]
        source: ElementParseError,
    },
    #[error(transparent)]
    Table(#[from] TableError),
}

pub fn records(t: &ValueTable) -> Vec<TableRecord> {
    t.entries()
        .map(|(c, v)| TableRecord {
            code: c.code(),
            board: c.to_string(),
            value: v.to_string(),
            dead: c.is_dead(),
        })
        .collect()
}

fn csv_of(records: &[TableRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!("{},{},{},{}\n", r.code, r.board, r.value, r.dead));
    }
    out
}

pub fn checksum(records: &[TableRecord]) -> String {
    Sha256::digest(csv_of(records).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn to_csv(t: &ValueTable) -> String {
    csv_of(&records(t))
}

pub fn to_document(t: &ValueTable) -> TableDocument {
    let entries = records(t);
    TableDocument {
        format: FORMAT.to_string(),
        checksum: checksum(&entries),
        entries,
    }
}

pub fn to_json(t: &ValueTable) -> String {
    serde_json::to_string_pretty(&to_document(t)).expect("document serializes")
}

pub fn from_json(text: &str) -> Result<ValueTable, PersistError> {
    from_document(serde_json::from_str(text)?)
}

pub fn from_document(doc: TableDocument) -> Result<ValueTable, PersistError> {
    if doc.format != FORMAT {
        return Err(PersistError::Format(doc.format));
    }
    let computed = checksum(&doc.entries);
    if computed != doc.checksum {
        return Err(PersistError::Checksum {
            stored: doc.checksum,
            computed,
        });
    }
    let mut entries = Vec::with_capacity(doc.entries.len());
    for r in &doc.entries {
        let bad = |reason: &str| PersistError::Record {
            code: r.code,
            reason: reason.to_string(),
        };
        let class =
            CanonicalBoard::from_code(r.code).ok_or_else(|| bad("not a canonical board"))?;
        if class.to_string() != r.board {
            return Err(bad("board text does not match code"));
        }
        if class.is_dead() != r.dead {
            return Err(bad("dead flag does not match board"));
        }
        let value: MonoidElement = r.value.parse().map_err(|source| PersistError::Value {
            code: r.code,
            source,
        })?;
        entries.push((class, value));
    }
    if entries.len() != enumerate_canonical().len() {
        return Err(PersistError::Record {
            code: entries.last().map_or(0, |e| e.0.code()),
            reason: format!("expected 102 records, found {}", entries.len()),
        });
    }
    Ok(ValueTable::from_entries(entries)?)
}
