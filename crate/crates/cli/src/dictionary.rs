//! Loading, building and caching the value table.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use notakto::oracle::Oracle;
use notakto::persist::{self, PersistError};
use notakto::quotient::{infer_value_table, InferenceConfig, InferenceError, ValueTable};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DictError {
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("cannot write dictionary cache {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Where the table in use came from.
#[derive(Debug)]
pub enum Source {
    Cache(PathBuf),
    /// Inferred fresh. `rejected` holds the reason an existing cache file was
    /// discarded, if there was one.
    Inferred {
        written: Option<PathBuf>,
        rejected: Option<String>,
    },
}

#[derive(Debug)]
enum CacheProblem {
    Missing,
    Unreadable(io::Error),
    Invalid(PersistError),
}

fn read_cache(path: &Path) -> Result<ValueTable, CacheProblem> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CacheProblem::Missing,
        _ => CacheProblem::Unreadable(e),
    })?;
    persist::from_json(&text).map_err(CacheProblem::Invalid)
}

/// Loads the cached table at `cache` if it is present and valid. Otherwise
/// infers the table and, when a cache path was given, (over)writes it.
pub fn load_or_build(
    cache: Option<&Path>,
    oracle: &Oracle,
) -> Result<(ValueTable, Source), DictError> {
    let mut rejected = None;
    if let Some(path) = cache {
        match read_cache(path) {
            Ok(t) => return Ok((t, Source::Cache(path.to_path_buf()))),
            Err(CacheProblem::Missing) => {}
            Err(CacheProblem::Unreadable(e)) => rejected = Some(e.to_string()),
            Err(CacheProblem::Invalid(e)) => rejected = Some(e.to_string()),
        }
    }
    let table = infer_value_table(oracle, &InferenceConfig::default())?;
    let written = match cache {
        Some(path) => {
            fs::write(path, persist::to_json(&table)).map_err(|source| DictError::Write {
                path: path.to_path_buf(),
                source,
            })?;
            Some(path.to_path_buf())
        }
        None => None,
    };
    Ok((table, Source::Inferred { written, rejected }))
}

impl Source {
    /// One-line note for stderr, if anything noteworthy happened.
    pub fn note(&self) -> Option<String> {
        match self {
            Source::Cache(_) => None,
            Source::Inferred {
                written,
                rejected: Some(why),
            } => Some(format!(
                "discarded cached dictionary ({why}); regenerated{}",
                written
                    .as_ref()
                    .map(|p| format!(" and wrote {}", p.display()))
                    .unwrap_or_default()
            )),
            Source::Inferred {
                written: Some(p),
                rejected: None,
            } => Some(format!(
                "inferred dictionary and cached it at {}",
                p.display()
            )),
            Source::Inferred { .. } => None,
        }
    }
}
