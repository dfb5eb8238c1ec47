//! On-disk Gröbner basis cache.
//!
//! ```text
//! group=G39
//! s=1
//! order=degrevlex(T,x1,y1,x2,y2,a,b,c)
//! tool_version=0.1.0
//! <one polynomial per line>
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use super::{GbError, ReducedGB};
use crate::polyring::{ParseError, Poly, PolyRing};

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache file is empty")]
    Empty,
    #[error("cache header is missing `{0}=`")]
    MissingHeader(&'static str),
    #[error("cache header `{key}` mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch {
        key: &'static str,
        expected: String,
        found: String,
    },
    #[error("cache line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("cached basis rejected: {0}")]
    Invalid(#[from] GbError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheHeader {
    pub group: String,
    pub s: u32,
    pub order: String,
    pub tool_version: String,
}

impl CacheHeader {
    fn fields(&self) -> [(&'static str, String); 4] {
        [
            ("group", self.group.clone()),
            ("s", self.s.to_string()),
            ("order", self.order.clone()),
            ("tool_version", self.tool_version.clone()),
        ]
    }
}

pub fn save_gb(gb: &ReducedGB, header: &CacheHeader, path: &Path) -> Result<(), CacheError> {
    let mut out = Vec::new();
    for (k, v) in header.fields() {
        writeln!(out, "{k}={v}")?;
    }
    for g in gb.basis() {
        writeln!(out, "{g}")?;
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Loads a basis, rejecting files whose header differs from `expected`.
pub fn load_gb(path: &Path, expected: &CacheHeader, ring: &Arc<PolyRing>) -> Result<ReducedGB, CacheError> {
    let text = fs::read_to_string(path)?;
    if text.trim().is_empty() {
        return Err(CacheError::Empty);
    }
    let mut lines = text.lines().enumerate();
    for (key, want) in expected.fields() {
        let found = match lines.next() {
            Some((_, line)) => match line.split_once('=') {
                Some((k, v)) if k.trim() == key => v.trim().to_string(),
                _ => return Err(CacheError::MissingHeader(key)),
            },
            None => return Err(CacheError::MissingHeader(key)),
        };
        if found != want {
            return Err(CacheError::HeaderMismatch { key, expected: want, found });
        }
    }
    let mut basis = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let p = Poly::parse(line, ring).map_err(|source| CacheError::Parse { line: n + 1, source })?;
        basis.push(p);
    }
    Ok(ReducedGB::from_reduced_basis(ring, basis)?)
}
