//! Binary n-gram table files.
//!
//! Layout, all integers little-endian:
//! `b"LXNG"`, version `u32`, n `u32`, tokenizer fingerprint `u64`, corpus
//! fingerprint `u64`, total summaries `u64`, entry count `u64`, then the
//! `(hash u64, count u64)` entries sorted by hash.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use lexdiv_core::ngram::CountMap;
use lexdiv_core::{NGramTable, Tokenizer};

pub const MAGIC: &[u8; 4] = b"LXNG";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("table file I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a lexdiv table file")]
    BadMagic,
    #[error("unsupported table format version {0}")]
    Version(u32),
    #[error("table was built with tokenizer {found:016x}, current configuration is {expected:016x}")]
    TokenizerMismatch { expected: u64, found: u64 },
    #[error("table order is {found}, requested {expected}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("table entries are not strictly sorted")]
    Unsorted,
    #[error(transparent)]
    Core(#[from] lexdiv_core::Error),
}

pub fn save(table: &NGramTable, path: &Path) -> Result<(), TableError> {
    let mut w = BufWriter::new(File::create(path)?);
    let entries = table.sorted_entries();
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&u32::try_from(table.n()).expect("n fits u32").to_le_bytes())?;
    for v in [table.tokenizer_fingerprint(), table.corpus_fingerprint(), table.total_summaries(), entries.len() as u64]
    {
        w.write_all(&v.to_le_bytes())?;
    }
    for (k, c) in entries {
        w.write_all(&k.to_le_bytes())?;
        w.write_all(&c.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn u32_of(r: &mut impl Read) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn u64_of(r: &mut impl Read) -> std::io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Load a table, refusing one built under a different tokenizer or order.
pub fn load(path: &Path, tokenizer: &Tokenizer, n: Option<usize>) -> Result<NGramTable, TableError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(TableError::BadMagic);
    }
    let version = u32_of(&mut r)?;
    if version != FORMAT_VERSION {
        return Err(TableError::Version(version));
    }
    let order = u32_of(&mut r)? as usize;
    if let Some(expected) = n.filter(|e| *e != order) {
        return Err(TableError::OrderMismatch { expected, found: order });
    }
    let tok_fp = u64_of(&mut r)?;
    if tok_fp != tokenizer.fingerprint() {
        return Err(TableError::TokenizerMismatch { expected: tokenizer.fingerprint(), found: tok_fp });
    }
    let corpus_fp = u64_of(&mut r)?;
    let total = u64_of(&mut r)?;
    let len = u64_of(&mut r)?;
    let mut counts = CountMap::with_capacity_and_hasher(len as usize, Default::default());
    let mut prev: Option<u64> = None;
    for _ in 0..len {
        let k = u64_of(&mut r)?;
        if prev.is_some_and(|p| p >= k) {
            return Err(TableError::Unsorted);
        }
        prev = Some(k);
        counts.insert(k, u64_of(&mut r)?);
    }
    Ok(NGramTable::from_parts(order, counts, total, tok_fp, corpus_fp)?)
}
