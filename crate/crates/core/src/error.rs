use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed FASTA at line {line}: {msg}")]
    Fasta { line: usize, msg: String },
    #[error("empty collection")]
    EmptyCollection,
    #[error("record {0} is empty")]
    EmptyRecord(String),
    #[error("record {id} contains reserved sentinel byte 0x{byte:02x} at offset {offset}")]
    ReservedByte { id: String, byte: u8, offset: usize },
    #[error("offset {offset} out of range (total length {len})")]
    OutOfRange { offset: u64, len: u64 },
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u32),
    #[error("truncated grammar file")]
    Truncated,
    #[error("corrupt grammar file: {0}")]
    Corrupt(String),
    #[error("{0}")]
    Usage(String),
}
