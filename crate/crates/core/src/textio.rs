//! Loading string collections and mapping between global and per-string coordinates.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reserved code for the `$` sentinel.
pub const DOLLAR: u8 = 0x00;
/// Reserved code for the `#` sentinel.
pub const HASH: u8 = 0x01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Fasta,
    Lines,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fasta" | "fa" => Ok(Format::Fasta),
            "lines" | "txt" => Ok(Format::Lines),
            other => Err(Error::Usage(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Fasta => "fasta",
            Format::Lines => "lines",
        })
    }
}

/// The input strings with display names and cumulative offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextCollection {
    pub strings: Vec<Vec<u8>>,
    pub ids: Vec<String>,
    /// `base[x]` is the total length of the strings before `x`.
    pub base: Vec<u64>,
}

impl TextCollection {
    /// Builds a collection, naming strings by their 1-based ordinal.
    pub fn from_strings<I, S>(strings: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let strings: Vec<Vec<u8>> = strings.into_iter().map(|s| s.as_ref().to_vec()).collect();
        let ids = (1..=strings.len()).map(|i| i.to_string()).collect();
        Self::with_ids(strings, ids)
    }

    pub fn with_ids(strings: Vec<Vec<u8>>, ids: Vec<String>) -> Result<Self> {
        assert_eq!(strings.len(), ids.len());
        if strings.is_empty() {
            return Err(Error::EmptyCollection);
        }
        for (s, id) in strings.iter().zip(&ids) {
            if s.is_empty() {
                return Err(Error::EmptyRecord(id.clone()));
            }
            if let Some(offset) = s.iter().position(|&c| c == DOLLAR || c == HASH) {
                return Err(Error::ReservedByte { id: id.clone(), byte: s[offset], offset });
            }
        }
        let mut base = Vec::with_capacity(strings.len());
        let mut acc = 0u64;
        for s in &strings {
            base.push(acc);
            acc += s.len() as u64;
        }
        Ok(TextCollection { strings, ids, base })
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Total sentinel-free length `n`.
    pub fn total_len(&self) -> u64 {
        self.base.last().copied().unwrap_or(0) + self.strings.last().map_or(0, |s| s.len() as u64)
    }

    /// Maps a global offset to `(string index, local offset)`, both 0-based.
    pub fn locate(&self, global: u64) -> Result<(usize, u64)> {
        let n = self.total_len();
        if global >= n {
            return Err(Error::OutOfRange { offset: global, len: n });
        }
        let x = self.base.partition_point(|&b| b <= global) - 1;
        Ok((x, global - self.base[x]))
    }
}

/// Wraps every string as `$T$#`.
pub fn wrap_sentinels(tc: &TextCollection) -> Vec<Vec<u8>> {
    tc.strings.iter().map(|s| wrap(s)).collect()
}

pub fn wrap(s: &[u8]) -> Vec<u8> {
    let mut w = Vec::with_capacity(s.len() + 3);
    w.push(DOLLAR);
    w.extend_from_slice(s);
    w.push(DOLLAR);
    w.push(HASH);
    w
}

/// Inverse of [`wrap`].
pub fn unwrap(w: &[u8]) -> &[u8] {
    &w[1..w.len() - 2]
}

pub fn load(path: impl AsRef<Path>, format: Format) -> Result<TextCollection> {
    let data = fs::read(path)?;
    parse(&data, format)
}

pub fn parse(data: &[u8], format: Format) -> Result<TextCollection> {
    match format {
        Format::Fasta => parse_fasta(data),
        Format::Lines => parse_lines(data),
    }
}

fn trim_cr(line: &[u8]) -> &[u8] {
    line.strip_suffix(b"\r").unwrap_or(line)
}

fn parse_lines(data: &[u8]) -> Result<TextCollection> {
    let mut lines: Vec<&[u8]> = data.split(|&c| c == b'\n').map(trim_cr).collect();
    if lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    TextCollection::from_strings(lines)
}

fn parse_fasta(data: &[u8]) -> Result<TextCollection> {
    let mut strings: Vec<Vec<u8>> = Vec::new();
    let mut ids = Vec::new();
    for (i, line) in data.split(|&c| c == b'\n').map(trim_cr).enumerate() {
        if let Some(header) = line.strip_prefix(b">") {
            let name = String::from_utf8_lossy(header);
            let name = name.split_whitespace().next().unwrap_or("").to_string();
            if name.is_empty() {
                return Err(Error::Fasta { line: i + 1, msg: "empty header".into() });
            }
            ids.push(name);
            strings.push(Vec::new());
        } else if line.is_empty() || line.starts_with(b";") {
            continue;
        } else {
            match strings.last_mut() {
                Some(s) => s.extend_from_slice(line),
                None => {
                    return Err(Error::Fasta { line: i + 1, msg: "sequence before first header".into() })
                }
            }
        }
    }
    TextCollection::with_ids(strings, ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_and_fasta() {
        let tc = parse(b"gtaatagtagtacc\n", Format::Lines).unwrap();
        assert_eq!(tc.len(), 1);
        assert_eq!(tc.strings[0].len(), 14);
        let tc = parse(b"a\nb\n", Format::Lines).unwrap();
        assert_eq!(tc.base, vec![0, 1]);
        assert_eq!(tc.ids, vec!["1", "2"]);
        let tc = parse(b">s1\nAC\nGT\n>s2\nTT\n", Format::Fasta).unwrap();
        assert_eq!(tc.strings, vec![b"ACGT".to_vec(), b"TT".to_vec()]);
        assert_eq!(tc.base, vec![0, 4]);
        assert_eq!(tc.ids, vec!["s1", "s2"]);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(parse(b"AC\n>s\nA\n", Format::Fasta), Err(Error::Fasta { line: 1, .. })));
        assert!(matches!(parse(b">\nA\n", Format::Fasta), Err(Error::Fasta { .. })));
        assert!(matches!(parse(b"", Format::Lines), Err(Error::EmptyCollection)));
        assert!(matches!(parse(b">a\n>b\nA\n", Format::Fasta), Err(Error::EmptyRecord(_))));
        assert!(matches!(parse(b"a\n\nb\n", Format::Lines), Err(Error::EmptyRecord(_))));
        assert!(matches!(
            parse(b"ab\x01c\n", Format::Lines),
            Err(Error::ReservedByte { byte: 1, offset: 2, .. })
        ));
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap(b"gtaatagtagtacc").len(), 17);
        assert_eq!(wrap(b"a"), vec![DOLLAR, b'a', DOLLAR, HASH]);
        assert_eq!(wrap(b""), vec![DOLLAR, DOLLAR, HASH]);
        assert_eq!(unwrap(&wrap(b"acgt")), b"acgt");
    }

    #[test]
    fn locate_examples() {
        let tc = TextCollection::from_strings(["ACGT", "TT"]).unwrap();
        assert_eq!(tc.locate(4).unwrap(), (1, 0));
        assert_eq!(tc.locate(3).unwrap(), (0, 3));
        assert!(matches!(tc.locate(6), Err(Error::OutOfRange { .. })));
        let tc = TextCollection::from_strings(["gtaatagtagtacc"]).unwrap();
        assert_eq!(tc.locate(7).unwrap(), (0, 7));
    }
}
