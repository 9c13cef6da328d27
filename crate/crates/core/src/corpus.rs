//! Input corpora: raw bytes, or FASTA records concatenated into one text.
//!
//! Records are joined without a separator symbol. Each keeps its start
//! offset, and a match is reported only if it lies inside a single record.

use crate::error::{Error, Result};

/// One FASTA record inside the concatenated text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Record {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// Text to index plus its record layout. `records` is empty for raw input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub text: Vec<u8>,
    pub records: Vec<Record>,
}

impl Corpus {
    pub fn raw(text: Vec<u8>) -> Self {
        Corpus { text, records: Vec::new() }
    }

    /// Parses FASTA: `>` lines name records, other lines are sequence data
    /// with whitespace removed. Blank lines are ignored.
    pub fn parse_fasta(data: &[u8]) -> Result<Self> {
        let mut text = Vec::new();
        let mut records: Vec<Record> = Vec::new();
        for (lineno, line) in data.split(|&b| b == b'\n').enumerate() {
            if let Some(header) = line.strip_prefix(b">") {
                if let Some(last) = records.last_mut() {
                    last.len = text.len() - last.start;
                }
                let name = String::from_utf8_lossy(header).trim().to_string();
                let name = name.split_whitespace().next().unwrap_or("").to_string();
                records.push(Record { name, start: text.len(), len: 0 });
                continue;
            }
            let before = text.len();
            text.extend(line.iter().filter(|b| !b.is_ascii_whitespace()));
            if text.len() > before && records.is_empty() {
                return Err(Error::Format(format!("FASTA line {}: sequence before the first header", lineno + 1)));
            }
        }
        match records.last_mut() {
            Some(last) => last.len = text.len() - last.start,
            None => return Err(Error::Format("FASTA input has no records".into())),
        }
        Ok(Corpus { text, records })
    }

    pub fn is_fasta(&self) -> bool {
        !self.records.is_empty()
    }
}

/// Maps text positions back to records.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordMap {
    records: Vec<Record>,
}

impl RecordMap {
    pub fn new(records: Vec<Record>) -> Self {
        RecordMap { records }
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record holding text position `pos`, with the offset inside it.
    pub fn resolve(&self, pos: usize) -> Option<(usize, usize)> {
        let i = self.records.partition_point(|r| r.start <= pos).checked_sub(1)?;
        // Empty records share their start with the next one.
        let r = &self.records[i];
        (pos < r.end()).then(|| (i, pos - r.start))
    }

    /// Whether `[pos, pos + m)` lies inside one record.
    pub fn within_record(&self, pos: usize, m: usize) -> bool {
        match self.resolve(pos) {
            Some((i, _)) => pos + m.max(1) <= self.records[i].end(),
            None => false,
        }
    }

    /// `name:offset` for a text position.
    pub fn label(&self, pos: usize) -> String {
        match self.resolve(pos) {
            Some((i, off)) => format!("{}:{}", self.records[i].name, off),
            None => pos.to_string(),
        }
    }
}
