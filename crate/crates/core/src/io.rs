//! Index file format.
//!
//! Little-endian fixed-width integers throughout. Layout:
//!
//! ```text
//! header   magic "PKIDX1", version u16, w u8, σ u16, b u8, α u8, n u64, t u64
//! alphabet σ bytes
//! words    u64 count, u64 each
//! sa       u64 count, u32 each
//! lcp      u64 count, u32 each
//! tree     nine arrays: parent, depth, edge start, edge end, sa lo, sa hi,
//!          child offsets, child codes (u16), child nodes
//! short    u64 count, u32 each
//! micro    u64 count, then per tree: kind u8, root node u32, root depth u32,
//!          nav pairs, skip (u32 × 3), light pairs, heavy pairs
//! ledger   u64 × 3
//! records  u64 count, then per record: name (u32 length + bytes), start u64, len u64
//! ```
//!
//! Loading checks sizes and references so that a damaged file fails with an
//! error instead of a panic. It does not re-verify the suffix order; that
//! is the job of `verify`.

use std::fs;
use std::path::Path;

use crate::corpus::{Record, RecordMap};
use crate::error::{Error, Result};
use crate::heavy::{HeavyIndex, MicroRecord, PromotionLedger};
use crate::index::Index;
use crate::packed::{Alphabet, Code, Packed, PackedText};
use crate::short_table::ShortPatternTable;
use crate::suffix::{SuffixArrayIndex, SuffixTree, TreeParts};

pub const MAGIC: &[u8; 6] = b"PKIDX1";
pub const FORMAT_VERSION: u16 = 1;
pub const WORD_BITS: u8 = 64;

/// Fixed-size file header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub version: u16,
    pub word_bits: u8,
    pub sigma: u16,
    pub bits: u8,
    pub alpha: u8,
    pub n: u64,
    pub threshold: u64,
}

/// An index together with the FASTA record layout of its text, if any.
#[derive(Clone, Debug)]
pub struct IndexFile {
    pub index: Index,
    pub records: RecordMap,
}

impl IndexFile {
    pub fn new(index: Index, records: Vec<Record>) -> Self {
        IndexFile { index, records: RecordMap::new(records) }
    }

    pub fn header(&self) -> Header {
        let alphabet = self.index.alphabet();
        Header {
            version: FORMAT_VERSION,
            word_bits: WORD_BITS,
            sigma: alphabet.sigma() as u16,
            bits: alphabet.bits_per_symbol() as u8,
            alpha: alphabet.chars_per_word() as u8,
            n: self.index.len() as u64,
            threshold: self.index.threshold() as u64,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let idx = &self.index;
        let h = self.header();
        let mut w = Writer::default();
        w.bytes(MAGIC);
        w.u16(h.version);
        w.u8(h.word_bits);
        w.u16(h.sigma);
        w.u8(h.bits);
        w.u8(h.alpha);
        w.u64(h.n);
        w.u64(h.threshold);
        w.bytes(idx.alphabet().symbols());
        w.u64_vec(idx.text().words());
        w.u32_vec(idx.suffix_array().sa());
        w.u32_vec(idx.suffix_array().lcp());

        let t = idx.tree().to_parts();
        for v in [&t.parent, &t.depth, &t.edge_start, &t.edge_end, &t.sa_lo, &t.sa_hi, &t.child_offsets] {
            w.u32_vec(v);
        }
        w.u64(t.child_codes.len() as u64);
        for &c in &t.child_codes {
            w.u16(c);
        }
        w.u32_vec(&t.child_nodes);

        w.u32_vec(idx.short_table().entries());

        let micro = idx.heavy().records();
        w.u64(micro.len() as u64);
        for r in &micro {
            w.u8(r.kind);
            w.u32(r.root_node);
            w.u32(r.root_depth);
            w.pairs(&r.nav);
            w.u32(r.skip.0);
            w.u32(r.skip.1);
            w.u32(r.skip.2);
            w.pairs(&r.light);
            w.pairs(&r.heavy);
        }
        let ledger = idx.heavy().ledger();
        w.u64(ledger.type1);
        w.u64(ledger.type2a);
        w.u64(ledger.type2b);

        let records = self.records.records();
        w.u64(records.len() as u64);
        for r in records {
            w.u32(r.name.len() as u32);
            w.bytes(r.name.as_bytes());
            w.u64(r.start as u64);
            w.u64(r.len as u64);
        }
        w.buf
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        let mut r = Reader { data, pos: 0 };
        if r.take(MAGIC.len())? != MAGIC {
            return Err(Error::Format("not an index file".into()));
        }
        let h = Header {
            version: r.u16()?,
            word_bits: r.u8()?,
            sigma: r.u16()?,
            bits: r.u8()?,
            alpha: r.u8()?,
            n: r.u64()?,
            threshold: r.u64()?,
        };
        if h.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format version {}", h.version)));
        }
        if h.word_bits != WORD_BITS {
            return Err(Error::Format(format!("index built for {}-bit words", h.word_bits)));
        }
        let alphabet = Alphabet::from_symbols(r.take(h.sigma as usize)?.to_vec())?;
        if alphabet.bits_per_symbol() != h.bits as u32 || alphabet.chars_per_word() != h.alpha as usize {
            return Err(Error::Format("header packing parameters disagree with the alphabet".into()));
        }
        let n = usize::try_from(h.n).map_err(|_| Error::Format("text length overflows".into()))?;
        if h.threshold < 2 {
            return Err(Error::Format("heavy threshold below 2".into()));
        }
        let text = PackedText::from_words(r.u64_vec()?, n, alphabet)?;
        let sa = r.u32_vec()?;
        let lcp = r.u32_vec()?;
        if sa.len() != n {
            return Err(Error::Format("suffix array length differs from n".into()));
        }
        let sa = SuffixArrayIndex::from_parts(sa, lcp)?;

        let mut arrays = Vec::with_capacity(7);
        for _ in 0..7 {
            arrays.push(r.u32_vec()?);
        }
        let code_count = r.len()?;
        let mut child_codes: Vec<Code> = Vec::with_capacity(code_count);
        for _ in 0..code_count {
            child_codes.push(r.u16()?);
        }
        let child_nodes = r.u32_vec()?;
        let mut it = arrays.into_iter();
        let mut next = || it.next().unwrap();
        let parts = TreeParts {
            parent: next(),
            depth: next(),
            edge_start: next(),
            edge_end: next(),
            sa_lo: next(),
            sa_hi: next(),
            child_offsets: next(),
            child_codes,
            child_nodes,
        };
        let tree = SuffixTree::from_parts(parts, n)?;

        let short = ShortPatternTable::from_parts(h.sigma as usize, n, r.u32_vec()?, tree.node_count())?;

        let count = r.len()?;
        let mut micro = Vec::with_capacity(count.min(n + 1));
        for _ in 0..count {
            micro.push(MicroRecord {
                kind: r.u8()?,
                root_node: r.u32()?,
                root_depth: r.u32()?,
                nav: r.pairs()?,
                skip: (r.u32()?, r.u32()?, r.u32()?),
                light: r.pairs()?,
                heavy: r.pairs()?,
            });
        }
        let ledger = PromotionLedger { type1: r.u64()?, type2a: r.u64()?, type2b: r.u64()? };
        let heavy = HeavyIndex::from_records(&tree, text.layout(), h.threshold as usize, micro, ledger)?;

        let count = r.len()?;
        let mut records = Vec::with_capacity(count.min(n + 1));
        let mut end = 0usize;
        for _ in 0..count {
            let len = r.u32()? as usize;
            let name = String::from_utf8(r.take(len)?.to_vec())
                .map_err(|_| Error::Format("record name is not UTF-8".into()))?;
            let start = r.u64()? as usize;
            let len = r.u64()? as usize;
            if start != end || start.checked_add(len).is_none_or(|e| e > n) {
                return Err(Error::Format("record offsets are not contiguous".into()));
            }
            end = start + len;
            records.push(Record { name, start, len });
        }
        if !records.is_empty() && end != n {
            return Err(Error::Format("records do not cover the text".into()));
        }
        if r.pos != data.len() {
            return Err(Error::Format("trailing bytes after the index".into()));
        }
        Ok(IndexFile::new(Index::from_components(text, sa, tree, short, heavy), records))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    /// Occurrences of `p` that lie inside one record.
    pub fn count(&self, p: &[u8]) -> usize {
        if self.records.is_empty() {
            self.index.count(p)
        } else {
            self.occurrences(p).len()
        }
    }

    /// Occurrence positions of `p` in suffix array order, dropping matches
    /// that span a record boundary.
    pub fn occurrences(&self, p: &[u8]) -> Vec<usize> {
        let mut pos = self.index.locate(p);
        if !self.records.is_empty() {
            pos.retain(|&s| self.records.within_record(s, p.len()));
        }
        pos
    }

    /// Position as printed: `name:offset` for FASTA input, the plain
    /// offset otherwise.
    pub fn label(&self, pos: usize) -> String {
        if self.records.is_empty() {
            pos.to_string()
        } else {
            self.records.label(pos)
        }
    }
}

#[derive(Default)]
struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }
    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.bytes(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.bytes(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }
    fn u32_vec(&mut self, v: &[u32]) {
        self.u64(v.len() as u64);
        v.iter().for_each(|&x| self.u32(x));
    }
    fn u64_vec(&mut self, v: &[u64]) {
        self.u64(v.len() as u64);
        v.iter().for_each(|&x| self.u64(x));
    }
    fn pairs(&mut self, v: &[(u64, u32)]) {
        self.u64(v.len() as u64);
        for &(k, x) in v {
            self.u64(k);
            self.u32(x);
        }
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.data.len());
        let end = end.ok_or_else(|| Error::Format("truncated index file".into()))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().unwrap())
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.array()?))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }
    /// Element count, rejected early if it cannot fit in the remaining bytes.
    fn len(&mut self) -> Result<usize> {
        let v = self.u64()?;
        if v > (self.data.len() - self.pos) as u64 {
            return Err(Error::Format("array length exceeds file size".into()));
        }
        Ok(v as usize)
    }
    fn u32_vec(&mut self) -> Result<Vec<u32>> {
        let len = self.len()?;
        let raw = self.take(len.checked_mul(4).ok_or_else(|| Error::Format("array too long".into()))?)?;
        Ok(raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
    }
    fn u64_vec(&mut self) -> Result<Vec<u64>> {
        let len = self.len()?;
        let raw = self.take(len.checked_mul(8).ok_or_else(|| Error::Format("array too long".into()))?)?;
        Ok(raw.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect())
    }
    fn pairs(&mut self) -> Result<Vec<(u64, u32)>> {
        let len = self.len()?;
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push((self.u64()?, self.u32()?));
        }
        Ok(v)
    }
}
