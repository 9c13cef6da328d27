//! Static predecessor search over word keys.
//!
//! Keys are cut into buckets of 64 consecutive keys. The largest key of each
//! bucket is a representative; an x-fast trie over the representatives keeps
//! one [`DetDictionary`] per prefix length, so the bucket holding the answer
//! is found by binary search over the 64 prefix lengths. A binary search
//! inside the bucket finishes the query.

use super::dict::DetDictionary;
use crate::error::{Error, Result};

const BUCKET: usize = 64;

/// Static predecessor structure: largest key `≤ q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetPredecessor<V> {
    keys: Vec<u64>,
    values: Vec<V>,
    /// `levels[l - 1]` maps each `l`-bit prefix of a representative to the
    /// first and last representative index below it, packed into one word.
    levels: Vec<DetDictionary<u64>>,
}

#[inline]
fn pack(lo: usize, hi: usize) -> u64 {
    (lo as u64) << 32 | hi as u64
}

#[inline]
fn unpack(v: u64) -> (usize, usize) {
    ((v >> 32) as usize, (v & 0xffff_ffff) as usize)
}

impl<V: Copy> DetPredecessor<V> {
    /// Builds from `(key, value)` pairs in any order. Keys must be distinct.
    pub fn build(pairs: impl IntoIterator<Item = (u64, V)>) -> Result<Self> {
        let mut pairs: Vec<(u64, V)> = pairs.into_iter().collect();
        pairs.sort_unstable_by_key(|&(k, _)| k);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateKey(w[0].0));
        }
        let (keys, values): (Vec<u64>, Vec<V>) = pairs.into_iter().unzip();

        let reps: Vec<u64> = keys.chunks(BUCKET).map(|c| c[c.len() - 1]).collect();
        let mut levels = Vec::new();
        if reps.len() > 1 {
            for l in 1..=64u32 {
                let mut entries = Vec::new();
                let mut start = 0;
                for i in 1..=reps.len() {
                    let prefix = reps[start] >> (64 - l);
                    if i == reps.len() || reps[i] >> (64 - l) != prefix {
                        entries.push((prefix, pack(start, i - 1)));
                        start = i;
                    }
                }
                levels.push(DetDictionary::build(entries)?);
            }
        }
        Ok(DetPredecessor { keys, values, levels })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Entries in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, V)> + '_ {
        self.keys.iter().copied().zip(self.values.iter().copied())
    }

    /// Index of the smallest representative `≥ q`, or the number of
    /// representatives if there is none.
    fn successor_rep(&self, q: u64) -> usize {
        let reps = self.keys.len().div_ceil(BUCKET);
        if self.levels.is_empty() {
            return if q <= self.keys[self.keys.len() - 1] { 0 } else { 1 };
        }
        // Longest prefix of q shared with some representative.
        let (mut lo, mut hi) = (0u32, 64u32);
        let mut node = pack(0, reps - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            match self.levels[mid as usize - 1].get(q >> (64 - mid)) {
                Some(v) => {
                    lo = mid;
                    node = v;
                }
                None => hi = mid - 1,
            }
        }
        let (first, last) = unpack(node);
        if lo == 64 {
            return first;
        }
        // The subtree has no representative on q's side at the next bit.
        if (q >> (63 - lo)) & 1 == 0 {
            first
        } else {
            last + 1
        }
    }

    /// Position in the key array of the largest key `≤ q`.
    pub fn predecessor_index(&self, q: u64) -> Option<usize> {
        if self.keys.is_empty() {
            return None;
        }
        let s = self.successor_rep(q);
        let start = s * BUCKET;
        if start >= self.keys.len() {
            return Some(self.keys.len() - 1);
        }
        let end = (start + BUCKET).min(self.keys.len());
        let k = self.keys[start..end].partition_point(|&x| x <= q);
        if k > 0 {
            Some(start + k - 1)
        } else {
            start.checked_sub(1)
        }
    }

    /// Largest key `≤ q` with its payload.
    pub fn predecessor(&self, q: u64) -> Option<(u64, V)> {
        self.predecessor_index(q).map(|i| (self.keys[i], self.values[i]))
    }

    /// Smallest key `> q` with its payload.
    pub fn successor(&self, q: u64) -> Option<(u64, V)> {
        let i = self.predecessor_index(q).map_or(0, |i| i + 1);
        (i < self.keys.len()).then(|| (self.keys[i], self.values[i]))
    }
}
