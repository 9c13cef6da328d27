//! Table of the deepest prefixing tree node for every pattern short enough
//! that all of them together fit in `n` entries.

use crate::error::{Error, Result};
use crate::packed::{Code, Packed, PackedText};
use crate::suffix::{ChildStep, SuffixTree, NO_NODE};

/// Deepest explicit node for every pattern of length `1..=max_len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortPatternTable {
    sigma: usize,
    max_len: usize,
    /// `offsets[m]` is the index of the first pattern of length `m`.
    offsets: Vec<usize>,
    entries: Vec<u32>,
}

/// Largest `m` with `σ + σ² + … + σ^m ≤ n`, with the table offsets.
fn capacity(sigma: usize, n: usize) -> (usize, Vec<usize>) {
    let mut offsets = vec![0, 0];
    let (mut total, mut power) = (0usize, 1usize);
    while let Some(p) = power.checked_mul(sigma) {
        match total.checked_add(p) {
            Some(t) if t <= n => {
                power = p;
                total = t;
                offsets.push(total);
            }
            _ => break,
        }
    }
    (offsets.len() - 2, offsets)
}

/// Where a pattern prefix sits in the tree.
#[derive(Clone, Copy)]
struct Loc {
    /// Deepest explicit node whose string prefixes the pattern.
    entry: u32,
    /// `entry` itself when the pattern ends on it, the child whose edge the
    /// pattern ends inside, or `NO_NODE` once the pattern has left the tree.
    next: u32,
}

impl Loc {
    fn step(self, tree: &SuffixTree, text: &PackedText, sa: &[u32], depth: usize, c: Code) -> Loc {
        let on_edge = |u: u32, entry: u32| {
            let next_depth = depth + 1;
            if tree.depth(u) == next_depth {
                Loc { entry: u, next: u }
            } else {
                Loc { entry, next: u }
            }
        };
        if self.next == NO_NODE {
            return self;
        }
        if self.next == self.entry {
            match tree.child_by_code(self.entry, c) {
                ChildStep::Exact(u) => on_edge(u, self.entry),
                _ => Loc { entry: self.entry, next: NO_NODE },
            }
        } else {
            let u = self.next;
            if text.code_at(sa[tree.sa_lo(u)] as usize + depth) == c {
                on_edge(u, self.entry)
            } else {
                Loc { entry: self.entry, next: NO_NODE }
            }
        }
    }
}

impl ShortPatternTable {
    /// Fills the table by a depth-first walk over all short patterns, moving
    /// through the tree alongside.
    pub fn build(tree: &SuffixTree, text: &PackedText, sa: &[u32]) -> Self {
        let sigma = text.alphabet().sigma();
        let (max_len, offsets) = capacity(sigma, text.len());
        let size = offsets[max_len + 1];
        let mut entries = vec![NO_NODE; size];
        let mut filled = 0usize;

        // (length, rank among patterns of that length, location)
        let root = Loc { entry: tree.root(), next: tree.root() };
        let mut stack: Vec<(usize, usize, Loc)> = vec![(0, 0, root)];
        while let Some((len, rank, loc)) = stack.pop() {
            if len == max_len {
                continue;
            }
            for c in (1..=sigma as Code).rev() {
                let child = loc.step(tree, text, sa, len, c);
                let r = rank * sigma + (c as usize - 1);
                entries[offsets[len + 1] + r] = child.entry;
                filled += 1;
                stack.push((len + 1, r, child));
            }
        }
        debug_assert_eq!(filled, size);
        ShortPatternTable { sigma, max_len, offsets, entries }
    }

    /// Reassembles a stored table, checking its size against `σ` and `n`.
    pub fn from_parts(sigma: usize, n: usize, entries: Vec<u32>, node_count: usize) -> Result<Self> {
        let (max_len, offsets) = capacity(sigma, n);
        if entries.len() != offsets[max_len + 1] {
            return Err(Error::Format("short table size does not match the alphabet".into()));
        }
        if entries.iter().any(|&v| v as usize >= node_count) {
            return Err(Error::Format("short table entry out of range".into()));
        }
        Ok(ShortPatternTable { sigma, max_len, offsets, entries })
    }

    /// Longest pattern length served by the table (`M_s`).
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Position of a short pattern in the table.
    pub fn index(&self, p: &[Code]) -> Result<usize> {
        let m = p.len();
        if m == 0 || m > self.max_len {
            return Err(Error::PatternLength { len: m, max: self.max_len });
        }
        let mut r = 0usize;
        for &c in p {
            debug_assert!(c >= 1 && c as usize <= self.sigma);
            r = r * self.sigma + (c as usize - 1);
        }
        Ok(self.offsets[m] + r)
    }

    /// Inverse of [`index`](Self::index).
    pub fn pattern_at(&self, index: usize) -> Option<Vec<Code>> {
        if index >= self.entries.len() {
            return None;
        }
        let m = self.offsets.partition_point(|&o| o <= index) - 1;
        let mut r = index - self.offsets[m];
        let mut p = vec![0; m];
        for slot in p.iter_mut().rev() {
            *slot = (r % self.sigma) as Code + 1;
            r /= self.sigma;
        }
        Some(p)
    }

    /// Deepest explicit node whose string is a prefix of `p`.
    pub fn lookup(&self, p: &[Code]) -> Result<u32> {
        Ok(self.entries[self.index(p)?])
    }
}
