//! Binary search over a suffix-array range, comparing a packed pattern
//! against suffixes one word-sized chunk at a time.
//!
//! The search keeps `l` and `r`, the matched prefix lengths against the
//! boundary suffixes, and uses LCP queries between ranks to skip characters
//! already known to match, so each character of the pattern is read in full
//! chunks at most once per pass.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::packed::{first_mismatch, Packed, PackedPattern, PackedText};
use crate::suffix::SuffixArrayIndex;

/// Per-call instrumentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Number of chunk pairs compared.
    pub chunk_comparisons: u64,
    /// Number of midpoint iterations.
    pub iterations: u64,
}

impl SearchStats {
    pub fn absorb(&mut self, other: SearchStats) {
        self.chunk_comparisons += other.chunk_comparisons;
        self.iterations += other.iterations;
    }
}

/// Result of a range search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Largest rank in the searched range whose suffix is smaller than the pattern.
    pub pred_rank: Option<usize>,
    /// Suffixes with the pattern as a prefix occupy ranks `lo..hi`.
    pub lo: usize,
    pub hi: usize,
}

impl SearchOutcome {
    pub fn count(&self) -> usize {
        self.hi - self.lo
    }
}

/// How a suffix that has the whole pattern as a prefix is ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bound {
    /// Such suffixes sort after the pattern.
    Lower,
    /// Such suffixes sort before the pattern, as if the pattern ended with a
    /// symbol above every code.
    Upper,
}

/// Packed search over a fixed text and suffix array.
#[derive(Clone, Copy)]
pub struct PackedSearch<'a> {
    ix: &'a SuffixArrayIndex,
    text: &'a PackedText,
    check_invariants: bool,
}

impl<'a> PackedSearch<'a> {
    pub fn new(ix: &'a SuffixArrayIndex, text: &'a PackedText) -> Self {
        PackedSearch { ix, text, check_invariants: false }
    }

    /// Recomputes `l` and `r` by brute force at every loop head and panics
    /// on disagreement.
    pub fn with_invariant_checks(mut self, on: bool) -> Self {
        self.check_invariants = on;
        self
    }

    /// Largest rank in `range` whose suffix is smaller than `p`.
    pub fn predecessor(
        &self,
        p: &PackedPattern,
        range: Range<usize>,
        stats: &mut SearchStats,
    ) -> Result<Option<usize>> {
        self.check_args(p, &range)?;
        let lo = self.boundary(p, range.clone(), 0, Bound::Lower, stats);
        Ok((lo > range.start).then(|| lo - 1))
    }

    /// Ranks in `range` whose suffixes start with `p`.
    pub fn range(&self, p: &PackedPattern, range: Range<usize>, stats: &mut SearchStats) -> Result<SearchOutcome> {
        self.range_from(p, range, 0, stats)
    }

    /// As [`range`](Self::range), given that every suffix in `range` already
    /// shares the first `skip` codes of `p`.
    pub fn range_from(
        &self,
        p: &PackedPattern,
        range: Range<usize>,
        skip: usize,
        stats: &mut SearchStats,
    ) -> Result<SearchOutcome> {
        self.check_args(p, &range)?;
        let skip = skip.min(p.len());
        let lo = self.boundary(p, range.clone(), skip, Bound::Lower, stats);
        let hi = self.boundary(p, lo..range.end, skip, Bound::Upper, stats);
        Ok(SearchOutcome { pred_rank: (lo > range.start).then(|| lo - 1), lo, hi })
    }

    fn check_args(&self, p: &PackedPattern, range: &Range<usize>) -> Result<()> {
        if p.layout() != self.text.layout() {
            return Err(Error::AlphabetMismatch);
        }
        if range.start > range.end || range.end > self.ix.len() {
            return Err(Error::OutOfRange { position: range.end, len: self.ix.len() });
        }
        Ok(())
    }

    /// Extends a known match of `k` codes between `p` and the suffix at rank
    /// `rank`. Returns the full match length and whether the suffix sorts
    /// before the pattern under `bound`.
    fn compare(
        &self,
        p: &PackedPattern,
        rank: usize,
        mut k: usize,
        bound: Bound,
        stats: &mut SearchStats,
    ) -> (usize, bool) {
        let m = p.len();
        let start = self.ix.sa_at(rank);
        let layout = self.text.layout();
        let alpha = layout.alpha();
        while k < m {
            let len = alpha.min(m - k);
            let pc = p.extract_chunk(k, len);
            // Reads past the terminator yield zero codes, which never match a
            // pattern code, so no clamping is needed.
            let sc = layout.extract(self.text.words(), start + k, len);
            stats.chunk_comparisons += 1;
            let sc = crate::packed::Chunk::new(sc, len, layout);
            if let Some(i) = first_mismatch(&sc, &pc) {
                return (k + i, sc.code(i) < pc.code(i));
            }
            k += len;
        }
        (m, bound == Bound::Upper)
    }

    /// First rank in `range` whose suffix does not sort before `p`.
    fn boundary(
        &self,
        p: &PackedPattern,
        range: Range<usize>,
        skip: usize,
        bound: Bound,
        stats: &mut SearchStats,
    ) -> usize {
        if range.is_empty() {
            return range.start;
        }
        let (mut lr, mut rr) = (range.start, range.end - 1);
        let (mut l, before) = self.compare(p, lr, skip, bound, stats);
        if !before {
            return lr;
        }
        if lr == rr {
            return range.end;
        }
        // Seed r from what the left boundary already tells us.
        let lcp_lr = self.ix.lcp_query(lr, rr);
        let mut r = if lcp_lr > l {
            return range.end;
        } else if lcp_lr < l {
            lcp_lr
        } else {
            let (r, before) = self.compare(p, rr, l, bound, stats);
            if before {
                return range.end;
            }
            r
        };

        // Invariant: lr sorts before p, rr does not.
        while rr - lr > 1 {
            if self.check_invariants {
                self.assert_state(p, lr, l, rr, r);
            }
            stats.iterations += 1;
            let mid = lr + (rr - lr) / 2;
            let before = if l > r {
                let h = self.ix.lcp_query(lr, mid);
                if h > l {
                    true
                } else if h < l {
                    r = h;
                    false
                } else {
                    let (h, before) = self.compare(p, mid, l, bound, stats);
                    if before {
                        l = h;
                    } else {
                        r = h;
                    }
                    before
                }
            } else if r > l {
                let h = self.ix.lcp_query(mid, rr);
                if h > r {
                    false
                } else if h < r {
                    l = h;
                    true
                } else {
                    let (h, before) = self.compare(p, mid, r, bound, stats);
                    if before {
                        l = h;
                    } else {
                        r = h;
                    }
                    before
                }
            } else {
                let (h, before) = self.compare(p, mid, l, bound, stats);
                if before {
                    l = h;
                } else {
                    r = h;
                }
                before
            };
            if before {
                lr = mid;
            } else {
                rr = mid;
            }
        }
        rr
    }

    fn assert_state(&self, p: &PackedPattern, lr: usize, l: usize, rr: usize, r: usize) {
        let brute = |rank: usize| {
            let s = self.ix.sa_at(rank);
            (0..p.len()).take_while(|&i| self.text.code_at(s + i) == p.code_at(i)).count()
        };
        assert_eq!(brute(lr), l, "left match length diverged at rank {lr}");
        assert_eq!(brute(rr), r, "right match length diverged at rank {rr}");
    }
}

/// Per-pass bound on chunk comparisons for a pattern of `m` codes over `n`
/// suffixes, both passes of a range search included.
pub fn comparison_envelope(m: usize, alpha: usize, n: usize) -> u64 {
    let log_n = if n <= 1 { 0 } else { usize::BITS - (n - 1).leading_zeros() } as u64;
    2 * m.div_ceil(alpha) as u64 + 4 * log_n + 8
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(raw: &[u8]) -> (PackedText, SuffixArrayIndex) {
        let t = PackedText::from_bytes(raw).unwrap();
        let ix = SuffixArrayIndex::build(&t);
        (t, ix)
    }

    fn pat(t: &PackedText, s: &[u8]) -> PackedPattern {
        PackedPattern::encode(s, t.alphabet()).unwrap()
    }

    #[test]
    fn banana_examples() {
        let (t, ix) = setup(b"banana");
        let s = PackedSearch::new(&ix, &t).with_invariant_checks(true);
        let mut st = SearchStats::default();
        assert_eq!(s.predecessor(&pat(&t, b"ana"), 0..6, &mut st).unwrap(), Some(0));
        assert_eq!(s.predecessor(&pat(&t, b"a"), 0..6, &mut st).unwrap(), None);
        assert_eq!(s.predecessor(&pat(&t, b"nn"), 0..6, &mut st).unwrap(), Some(5));
        let out = s.range(&pat(&t, b"ana"), 0..6, &mut st).unwrap();
        assert_eq!((out.lo, out.hi, out.pred_rank), (1, 3, Some(0)));
        assert_eq!(s.range(&pat(&t, b"nab"), 0..6, &mut st).unwrap().count(), 0);
        let whole = s.range(&pat(&t, b"banana"), 0..6, &mut st).unwrap();
        assert_eq!((whole.lo, whole.hi), (3, 4));
    }

    #[test]
    fn subrange_and_skip() {
        let (t, ix) = setup(b"banana");
        let s = PackedSearch::new(&ix, &t).with_invariant_checks(true);
        let mut st = SearchStats::default();
        // Ranks 1..3 are the suffixes starting with "ana".
        let out = s.range_from(&pat(&t, b"anan"), 1..3, 3, &mut st).unwrap();
        assert_eq!((out.lo, out.hi), (2, 3));
        assert_eq!(s.predecessor(&pat(&t, b"b"), 4..6, &mut st).unwrap(), None);
    }

    #[test]
    fn rejects_foreign_layout() {
        let (t, ix) = setup(b"banana");
        let other = PackedText::from_bytes(&[0u8, 1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let p = PackedPattern::encode(&[1u8], other.alphabet()).unwrap();
        let s = PackedSearch::new(&ix, &t);
        assert!(matches!(s.range(&p, 0..6, &mut SearchStats::default()), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn envelope_values() {
        assert_eq!(comparison_envelope(1, 32, 1), 10);
        assert_eq!(comparison_envelope(64, 32, 1000), 2 * 2 + 4 * 10 + 8);
    }
}
