//! Suffix array, LCP array with range-minimum queries, and the suffix tree.

mod lcp;
mod sais;
pub mod tree;

pub use lcp::Rmq;
pub use tree::{ChildStep, SuffixTree, TreeParts, NO_NODE};

use crate::error::{Error, Result};
use crate::packed::PackedText;

/// Largest supported text length; positions and ranks are stored as `u32`.
pub const MAX_TEXT_LEN: usize = (u32::MAX - 2) as usize;

/// Suffix array with its inverse, LCP array and RMQ.
#[derive(Clone, Debug)]
pub struct SuffixArrayIndex {
    sa: Vec<u32>,
    rank: Vec<u32>,
    rmq: Rmq,
}

impl SuffixArrayIndex {
    /// Induced-sorting construction followed by Kasai's LCP scan.
    pub fn build(text: &PackedText) -> Self {
        let codes = text.codes();
        let s: Vec<usize> = codes.iter().map(|&c| c as usize).collect();
        let sa: Vec<u32> = sais::sa_is(&s, text.alphabet().sigma()).into_iter().map(|v| v as u32).collect();
        drop(s);
        let rank = inverse(&sa);
        let lcp = lcp::kasai(&codes, &sa, &rank);
        SuffixArrayIndex { sa, rank, rmq: Rmq::new(lcp) }
    }

    /// Reassembles stored arrays. Entries must be in range; whether `sa` is a
    /// sorted permutation is the verifier's business.
    pub fn from_parts(sa: Vec<u32>, lcp: Vec<u32>) -> Result<Self> {
        let n = sa.len();
        if lcp.len() != n || n == 0 {
            return Err(Error::Format("suffix array and LCP lengths differ".into()));
        }
        if sa.iter().any(|&v| v as usize >= n) {
            return Err(Error::Format("suffix array entry out of range".into()));
        }
        if lcp.iter().any(|&v| v as usize > n) {
            return Err(Error::Format("LCP entry out of range".into()));
        }
        let rank = inverse(&sa);
        Ok(SuffixArrayIndex { sa, rank, rmq: Rmq::new(lcp) })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    pub fn sa(&self) -> &[u32] {
        &self.sa
    }

    pub fn rank(&self) -> &[u32] {
        &self.rank
    }

    pub fn lcp(&self) -> &[u32] {
        self.rmq.values()
    }

    #[inline]
    pub fn sa_at(&self, r: usize) -> usize {
        self.sa[r] as usize
    }

    #[inline]
    pub fn rank_of(&self, pos: usize) -> usize {
        self.rank[pos] as usize
    }

    /// Longest common prefix of the suffixes at ranks `i` and `j`.
    #[inline]
    pub fn lcp_query(&self, i: usize, j: usize) -> usize {
        if i == j {
            return self.len() - self.sa_at(i);
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.rmq.min(lo + 1, hi) as usize
    }
}

fn inverse(sa: &[u32]) -> Vec<u32> {
    let mut rank = vec![0u32; sa.len()];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_lcp(s: &[u8], a: usize, b: usize) -> usize {
        s[a..].iter().zip(&s[b..]).take_while(|(x, y)| x == y).count()
    }

    #[test]
    fn banana_sa() {
        let t = PackedText::from_bytes(b"banana").unwrap();
        let ix = SuffixArrayIndex::build(&t);
        assert_eq!(ix.sa(), &[5, 3, 1, 0, 4, 2]);
        assert_eq!(ix.lcp(), &[0, 1, 3, 0, 0, 2]);
        // "ana" (rank 1) and "anana" (rank 2)
        assert_eq!(ix.lcp_query(1, 2), 3);
        // "a" (rank 0) and "banana" (rank 3)
        assert_eq!(ix.lcp_query(0, 3), 0);
        assert_eq!(ix.lcp_query(3, 3), 6);
    }

    #[test]
    fn aaaa_sa() {
        let t = PackedText::from_bytes(b"aaaa").unwrap();
        let ix = SuffixArrayIndex::build(&t);
        assert_eq!(ix.sa(), &[3, 2, 1, 0]);
        assert_eq!(ix.lcp(), &[0, 1, 2, 3]);
    }

    #[test]
    fn single() {
        let t = PackedText::from_bytes(b"a").unwrap();
        let ix = SuffixArrayIndex::build(&t);
        assert_eq!(ix.sa(), &[0]);
        assert_eq!(ix.lcp_query(0, 0), 1);
    }

    #[test]
    fn lcp_query_matches_scan() {
        let raw = b"mississippi$issipp";
        let raw = &raw[..];
        let t = PackedText::from_bytes(raw).unwrap();
        let ix = SuffixArrayIndex::build(&t);
        for i in 0..raw.len() {
            for j in 0..raw.len() {
                assert_eq!(ix.lcp_query(i, j), brute_lcp(raw, ix.sa_at(i), ix.sa_at(j)));
            }
        }
    }

    #[test]
    fn from_parts_rejects_out_of_range() {
        assert!(SuffixArrayIndex::from_parts(vec![0, 5], vec![0, 0]).is_err());
        assert!(SuffixArrayIndex::from_parts(vec![1, 0], vec![0, 0]).is_ok());
    }
}
