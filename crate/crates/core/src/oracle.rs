//! Brute-force reference answers, written without any of the index
//! structures so they can check them.

use crate::packed::Code;
use crate::suffix::SuffixTree;

/// Number of occurrences of `p` in `text`, by sliding window.
pub fn naive_count(text: &[u8], p: &[u8]) -> usize {
    if p.is_empty() {
        return text.len();
    }
    text.windows(p.len()).filter(|w| *w == p).count()
}

/// Occurrence positions in increasing order.
pub fn naive_locate(text: &[u8], p: &[u8]) -> Vec<usize> {
    if p.is_empty() {
        return (0..text.len()).collect();
    }
    text.windows(p.len()).enumerate().filter(|(_, w)| *w == p).map(|(i, _)| i).collect()
}

/// Whether `suffix` (implicitly followed by the terminator) sorts before `p`.
///
/// A suffix that has `p` as a prefix is not smaller. Otherwise slice order
/// applies, which puts a suffix that is a proper prefix of `p` first.
fn suffix_before(suffix: &[u8], p: &[u8]) -> bool {
    !suffix.starts_with(p) && suffix < p
}

/// Start of the largest suffix smaller than `p`, by one pass over all
/// suffixes without sorting them.
pub fn naive_predecessor(text: &[u8], p: &[u8]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in 0..text.len() {
        let suffix = &text[s..];
        if suffix_before(suffix, p) && best.is_none_or(|b| suffix > &text[b..]) {
            best = Some(s);
        }
    }
    best
}

/// All suffixes sorted once, for repeated predecessor queries.
#[derive(Clone, Debug)]
pub struct NaiveIndex {
    text: Vec<u8>,
    sorted: Vec<u32>,
}

impl NaiveIndex {
    pub fn new(text: &[u8]) -> Self {
        let mut sorted: Vec<u32> = (0..text.len() as u32).collect();
        sorted.sort_unstable_by(|&a, &b| text[a as usize..].cmp(&text[b as usize..]));
        NaiveIndex { text: text.to_vec(), sorted }
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// Suffix starts in lexicographic order.
    pub fn sorted_suffixes(&self) -> &[u32] {
        &self.sorted
    }

    pub fn count(&self, p: &[u8]) -> usize {
        naive_count(&self.text, p)
    }

    pub fn locate(&self, p: &[u8]) -> Vec<usize> {
        naive_locate(&self.text, p)
    }

    /// Linear scan for the last sorted suffix that precedes `p`.
    pub fn predecessor(&self, p: &[u8]) -> Option<usize> {
        let mut best = None;
        for &s in &self.sorted {
            if suffix_before(&self.text[s as usize..], p) {
                best = Some(s as usize);
            }
        }
        best
    }

    /// Number of suffixes smaller than `p`.
    pub fn rank(&self, p: &[u8]) -> usize {
        self.sorted.iter().filter(|&&s| suffix_before(&self.text[s as usize..], p)).count()
    }

    /// Same answer as [`predecessor`](Self::predecessor) by bisection over the
    /// sorted suffixes, for large differential runs.
    pub fn predecessor_bisect(&self, p: &[u8]) -> Option<usize> {
        let k = self.sorted.partition_point(|&s| suffix_before(&self.text[s as usize..], p));
        (k > 0).then(|| self.sorted[k - 1] as usize)
    }
}

/// Deepest explicit node whose string is a prefix of `p`, found by reading
/// edge labels one code at a time from the root. `codes` is the text as
/// codes, without terminator; `sa` gives each node's representative suffix.
pub fn naive_deepest_prefix_node(tree: &SuffixTree, codes: &[Code], sa: &[u32], p: &[Code]) -> u32 {
    let at = |i: usize| codes.get(i).copied().unwrap_or(0);
    let mut v = tree.root();
    let mut k = 0;
    'descend: while k < p.len() {
        for (_, c) in tree.children(v) {
            let start = sa[tree.sa_lo(c)] as usize;
            if at(start + k) != p[k] {
                continue;
            }
            for i in k..tree.depth(c) {
                if i >= p.len() || at(start + i) != p[i] {
                    break 'descend;
                }
            }
            v = c;
            k = tree.depth(c);
            continue 'descend;
        }
        break;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packed::PackedText;
    use crate::suffix::SuffixArrayIndex;

    #[test]
    fn hand_checked_counts() {
        assert_eq!(naive_count(b"banana", b"ana"), 2);
        assert_eq!(naive_count(b"banana", b"banana"), 1);
        assert_eq!(naive_count(b"banana", b"x"), 0);
        assert_eq!(naive_locate(b"banana", b"ana"), vec![1, 3]);
        assert_eq!(naive_locate(b"aaa", b"a"), vec![0, 1, 2]);
        assert!(naive_locate(b"aaa", b"b").is_empty());
    }

    #[test]
    fn hand_checked_predecessors() {
        let ix = NaiveIndex::new(b"banana");
        assert_eq!(ix.sorted_suffixes(), &[5, 3, 1, 0, 4, 2]);
        assert_eq!(ix.predecessor(b"ana"), Some(5));
        assert_eq!(ix.predecessor(b"a"), None);
        assert_eq!(ix.predecessor(b"zz"), Some(2));
        assert_eq!(ix.predecessor(b"anax"), Some(1));
        assert_eq!(ix.predecessor(b""), None);
        let ix = NaiveIndex::new(b"aaaa");
        assert_eq!(ix.predecessor(b"aaaaa"), Some(0));
        assert_eq!(ix.predecessor(b"aab"), Some(0));
        let ix = NaiveIndex::new(b"abracadabra");
        // "abra" prefixes "abra" and "abracadabra"; "a" is the only suffix below.
        assert_eq!(ix.predecessor(b"abra"), Some(10));
        assert_eq!(ix.rank(b"abra"), 1);
        assert_eq!(ix.predecessor(b"ac"), Some(0));
        for p in [&b"a"[..], b"ab", b"abra", b"abrx", b"b", b"zzz", b"", b"r"] {
            assert_eq!(ix.predecessor_bisect(p), ix.predecessor(p));
            assert_eq!(naive_predecessor(b"abracadabra", p), ix.predecessor(p));
        }
    }

    #[test]
    fn deepest_node_walk() {
        let t = PackedText::from_bytes(b"banana").unwrap();
        let ix = SuffixArrayIndex::build(&t);
        let tree = SuffixTree::build(&ix, &t);
        let codes = t.codes();
        let a = naive_deepest_prefix_node(&tree, &codes, ix.sa(), &[1]);
        assert_eq!(tree.sa_range(a), 0..3);
        assert_eq!(naive_deepest_prefix_node(&tree, &codes, ix.sa(), &[2]), tree.root());
        let ana = naive_deepest_prefix_node(&tree, &codes, ix.sa(), &[1, 3, 1, 2]);
        assert_eq!(tree.depth(ana), 3);
    }
}
