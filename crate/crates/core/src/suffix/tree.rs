//! Suffix tree derived from the suffix array and LCP array.
//!
//! Nodes are numbered in preorder with the root at 0. Leaves carry the
//! terminator in their string depth, so a leaf for suffix `i` has depth
//! `n - i + 1`. The suffix consisting of `$` alone is not a leaf.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::packed::{Code, Packed, PackedText};

use super::SuffixArrayIndex;

pub const NO_NODE: u32 = u32::MAX;

/// Result of child navigation by first edge code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChildStep {
    Exact(u32),
    /// The child with the largest first code below the query code.
    PredecessorEdge(u32),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixTree {
    parent: Vec<u32>,
    depth: Vec<u32>,
    edge_start: Vec<u32>,
    edge_end: Vec<u32>,
    sa_lo: Vec<u32>,
    sa_hi: Vec<u32>,
    child_offsets: Vec<u32>,
    child_codes: Vec<Code>,
    child_nodes: Vec<u32>,
    leaf_of_sa: Vec<u32>,
}

/// Raw per-node fields in preorder, as stored in index files.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeParts {
    pub parent: Vec<u32>,
    pub depth: Vec<u32>,
    pub edge_start: Vec<u32>,
    pub edge_end: Vec<u32>,
    pub sa_lo: Vec<u32>,
    pub sa_hi: Vec<u32>,
    pub child_offsets: Vec<u32>,
    pub child_codes: Vec<Code>,
    pub child_nodes: Vec<u32>,
}

struct Pending {
    depth: u32,
    lo: u32,
    children: Vec<u32>,
}

impl SuffixTree {
    pub fn build(ix: &SuffixArrayIndex, text: &PackedText) -> Self {
        let n = ix.len();
        let sa = ix.sa();
        let lcp = ix.lcp();

        // Bottom-up over LCP intervals; ids here are postorder.
        let mut b = Postorder::with_capacity(2 * n);
        let mut stack = vec![Pending { depth: 0, lo: 0, children: Vec::new() }];
        let mut last: Option<u32> = None;
        for i in 0..=n {
            if i > 0 {
                let h = if i < n { lcp[i] } else { 0 };
                let mut done = last.take().expect("leaf pending");
                while stack.last().expect("root").depth > h {
                    let mut p = stack.pop().expect("nonempty");
                    p.children.push(done);
                    done = b.finalize(p, i as u32);
                }
                let top = stack.last_mut().expect("root");
                if top.depth < h {
                    let start = b.lo[done as usize];
                    stack.push(Pending { depth: h, lo: start, children: vec![done] });
                } else {
                    top.children.push(done);
                }
            }
            if i < n {
                let leaf = Pending { depth: (n - sa[i] as usize + 1) as u32, lo: i as u32, children: Vec::new() };
                last = Some(b.finalize(leaf, i as u32 + 1));
            }
        }
        let root = stack.pop().expect("root");
        debug_assert!(stack.is_empty());
        let root = b.finalize(root, n as u32);
        let Postorder { depth, lo, hi, kid_off, kid_cnt, arena } = b;

        // Renumber into preorder.
        let total = depth.len();
        let mut new_id = vec![NO_NODE; total];
        let mut order = Vec::with_capacity(total);
        let mut dfs = vec![root];
        while let Some(v) = dfs.pop() {
            new_id[v as usize] = order.len() as u32;
            order.push(v);
            let (o, c) = (kid_off[v as usize] as usize, kid_cnt[v as usize] as usize);
            dfs.extend(arena[o..o + c].iter().rev());
        }

        let mut parts = TreeParts::default();
        parts.child_offsets.push(0);
        let mut parent = vec![NO_NODE; total];
        for (new, &old) in order.iter().enumerate() {
            let old = old as usize;
            let d = depth[old];
            parts.depth.push(d);
            parts.sa_lo.push(lo[old]);
            parts.sa_hi.push(hi[old]);
            let (o, c) = (kid_off[old] as usize, kid_cnt[old] as usize);
            for &k in &arena[o..o + c] {
                let k_new = new_id[k as usize];
                parent[k_new as usize] = new as u32;
                let first = sa[lo[k as usize] as usize] as usize + d as usize;
                parts.child_codes.push(text.code_at(first));
                parts.child_nodes.push(k_new);
            }
            parts.child_offsets.push(parts.child_nodes.len() as u32);
        }
        for v in 0..total {
            let start = sa[parts.sa_lo[v] as usize];
            let pd = match parent[v] {
                NO_NODE => 0,
                p => parts.depth[p as usize],
            };
            parts.edge_start.push(if v == 0 { 0 } else { start + pd });
            parts.edge_end.push(if v == 0 { 0 } else { start + parts.depth[v] });
        }
        parts.parent = parent;
        Self::from_parts_unchecked(parts, n)
    }

    fn from_parts_unchecked(parts: TreeParts, n: usize) -> Self {
        let mut leaf_of_sa = vec![NO_NODE; n];
        for v in 0..parts.depth.len() {
            let is_leaf = parts.child_offsets[v] == parts.child_offsets[v + 1] && v != 0;
            if is_leaf {
                leaf_of_sa[parts.sa_lo[v] as usize] = v as u32;
            }
        }
        SuffixTree {
            parent: parts.parent,
            depth: parts.depth,
            edge_start: parts.edge_start,
            edge_end: parts.edge_end,
            sa_lo: parts.sa_lo,
            sa_hi: parts.sa_hi,
            child_offsets: parts.child_offsets,
            child_codes: parts.child_codes,
            child_nodes: parts.child_nodes,
            leaf_of_sa,
        }
    }

    /// Reassembles a stored tree after bounds checks that keep every accessor
    /// panic-free. Semantic consistency is left to the verifier.
    pub fn from_parts(parts: TreeParts, n: usize) -> Result<Self> {
        let count = parts.depth.len();
        let bad = |what: &str| Err(Error::Format(format!("suffix tree: {what}")));
        if count == 0 || count > 2 * n + 1 {
            return bad("node count");
        }
        let lens =
            [parts.parent.len(), parts.edge_start.len(), parts.edge_end.len(), parts.sa_lo.len(), parts.sa_hi.len()];
        if lens.iter().any(|&l| l != count) || parts.child_offsets.len() != count + 1 {
            return bad("field lengths");
        }
        if parts.child_codes.len() != parts.child_nodes.len()
            || parts.child_offsets[0] != 0
            || parts.child_offsets.windows(2).any(|w| w[0] > w[1])
            || *parts.child_offsets.last().unwrap() as usize != parts.child_nodes.len()
        {
            return bad("child lists");
        }
        if parts.child_nodes.iter().any(|&c| c as usize >= count || c == 0)
            || parts
                .parent
                .iter()
                .enumerate()
                .any(|(v, &p)| (v == 0) != (p == NO_NODE) || (p != NO_NODE && p as usize >= count))
        {
            return bad("node references");
        }
        if (0..count).any(|v| parts.sa_lo[v] > parts.sa_hi[v] || parts.sa_hi[v] as usize > n) {
            return bad("suffix array ranges");
        }
        if (0..count).any(|v| parts.edge_start[v] > parts.edge_end[v] || parts.edge_end[v] as usize > n + 1) {
            return bad("edge spans");
        }
        for v in 1..count {
            let leaf = parts.child_offsets[v] == parts.child_offsets[v + 1];
            if leaf && parts.sa_hi[v] != parts.sa_lo[v] + 1 {
                return bad("leaf range");
            }
        }
        Ok(Self::from_parts_unchecked(parts, n))
    }

    pub fn to_parts(&self) -> TreeParts {
        TreeParts {
            parent: self.parent.clone(),
            depth: self.depth.clone(),
            edge_start: self.edge_start.clone(),
            edge_end: self.edge_end.clone(),
            sa_lo: self.sa_lo.clone(),
            sa_hi: self.sa_hi.clone(),
            child_offsets: self.child_offsets.clone(),
            child_codes: self.child_codes.clone(),
            child_nodes: self.child_nodes.clone(),
        }
    }

    #[inline]
    pub fn root(&self) -> u32 {
        0
    }

    pub fn node_count(&self) -> usize {
        self.depth.len()
    }

    /// String depth; for leaves this counts the terminator.
    #[inline]
    pub fn depth(&self, v: u32) -> usize {
        self.depth[v as usize] as usize
    }

    #[inline]
    pub fn parent(&self, v: u32) -> Option<u32> {
        match self.parent[v as usize] {
            NO_NODE => None,
            p => Some(p),
        }
    }

    #[inline]
    pub fn sa_lo(&self, v: u32) -> usize {
        self.sa_lo[v as usize] as usize
    }

    #[inline]
    pub fn sa_hi(&self, v: u32) -> usize {
        self.sa_hi[v as usize] as usize
    }

    #[inline]
    pub fn sa_range(&self, v: u32) -> Range<usize> {
        self.sa_lo(v)..self.sa_hi(v)
    }

    #[inline]
    pub fn leaf_count(&self, v: u32) -> usize {
        self.sa_hi(v) - self.sa_lo(v)
    }

    /// Edge label into `v` as a half-open span of text positions.
    #[inline]
    pub fn edge(&self, v: u32) -> Range<usize> {
        self.edge_start[v as usize] as usize..self.edge_end[v as usize] as usize
    }

    #[inline]
    fn child_slice(&self, v: u32) -> Range<usize> {
        self.child_offsets[v as usize] as usize..self.child_offsets[v as usize + 1] as usize
    }

    pub fn child_count(&self, v: u32) -> usize {
        self.child_slice(v).len()
    }

    pub fn is_leaf(&self, v: u32) -> bool {
        v != 0 && self.child_count(v) == 0
    }

    /// Children as `(first edge code, node)`, ascending by code.
    pub fn children(&self, v: u32) -> impl Iterator<Item = (Code, u32)> + '_ {
        let r = self.child_slice(v);
        self.child_codes[r.clone()].iter().copied().zip(self.child_nodes[r].iter().copied())
    }

    pub fn leaf_of_sa(&self, rank: usize) -> u32 {
        self.leaf_of_sa[rank]
    }

    /// Child navigation by binary search over the sorted first codes.
    pub fn child_by_code(&self, v: u32, c: Code) -> ChildStep {
        let r = self.child_slice(v);
        let codes = &self.child_codes[r.clone()];
        match codes.partition_point(|&x| x <= c) {
            0 => ChildStep::None,
            k if codes[k - 1] == c => ChildStep::Exact(self.child_nodes[r.start + k - 1]),
            k => ChildStep::PredecessorEdge(self.child_nodes[r.start + k - 1]),
        }
    }
}

struct Postorder {
    depth: Vec<u32>,
    lo: Vec<u32>,
    hi: Vec<u32>,
    kid_off: Vec<u32>,
    kid_cnt: Vec<u32>,
    arena: Vec<u32>,
}

impl Postorder {
    fn with_capacity(cap: usize) -> Self {
        Postorder {
            depth: Vec::with_capacity(cap),
            lo: Vec::with_capacity(cap),
            hi: Vec::with_capacity(cap),
            kid_off: Vec::with_capacity(cap),
            kid_cnt: Vec::with_capacity(cap),
            arena: Vec::with_capacity(cap),
        }
    }

    fn finalize(&mut self, p: Pending, end: u32) -> u32 {
        let id = self.depth.len() as u32;
        self.depth.push(p.depth);
        self.lo.push(p.lo);
        self.hi.push(end);
        self.kid_off.push(self.arena.len() as u32);
        self.kid_cnt.push(p.children.len() as u32);
        self.arena.extend_from_slice(&p.children);
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree_of(raw: &[u8]) -> (PackedText, SuffixArrayIndex, SuffixTree) {
        let t = PackedText::from_bytes(raw).unwrap();
        let ix = SuffixArrayIndex::build(&t);
        let tree = SuffixTree::build(&ix, &t);
        (t, ix, tree)
    }

    fn spelled(t: &PackedText, tree: &SuffixTree, v: u32) -> Vec<Code> {
        let mut path = vec![v];
        while let Some(p) = tree.parent(*path.last().unwrap()) {
            path.push(p);
        }
        path.iter().rev().flat_map(|&u| tree.edge(u).map(|i| t.code_at(i))).collect()
    }

    #[test]
    fn aaaa_shape() {
        let (_, _, tree) = tree_of(b"aaaa");
        let root: Vec<_> = tree.children(0).collect();
        assert_eq!(root.len(), 1);
        assert_eq!(root[0].0, 1);
        let leaves = (0..tree.node_count() as u32).filter(|&v| tree.is_leaf(v)).count();
        assert_eq!(leaves, 4);
        // "a" -> "aa" -> "aaa" chain of internal nodes.
        let internal: Vec<usize> =
            (1..tree.node_count() as u32).filter(|&v| !tree.is_leaf(v)).map(|v| tree.depth(v)).collect();
        assert_eq!(internal, vec![1, 2, 3]);
    }

    #[test]
    fn banana_shape() {
        let (t, _, tree) = tree_of(b"banana");
        let codes: Vec<Code> = tree.children(0).map(|(c, _)| c).collect();
        assert_eq!(codes, vec![1, 2, 3]);
        let a = match tree.child_by_code(0, 1) {
            ChildStep::Exact(v) => v,
            other => panic!("{other:?}"),
        };
        assert_eq!(tree.sa_range(a), 0..3);
        assert!(matches!(tree.child_by_code(0, 2), ChildStep::Exact(_)));
        assert!(matches!(tree.child_by_code(0, 4), ChildStep::PredecessorEdge(v) if spelled(&t, &tree, v)[0] == 3));
        let na = match tree.child_by_code(0, 3) {
            ChildStep::Exact(v) => v,
            _ => unreachable!(),
        };
        // "na" ends the text, so its first child edge is the terminator.
        assert!(matches!(tree.child_by_code(na, 0), ChildStep::Exact(v) if tree.is_leaf(v) && tree.depth(v) == 3));
        assert_eq!(tree.child_by_code(na, 1), ChildStep::PredecessorEdge(tree.children(na).next().unwrap().1));
        let b = match tree.child_by_code(0, 2) {
            ChildStep::Exact(v) => v,
            _ => unreachable!(),
        };
        assert_eq!(tree.child_by_code(b, 1), ChildStep::None);
    }

    #[test]
    fn single_char() {
        let (_, _, tree) = tree_of(b"x");
        assert_eq!(tree.node_count(), 2);
        assert_eq!(tree.child_count(0), 1);
        assert!(tree.is_leaf(1));
        assert_eq!(tree.depth(1), 2);
    }

    #[test]
    fn leaves_spell_suffixes() {
        let raw = b"abracadabra";
        let (t, ix, tree) = tree_of(raw);
        for r in 0..raw.len() {
            let leaf = tree.leaf_of_sa(r);
            let mut want: Vec<Code> = (ix.sa_at(r)..raw.len()).map(|i| t.code_at(i)).collect();
            want.push(0);
            assert_eq!(spelled(&t, &tree, leaf), want);
        }
    }

    #[test]
    fn parts_round_trip() {
        let (_, _, tree) = tree_of(b"mississippi");
        let back = SuffixTree::from_parts(tree.to_parts(), 11).unwrap();
        assert_eq!(back, tree);
        let mut bad = tree.to_parts();
        bad.child_nodes[0] = 999;
        assert!(SuffixTree::from_parts(bad, 11).is_err());
    }
}
