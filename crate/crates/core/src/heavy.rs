//! Heavy-node index for long patterns.
//!
//! A node is heavy when its subtree spans at least `t` leaves. The heavy
//! nodes form a top subtree that is cut into micro trees of string depth α,
//! rooted at depths that are multiples of α. A micro tree root may fall
//! inside an edge; such a root is a locus `(node, depth)` on the edge into
//! `node` and counts as a promoted node.
//!
//! Each micro tree has one of three kinds:
//!
//! * `Type1`: it holds a branching heavy node. Navigation to the micro trees
//!   below is a dictionary keyed by the next α codes.
//! * `Type2a`: no branching heavy node, but a heavy node strictly inside, or
//!   the root is a heavy leaf. At most one path leads down.
//! * `Type2b`: nothing heavy strictly inside and a heavy edge crossing the
//!   bottom boundary. Navigation skips straight to the deepest boundary above
//!   the next explicit heavy node; the micro trees in between are never built.
//!
//! Each micro tree also keeps two predecessor structures keyed by `$`-padded
//! α-code paths from its root: one over light children of its heavy nodes
//! and one over its heavy nodes.

use std::collections::{HashMap, VecDeque};

use crate::containers::{DetDictionary, DetPredecessor};
use crate::error::{Error, Result};
use crate::packed::{Code, Layout, Packed, PackedText};
use crate::suffix::SuffixTree;

/// A point in the suffix tree: string depth `depth` on the edge into `node`,
/// or `node` itself when `depth` equals its string depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Locus {
    pub node: u32,
    pub depth: u32,
}

impl Locus {
    pub fn explicit(tree: &SuffixTree, node: u32) -> Self {
        Locus { node, depth: tree.depth(node) as u32 }
    }

    pub fn is_explicit(&self, tree: &SuffixTree) -> bool {
        self.depth as usize == tree.depth(self.node)
    }

    /// Deepest explicit node at or above this locus.
    pub fn anchor(&self, tree: &SuffixTree) -> u32 {
        if self.is_explicit(tree) {
            self.node
        } else {
            tree.parent(self.node).expect("an implicit locus lies below the root")
        }
    }
}

/// Leaf-count cutoff `max(2, ⌈(log₂ log₂ n)²⌉)`.
pub fn default_threshold(n: usize) -> usize {
    if n <= 2 {
        return 2;
    }
    let ll = (n as f64).log2().log2();
    if ll <= 0.0 {
        return 2;
    }
    ((ll * ll).ceil() as usize).max(2)
}

/// Heavy flags for every tree node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyClassification {
    threshold: usize,
    heavy: Vec<bool>,
    heavy_children: Vec<u32>,
}

impl HeavyClassification {
    pub fn classify(tree: &SuffixTree, threshold: usize) -> Self {
        let heavy: Vec<bool> = (0..tree.node_count() as u32).map(|v| tree.leaf_count(v) >= threshold).collect();
        let mut heavy_children = vec![0u32; tree.node_count()];
        for v in 1..tree.node_count() as u32 {
            if heavy[v as usize] {
                heavy_children[tree.parent(v).expect("non-root") as usize] += 1;
            }
        }
        HeavyClassification { threshold, heavy, heavy_children }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    #[inline]
    pub fn is_heavy(&self, v: u32) -> bool {
        self.heavy[v as usize]
    }

    pub fn heavy_child_count(&self, v: u32) -> usize {
        self.heavy_children[v as usize] as usize
    }

    pub fn heavy_nodes(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.heavy.len() as u32).filter(|&v| self.heavy[v as usize])
    }

    pub fn heavy_count(&self) -> usize {
        self.heavy_nodes().count()
    }

    /// Heavy nodes without heavy children.
    pub fn heavy_leaf_count(&self) -> usize {
        self.heavy_nodes().filter(|&v| self.heavy_children[v as usize] == 0).count()
    }

    /// Heavy nodes with at least two heavy children.
    pub fn heavy_branching_count(&self) -> usize {
        self.heavy_nodes().filter(|&v| self.heavy_children[v as usize] >= 2).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MicroKind {
    Type1,
    Type2a,
    Type2b,
}

impl MicroKind {
    pub fn tag(self) -> u8 {
        match self {
            MicroKind::Type1 => 1,
            MicroKind::Type2a => 2,
            MicroKind::Type2b => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(MicroKind::Type1),
            2 => Some(MicroKind::Type2a),
            3 => Some(MicroKind::Type2b),
            _ => None,
        }
    }
}

/// How a query leaves a micro tree downwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nav {
    /// Little-index-first α-code chunk word to child micro tree id.
    Hashed(DetDictionary<u32>),
    /// The single path chunk and the child below it, if the heavy path
    /// continues past the bottom boundary.
    Path(Option<(u64, u32)>),
    /// Skip `len` codes of text starting at `start` to reach `child`.
    Skip { start: u32, len: u32, child: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MicroTree {
    pub root: Locus,
    pub kind: MicroKind,
    pub nav: Nav,
    /// Light children of heavy nodes in this micro tree, payload node id.
    pub light_pred: DetPredecessor<u32>,
    /// The root (key 0) and the explicit heavy nodes strictly inside,
    /// payload node id.
    pub heavy_pred: DetPredecessor<u32>,
}

/// Number of promoted implicit nodes, attributed to the kind of the micro
/// tree whose navigation created them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PromotionLedger {
    pub type1: u64,
    pub type2a: u64,
    pub type2b: u64,
}

/// Constant in the bound on promotions made by hashed micro trees.
pub const TYPE1_PROMOTION_FACTOR: usize = 3;

/// Stored form of a micro tree: everything needed to rebuild it exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MicroRecord {
    pub kind: u8,
    pub root_node: u32,
    pub root_depth: u32,
    pub nav: Vec<(u64, u32)>,
    pub skip: (u32, u32, u32),
    pub light: Vec<(u64, u32)>,
    pub heavy: Vec<(u64, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyIndex {
    layout: Layout,
    class: HeavyClassification,
    micro: Vec<MicroTree>,
    ledger: PromotionLedger,
}

/// Per-kind micro tree counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MicroCounts {
    pub type1: usize,
    pub type2a: usize,
    pub type2b: usize,
}

impl HeavyIndex {
    pub fn build(tree: &SuffixTree, text: &PackedText, sa: &[u32], threshold: usize) -> Result<Self> {
        let layout = text.layout();
        let class = HeavyClassification::classify(tree, threshold);
        let mut micro = Vec::new();
        let mut ledger = PromotionLedger::default();
        if !class.is_heavy(tree.root()) {
            return Ok(HeavyIndex { layout, class, micro, ledger });
        }

        let b = Builder { tree, text, sa, class: &class, alpha: layout.alpha(), layout };
        let mut queue = VecDeque::from([Locus::explicit(tree, tree.root())]);
        let mut next_id = 1u32;
        while let Some(root) = queue.pop_front() {
            let mut enqueue = |child: Locus, kind: MicroKind| {
                if !child.is_explicit(tree) {
                    match kind {
                        MicroKind::Type1 => ledger.type1 += 1,
                        MicroKind::Type2a => ledger.type2a += 1,
                        MicroKind::Type2b => ledger.type2b += 1,
                    }
                }
                queue.push_back(child);
                let id = next_id;
                next_id += 1;
                id
            };
            micro.push(b.micro_tree(root, &mut enqueue)?);
        }
        Ok(HeavyIndex { layout, class, micro, ledger })
    }

    /// Rebuilds from stored records.
    pub fn from_records(
        tree: &SuffixTree,
        layout: Layout,
        threshold: usize,
        records: Vec<MicroRecord>,
        ledger: PromotionLedger,
    ) -> Result<Self> {
        let bad = |what: &str| Error::Format(format!("micro tree record: {what}"));
        let nodes = tree.node_count() as u32;
        let count = records.len() as u32;
        let mut micro = Vec::with_capacity(records.len());
        for r in records {
            let kind = MicroKind::from_tag(r.kind).ok_or_else(|| bad("unknown kind"))?;
            if r.root_node >= nodes || r.root_depth as usize > tree.depth(r.root_node) {
                return Err(bad("root out of range"));
            }
            if r.nav.iter().any(|&(_, c)| c >= count) || r.light.iter().chain(&r.heavy).any(|&(_, v)| v >= nodes) {
                return Err(bad("reference out of range"));
            }
            let nav = match kind {
                MicroKind::Type1 => Nav::Hashed(DetDictionary::build(r.nav)?),
                MicroKind::Type2a => match r.nav.as_slice() {
                    [] => Nav::Path(None),
                    [one] => Nav::Path(Some(*one)),
                    _ => return Err(bad("path micro tree with several children")),
                },
                MicroKind::Type2b => {
                    let (start, len, child) = r.skip;
                    if child >= count {
                        return Err(bad("skip target out of range"));
                    }
                    Nav::Skip { start, len, child }
                }
            };
            micro.push(MicroTree {
                root: Locus { node: r.root_node, depth: r.root_depth },
                kind,
                nav,
                light_pred: DetPredecessor::build(r.light)?,
                heavy_pred: DetPredecessor::build(r.heavy)?,
            });
        }
        let class = HeavyClassification::classify(tree, threshold);
        Ok(HeavyIndex { layout, class, micro, ledger })
    }

    pub fn records(&self) -> Vec<MicroRecord> {
        self.micro
            .iter()
            .map(|m| {
                let (nav, skip) = match &m.nav {
                    Nav::Hashed(d) => (d.iter().collect(), (0, 0, 0)),
                    Nav::Path(p) => (p.iter().copied().collect(), (0, 0, 0)),
                    Nav::Skip { start, len, child } => (Vec::new(), (*start, *len, *child)),
                };
                MicroRecord {
                    kind: m.kind.tag(),
                    root_node: m.root.node,
                    root_depth: m.root.depth,
                    nav,
                    skip,
                    light: m.light_pred.iter().collect(),
                    heavy: m.heavy_pred.iter().collect(),
                }
            })
            .collect()
    }

    pub fn classification(&self) -> &HeavyClassification {
        &self.class
    }

    pub fn threshold(&self) -> usize {
        self.class.threshold()
    }

    pub fn ledger(&self) -> PromotionLedger {
        self.ledger
    }

    pub fn micro_trees(&self) -> &[MicroTree] {
        &self.micro
    }

    pub fn micro(&self, id: u32) -> &MicroTree {
        &self.micro[id as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.micro.is_empty()
    }

    pub fn counts(&self) -> MicroCounts {
        let mut c = MicroCounts::default();
        for m in &self.micro {
            match m.kind {
                MicroKind::Type1 => c.type1 += 1,
                MicroKind::Type2a => c.type2a += 1,
                MicroKind::Type2b => c.type2b += 1,
            }
        }
        c
    }

    /// Key of a code sequence of length at most α: `$`-padded to α codes,
    /// most significant code first.
    pub fn encode_key(&self, codes: &[Code]) -> Result<u64> {
        encode_key(self.layout, codes)
    }

    /// Checks the heavy-node and promotion bounds. Returns a description of
    /// the first violation.
    pub fn check_bounds(&self, n: usize) -> std::result::Result<(), String> {
        let t = self.threshold();
        let c = &self.class;
        let (leaves, branching, heavy) = (c.heavy_leaf_count(), c.heavy_branching_count(), c.heavy_count());
        if leaves * t > n {
            return Err(format!("{leaves} heavy leaves exceed n/t = {n}/{t}"));
        }
        if branching * t > n {
            return Err(format!("{branching} heavy branching nodes exceed n/t = {n}/{t}"));
        }
        let non_branching = heavy - branching;
        let l = self.ledger;
        if l.type2a as usize > 2 * non_branching {
            return Err(format!("{} type-2a promotions exceed 2 x {non_branching}", l.type2a));
        }
        if l.type2b as usize > heavy {
            return Err(format!("{} type-2b promotions exceed {heavy} heavy nodes", l.type2b));
        }
        if l.type1 as usize * t > TYPE1_PROMOTION_FACTOR * n {
            return Err(format!("{} type-1 promotions exceed {TYPE1_PROMOTION_FACTOR}n/t", l.type1));
        }
        Ok(())
    }

    /// Recounts promotions from the stored micro trees.
    pub fn recount_ledger(&self, tree: &SuffixTree) -> PromotionLedger {
        let mut l = PromotionLedger::default();
        let mut count = |child: u32, kind: MicroKind| {
            if !self.micro[child as usize].root.is_explicit(tree) {
                match kind {
                    MicroKind::Type1 => l.type1 += 1,
                    MicroKind::Type2a => l.type2a += 1,
                    MicroKind::Type2b => l.type2b += 1,
                }
            }
        };
        for m in &self.micro {
            match &m.nav {
                Nav::Hashed(d) => d.iter().for_each(|(_, c)| count(c, m.kind)),
                Nav::Path(Some((_, c))) => count(*c, m.kind),
                Nav::Path(None) => {}
                Nav::Skip { child, .. } => count(*child, m.kind),
            }
        }
        l
    }

    /// Exhaustive check of hashed navigation: every boundary crossing of a
    /// heavy edge below a hashed micro tree must be reachable by its chunk,
    /// and the dictionary must hold nothing else.
    pub fn check_navigation(
        &self,
        tree: &SuffixTree,
        text: &PackedText,
        sa: &[u32],
    ) -> std::result::Result<usize, String> {
        let alpha = self.layout.alpha();
        let by_root: HashMap<Locus, u32> = self.micro.iter().enumerate().map(|(i, m)| (m.root, i as u32)).collect();
        let mut expected: HashMap<u32, usize> = HashMap::new();
        let mut checked = 0;
        for y in self.class.heavy_nodes() {
            let Some(p) = tree.parent(y) else { continue };
            let (top, bottom) = (tree.depth(p), tree.depth(y));
            let mut boundary = (top / alpha + 1) * alpha;
            while boundary <= bottom {
                let upper = boundary - alpha;
                // The node whose edge holds depth `upper` on the way to y.
                let mut z = y;
                while let Some(pz) = tree.parent(z) {
                    if tree.depth(pz) < upper {
                        break;
                    }
                    z = pz;
                }
                if tree.depth(z) < upper {
                    boundary += alpha;
                    continue;
                }
                let root = Locus { node: z, depth: upper as u32 };
                if let Some(&id) = by_root.get(&root) {
                    if let Nav::Hashed(d) = &self.micro[id as usize].nav {
                        let chunk = self.layout.extract(text.words(), sa[tree.sa_lo(y)] as usize + upper, alpha);
                        let want = by_root.get(&Locus { node: y, depth: boundary as u32 });
                        match (d.get(chunk), want) {
                            (Some(got), Some(&want)) if got == want => {}
                            (got, want) => {
                                return Err(format!(
                                    "micro tree {id}: chunk below node {y} at depth {boundary} maps to {got:?}, expected {want:?}"
                                ))
                            }
                        }
                        *expected.entry(id).or_default() += 1;
                        checked += 1;
                    }
                }
                boundary += alpha;
            }
        }
        for (id, m) in self.micro.iter().enumerate() {
            if let Nav::Hashed(d) = &m.nav {
                let want = expected.get(&(id as u32)).copied().unwrap_or(0);
                if d.len() != want {
                    return Err(format!("micro tree {id}: dictionary holds {} keys, expected {want}", d.len()));
                }
            }
        }
        Ok(checked)
    }
}

pub fn encode_key(layout: Layout, codes: &[Code]) -> Result<u64> {
    let alpha = layout.alpha();
    if codes.len() > alpha {
        return Err(Error::KeyTooLong { len: codes.len(), alpha });
    }
    let mut key = 0u64;
    for p in 0..alpha {
        key = (key << layout.bits()) | codes.get(p).copied().unwrap_or(0) as u64;
    }
    Ok(key)
}

struct Builder<'a> {
    tree: &'a SuffixTree,
    text: &'a PackedText,
    sa: &'a [u32],
    class: &'a HeavyClassification,
    layout: Layout,
    alpha: usize,
}

impl Builder<'_> {
    fn heavy_children(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.tree.children(v).map(|(_, c)| c).filter(|&c| self.class.is_heavy(c))
    }

    /// Key of the path from depth `from` along the way to `v`, cut at
    /// `len ≤ α` codes and padded.
    fn path_key(&self, v: u32, from: usize, len: usize) -> u64 {
        let chunk = self.layout.extract(self.text.words(), self.sa[self.tree.sa_lo(v)] as usize + from, len);
        self.layout.key_from_chunk(chunk)
    }

    fn chunk_word(&self, v: u32, from: usize) -> u64 {
        self.layout.extract(self.text.words(), self.sa[self.tree.sa_lo(v)] as usize + from, self.alpha)
    }

    fn micro_tree(&self, root: Locus, enqueue: &mut dyn FnMut(Locus, MicroKind) -> u32) -> Result<MicroTree> {
        let tree = self.tree;
        let d = root.depth as usize;
        let bottom = d + self.alpha;

        // Explicit heavy nodes in [d, bottom) and heavy edges crossing bottom.
        let mut region = Vec::new();
        let mut crossing = Vec::new();
        let mut stack = vec![root.node];
        while let Some(y) = stack.pop() {
            if tree.depth(y) < bottom {
                region.push(y);
                let mut kids: Vec<u32> = self.heavy_children(y).collect();
                kids.reverse();
                stack.extend(kids);
            } else {
                crossing.push(y);
            }
        }
        let inside: Vec<u32> = region.iter().copied().filter(|&x| tree.depth(x) > d).collect();
        let branching = region.iter().any(|&x| self.class.heavy_child_count(x) >= 2);
        let kind = if branching {
            MicroKind::Type1
        } else if !inside.is_empty() || (root.is_explicit(tree) && self.class.heavy_child_count(root.node) == 0) {
            MicroKind::Type2a
        } else {
            MicroKind::Type2b
        };

        let mut light = Vec::new();
        for &x in &region {
            for (_, c) in tree.children(x) {
                if !self.class.is_heavy(c) {
                    let len = (tree.depth(c) - d).min(self.alpha);
                    light.push((self.path_key(c, d, len), c));
                }
            }
        }
        let mut heavy = vec![(0u64, root.node)];
        for &x in &inside {
            heavy.push((self.path_key(x, d, tree.depth(x) - d), x));
        }

        let nav = match kind {
            MicroKind::Type1 => {
                let mut pairs = Vec::with_capacity(crossing.len());
                for &y in &crossing {
                    let id = enqueue(Locus { node: y, depth: bottom as u32 }, kind);
                    pairs.push((self.chunk_word(y, d), id));
                }
                Nav::Hashed(DetDictionary::build(pairs)?)
            }
            MicroKind::Type2a => Nav::Path(match crossing.as_slice() {
                [] => None,
                [y] => {
                    let id = enqueue(Locus { node: *y, depth: bottom as u32 }, kind);
                    Some((self.chunk_word(*y, d), id))
                }
                _ => unreachable!("a path micro tree crosses its boundary once"),
            }),
            MicroKind::Type2b => {
                let v = match crossing.as_slice() {
                    [v] => *v,
                    _ => unreachable!("a skipping micro tree has exactly one heavy continuation"),
                };
                let target = tree.depth(v) / self.alpha * self.alpha;
                let child = enqueue(Locus { node: v, depth: target as u32 }, kind);
                Nav::Skip { start: (self.sa[tree.sa_lo(v)] as usize + d) as u32, len: (target - d) as u32, child }
            }
        };

        Ok(MicroTree {
            root,
            kind,
            nav,
            light_pred: DetPredecessor::build(light)?,
            heavy_pred: DetPredecessor::build(heavy)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suffix::SuffixArrayIndex;
    use rand::{Rng, SeedableRng};

    struct Built {
        t: PackedText,
        ix: SuffixArrayIndex,
        tree: SuffixTree,
        h: HeavyIndex,
    }

    fn build(raw: &[u8], t: usize) -> Built {
        let text = PackedText::from_bytes(raw).unwrap();
        let ix = SuffixArrayIndex::build(&text);
        let tree = SuffixTree::build(&ix, &text);
        let h = HeavyIndex::build(&tree, &text, ix.sa(), t).unwrap();
        Built { t: text, ix, tree, h }
    }

    fn node_string(b: &Built, v: u32) -> Vec<Code> {
        let s = b.ix.sa_at(b.tree.sa_lo(v));
        (0..b.tree.depth(v)).map(|i| b.t.code_at(s + i)).collect()
    }

    #[test]
    fn thresholds() {
        assert_eq!(default_threshold(1), 2);
        assert_eq!(default_threshold(2), 2);
        assert_eq!(default_threshold(16), 4);
        assert_eq!(default_threshold(1 << 16), 16);
        assert_eq!(default_threshold(1_000_000), 19);
    }

    #[test]
    fn key_encoding() {
        let layout = Layout::for_sigma(3).unwrap();
        assert_eq!(encode_key(layout, &[]).unwrap(), 0);
        assert!(encode_key(layout, &[1]).unwrap() < encode_key(layout, &[1, 1]).unwrap());
        assert!(encode_key(layout, &[1, 3]).unwrap() < encode_key(layout, &[2]).unwrap());
        assert!(encode_key(layout, &[1; 33]).is_err());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for sigma in [1usize, 2, 3, 15, 255] {
            let layout = Layout::for_sigma(sigma).unwrap();
            for _ in 0..20_000 {
                let mut gen = || -> Vec<Code> {
                    let len = rng.gen_range(0..=layout.alpha());
                    (0..len).map(|_| rng.gen_range(1..=sigma as Code)).collect()
                };
                let (a, b) = (gen(), gen());
                let (ka, kb) = (encode_key(layout, &a).unwrap(), encode_key(layout, &b).unwrap());
                assert_eq!(ka.cmp(&kb), a.cmp(&b), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn root_heavy_leaves_light() {
        let b = build(b"mississippi", 2);
        assert!(b.h.classification().is_heavy(0));
        for v in 0..b.tree.node_count() as u32 {
            if b.tree.is_leaf(v) {
                assert!(!b.h.classification().is_heavy(v));
            }
        }
        let small = build(b"ab", 3);
        assert!(small.h.is_empty());
    }

    #[test]
    fn heavy_set_matches_recount() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let raw: Vec<u8> = (0..4096).map(|_| b"ab"[rng.gen_range(0..2)]).collect();
        let b = build(&raw, default_threshold(raw.len()));
        let t = b.h.threshold();
        // Count leaves below each node by walking up from every leaf.
        let mut below = vec![0usize; b.tree.node_count()];
        for r in 0..raw.len() {
            let mut v = Some(b.tree.leaf_of_sa(r));
            while let Some(x) = v {
                below[x as usize] += 1;
                v = b.tree.parent(x);
            }
        }
        for v in 0..b.tree.node_count() as u32 {
            assert_eq!(b.h.classification().is_heavy(v), below[v as usize] >= t);
        }
        b.h.check_bounds(raw.len()).unwrap();
    }

    #[test]
    fn unary_text_is_all_path_trees() {
        let raw = vec![b'a'; 1000];
        let b = build(&raw, default_threshold(raw.len()));
        assert!(!b.h.is_empty());
        assert!(b.h.micro_trees().iter().all(|m| m.kind == MicroKind::Type2a));
        assert_eq!(b.h.ledger(), PromotionLedger::default());
    }

    #[test]
    fn banana_forced_threshold() {
        let b = build(b"banana", 2);
        // Heavy: root, "a", "ana", "na".
        let heavy: Vec<Vec<Code>> = b.h.classification().heavy_nodes().map(|v| node_string(&b, v)).collect();
        assert_eq!(heavy, vec![vec![], vec![1], vec![1, 3, 1], vec![3, 1]]);
        // σ = 3, α = 32: a single micro tree holds the whole heavy tree.
        assert_eq!(b.h.micro_trees().len(), 1);
        let m = &b.h.micro_trees()[0];
        assert_eq!(m.kind, MicroKind::Type1);
        assert!(matches!(&m.nav, Nav::Hashed(d) if d.is_empty()));
        // Light children of "a": the "$" leaf, and of "ana": "ana$", "anana$"...
        let light: Vec<u32> = m.light_pred.iter().map(|(_, v)| v).collect();
        let mut want = Vec::new();
        for x in b.h.classification().heavy_nodes() {
            for (_, c) in b.tree.children(x) {
                if !b.h.classification().is_heavy(c) {
                    want.push(c);
                }
            }
        }
        let mut sorted = light.clone();
        sorted.sort_unstable();
        want.sort_unstable();
        assert_eq!(sorted, want);
        // Keys order as the padded path strings.
        let strings: Vec<Vec<Code>> = m.heavy_pred.iter().map(|(_, v)| node_string(&b, v)).collect();
        let mut s2 = strings.clone();
        s2.sort();
        assert_eq!(strings, s2);
    }

    #[test]
    fn random_binary_navigation_and_bounds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for t in [2usize, 3, 8] {
            // Mutated copies of one block give a heavy tree far deeper than α.
            let block: Vec<u8> = (0..300).map(|_| b"ab"[rng.gen_range(0..2)]).collect();
            let mut raw = Vec::new();
            while raw.len() < 10_000 {
                let mut copy = block.clone();
                for _ in 0..3 {
                    let i = rng.gen_range(0..copy.len());
                    copy[i] = b"ab"[rng.gen_range(0..2)];
                }
                raw.extend(copy);
            }
            let b = build(&raw, t);
            b.h.check_bounds(raw.len()).unwrap();
            assert!(b.h.check_navigation(&b.tree, &b.t, b.ix.sa()).unwrap() > 0);
            let counts = b.h.counts();
            assert!(counts.type1 > 0 && counts.type2a + counts.type2b > 0, "{counts:?}");
            assert_eq!(b.h.recount_ledger(&b.tree), b.h.ledger());
            let alpha = b.t.layout().alpha();
            for m in b.h.micro_trees() {
                assert_eq!(m.root.depth as usize % alpha, 0);
                // Every micro leaf is exactly α below its root.
                if let Nav::Hashed(d) = &m.nav {
                    for (_, c) in d.iter() {
                        assert_eq!(b.h.micro(c).root.depth, m.root.depth + alpha as u32);
                    }
                }
            }
        }
    }

    #[test]
    fn light_keys_match_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let raw: Vec<u8> = (0..3000).map(|_| b"acgt"[rng.gen_range(0..4)]).collect();
        let b = build(&raw, 3);
        let layout = b.t.layout();
        let alpha = layout.alpha();
        for m in b.h.micro_trees() {
            let d = m.root.depth as usize;
            let keys: Vec<(Vec<Code>, u32)> = m
                .light_pred
                .iter()
                .map(|(_, v)| {
                    let s = node_string(&b, v);
                    (s[d..s.len().min(d + alpha)].to_vec(), v)
                })
                .collect();
            for _ in 0..50 {
                let len = rng.gen_range(0..=alpha);
                let q: Vec<Code> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
                let mut padded = q.clone();
                padded.resize(alpha, 0);
                let brute = keys
                    .iter()
                    .filter(|(k, _)| {
                        let mut k = k.clone();
                        k.resize(alpha, 0);
                        k <= padded
                    })
                    .max_by(|a, b| {
                        let (mut x, mut y) = (a.0.clone(), b.0.clone());
                        x.resize(alpha, 0);
                        y.resize(alpha, 0);
                        x.cmp(&y)
                    })
                    .map(|x| x.1);
                let got = m.light_pred.predecessor(encode_key(layout, &q).unwrap()).map(|x| x.1);
                assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn records_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let raw: Vec<u8> = (0..2000).map(|_| b"ab"[rng.gen_range(0..2)]).collect();
        let b = build(&raw, 2);
        let back = HeavyIndex::from_records(&b.tree, b.t.layout(), 2, b.h.records(), b.h.ledger()).unwrap();
        assert_eq!(back, b.h);
    }
}
