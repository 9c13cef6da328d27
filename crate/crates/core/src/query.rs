//! Count, Locate and Predecessor.
//!
//! Every query is reduced to a rank range `[lo, hi)`: `lo` suffixes are
//! smaller than the pattern and the next `hi - lo` have it as a prefix.
//! Patterns of at most `M_s` codes start from the short table. Longer ones
//! descend the heavy micro trees a chunk at a time, then either finish with
//! a packed search inside a light subtree or locate the deepest prefixing
//! node with three heavy-predecessor queries.

use crate::heavy::{Locus, MicroKind, Nav};
use crate::index::Index;
use crate::packed::{first_mismatch, Chunk, Code, Packed, PackedPattern};
use crate::search::{PackedSearch, SearchStats};
use crate::suffix::ChildStep;

/// Rank range answering a query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Answer {
    /// Number of suffixes smaller than the pattern.
    pub lo: usize,
    /// `lo` plus the number of occurrences.
    pub hi: usize,
}

impl Answer {
    pub fn count(&self) -> usize {
        self.hi - self.lo
    }

    /// Rank of the predecessor suffix.
    pub fn predecessor_rank(&self) -> Option<usize> {
        self.lo.checked_sub(1)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Empty pattern, answered without touching the structures.
    #[default]
    Empty,
    /// Pattern holds a byte outside the alphabet.
    Foreign,
    Short,
    Long,
    /// Long pattern on an index without heavy nodes: packed search over
    /// the whole suffix array.
    Scan,
}

/// How the deepest prefixing node was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpSource {
    Table,
    /// The pattern ended exactly at the stopping micro tree's root.
    Exhausted,
    /// Stopped in a skipping micro tree.
    SkipRoot,
    /// Three heavy-predecessor queries.
    HeavyPredecessor,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryOptions {
    /// Sends short patterns down the long path.
    pub force_long: bool,
    /// Brute-force checks inside the packed search loop.
    pub check_invariants: bool,
}

/// Per-query record of the path taken.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryTrace {
    pub route: Route,
    pub micro_trees_visited: u32,
    /// Codes consumed by micro tree navigation.
    pub codes_navigated: usize,
    /// Chunk comparisons made by navigation and edge matching.
    pub nav_chunks: u64,
    pub stop_kind: Option<MicroKind>,
    pub light_hit: bool,
    pub heavy_pred_queries: u32,
    pub dp: Option<Locus>,
    pub dp_source: Option<DpSource>,
    /// Full edges matched below the deepest prefixing node. Zero when that
    /// node is correct.
    pub extra_descents: u32,
    pub search: SearchStats,
}

impl Index {
    /// Answer range for `p`.
    pub fn answer(&self, p: &[u8]) -> Answer {
        self.answer_traced(p, &QueryOptions::default()).0
    }

    pub fn answer_traced(&self, p: &[u8], opts: &QueryOptions) -> (Answer, QueryTrace) {
        let mut trace = QueryTrace::default();
        let alphabet = self.alphabet();
        if p.is_empty() {
            return (Answer { lo: 0, hi: self.len() }, trace);
        }
        let mut codes = Vec::with_capacity(p.len());
        for (i, &byte) in p.iter().enumerate() {
            match alphabet.code(byte) {
                Some(c) => codes.push(c),
                None => {
                    trace.route = Route::Foreign;
                    let lo = self.foreign_rank(&codes, alphabet.codes_below(byte), opts, &mut trace);
                    debug_assert_eq!(codes.len(), i);
                    return (Answer { lo, hi: lo }, trace);
                }
            }
        }
        let ans = self.answer_codes(&codes, opts, &mut trace);
        (ans, trace)
    }

    /// Number of suffixes below a pattern whose code prefix is `known` and
    /// whose next byte is absent from the text, with `below` symbols under it.
    fn foreign_rank(&self, known: &[Code], below: usize, opts: &QueryOptions, trace: &mut QueryTrace) -> usize {
        if below < self.alphabet().sigma() {
            // Everything before known·(below+1) is smaller, nothing after is.
            let mut q = known.to_vec();
            q.push(below as Code + 1);
            self.answer_codes(&q, opts, trace).lo
        } else if known.is_empty() {
            self.len()
        } else {
            self.answer_codes(known, opts, trace).hi
        }
    }

    /// Answer range for a nonempty in-alphabet code sequence.
    pub fn answer_codes(&self, codes: &[Code], opts: &QueryOptions, trace: &mut QueryTrace) -> Answer {
        let p = PackedPattern::from_codes(codes, self.text.layout());
        if codes.len() <= self.short.max_len() && !opts.force_long {
            trace.route = Route::Short;
            let v = self.short.lookup(codes).expect("length checked against the table");
            let dp = Locus::explicit(&self.tree, v);
            trace.dp = Some(dp);
            trace.dp_source = Some(DpSource::Table);
            return self.answer_from_locus(&p, dp, trace);
        }
        self.long_query(&p, opts, trace)
    }

    fn long_query(&self, p: &PackedPattern, opts: &QueryOptions, trace: &mut QueryTrace) -> Answer {
        let search = PackedSearch::new(&self.sa, &self.text).with_invariant_checks(opts.check_invariants);
        if self.heavy.is_empty() {
            trace.route = Route::Scan;
            let out = search.range(p, 0..self.len(), &mut trace.search).expect("pattern packed with the text layout");
            return Answer { lo: out.lo, hi: out.hi };
        }
        trace.route = Route::Long;
        let layout = self.text.layout();
        let alpha = layout.alpha();
        let m = p.len();

        let mut id = 0u32;
        loop {
            let mt = self.heavy.micro(id);
            trace.micro_trees_visited += 1;
            let d = mt.root.depth as usize;
            let q = m - d;
            let next = match &mt.nav {
                Nav::Hashed(dict) if q >= alpha => {
                    trace.nav_chunks += 1;
                    dict.get(p.extract_chunk(d, alpha).word)
                }
                Nav::Path(Some((word, child))) if q >= alpha => {
                    trace.nav_chunks += 1;
                    (p.extract_chunk(d, alpha).word == *word).then_some(*child)
                }
                Nav::Skip { start, len, child } if q >= *len as usize => {
                    self.text_matches(p, d, *start as usize, *len as usize, trace).then_some(*child)
                }
                _ => None,
            };
            match next {
                Some(child) => {
                    trace.codes_navigated += self.heavy.micro(child).root.depth as usize - d;
                    id = child;
                }
                None => break,
            }
        }

        let mt = self.heavy.micro(id);
        trace.stop_kind = Some(mt.kind);
        let d = mt.root.depth as usize;
        let q = m - d;
        let dp = if q == 0 {
            trace.dp_source = Some(DpSource::Exhausted);
            mt.root
        } else {
            let qlen = q.min(alpha);
            let p0 = layout.key_from_chunk(p.extract_chunk(d, qlen).word);

            if let Some((_, c)) = mt.light_pred.predecessor(p0) {
                let dc = self.tree.depth(c);
                if dc <= m && self.text_matches(p, d, self.sa.sa_at(self.tree.sa_lo(c)) + d, dc - d, trace) {
                    trace.light_hit = true;
                    let out = search
                        .range_from(p, self.tree.sa_range(c), dc, &mut trace.search)
                        .expect("pattern packed with the text layout");
                    return Answer { lo: out.lo, hi: out.hi };
                }
            }

            if mt.kind == MicroKind::Type2b {
                trace.dp_source = Some(DpSource::SkipRoot);
                mt.root
            } else {
                trace.dp_source = Some(DpSource::HeavyPredecessor);
                let key_len = |v: u32, key: u64| if key == 0 { 0 } else { self.tree.depth(v) - d };
                let bits = layout.bits();
                let used = alpha as u32 * bits;
                let lcp = |a: u64, alen: usize, b: u64, blen: usize| {
                    let same = match a ^ b {
                        0 => alpha,
                        x => ((x.leading_zeros() - (64 - used)) / bits) as usize,
                    };
                    same.min(alen).min(blen)
                };
                let mask = |key: u64, len: usize| {
                    let drop = (alpha - len) as u32 * bits;
                    if drop >= 64 {
                        0
                    } else {
                        key & !((1u64 << drop) - 1)
                    }
                };

                let mut found = None;
                let mut probe = p0;
                for _ in 0..3 {
                    trace.heavy_pred_queries += 1;
                    let Some((key, v)) = mt.heavy_pred.predecessor(probe) else { break };
                    found = Some((key, v));
                    probe = mask(p0, lcp(p0, qlen, key, key_len(v, key)));
                }
                match found {
                    Some((key, v)) if key != 0 => Locus::explicit(&self.tree, v),
                    _ => mt.root,
                }
            }
        };
        trace.dp = Some(dp);
        self.answer_from_locus(p, dp, trace)
    }

    /// Compares `len` codes of `p` from `from` with the text from `start`.
    fn text_matches(&self, p: &PackedPattern, from: usize, start: usize, len: usize, trace: &mut QueryTrace) -> bool {
        let layout = self.text.layout();
        let alpha = layout.alpha();
        let mut off = 0;
        while off < len {
            let l = alpha.min(len - off);
            trace.nav_chunks += 1;
            if layout.extract(p.words(), from + off, l) != layout.extract(self.text.words(), start + off, l) {
                return false;
            }
            off += l;
        }
        true
    }

    /// Finishes a query from a locus whose string is a prefix of `p`.
    fn answer_from_locus(&self, p: &PackedPattern, mut at: Locus, trace: &mut QueryTrace) -> Answer {
        let tree = &self.tree;
        let layout = self.text.layout();
        let alpha = layout.alpha();
        let m = p.len();
        let node_range = |v: u32| Answer { lo: tree.sa_lo(v), hi: tree.sa_hi(v) };
        let empty_at = |r: usize| Answer { lo: r, hi: r };
        let mut entered_edges = 0u32;
        loop {
            let (u, k) = (at.node, at.depth as usize);
            if k >= m {
                return node_range(u);
            }
            if k == tree.depth(u) {
                match tree.child_by_code(u, p.code_at(k)) {
                    ChildStep::None => return empty_at(tree.sa_lo(u)),
                    ChildStep::PredecessorEdge(e) => return empty_at(tree.sa_hi(e)),
                    ChildStep::Exact(e) => {
                        at = Locus { node: e, depth: k as u32 };
                        continue;
                    }
                }
            }
            // Inside the edge into u: match up to its end or the pattern's.
            let end = m.min(tree.depth(u));
            let start = self.sa.sa_at(tree.sa_lo(u));
            let mut i = k;
            while i < end {
                let l = alpha.min(end - i);
                trace.nav_chunks += 1;
                let pc = p.extract_chunk(i, l);
                let tc = Chunk::new(layout.extract(self.text.words(), start + i, l), l, layout);
                if let Some(j) = first_mismatch(&tc, &pc) {
                    return if tc.code(j) < pc.code(j) { empty_at(tree.sa_hi(u)) } else { empty_at(tree.sa_lo(u)) };
                }
                i += l;
            }
            if end == m {
                return node_range(u);
            }
            entered_edges += 1;
            trace.extra_descents = entered_edges;
            at = Locus::explicit(tree, u);
        }
    }

    pub fn count(&self, p: &[u8]) -> usize {
        self.answer(p).count()
    }

    /// Occurrence positions in suffix array order.
    pub fn locate(&self, p: &[u8]) -> Vec<usize> {
        self.positions(&self.answer(p))
    }

    pub fn positions(&self, a: &Answer) -> Vec<usize> {
        self.sa.sa()[a.lo..a.hi].iter().map(|&s| s as usize).collect()
    }

    /// Start of the largest suffix smaller than `p`.
    pub fn predecessor(&self, p: &[u8]) -> Option<usize> {
        self.predecessor_of(&self.answer(p))
    }

    pub fn predecessor_of(&self, a: &Answer) -> Option<usize> {
        a.predecessor_rank().map(|r| self.sa.sa_at(r))
    }
}
