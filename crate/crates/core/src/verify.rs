//! Self-checks over a loaded index, and summary statistics.
//!
//! Structural suites always run. Sampled suites compare against brute-force
//! answers computed from the text alone and are skipped when `samples` is 0.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::heavy::MicroCounts;
use crate::index::Index;
use crate::io::IndexFile;
use crate::oracle::{naive_deepest_prefix_node, naive_locate, naive_predecessor};

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    /// Items checked.
    pub checked: u64,
    pub detail: String,
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{status}\t{}\tchecked={}", self.name, self.checked)?;
        if !self.detail.is_empty() {
            write!(f, "\t{}", self.detail)?;
        }
        Ok(())
    }
}

type SuiteResult = Result<u64, String>;

fn run(name: &'static str, suite: impl FnOnce() -> SuiteResult) -> SuiteReport {
    let (passed, checked, detail) = match catch_unwind(AssertUnwindSafe(suite)) {
        Ok(Ok(checked)) => (true, checked, String::new()),
        Ok(Err(msg)) => (false, 0, msg),
        Err(_) => (false, 0, "panicked on inconsistent data".into()),
    };
    SuiteReport { name, passed, checked, detail }
}

/// Runs every suite. `samples` is the number of sampled checks per sampled
/// suite; `seed` fixes which ones.
pub fn verify(file: &IndexFile, samples: usize, seed: u64) -> Vec<SuiteReport> {
    let idx = &file.index;
    let raw = idx.text().to_bytes();
    let mut out = vec![
        run("sa-permutation", || sa_permutation(idx)),
        run("tree-structure", || tree_structure(idx)),
        run("short-table-size", || {
            let size = idx.short_table().len();
            if size > idx.len() {
                return Err(format!("table holds {size} entries for n = {}", idx.len()));
            }
            Ok(1)
        }),
        run("heavy-bounds", || heavy_bounds(idx)),
        run("navigation", || {
            let h = idx.heavy();
            h.check_navigation(idx.tree(), idx.text(), idx.suffix_array().sa()).map(|c| c as u64)
        }),
    ];
    if samples > 0 {
        out.push(run("sa-order", || sa_order(idx, samples, seed)));
        out.push(run("short-table-entries", || short_entries(idx, samples, seed)));
        out.push(run("differential", || differential(file, &raw, samples, seed)));
    }
    out
}

fn sa_permutation(idx: &Index) -> SuiteResult {
    let n = idx.len();
    let mut seen = vec![false; n];
    for (r, &s) in idx.suffix_array().sa().iter().enumerate() {
        let s = s as usize;
        if s >= n || seen[s] {
            return Err(format!("rank {r} holds repeated or out-of-range start {s}"));
        }
        seen[s] = true;
    }
    Ok(n as u64)
}

/// Sampled adjacent pairs must be in order with the stored LCP between them.
fn sa_order(idx: &Index, samples: usize, seed: u64) -> SuiteResult {
    let n = idx.len();
    let sa = idx.suffix_array().sa();
    let lcp = idx.suffix_array().lcp();
    let codes = idx.text().codes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks: Vec<usize> =
        if samples + 1 >= n { (1..n).collect() } else { (0..samples).map(|_| rng.gen_range(1..n)).collect() };
    for &r in &ranks {
        let (a, b) = (&codes[sa[r - 1] as usize..], &codes[sa[r] as usize..]);
        let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        // Without the terminator, a shorter suffix that prefixes the other sorts first.
        let ordered = match (a.get(common), b.get(common)) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => x < y,
        };
        if !ordered {
            return Err(format!("suffixes at ranks {} and {r} are out of order", r - 1));
        }
        if lcp[r] as usize != common {
            return Err(format!("lcp[{r}] = {} but the suffixes share {common}", lcp[r]));
        }
    }
    Ok(ranks.len() as u64)
}

fn tree_structure(idx: &Index) -> SuiteResult {
    let tree = idx.tree();
    let n = idx.len();
    let root = tree.root();
    if tree.sa_range(root) != (0..n) || tree.depth(root) != 0 {
        return Err("root does not span the suffix array".into());
    }
    let mut leaves = 0u64;
    for v in 0..tree.node_count() as u32 {
        if tree.is_leaf(v) {
            leaves += 1;
            continue;
        }
        let mut next = tree.sa_lo(v);
        let mut last_code = None;
        for (code, c) in tree.children(v) {
            if tree.parent(c) != Some(v) || tree.depth(c) <= tree.depth(v) {
                return Err(format!("node {c} is not a proper child of {v}"));
            }
            if tree.sa_lo(c) != next || last_code.is_some_and(|l| l >= code) {
                return Err(format!("children of node {v} are not in suffix order"));
            }
            next = tree.sa_hi(c);
            last_code = Some(code);
        }
        if next != tree.sa_hi(v) {
            return Err(format!("children of node {v} do not cover its range"));
        }
    }
    // One leaf per suffix.
    if leaves != n as u64 {
        return Err(format!("{leaves} leaves for {n} suffixes"));
    }
    Ok(tree.node_count() as u64)
}

fn heavy_bounds(idx: &Index) -> SuiteResult {
    let h = idx.heavy();
    h.check_bounds(idx.len())?;
    let recount = h.recount_ledger(idx.tree());
    if recount != h.ledger() {
        return Err(format!("stored ledger {:?} but micro trees give {recount:?}", h.ledger()));
    }
    Ok(h.micro_trees().len() as u64 + 1)
}

fn short_entries(idx: &Index, samples: usize, seed: u64) -> SuiteResult {
    let table = idx.short_table();
    let codes = idx.text().codes();
    let sa = idx.suffix_array().sa();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
    let picks: Vec<usize> = if samples >= table.len() {
        (0..table.len()).collect()
    } else {
        (0..samples).map(|_| rng.gen_range(0..table.len())).collect()
    };
    for &i in &picks {
        let p = table.pattern_at(i).expect("index below table length");
        let want = naive_deepest_prefix_node(idx.tree(), &codes, sa, &p);
        if table.entries()[i] != want {
            return Err(format!("entry {i} is node {} but the walk gives {want}", table.entries()[i]));
        }
    }
    Ok(picks.len() as u64)
}

/// Random pattern drawn from `raw`: a substring, a perturbed substring or
/// random symbols, with lengths spread over short and long.
pub fn sample_pattern(rng: &mut impl Rng, raw: &[u8], symbols: &[u8], max_len: usize) -> Vec<u8> {
    let n = raw.len();
    let len = match rng.gen_range(0..4) {
        0 => rng.gen_range(1..=4.min(n)),
        1 => rng.gen_range(1..=64.min(n)),
        _ => rng.gen_range(1..=max_len.clamp(1, n)),
    };
    let s = rng.gen_range(0..=n - len);
    let mut p = raw[s..s + len].to_vec();
    match rng.gen_range(0..3) {
        0 => {}
        1 => {
            let i = rng.gen_range(0..len);
            p[i] = symbols[rng.gen_range(0..symbols.len())];
        }
        _ => p.iter_mut().for_each(|b| *b = symbols[rng.gen_range(0..symbols.len())]),
    }
    p
}

fn differential(file: &IndexFile, raw: &[u8], samples: usize, seed: u64) -> SuiteResult {
    let idx = &file.index;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
    let symbols = idx.alphabet().symbols().to_vec();
    for _ in 0..samples {
        let p = sample_pattern(&mut rng, raw, &symbols, 256);
        let a = idx.answer(&p);
        let mut got = idx.positions(&a);
        got.sort_unstable();
        let want = naive_locate(raw, &p);
        if got != want {
            return Err(format!(
                "locate {:?}: index {} hits, text {}",
                String::from_utf8_lossy(&p),
                got.len(),
                want.len()
            ));
        }
        if idx.predecessor_of(&a) != naive_predecessor(raw, &p) {
            return Err(format!("predecessor of {:?} differs", String::from_utf8_lossy(&p)));
        }
    }
    Ok(samples as u64)
}

/// Summary numbers for `stats`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stats {
    pub n: usize,
    pub sigma: usize,
    pub bits: u32,
    pub alpha: usize,
    pub threshold: usize,
    pub nodes: usize,
    pub heavy_nodes: usize,
    pub heavy_leaves: usize,
    pub heavy_branching: usize,
    pub micro: MicroCounts,
    pub short_max_len: usize,
    pub short_entries: usize,
    pub ledger: crate::heavy::PromotionLedger,
    pub records: usize,
}

impl Stats {
    pub fn of(file: &IndexFile) -> Self {
        let idx = &file.index;
        let class = idx.heavy().classification();
        Stats {
            n: idx.len(),
            sigma: idx.alphabet().sigma(),
            bits: idx.alphabet().bits_per_symbol(),
            alpha: idx.alphabet().chars_per_word(),
            threshold: idx.threshold(),
            nodes: idx.tree().node_count(),
            heavy_nodes: class.heavy_count(),
            heavy_leaves: class.heavy_leaf_count(),
            heavy_branching: class.heavy_branching_count(),
            micro: idx.heavy().counts(),
            short_max_len: idx.short_table().max_len(),
            short_entries: idx.short_table().len(),
            ledger: idx.heavy().ledger(),
            records: file.records.records().len(),
        }
    }

    /// `key\tvalue` lines.
    pub fn lines(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("n", self.n.to_string()),
            ("sigma", self.sigma.to_string()),
            ("bits_per_symbol", self.bits.to_string()),
            ("alpha", self.alpha.to_string()),
            ("threshold", self.threshold.to_string()),
            ("tree_nodes", self.nodes.to_string()),
            ("heavy_nodes", self.heavy_nodes.to_string()),
            ("heavy_leaves", self.heavy_leaves.to_string()),
            ("heavy_branching", self.heavy_branching.to_string()),
            ("micro_type1", self.micro.type1.to_string()),
            ("micro_type2a", self.micro.type2a.to_string()),
            ("micro_type2b", self.micro.type2b.to_string()),
            ("short_max_len", self.short_max_len.to_string()),
            ("short_entries", self.short_entries.to_string()),
            ("promoted_type1", self.ledger.type1.to_string()),
            ("promoted_type2a", self.ledger.type2a.to_string()),
            ("promoted_type2b", self.ledger.type2b.to_string()),
        ];
        if self.records > 0 {
            v.push(("records", self.records.to_string()));
        }
        v.into_iter().map(|(k, x)| (k.to_string(), x)).collect()
    }
}
