//! The assembled index: packed text, suffix array, suffix tree, short
//! pattern table and heavy-node index.

use log::debug;

use crate::error::{Error, Result};
use crate::heavy::{default_threshold, HeavyIndex};
use crate::packed::{Alphabet, PackedText};
use crate::short_table::ShortPatternTable;
use crate::suffix::{SuffixArrayIndex, SuffixTree, MAX_TEXT_LEN};

/// Build-time knobs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Overrides the heavy-node leaf-count threshold.
    pub force_threshold: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Index {
    pub(crate) text: PackedText,
    pub(crate) sa: SuffixArrayIndex,
    pub(crate) tree: SuffixTree,
    pub(crate) short: ShortPatternTable,
    pub(crate) heavy: HeavyIndex,
}

impl Index {
    pub fn build(raw: &[u8]) -> Result<Self> {
        Self::build_with(raw, &BuildOptions::default())
    }

    pub fn build_with(raw: &[u8], opts: &BuildOptions) -> Result<Self> {
        if raw.len() > MAX_TEXT_LEN {
            return Err(Error::TextTooLong(raw.len()));
        }
        let alphabet = Alphabet::build(raw)?;
        let text = PackedText::pack(raw, &alphabet)?;
        let sa = SuffixArrayIndex::build(&text);
        let tree = SuffixTree::build(&sa, &text);
        let short = ShortPatternTable::build(&tree, &text, sa.sa());
        let threshold = opts.force_threshold.unwrap_or_else(|| default_threshold(raw.len())).max(2);
        let heavy = HeavyIndex::build(&tree, &text, sa.sa(), threshold)?;
        debug!(
            "built index: n={} sigma={} alpha={} nodes={} short_len={} t={} micro_trees={}",
            text.len(),
            alphabet.sigma(),
            alphabet.chars_per_word(),
            tree.node_count(),
            short.max_len(),
            threshold,
            heavy.micro_trees().len()
        );
        Ok(Index { text, sa, tree, short, heavy })
    }

    /// Assembles an index from already validated components.
    pub fn from_components(
        text: PackedText,
        sa: SuffixArrayIndex,
        tree: SuffixTree,
        short: ShortPatternTable,
        heavy: HeavyIndex,
    ) -> Self {
        Index { text, sa, tree, short, heavy }
    }

    /// Text length `n`.
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn text(&self) -> &PackedText {
        &self.text
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.text.alphabet()
    }

    pub fn suffix_array(&self) -> &SuffixArrayIndex {
        &self.sa
    }

    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    pub fn short_table(&self) -> &ShortPatternTable {
        &self.short
    }

    pub fn heavy(&self) -> &HeavyIndex {
        &self.heavy
    }

    pub fn threshold(&self) -> usize {
        self.heavy.threshold()
    }
}
