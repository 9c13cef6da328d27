//! Bit-packed text over a coded alphabet, plus the word-level chunk primitives
//! every search routine is built on.
//!
//! Codes are stored little-index-first: the lowest-order `b` bits of a word hold
//! the smallest text position. Code `0` is reserved for the terminator `$`, so
//! real symbols are coded `1..=σ` in ascending raw-byte order.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Machine word width in bits.
pub const WORD_BITS: u32 = u64::BITS;

/// Symbol code. `0` is the terminator.
pub type Code = u16;

pub const TERMINATOR: Code = 0;

/// Code width and packing density shared by a text and every pattern
/// queried against it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    bits: u32,
    alpha: u32,
}

impl Layout {
    /// Layout for an alphabet of `sigma` real symbols plus the terminator.
    pub fn for_sigma(sigma: usize) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::EmptyText);
        }
        // ⌈log₂(σ+1)⌉ is the bit length of σ.
        let bits = usize::BITS - sigma.leading_zeros();
        if bits > WORD_BITS {
            return Err(Error::AlphabetTooLarge { sigma, word_bits: WORD_BITS });
        }
        Ok(Layout { bits, alpha: WORD_BITS / bits })
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// α, the number of codes held by one word.
    #[inline]
    pub fn alpha(&self) -> usize {
        self.alpha as usize
    }

    #[inline]
    pub fn code_mask(&self) -> u64 {
        low_mask(self.bits)
    }

    /// Mask covering the first `len` code slots of a little-index-first word.
    #[inline]
    pub fn prefix_mask(&self, len: usize) -> u64 {
        low_mask(len as u32 * self.bits)
    }

    /// Number of words needed for `count` codes.
    #[inline]
    pub fn words_for(&self, count: usize) -> usize {
        count.div_ceil(self.alpha())
    }

    /// Reads `len ≤ α` codes starting at code position `i` out of `words`.
    /// Slots past the end of `words` read as the terminator.
    #[inline]
    pub fn extract(&self, words: &[u64], i: usize, len: usize) -> u64 {
        debug_assert!(len <= self.alpha());
        if len == 0 {
            return 0;
        }
        let alpha = self.alpha();
        let (wi, off) = (i / alpha, i % alpha);
        let mut w = words.get(wi).copied().unwrap_or(0) >> (off as u32 * self.bits);
        if off + len > alpha {
            // Straddles a word boundary: splice in the low part of the next word.
            let hi = words.get(wi + 1).copied().unwrap_or(0);
            w |= hi << ((alpha - off) as u32 * self.bits);
        }
        w & self.prefix_mask(len)
    }

    /// Packs a code sequence into little-index-first words.
    pub fn pack_codes<I>(&self, codes: I, count: usize) -> Vec<u64>
    where
        I: IntoIterator<Item = Code>,
    {
        let alpha = self.alpha();
        let mut words = vec![0u64; self.words_for(count)];
        for (i, c) in codes.into_iter().take(count).enumerate() {
            words[i / alpha] |= (c as u64) << ((i % alpha) as u32 * self.bits);
        }
        words
    }

    /// Code at slot `p` of a chunk word.
    #[inline]
    pub fn slot(&self, word: u64, p: usize) -> Code {
        ((word >> (p as u32 * self.bits)) & self.code_mask()) as Code
    }

    /// Converts a little-index-first chunk word into a key whose integer order
    /// is the lexicographic order of the `$`-padded α-code strings.
    pub fn key_from_chunk(&self, word: u64) -> u64 {
        let alpha = self.alpha();
        let mut key = 0u64;
        for p in 0..alpha {
            key = (key << self.bits) | self.slot(word, p) as u64;
        }
        key
    }
}

#[inline]
fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Mapping between raw bytes and codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    code_of: [Code; 256],
    symbols: Vec<u8>,
    layout: Layout,
}

impl Alphabet {
    /// Assigns codes `1..=σ` to the distinct bytes of `raw` in ascending order.
    pub fn build(raw: &[u8]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyText);
        }
        let mut seen = [false; 256];
        for &b in raw {
            seen[b as usize] = true;
        }
        let symbols = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        Self::from_symbols(symbols)
    }

    /// Rebuilds an alphabet from its symbol table (strictly ascending bytes).
    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyText);
        }
        if symbols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("alphabet table is not strictly ascending".into()));
        }
        let layout = Layout::for_sigma(symbols.len())?;
        let mut code_of = [TERMINATOR; 256];
        for (i, &b) in symbols.iter().enumerate() {
            code_of[b as usize] = (i + 1) as Code;
        }
        Ok(Alphabet { code_of, symbols, layout })
    }

    #[inline]
    pub fn code(&self, byte: u8) -> Option<Code> {
        match self.code_of[byte as usize] {
            TERMINATOR => None,
            c => Some(c),
        }
    }

    #[inline]
    pub fn symbol(&self, code: Code) -> Option<u8> {
        code.checked_sub(1).and_then(|i| self.symbols.get(i as usize).copied())
    }

    /// Number of real codes whose raw byte sorts strictly below `byte`.
    pub fn codes_below(&self, byte: u8) -> usize {
        self.symbols.partition_point(|&s| s < byte)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    #[inline]
    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.layout.bits
    }

    pub fn chars_per_word(&self) -> usize {
        self.layout.alpha()
    }

    /// Codes for `raw`, failing on the first byte outside the alphabet.
    pub fn encode(&self, raw: &[u8]) -> Result<Vec<Code>> {
        raw.iter()
            .enumerate()
            .map(|(position, &byte)| self.code(byte).ok_or(Error::UnknownSymbol { position, byte }))
            .collect()
    }
}

/// Up to α codes held in one word, low positions first, `$`-padded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub word: u64,
    pub valid_len: usize,
    bits: u32,
}

impl Chunk {
    pub fn new(word: u64, valid_len: usize, layout: Layout) -> Self {
        Chunk { word, valid_len, bits: layout.bits }
    }

    #[inline]
    pub fn code(&self, p: usize) -> Code {
        ((self.word >> (p as u32 * self.bits)) & low_mask(self.bits)) as Code
    }

    pub fn codes(&self) -> Vec<Code> {
        (0..self.valid_len).map(|p| self.code(p)).collect()
    }
}

/// Smallest slot at which the two (padded) chunks differ.
///
/// The XOR of the words has its lowest set bit inside the first mismatching
/// code, since low bits hold low positions.
#[inline]
pub fn first_mismatch(a: &Chunk, b: &Chunk) -> Option<usize> {
    debug_assert_eq!(a.bits, b.bits);
    match a.word ^ b.word {
        0 => None,
        x => Some((x.trailing_zeros() / a.bits) as usize),
    }
}

/// Lexicographic order of the padded code sequences, with the first
/// mismatching slot when they differ.
#[inline]
pub fn chunk_compare(a: &Chunk, b: &Chunk) -> (Ordering, Option<usize>) {
    match first_mismatch(a, b) {
        None => (Ordering::Equal, None),
        Some(p) => (a.code(p).cmp(&b.code(p)), Some(p)),
    }
}

/// Shared read access to a packed code sequence.
pub trait Packed {
    fn words(&self) -> &[u64];
    fn layout(&self) -> Layout;
    /// Number of stored codes, including a terminator if the sequence has one.
    fn extent(&self) -> usize;

    /// Chunk of `len ≤ α` codes at position `i`, truncated at the end of the
    /// stored codes.
    #[inline]
    fn extract_chunk(&self, i: usize, len: usize) -> Chunk {
        let layout = self.layout();
        let len = len.min(layout.alpha()).min(self.extent().saturating_sub(i));
        Chunk::new(layout.extract(self.words(), i, len), len, layout)
    }

    #[inline]
    fn code_at(&self, i: usize) -> Code {
        let layout = self.layout();
        let alpha = layout.alpha();
        match self.words().get(i / alpha) {
            Some(&w) => layout.slot(w, i % alpha),
            None => TERMINATOR,
        }
    }
}

/// The indexed text: `n` codes followed by one terminator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedText {
    words: Vec<u64>,
    len: usize,
    alphabet: Alphabet,
}

impl PackedText {
    pub fn pack(raw: &[u8], alphabet: &Alphabet) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyText);
        }
        let codes = alphabet.encode(raw)?;
        let layout = alphabet.layout();
        let words = layout.pack_codes(codes.iter().copied().chain([TERMINATOR]), codes.len() + 1);
        Ok(PackedText { words, len: raw.len(), alphabet: alphabet.clone() })
    }

    /// Builds the alphabet and packs in one step.
    pub fn from_bytes(raw: &[u8]) -> Result<Self> {
        let alphabet = Alphabet::build(raw)?;
        Self::pack(raw, &alphabet)
    }

    /// Reassembles a text from stored words, checking the packing invariants.
    pub fn from_words(words: Vec<u64>, len: usize, alphabet: Alphabet) -> Result<Self> {
        let layout = alphabet.layout();
        if len == 0 || words.len() != layout.words_for(len + 1) {
            return Err(Error::Format("packed word count does not match text length".into()));
        }
        let text = PackedText { words, len, alphabet };
        let sigma = text.alphabet.sigma() as Code;
        if (0..len).any(|i| !(1..=sigma).contains(&text.code_at(i))) || text.code_at(len) != 0 {
            return Err(Error::Format("packed text holds an invalid code".into()));
        }
        let alpha = layout.alpha();
        let used = (len + 1) - (text.words.len() - 1) * alpha;
        if text.words.last().is_some_and(|&w| w & !layout.prefix_mask(used) != 0) {
            return Err(Error::Format("packed text has stray high bits".into()));
        }
        Ok(text)
    }

    /// Text length `n`, terminator excluded.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn char_at(&self, i: usize) -> Result<Code> {
        if i > self.len {
            return Err(Error::OutOfRange { position: i, len: self.len });
        }
        Ok(self.code_at(i))
    }

    pub fn codes(&self) -> Vec<Code> {
        (0..self.len).map(|i| self.code_at(i)).collect()
    }

    /// The original bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.alphabet.symbol(self.code_at(i)).expect("valid code")).collect()
    }
}

impl Packed for PackedText {
    #[inline]
    fn words(&self) -> &[u64] {
        &self.words
    }
    #[inline]
    fn layout(&self) -> Layout {
        self.alphabet.layout()
    }
    #[inline]
    fn extent(&self) -> usize {
        self.len + 1
    }
}

/// A query pattern packed with the text's layout. No terminator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedPattern {
    words: Vec<u64>,
    len: usize,
    layout: Layout,
}

impl PackedPattern {
    pub fn from_codes(codes: &[Code], layout: Layout) -> Self {
        PackedPattern { words: layout.pack_codes(codes.iter().copied(), codes.len()), len: codes.len(), layout }
    }

    pub fn encode(raw: &[u8], alphabet: &Alphabet) -> Result<Self> {
        Ok(Self::from_codes(&alphabet.encode(raw)?, alphabet.layout()))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl Packed for PackedPattern {
    #[inline]
    fn words(&self) -> &[u64] {
        &self.words
    }
    #[inline]
    fn layout(&self) -> Layout {
        self.layout
    }
    #[inline]
    fn extent(&self) -> usize {
        self.len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chunk_of(codes: &[Code], layout: Layout) -> Chunk {
        let w = layout.pack_codes(codes.iter().copied(), codes.len());
        Chunk::new(w.first().copied().unwrap_or(0), codes.len(), layout)
    }

    #[test]
    fn banana_alphabet() {
        let a = Alphabet::build(b"banana").unwrap();
        assert_eq!(a.sigma(), 3);
        assert_eq!((a.code(b'a'), a.code(b'b'), a.code(b'n')), (Some(1), Some(2), Some(3)));
        assert_eq!(a.bits_per_symbol(), 2);
        assert_eq!(a.chars_per_word(), 32);
    }

    #[test]
    fn unary_and_dna_alphabets() {
        let a = Alphabet::build(b"aaaa").unwrap();
        assert_eq!((a.sigma(), a.bits_per_symbol(), a.chars_per_word()), (1, 1, 64));
        let a = Alphabet::build(b"ACGTTGCA").unwrap();
        assert_eq!((a.sigma(), a.bits_per_symbol(), a.chars_per_word()), (4, 3, 21));
    }

    #[test]
    fn empty_text_rejected() {
        assert!(matches!(Alphabet::build(b""), Err(Error::EmptyText)));
    }

    #[test]
    fn pack_ab_low_bits() {
        let a = Alphabet::build(b"ab").unwrap();
        let t = PackedText::pack(b"ab", &a).unwrap();
        assert_eq!(t.words(), &[0b00_10_01]);
    }

    #[test]
    fn pack_rejects_unknown_byte() {
        let a = Alphabet::build(b"ab").unwrap();
        match PackedText::pack(b"abc", &a) {
            Err(Error::UnknownSymbol { position, byte }) => assert_eq!((position, byte), (2, b'c')),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn banana_char_at() {
        let t = PackedText::from_bytes(b"banana").unwrap();
        let codes: Vec<Code> = (0..=6).map(|i| t.char_at(i).unwrap()).collect();
        assert_eq!(codes, [2, 1, 3, 1, 3, 1, 0]);
        assert!(matches!(t.char_at(7), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn banana_chunks() {
        let t = PackedText::from_bytes(b"banana").unwrap();
        let c = t.extract_chunk(1, 3);
        assert_eq!((c.codes(), c.valid_len), (vec![1, 3, 1], 3));
        let c = t.extract_chunk(2, 0);
        assert_eq!((c.word, c.valid_len), (0, 0));
        let c = t.extract_chunk(4, 4);
        assert_eq!(c.valid_len, 3);
        assert_eq!([c.code(0), c.code(1), c.code(2), c.code(3)], [3, 1, 0, 0]);
    }

    #[test]
    fn straddling_chunk() {
        // σ = 4 gives α = 21, so position 19 straddles words 0 and 1.
        let raw: Vec<u8> = (0..60).map(|i| b"ACGT"[(i * 7 + i / 3) % 4]).collect();
        let t = PackedText::from_bytes(&raw).unwrap();
        let c = t.extract_chunk(19, 21);
        let expect: Vec<Code> = (19..40).map(|i| t.code_at(i)).collect();
        assert_eq!(c.codes(), expect);
    }

    #[test]
    fn mismatch_examples() {
        let l = Layout::for_sigma(3).unwrap();
        let a = chunk_of(&[1, 3, 1], l);
        assert_eq!(first_mismatch(&a, &a), None);
        assert_eq!(first_mismatch(&a, &chunk_of(&[1, 3, 2], l)), Some(2));
        assert_eq!(first_mismatch(&chunk_of(&[2], l), &chunk_of(&[1], l)), Some(0));
    }

    #[test]
    fn compare_examples() {
        let l = Layout::for_sigma(3).unwrap();
        let (o, p) = chunk_compare(&chunk_of(&[1], l), &chunk_of(&[1, 3], l));
        assert_eq!((o, p), (Ordering::Less, Some(1)));
        let (o, p) = chunk_compare(&chunk_of(&[3, 1], l), &chunk_of(&[2, 1], l));
        assert_eq!((o, p), (Ordering::Greater, Some(0)));
        assert_eq!(chunk_compare(&chunk_of(&[2, 2], l), &chunk_of(&[2, 2], l)).0, Ordering::Equal);
    }

    #[test]
    fn wide_alphabet_layout() {
        let raw: Vec<u8> = (0..=255).collect();
        let a = Alphabet::build(&raw).unwrap();
        assert_eq!((a.sigma(), a.bits_per_symbol(), a.chars_per_word()), (256, 9, 7));
        let t = PackedText::pack(&raw, &a).unwrap();
        assert_eq!(t.to_bytes(), raw);
    }

    #[test]
    fn from_words_validates() {
        let t = PackedText::from_bytes(b"banana").unwrap();
        let ok = PackedText::from_words(t.words().to_vec(), 6, t.alphabet().clone());
        assert_eq!(ok.unwrap(), t);
        let mut bad = t.words().to_vec();
        bad[0] |= 1 << 63;
        assert!(PackedText::from_words(bad, 6, t.alphabet().clone()).is_err());
    }

    #[test]
    fn key_order_matches_padding() {
        let l = Layout::for_sigma(2).unwrap();
        let k1 = l.key_from_chunk(chunk_of(&[1], l).word);
        let k11 = l.key_from_chunk(chunk_of(&[1, 1], l).word);
        let k2 = l.key_from_chunk(chunk_of(&[2], l).word);
        assert!(k1 < k11 && k11 < k2);
        assert_eq!(l.key_from_chunk(0), 0);
    }
}
