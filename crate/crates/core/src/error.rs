use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty text")]
    EmptyText,
    #[error("byte 0x{byte:02x} at position {position} is not in the alphabet")]
    UnknownSymbol { position: usize, byte: u8 },
    #[error("position {position} out of range (length {len})")]
    OutOfRange { position: usize, len: usize },
    #[error("alphabet of {sigma} symbols does not fit a {word_bits}-bit word")]
    AlphabetTooLarge { sigma: usize, word_bits: u32 },
    #[error("text of length {0} exceeds the supported maximum")]
    TextTooLong(usize),
    #[error("duplicate key {0:#x}")]
    DuplicateKey(u64),
    #[error("key of {len} codes exceeds the word capacity of {alpha}")]
    KeyTooLong { len: usize, alpha: usize },
    #[error("pattern length {len} outside the short-pattern range 1..={max}")]
    PatternLength { len: usize, max: usize },
    #[error("pattern alphabet does not match the text alphabet")]
    AlphabetMismatch,
    #[error("invalid index file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
