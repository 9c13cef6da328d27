//! Full-text index over bit-packed text.
//!
//! An [`Index`] answers Count, Locate and lexicographic Predecessor for any
//! pattern. Short patterns go through a direct table; long ones descend a
//! tree of hashed or path-compressed micro trees over the heavy part of the
//! suffix tree and finish with a word-parallel suffix array search.
//!
//! ```
//! use pkidx::Index;
//! let idx = Index::build(b"banana").unwrap();
//! assert_eq!(idx.count(b"ana"), 2);
//! assert_eq!(idx.locate(b"ana"), vec![3, 1]);
//! assert_eq!(idx.predecessor(b"ana"), Some(5));
//! ```

pub mod containers;
pub mod corpus;
pub mod error;
pub mod heavy;
pub mod index;
pub mod io;
pub mod oracle;
pub mod packed;
pub mod query;
pub mod search;
pub mod short_table;
pub mod suffix;
pub mod verify;

pub use corpus::{Corpus, Record};
pub use error::{Error, Result};
pub use index::{BuildOptions, Index};
pub use io::IndexFile;
pub use query::{Answer, QueryOptions, QueryTrace, Route};
