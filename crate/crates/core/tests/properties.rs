use pkidx::oracle::NaiveIndex;
use pkidx::{BuildOptions, Index, IndexFile, QueryOptions};
use proptest::prelude::*;

fn text_strategy() -> impl Strategy<Value = Vec<u8>> {
    (1u8..=6).prop_flat_map(|sigma| {
        prop::collection::vec(0..sigma, 1..400).prop_map(|v| v.into_iter().map(|c| b'a' + c).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn queries_match_oracle(
        text in text_strategy(),
        t in prop::option::of(2usize..10),
        picks in prop::collection::vec((any::<prop::sample::Index>(), 1usize..80, any::<bool>()), 1..40),
        extras in prop::collection::vec(prop::collection::vec(b'a'..=b'h', 0..12), 0..10),
    ) {
        let idx = Index::build_with(&text, &BuildOptions { force_threshold: t }).unwrap();
        let naive = NaiveIndex::new(&text);
        let mut patterns = extras;
        for (start, len, flip) in picks {
            let s = start.index(text.len());
            let mut p = text[s..(s + len).min(text.len())].to_vec();
            if flip {
                let last = p.len() - 1;
                p[last] = if p[last] == b'a' { b'b' } else { b'a' };
            }
            patterns.push(p);
        }
        for p in &patterns {
            for force_long in [false, true] {
                let (a, trace) = idx.answer_traced(p, &QueryOptions { force_long, check_invariants: true });
                let mut got = idx.positions(&a);
                got.sort_unstable();
                prop_assert_eq!(got, naive.locate(p));
                prop_assert_eq!(idx.predecessor_of(&a), naive.predecessor(p));
                prop_assert_eq!(trace.extra_descents, 0);
            }
        }
    }

    #[test]
    fn file_round_trip(text in text_strategy(), t in 2usize..6) {
        let idx = Index::build_with(&text, &BuildOptions { force_threshold: Some(t) }).unwrap();
        let bytes = IndexFile::new(idx, Vec::new()).to_bytes();
        let again = IndexFile::from_bytes(&bytes).unwrap();
        prop_assert_eq!(again.to_bytes(), bytes);
        for len in 1..=text.len().min(20) {
            let p = &text[text.len() - len..];
            prop_assert_eq!(again.index.count(p), NaiveIndex::new(&text).count(p));
        }
    }
}
