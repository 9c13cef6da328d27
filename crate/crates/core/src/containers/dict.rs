//! Static dictionary over word keys with two-level perfect hashing.
//!
//! Both levels use multiply-shift hashing. Multipliers are drawn from a
//! fixed-seed generator and tried in order, so the same key set always
//! yields the same tables.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const EMPTY: u32 = u32::MAX;
const SEED: u64 = 0x5eed_d1c7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Bucket {
    mult: u64,
    bits: u32,
    offset: u32,
}

/// Static map from `u64` keys to payloads with constant-time lookups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetDictionary<V> {
    keys: Vec<u64>,
    values: Vec<V>,
    top_mult: u64,
    top_bits: u32,
    buckets: Vec<Bucket>,
    slots: Vec<u32>,
}

#[inline]
fn hash(mult: u64, key: u64, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        (mult.wrapping_mul(key) >> (64 - bits)) as usize
    }
}

fn bits_for(size: usize) -> u32 {
    size.next_power_of_two().trailing_zeros()
}

struct Multipliers(ChaCha8Rng);

impl Multipliers {
    fn new() -> Self {
        Multipliers(ChaCha8Rng::seed_from_u64(SEED))
    }

    fn next(&mut self) -> u64 {
        self.0.next_u64() | 1
    }
}

impl<V: Copy> DetDictionary<V> {
    /// Builds from `(key, value)` pairs in any order. Keys must be distinct.
    pub fn build(pairs: impl IntoIterator<Item = (u64, V)>) -> Result<Self> {
        let mut pairs: Vec<(u64, V)> = pairs.into_iter().collect();
        pairs.sort_unstable_by_key(|&(k, _)| k);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateKey(w[0].0));
        }
        let (keys, values): (Vec<u64>, Vec<V>) = pairs.into_iter().unzip();
        let k = keys.len();
        if k == 0 {
            return Ok(DetDictionary {
                keys,
                values,
                top_mult: 1,
                top_bits: 0,
                buckets: Vec::new(),
                slots: Vec::new(),
            });
        }

        let mut rng = Multipliers::new();
        let top_bits = bits_for(k);
        let top_size = 1usize << top_bits;
        let mut sizes = vec![0usize; top_size];
        // Accept a multiplier once the sum of squared bucket sizes is at most
        // `limit`; relax the limit if a key set resists for too long.
        let mut limit = 4 * k;
        let mut tries = 0;
        let top_mult = loop {
            let mult = rng.next();
            sizes.fill(0);
            for &key in &keys {
                sizes[hash(mult, key, top_bits)] += 1;
            }
            if sizes.iter().map(|&s| s * s).sum::<usize>() <= limit {
                break mult;
            }
            tries += 1;
            if tries % 64 == 0 {
                limit *= 2;
            }
        };

        let mut members: Vec<Vec<u32>> = vec![Vec::new(); top_size];
        for (i, &key) in keys.iter().enumerate() {
            members[hash(top_mult, key, top_bits)].push(i as u32);
        }
        let mut buckets = vec![Bucket::default(); top_size];
        let mut slots = Vec::new();
        let mut table = Vec::new();
        for (b, idx) in members.iter().enumerate() {
            if idx.is_empty() {
                continue;
            }
            let bits = if idx.len() == 1 { 0 } else { bits_for(2 * idx.len() * idx.len()) };
            let mult = loop {
                let mult = if bits == 0 { 1 } else { rng.next() };
                table.clear();
                table.resize(1usize << bits, EMPTY);
                let clean = idx.iter().all(|&i| {
                    let s = &mut table[hash(mult, keys[i as usize], bits)];
                    let free = *s == EMPTY;
                    *s = i;
                    free
                });
                if clean {
                    break mult;
                }
            };
            buckets[b] = Bucket { mult, bits, offset: slots.len() as u32 };
            slots.extend_from_slice(&table);
        }
        Ok(DetDictionary { keys, values, top_mult, top_bits, buckets, slots })
    }

    #[inline]
    pub fn get(&self, key: u64) -> Option<V> {
        let b = self.buckets.get(hash(self.top_mult, key, self.top_bits))?;
        let i = *self.slots.get(b.offset as usize + hash(b.mult, key, b.bits))?;
        (i != EMPTY && self.keys[i as usize] == key).then(|| self.values[i as usize])
    }

    pub fn contains_key(&self, key: u64) -> bool {
        self.get(key).is_some()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Entries in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, V)> + '_ {
        self.keys.iter().copied().zip(self.values.iter().copied())
    }

    /// Number of second-level slots, a measure of space use.
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    #[test]
    fn empty() {
        let d = DetDictionary::<u32>::build([]).unwrap();
        assert_eq!(d.get(0), None);
        assert_eq!(d.get(u64::MAX), None);
    }

    #[test]
    fn two_keys() {
        let d = DetDictionary::build([(5, 'a'), (9, 'b')]).unwrap();
        assert_eq!(d.get(9), Some('b'));
        assert_eq!(d.get(5), Some('a'));
        assert_eq!(d.get(7), None);
    }

    #[test]
    fn duplicate_rejected() {
        assert!(matches!(DetDictionary::build([(3, 1), (3, 2)]), Err(Error::DuplicateKey(3))));
    }

    #[test]
    fn random_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut oracle = BTreeMap::new();
        while oracle.len() < 10_000 {
            oracle.insert(rng.gen::<u64>(), rng.gen::<u32>());
        }
        let d = DetDictionary::build(oracle.iter().map(|(&k, &v)| (k, v))).unwrap();
        for (&k, &v) in &oracle {
            assert_eq!(d.get(k), Some(v));
        }
        let mut absent = 0;
        while absent < 10_000 {
            let k = rng.gen::<u64>();
            if !oracle.contains_key(&k) {
                assert_eq!(d.get(k), None);
                absent += 1;
            }
        }
        assert!(d.slot_count() <= 8 * 10_000 * 2);
    }

    #[test]
    fn dense_and_structured_keys() {
        for keys in [
            (0..5000u64).collect::<Vec<_>>(),
            (0..5000u64).map(|i| i << 40).collect(),
            (0..5000u64).map(|i| u64::MAX - i).collect(),
        ] {
            let d = DetDictionary::build(keys.iter().map(|&k| (k, k))).unwrap();
            assert!(keys.iter().all(|&k| d.get(k) == Some(k)));
            assert_eq!(d.get(5000 << 41 | 1), None);
        }
    }

    #[test]
    fn order_independent() {
        let mut pairs: Vec<(u64, u32)> = (0..1000).map(|i| (i * 7919 + 3, i as u32)).collect();
        let a = DetDictionary::build(pairs.clone()).unwrap();
        pairs.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(1));
        let b = DetDictionary::build(pairs).unwrap();
        assert_eq!(a, b);
    }
}
