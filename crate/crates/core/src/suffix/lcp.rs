//! LCP array construction and constant-time range minimum over it.

use crate::packed::Code;

/// Kasai et al.: `lcp[r]` is the common prefix length of suffixes `sa[r-1]`
/// and `sa[r]`; `lcp[0] = 0`.
pub fn kasai(codes: &[Code], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = codes.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && codes[i + h] == codes[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

const BLOCK: usize = 64;

/// Range minimum over a `u32` array in O(n) words.
///
/// Each position stores a 64-bit mask of the in-block minimum stack; a sparse
/// table covers the block minima.
#[derive(Clone, Debug)]
pub struct Rmq {
    values: Vec<u32>,
    stack_masks: Vec<u64>,
    sparse: Vec<Vec<u32>>,
}

impl Rmq {
    pub fn new(values: Vec<u32>) -> Self {
        let n = values.len();
        let mut stack_masks = vec![0u64; n];
        let mut block_min = Vec::with_capacity(n.div_ceil(BLOCK));
        for (b, block) in values.chunks(BLOCK).enumerate() {
            let base = b * BLOCK;
            let mut st = 0u64;
            for (j, &v) in block.iter().enumerate() {
                while st != 0 {
                    let top = 63 - st.leading_zeros() as usize;
                    if block[top] >= v {
                        st &= !(1u64 << top);
                    } else {
                        break;
                    }
                }
                st |= 1u64 << j;
                stack_masks[base + j] = st;
            }
            block_min.push(*block.iter().min().expect("nonempty block"));
        }

        let mut sparse = vec![block_min];
        let mut k = 1;
        while 1usize << k <= sparse[0].len() {
            let prev = &sparse[k - 1];
            let half = 1usize << (k - 1);
            let len = sparse[0].len() + 1 - (1 << k);
            let level: Vec<u32> = (0..len).map(|i| prev[i].min(prev[i + half])).collect();
            sparse.push(level);
            k += 1;
        }
        Rmq { values, stack_masks, sparse }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    fn in_block(&self, l: usize, r: usize) -> u32 {
        let base = l - l % BLOCK;
        let m = self.stack_masks[r] & (u64::MAX << (l - base));
        self.values[base + m.trailing_zeros() as usize]
    }

    #[inline]
    fn blocks(&self, bl: usize, br: usize) -> u32 {
        let k = (usize::BITS - 1 - (br - bl + 1).leading_zeros()) as usize;
        let level = &self.sparse[k];
        level[bl].min(level[br + 1 - (1 << k)])
    }

    /// Minimum of `values[l..=r]`.
    #[inline]
    pub fn min(&self, l: usize, r: usize) -> u32 {
        debug_assert!(l <= r && r < self.values.len());
        let (bl, br) = (l / BLOCK, r / BLOCK);
        if bl == br {
            return self.in_block(l, r);
        }
        let mut m = self.in_block(l, bl * BLOCK + BLOCK - 1).min(self.in_block(br * BLOCK, r));
        if bl + 1 < br {
            m = m.min(self.blocks(bl + 1, br - 1));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rmq_matches_scan() {
        let mut x = 12345u64;
        for n in [1usize, 2, 63, 64, 65, 127, 128, 129, 500, 1000] {
            let values: Vec<u32> = (0..n)
                .map(|_| {
                    x ^= x << 13;
                    x ^= x >> 7;
                    x ^= x << 17;
                    (x % 20) as u32
                })
                .collect();
            let rmq = Rmq::new(values.clone());
            for l in 0..n {
                for r in l..n.min(l + 300) {
                    assert_eq!(rmq.min(l, r), *values[l..=r].iter().min().unwrap(), "n={n} [{l},{r}]");
                }
            }
            if n > 300 {
                assert_eq!(rmq.min(0, n - 1), *values.iter().min().unwrap());
            }
        }
    }

    #[test]
    fn kasai_aaaa() {
        let codes = [1, 1, 1, 1];
        let sa = [3, 2, 1, 0];
        let rank = [3, 2, 1, 0];
        assert_eq!(kasai(&codes, &sa, &rank), vec![0, 1, 2, 3]);
    }
}
