//! Fixed-width bit vectors with the shift-OR kernels used by the sumset code.

use serde::{Deserialize, Serialize};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    /// `self |= src << shift`, truncated to `self.len()` bits.
    pub fn or_shifted_up(&mut self, src: &BitVec, shift: usize) {
        if shift >= self.len {
            return;
        }
        let ws = shift / WORD;
        let bs = shift % WORD;
        let n = self.words.len();
        for i in (ws..n).rev() {
            let j = i - ws;
            let mut w = src.words.get(j).copied().unwrap_or(0) << bs;
            if bs != 0 && j > 0 {
                w |= src.words.get(j - 1).copied().unwrap_or(0) >> (WORD - bs);
            }
            self.words[i] |= w;
        }
        self.clear_tail();
    }

    /// `self |= src >> shift`.
    pub fn or_shifted_down(&mut self, src: &BitVec, shift: usize) {
        let ws = shift / WORD;
        let bs = shift % WORD;
        let m = src.words.len();
        for i in 0..self.words.len() {
            let j = i + ws;
            if j >= m {
                break;
            }
            let mut w = src.words[j] >> bs;
            if bs != 0 && j + 1 < m {
                w |= src.words[j + 1] << (WORD - bs);
            }
            self.words[i] |= w;
        }
        self.clear_tail();
    }

    /// `self |= rotate(src, shift)` where bit `i` of `src` lands on `(i + shift) mod len`.
    /// Both vectors must have the same length.
    pub fn or_rotated(&mut self, src: &BitVec, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        let n = self.len;
        if n == 0 {
            return;
        }
        let s = shift % n;
        self.or_shifted_up(src, s);
        if s != 0 {
            self.or_shifted_down(src, n - s);
        }
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_matches_naive() {
        for n in [1usize, 5, 63, 64, 65, 130] {
            let src = BitVec::from_indices(n, (0..n).filter(|i| i % 3 == 0 || i % 7 == 1));
            for s in 0..n {
                let mut dst = BitVec::zeros(n);
                dst.or_rotated(&src, s);
                let expect = BitVec::from_indices(n, src.iter_ones().map(|i| (i + s) % n));
                assert_eq!(dst, expect, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn iter_ones_roundtrip() {
        let idx = vec![0, 3, 64, 65, 127, 199];
        let v = BitVec::from_indices(200, idx.clone());
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), idx);
        assert_eq!(v.count_ones(), 6);
    }
}
