//! Bit-packed `±1` vectors. A set bit encodes `-1`.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedSigns {
    len: usize,
    words: Vec<u64>,
}

impl PackedSigns {
    /// All-`+1` vector.
    pub fn new(len: usize) -> Self {
        PackedSigns { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_fn(len: usize, mut negative: impl FnMut(usize) -> bool) -> Self {
        let mut v = PackedSigns::new(len);
        for (w, word) in v.words.iter_mut().enumerate() {
            let base = w * 64;
            let top = (len - base).min(64);
            let mut acc = 0u64;
            for b in 0..top {
                acc |= (negative(base + b) as u64) << b;
            }
            *word = acc;
        }
        v
    }

    /// Build from raw words; bits beyond `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(len.div_ceil(64), 0);
        if len % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        PackedSigns { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> i8 {
        debug_assert!(i < self.len);
        if self.words[i >> 6] >> (i & 63) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn set(&mut self, i: usize, negative: bool) {
        let mask = 1u64 << (i & 63);
        if negative {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    /// Inner product of two `±1` vectors of equal length.
    pub fn dot(&self, other: &PackedSigns) -> i64 {
        debug_assert_eq!(self.len, other.len);
        let differ: u32 =
            self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones()).sum();
        self.len as i64 - 2 * differ as i64
    }

    /// Entrywise negation.
    pub fn negated(&self) -> PackedSigns {
        PackedSigns::from_words(self.len, self.words.iter().map(|w| !w).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}
