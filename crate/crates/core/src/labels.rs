//! Compact sets of time labels in `[1, lifetime]`.

use serde::{Deserialize, Serialize};

use crate::temporal_graph::Time;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    lifetime: Time,
    words: Vec<u64>,
    len: usize,
}

impl LabelSet {
    pub fn empty(lifetime: Time) -> Self {
        Self {
            lifetime,
            words: vec![0; lifetime as usize / 64 + 1],
            len: 0,
        }
    }

    /// All labels `1..=lifetime`.
    pub fn full(lifetime: Time) -> Self {
        let mut set = Self::empty(lifetime);
        set.insert_range(1, lifetime);
        set
    }

    pub fn lifetime(&self) -> Time {
        self.lifetime
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, t: Time) -> bool {
        if t == 0 || t > self.lifetime {
            return false;
        }
        self.words[t as usize / 64] >> (t % 64) & 1 == 1
    }

    pub fn insert(&mut self, t: Time) -> bool {
        if t == 0 || t > self.lifetime || self.contains(t) {
            return false;
        }
        self.words[t as usize / 64] |= 1 << (t % 64);
        self.len += 1;
        true
    }

    pub fn remove(&mut self, t: Time) -> bool {
        if !self.contains(t) {
            return false;
        }
        self.words[t as usize / 64] &= !(1 << (t % 64));
        self.len -= 1;
        true
    }

    pub fn insert_range(&mut self, lo: Time, hi: Time) {
        for t in lo.max(1)..=hi.min(self.lifetime) {
            self.insert(t);
        }
    }

    /// Removes every label in `lo..=hi`; returns how many were present.
    pub fn remove_range(&mut self, lo: Time, hi: Time) -> usize {
        let lo = lo.max(1);
        let hi = hi.min(self.lifetime);
        if lo > hi {
            return 0;
        }
        let mut removed = 0;
        let mut t = lo;
        while t <= hi {
            let word = t as usize / 64;
            let first = t % 64;
            let last = if (hi as usize / 64) == word { hi % 64 } else { 63 };
            let width = last - first + 1;
            let mask = if width == 64 {
                u64::MAX
            } else {
                ((1u64 << width) - 1) << first
            };
            removed += (self.words[word] & mask).count_ones() as usize;
            self.words[word] &= !mask;
            t = (word as Time + 1) * 64;
        }
        self.len -= removed;
        removed
    }

    /// Number of labels present in `lo..=hi`.
    pub fn count_range(&self, lo: Time, hi: Time) -> usize {
        (lo.max(1)..=hi.min(self.lifetime))
            .filter(|&t| self.contains(t))
            .count()
    }

    pub fn first(&self) -> Option<Time> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = Time> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros();
                bits &= bits - 1;
                Some(w as Time * 64 + tz)
            })
        })
    }
}
