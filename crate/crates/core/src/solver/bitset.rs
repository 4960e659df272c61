//! Fixed-width bitsets over examinee types.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeSet {
    words: Vec<u64>,
    len: usize,
}

impl TypeSet {
    pub fn empty(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for t in 0..len {
            s.insert(t);
        }
        s
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(len);
        for t in 0..len {
            if f(t) {
                s.insert(t);
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, t: usize) {
        self.words[t / 64] |= 1 << (t % 64);
    }

    pub fn contains(&self, t: usize) -> bool {
        self.words[t / 64] >> (t % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// `self |= a & b`
    pub fn or_and(&mut self, a: &TypeSet, b: &TypeSet) {
        for ((w, x), y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *w |= x & y;
        }
    }

    /// `self |= a & !b`
    pub fn or_and_not(&mut self, a: &TypeSet, b: &TypeSet) {
        for ((w, x), y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *w |= x & !y;
        }
    }

    pub fn or(&mut self, a: &TypeSet) {
        for (w, x) in self.words.iter_mut().zip(&a.words) {
            *w |= x;
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }

    /// `Σ weights[t]` over members.
    pub fn weight(&self, weights: &[u64]) -> u64 {
        self.ones().map(|t| weights[t]).sum()
    }

    /// `Σ weights[t]` over members of `self ∩ other`.
    pub fn weight_and(&self, other: &TypeSet, weights: &[u64]) -> u64 {
        let mut sum = 0;
        for (k, (x, y)) in self.words.iter().zip(&other.words).enumerate() {
            let mut w = x & y;
            while w != 0 {
                sum += weights[k * 64 + w.trailing_zeros() as usize];
                w &= w - 1;
            }
        }
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ops() {
        let a = TypeSet::from_fn(130, |t| t % 3 == 0);
        let b = TypeSet::from_fn(130, |t| t % 2 == 0);
        assert_eq!(a.count(), 44);
        let mut c = TypeSet::empty(130);
        c.or_and(&a, &b);
        assert_eq!(c.ones().collect::<Vec<_>>(), (0..130).filter(|t| t % 6 == 0).collect::<Vec<_>>());
        let mut d = TypeSet::empty(130);
        d.or_and_not(&a, &b);
        assert!(d.ones().all(|t| t % 3 == 0 && t % 2 == 1));
        let w: Vec<u64> = (0..130).collect();
        assert_eq!(a.weight_and(&b, &w), (0..130).filter(|t| t % 6 == 0).sum::<u64>());
        assert_eq!(TypeSet::full(130).count(), 130);
        assert!(TypeSet::empty(0).none());
    }
}
