//! Dense bitsets for the exhaustive subset checkers.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { words: vec![0; len.div_ceil(64)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits::zeros(len);
        for k in 0..len {
            b.insert(k);
        }
        b
    }

    pub fn insert(&mut self, k: usize) {
        self.words[k / 64] |= 1 << (k % 64);
    }

    pub fn contains(&self, k: usize) -> bool {
        self.words.get(k / 64).is_some_and(|w| w >> (k % 64) & 1 == 1)
    }

    pub fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// `self ∩ other` into `out` (all three the same width).
    pub fn and_into(&self, other: &Bits, out: &mut Bits) {
        for ((o, a), b) in out.words.iter_mut().zip(&self.words).zip(&other.words) {
            *o = a & b;
        }
    }

    pub fn intersects(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let items: Vec<usize> = iter.into_iter().collect();
        let mut b = Bits::zeros(items.iter().max().map_or(0, |m| m + 1));
        for k in items {
            b.insert(k);
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = Bits::zeros(130);
        a.insert(3);
        a.insert(129);
        let mut b = Bits::zeros(130);
        b.insert(129);
        assert!(a.intersects(&b));
        let mut c = Bits::zeros(130);
        a.and_into(&b, &mut c);
        assert_eq!(c.first(), Some(129));
        assert_eq!(c.count(), 1);
        a.and_assign(&Bits::zeros(130));
        assert!(a.is_empty());
        assert_eq!(Bits::ones(70).count(), 70);
        assert!(!Bits::ones(70).contains(70));
    }
}
