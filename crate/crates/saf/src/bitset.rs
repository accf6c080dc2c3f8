//! Fixed-universe bit sets used internally for argument sets.

/// A set of argument indices over a framework-sized universe.
///
/// All sets belonging to the same framework share the same word width, so
/// the binary operations below assume equal lengths.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(universe: usize) -> Self {
        BitSet {
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, iter: I) -> Self {
        let mut set = BitSet::new(universe);
        for i in iter {
            set.insert(i);
        }
        set
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        match self.words.get(i / 64) {
            Some(w) => w & (1u64 << (i % 64)) != 0,
            None => false,
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(w, o)| w & o != 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.words.len(), other.words.len());
        self.words.iter().zip(&other.words).all(|(w, o)| w & !o == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Low word of the set, valid whenever the universe has at most 64 members.
    pub fn as_u64(&self) -> u64 {
        debug_assert!(self.words.iter().skip(1).all(|w| *w == 0));
        self.words.first().copied().unwrap_or(0)
    }

    /// Ascending iterator over the member indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, w)| {
            let base = wi * 64;
            let mut word = *w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(base + bit)
                }
            })
        })
    }
}

impl std::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = BitSet::new(130);
        a.insert(0);
        a.insert(65);
        a.insert(129);
        assert!(a.contains(65));
        assert!(!a.contains(64));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 65, 129]);

        let b = BitSet::from_indices(130, [65]);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        assert!(a.intersects(&b));
        assert!(!BitSet::new(130).intersects(&a));

        let mut c = BitSet::new(130);
        c.union_with(&a);
        assert_eq!(c, a);
    }

    #[test]
    fn empty_universe() {
        let s = BitSet::new(0);
        assert!(s.is_empty());
        assert_eq!(s.iter().count(), 0);
        assert_eq!(s.as_u64(), 0);
    }
}
