//! Fixed-capacity bit sets over the points of a space.

use std::cmp::Ordering;
use std::fmt;

/// Largest universe a [`Subset`] can describe.
pub const MAX_POINTS: usize = 256;

const WORDS: usize = MAX_POINTS / 64;

/// A set of point ids, stored as a bit vector of a fixed width.
///
/// Sets double as conjunctions, so union is the meet of two sets and
/// inclusion is the usual entailment direction. All operations are pure
/// word-level bit operations and the type is `Copy`.
///
/// The total order is size first, then lexicographic on the ascending member
/// lists, which is the canonical order used for every report.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    width: u16,
    words: [u64; WORDS],
}

impl Subset {
    /// The empty set over `width` points.
    pub fn empty(width: usize) -> Self {
        assert!(width <= MAX_POINTS, "subset width {width} exceeds {MAX_POINTS}");
        Subset {
            width: width as u16,
            words: [0; WORDS],
        }
    }

    /// Every point of the universe.
    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for i in 0..width {
            s.words[i / 64] |= 1 << (i % 64);
        }
        s
    }

    pub fn singleton(width: usize, id: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(id);
        s
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(width: usize, ids: I) -> Self {
        let mut s = Self::empty(width);
        for id in ids {
            s.insert(id);
        }
        s
    }

    /// Builds a set from the low `width` bits of `mask`. Only valid for
    /// widths up to 64.
    pub fn from_mask(width: usize, mask: u64) -> Self {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || mask >> width == 0);
        let mut s = Self::empty(width);
        s.words[0] = mask;
        s
    }

    /// The low word, for widths up to 64.
    pub fn to_mask(&self) -> Option<u64> {
        (self.width <= 64).then_some(self.words[0])
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, id: usize) -> bool {
        id < self.width() && self.words[id / 64] & (1 << (id % 64)) != 0
    }

    pub fn insert(&mut self, id: usize) {
        assert!(id < self.width(), "point {id} outside width {}", self.width);
        self.words[id / 64] |= 1 << (id % 64);
    }

    pub fn remove(&mut self, id: usize) {
        if id < self.width() {
            self.words[id / 64] &= !(1 << (id % 64));
        }
    }

    pub fn with(mut self, id: usize) -> Self {
        self.insert(id);
        self
    }

    #[inline]
    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.width, other.width);
        let mut out = *self;
        for (w, o) in out.words.iter_mut().zip(other.words) {
            *w |= o;
        }
        out
    }

    #[inline]
    pub fn intersection(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.width, other.width);
        let mut out = *self;
        for (w, o) in out.words.iter_mut().zip(other.words) {
            *w &= o;
        }
        out
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.width, other.width);
        let mut out = *self;
        for (w, o) in out.words.iter_mut().zip(other.words) {
            *w &= !o;
        }
        out
    }

    pub fn complement(&self) -> Subset {
        Subset::full(self.width()).difference(self)
    }

    #[inline]
    pub fn is_subset_of(&self, other: &Subset) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset_of(&self, other: &Subset) -> bool {
        other.is_subset_of(self)
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.words.iter().zip(other.words.iter()).any(|(a, b)| a & b != 0)
    }

    /// Member ids in ascending order.
    pub fn iter(&self) -> Ids {
        Ids {
            words: self.words,
            word: 0,
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Ascending member ids of a [`Subset`].
pub struct Ids {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Ids {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

impl IntoIterator for &Subset {
    type Item = usize;
    type IntoIter = Ids;

    fn into_iter(self) -> Ids {
        self.iter()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| {
                // Equal sizes: the set owning the lowest differing id comes first.
                for (a, b) in self.words.iter().zip(other.words.iter()) {
                    let diff = a ^ b;
                    if diff != 0 {
                        let low = diff & diff.wrapping_neg();
                        return if a & low != 0 {
                            Ordering::Less
                        } else {
                            Ordering::Greater
                        };
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Every subset of a `width`-point universe with at most `max_size` members,
/// in canonical (size, then lexicographic) order.
pub fn subsets_canonical(width: usize, max_size: Option<usize>) -> impl Iterator<Item = Subset> {
    use itertools::Itertools;
    let top = max_size.map_or(width, |m| m.min(width));
    (0..=top).flat_map(move |k| (0..width).combinations(k).map(move |ids| Subset::from_ids(width, ids)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex_key(s: &Subset) -> (usize, Vec<usize>) {
        (s.len(), s.to_vec())
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let all: Vec<Subset> = subsets_canonical(4, None).collect();
        assert_eq!(all.len(), 16);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], Subset::empty(4));
        assert_eq!(all[5].to_vec(), vec![0, 1]);
        assert_eq!(all[6].to_vec(), vec![0, 2]);
        assert_eq!(all[8].to_vec(), vec![1, 2]);
    }

    #[test]
    fn bounded_enumeration() {
        assert_eq!(subsets_canonical(5, Some(1)).count(), 6);
        assert_eq!(subsets_canonical(5, Some(9)).count(), 32);
    }

    #[test]
    fn high_ids_span_words() {
        let s = Subset::from_ids(200, [3, 64, 130, 199]);
        assert_eq!(s.to_vec(), vec![3, 64, 130, 199]);
        assert_eq!(s.len(), 4);
        assert!(s.is_subset_of(&Subset::full(200)));
        assert_eq!(s.complement().len(), 196);
        assert_eq!(s.to_mask(), None);
    }

    fn arb_subset(width: usize) -> impl Strategy<Value = Subset> {
        proptest::collection::vec(0..width, 0..width).prop_map(move |ids| Subset::from_ids(width, ids))
    }

    proptest! {
        #[test]
        fn order_matches_member_list_order(a in arb_subset(130), b in arb_subset(130)) {
            prop_assert_eq!(a.cmp(&b), lex_key(&a).cmp(&lex_key(&b)));
        }

        #[test]
        fn union_and_intersection_agree_with_membership(a in arb_subset(70), b in arb_subset(70)) {
            let u = a.union(&b);
            let i = a.intersection(&b);
            for id in 0..70 {
                prop_assert_eq!(u.contains(id), a.contains(id) || b.contains(id));
                prop_assert_eq!(i.contains(id), a.contains(id) && b.contains(id));
            }
            prop_assert!(i.is_subset_of(&a) && a.is_subset_of(&u));
            prop_assert_eq!(a.intersects(&b), !i.is_empty());
        }
    }
}
