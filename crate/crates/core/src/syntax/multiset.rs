use std::fmt;

/// A finite multiset stored as a sorted list of `(element, multiplicity)`
/// pairs. Multiplicities are always positive, so equality and hashing are
/// structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset<T: Ord> {
    entries: Vec<(T, u32)>,
}

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset {
            entries: Vec::new(),
        }
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: T) -> Self {
        Multiset {
            entries: vec![(x, 1)],
        }
    }

    /// Total number of elements, counting multiplicity.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|(_, n)| *n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, x: &T) -> u32 {
        match self.entries.binary_search_by(|(y, _)| y.cmp(x)) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        self.count(x) > 0
    }

    pub fn insert(&mut self, x: T) {
        self.insert_n(x, 1);
    }

    pub fn insert_n(&mut self, x: T, n: u32) {
        if n == 0 {
            return;
        }
        match self.entries.binary_search_by(|(y, _)| y.cmp(&x)) {
            Ok(i) => self.entries[i].1 += n,
            Err(i) => self.entries.insert(i, (x, n)),
        }
    }

    pub fn with(&self, x: T) -> Self {
        let mut out = self.clone();
        out.insert(x);
        out
    }

    /// Removes one occurrence; returns false if `x` was absent.
    pub fn remove(&mut self, x: &T) -> bool {
        match self.entries.binary_search_by(|(y, _)| y.cmp(x)) {
            Ok(i) => {
                if self.entries[i].1 == 1 {
                    self.entries.remove(i);
                } else {
                    self.entries[i].1 -= 1;
                }
                true
            }
            Err(_) => false,
        }
    }

    pub fn without(&self, x: &T) -> Option<Self> {
        let mut out = self.clone();
        out.remove(x).then_some(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, n) = &self.entries[i];
            let (b, m) = &other.entries[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    entries.push((a.clone(), *n));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    entries.push((b.clone(), *m));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    entries.push((a.clone(), n + m));
                    i += 1;
                    j += 1;
                }
            }
        }
        entries.extend_from_slice(&self.entries[i..]);
        entries.extend_from_slice(&other.entries[j..]);
        Multiset { entries }
    }

    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        self.entries.iter().all(|(x, n)| other.count(x) >= *n)
    }

    /// `self - other`, or `None` when `other` is not contained in `self`.
    pub fn difference(&self, other: &Self) -> Option<Self> {
        if !other.is_submultiset_of(self) {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(x, n)| {
                let left = n - other.count(x);
                (left > 0).then(|| (x.clone(), left))
            })
            .collect();
        Some(Multiset { entries })
    }

    /// Distinct elements with their multiplicities.
    pub fn entries(&self) -> &[(T, u32)] {
        &self.entries
    }

    pub fn distinct(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(x, _)| x)
    }

    /// Every element, repeated according to its multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries
            .iter()
            .flat_map(|(x, n)| std::iter::repeat_n(x, *n as usize))
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.iter().cloned().collect()
    }

    /// All submultisets, each exactly once.
    pub fn submultisets(&self) -> Vec<Self> {
        let mut out = vec![Multiset::new()];
        for (x, n) in &self.entries {
            let mut next = Vec::with_capacity(out.len() * (*n as usize + 1));
            for base in &out {
                for k in 0..=*n {
                    let mut m = base.clone();
                    if k > 0 {
                        m.entries.push((x.clone(), k));
                    }
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }

    /// All ordered pairs `(left, right)` with `left ∪ right = self`.
    pub fn splits(&self) -> Vec<(Self, Self)> {
        self.submultisets()
            .into_iter()
            .map(|left| {
                let right = self.difference(&left).expect("submultiset");
                (left, right)
            })
            .collect()
    }

    /// All ordered distributions of `self` into `slots` parts.
    pub fn distributions(&self, slots: usize) -> Vec<Vec<Self>> {
        if slots == 0 {
            return if self.is_empty() { vec![vec![]] } else { vec![] };
        }
        if slots == 1 {
            return vec![vec![self.clone()]];
        }
        let mut out = Vec::new();
        for (first, rest) in self.splits() {
            for mut tail in rest.distributions(slots - 1) {
                tail.insert(0, first.clone());
                out.push(tail);
            }
        }
        out
    }

    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Multiset<U> {
        let mut out = Multiset::new();
        for (x, n) in &self.entries {
            out.insert_n(f(x), *n);
        }
        out
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut items: Vec<T> = iter.into_iter().collect();
        items.sort();
        let mut entries: Vec<(T, u32)> = Vec::new();
        for x in items {
            match entries.last_mut() {
                Some((y, n)) if *y == x => *n += 1,
                _ => entries.push((x, 1)),
            }
        }
        Multiset { entries }
    }
}

impl<T: Ord + Clone + fmt::Display> fmt::Display for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in self.iter() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl<T: Ord + Clone + fmt::Display> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(xs: &[u8]) -> Multiset<u8> {
        xs.iter().copied().collect()
    }

    #[test]
    fn order_free_equality() {
        assert_eq!(ms(&[1, 2, 1]), ms(&[2, 1, 1]));
        assert_ne!(ms(&[1, 2]), ms(&[1, 2, 2]));
    }

    #[test]
    fn difference_requires_containment() {
        assert_eq!(ms(&[1, 1, 2]).difference(&ms(&[1])), Some(ms(&[1, 2])));
        assert_eq!(ms(&[1, 2]).difference(&ms(&[1, 1])), None);
    }

    #[test]
    fn distributions_count() {
        // 3 distinct elements into 2 slots: 2^3 ways
        assert_eq!(ms(&[1, 2, 3]).distributions(2).len(), 8);
        // {1,1} into 2 slots: (0,2),(1,1),(2,0)
        assert_eq!(ms(&[1, 1]).distributions(2).len(), 3);
        assert_eq!(ms(&[]).distributions(0).len(), 1);
        assert!(ms(&[1]).distributions(0).is_empty());
    }

    proptest! {
        #[test]
        fn union_laws(a in prop::collection::vec(0u8..5, 0..6),
                      b in prop::collection::vec(0u8..5, 0..6),
                      c in prop::collection::vec(0u8..5, 0..6)) {
            let (a, b, c) = (ms(&a), ms(&b), ms(&c));
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
            prop_assert_eq!(a.union(&Multiset::new()), a.clone());
            prop_assert_eq!(a.union(&b).difference(&b), Some(a.clone()));
            prop_assert_eq!(a.union(&b).len(), a.len() + b.len());
        }

        #[test]
        fn splits_reassemble(a in prop::collection::vec(0u8..4, 0..6)) {
            let a = ms(&a);
            for (l, r) in a.splits() {
                prop_assert_eq!(l.union(&r), a.clone());
            }
        }
    }
}
