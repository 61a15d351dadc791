//! Ground sets, bit-vector subsets and deterministic subset enumeration.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

/// Largest set whose power set may be enumerated.
pub const ENUMERATION_CAP: usize = 24;

/// A finite universe of labeled elements, indexed `0..n`.
#[derive(Clone)]
pub struct GroundSet {
    labels: Arc<[String]>,
    index: Arc<HashMap<String, usize>>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<GroundSet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(GroundSet {
            labels: labels.into(),
            index: Arc::new(index),
        })
    }

    /// Ground set labeled `start, start+1, ..., start+n-1`.
    pub fn numbered(start: usize, n: usize) -> GroundSet {
        GroundSet::new((start..start + n).map(|i| i.to_string()))
            .expect("numeric labels are unique")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn empty_subset(&self) -> Subset {
        Subset::empty(self.len())
    }

    pub fn full_subset(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut s = self.empty_subset();
        for label in labels {
            s.insert(self.index_of(label.as_ref().trim())?);
        }
        Ok(s)
    }

    /// Parse a comma-separated label list such as `a1,a2`. The empty string is ∅.
    pub fn parse_subset(&self, text: &str) -> Result<Subset> {
        let labels: Vec<&str> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        self.subset(&labels)
    }

    pub fn check(&self, s: &Subset) -> Result<()> {
        if s.universe_len() == self.len() {
            Ok(())
        } else {
            Err(Error::GroundMismatch {
                expected: self.len(),
                found: s.universe_len(),
            })
        }
    }

    pub fn member_labels(&self, s: &Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Comma-joined labels, the inverse of [`GroundSet::parse_subset`].
    pub fn join(&self, s: &Subset) -> String {
        self.member_labels(s).join(",")
    }

    /// `{a,b}` rendering for reports.
    pub fn display(&self, s: &Subset) -> String {
        format!("{{{}}}", self.join(s))
    }
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &GroundSet) -> bool {
        self.labels == other.labels
    }
}

impl Eq for GroundSet {}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("GroundSet").field(&self.labels).finish()
    }
}

/// A subset of a ground set of `n` elements, stored as a bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    n: usize,
    words: SmallVec<[u64; 1]>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Subset {
    pub fn empty(n: usize) -> Subset {
        Subset {
            n,
            words: smallvec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Subset {
        let mut s = Subset::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    /// Panics if an index is `>= n`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Subset {
        let mut s = Subset::empty(n);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Subset of a ground set with at most 64 elements from its membership mask.
    pub fn from_mask(n: usize, mask: u64) -> Subset {
        assert!(n <= 64, "mask subsets need n <= 64");
        assert!(n == 64 || mask >> n == 0, "mask has bits beyond n");
        let mut s = Subset::empty(n);
        s.words[0] = mask;
        s
    }

    /// Membership mask when `n <= 64`.
    pub fn mask(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.n,
            "element {i} outside ground set of size {}",
            self.n
        );
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.n {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn with(&self, i: usize) -> Subset {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    fn zip(&self, other: &Subset, op: impl Fn(u64, u64) -> u64) -> Subset {
        debug_assert_eq!(self.n, other.n, "subsets over different ground sets");
        Subset {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Subset {
        Subset::full(self.n).difference(self)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & b == 0)
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the subsets of a fixed member list, by cardinality and then
/// lexicographically on member indices.
pub struct SubsetIter {
    n: usize,
    members: Vec<usize>,
    max_card: usize,
    k: usize,
    // positions into `members` for the current combination; None once exhausted
    combo: Option<Vec<usize>>,
}

impl SubsetIter {
    fn new(n: usize, members: Vec<usize>, max_card: Option<usize>) -> SubsetIter {
        let max_card = max_card.unwrap_or(members.len()).min(members.len());
        SubsetIter {
            n,
            members,
            max_card,
            k: 0,
            combo: Some(Vec::new()),
        }
    }

    fn advance(&mut self) {
        let m = self.members.len();
        let Some(combo) = self.combo.as_mut() else {
            return;
        };
        let k = combo.len();
        // rightmost position that can still move right
        let mut i = k;
        while i > 0 {
            i -= 1;
            if combo[i] < m - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                return;
            }
        }
        self.k += 1;
        self.combo = (self.k <= self.max_card).then(|| (0..self.k).collect());
    }
}

impl Iterator for SubsetIter {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let combo = self.combo.as_ref()?;
        let s = Subset::from_indices(self.n, combo.iter().map(|&p| self.members[p]));
        self.advance();
        Some(s)
    }
}

/// Every subset of the ground set (up to `max_cardinality`), each exactly once.
pub fn subsets_of(ground: &GroundSet, max_cardinality: Option<usize>) -> Result<SubsetIter> {
    subsets_within(&ground.full_subset(), max_cardinality)
}

/// Every subset of `base` (up to `max_cardinality`) in the same deterministic order.
pub fn subsets_within(base: &Subset, max_cardinality: Option<usize>) -> Result<SubsetIter> {
    let size = base.len();
    if size > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            size,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(SubsetIter::new(
        base.universe_len(),
        base.to_vec(),
        max_cardinality,
    ))
}

/// All ordered pairs `(A, B)` of disjoint subsets, `A` in enumeration order and
/// then `B` over subsets of the complement of `A`.
pub fn disjoint_pairs(ground: &GroundSet) -> Result<Vec<(Subset, Subset)>> {
    let mut pairs = Vec::new();
    for a in subsets_of(ground, None)? {
        for b in subsets_within(&a.complement(), None)? {
            pairs.push((a.clone(), b));
        }
    }
    Ok(pairs)
}
