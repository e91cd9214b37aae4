//! Symmetric multi-indices, the dense coordinate layout built on them, and
//! set partitions of index positions.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{JetError, Result};

/// Canonical (nondecreasing) representative of a symmetric derivative index.
/// Entries are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// The empty index, labelling order-0 coordinates.
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Sorts the given 0-based entries.
    pub fn new(mut entries: Vec<usize>) -> Self {
        entries.sort_unstable();
        MultiIndex(entries)
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i])
    }

    pub fn pair(i: usize, j: usize) -> Self {
        Self::new(vec![i, j])
    }

    /// Validates 1-based entries against `1..=n` and returns the canonical
    /// 0-based index.
    pub fn from_one_based(raw: &[usize], n: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(raw.len());
        for &value in raw {
            if value == 0 || value > n {
                return Err(JetError::IndexOutOfRange { value, bound: n });
            }
            entries.push(value - 1);
        }
        Ok(Self::new(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// Number of derivatives, `|I|`.
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `I ∪ {i}`, kept canonical.
    pub fn with(&self, i: usize) -> Self {
        let pos = self.0.partition_point(|&e| e <= i);
        let mut entries = self.0.clone();
        entries.insert(pos, i);
        MultiIndex(entries)
    }

    /// The sub-index selected by `positions`.
    pub fn select(&self, positions: &[usize]) -> Self {
        Self::new(positions.iter().map(|&p| self.0[p]).collect())
    }
}

/// Graded order: shorter indices first, then lexicographic.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str(")")
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All nondecreasing length-`k` indices over `n` values, lexicographic.
pub fn enumerate_multiindices(n: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(binomial(n + k, k).max(1));
    if n == 0 {
        if k == 0 {
            out.push(MultiIndex::empty());
        }
        return out;
    }
    let mut current = vec![0usize; k];
    loop {
        out.push(MultiIndex(current.clone()));
        // rightmost entry that can still grow
        let Some(pos) = (0..k).rev().find(|&p| current[p] + 1 < n) else {
            return out;
        };
        let next = current[pos] + 1;
        for e in &mut current[pos..] {
            *e = next;
        }
    }
}

/// Dense layout of all canonical indices with `|I| <= order` over `n`
/// variables: grouped by order, lexicographic inside each order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub vars: usize,
    pub order: usize,
}

impl Layout {
    pub fn new(vars: usize, order: usize) -> Self {
        Layout { vars, order }
    }

    /// `C(vars + order, order)`.
    pub fn len(&self) -> usize {
        binomial(self.vars + self.order, self.order)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of the first index of order `k`.
    pub fn order_start(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            binomial(self.vars + k - 1, k - 1)
        }
    }

    /// Number of canonical indices of exactly order `k`.
    pub fn order_len(&self, k: usize) -> usize {
        binomial(self.vars + k - 1, k)
    }

    pub fn offset(&self, index: &MultiIndex) -> usize {
        let n = self.vars;
        let k = index.order();
        let mut rank = 0;
        let mut prev = 0;
        for (pos, &value) in index.entries().iter().enumerate() {
            let rem = k - pos - 1;
            for v in prev..value {
                rank += binomial(n - v + rem - 1, rem);
            }
            prev = value;
        }
        self.order_start(k) + rank
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        index.order() <= self.order && index.entries().iter().all(|&i| i < self.vars)
    }

    /// All indices in layout order.
    pub fn indices(&self) -> Vec<MultiIndex> {
        (0..=self.order)
            .flat_map(|k| enumerate_multiindices(self.vars, k))
            .collect()
    }
}

/// Partition of the positions `{0, …, size-1}` into unordered nonempty
/// blocks, stored with blocks sorted by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn from_growth(labels: &[usize], count: usize) -> Self {
        let mut blocks = vec![Vec::new(); count];
        for (pos, &label) in labels.iter().enumerate() {
            blocks[label].push(pos);
        }
        SetPartition { blocks }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (k, p) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Every partition of `{0, …, size-1}`, in lexicographic order of restricted
/// growth strings.
pub fn all_set_partitions(size: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if size == 0 {
        out.push(SetPartition { blocks: Vec::new() });
        return out;
    }
    let mut labels = vec![0usize; size];
    // prefix_max[i] = max(labels[..=i])
    let mut prefix_max = vec![0usize; size];
    loop {
        out.push(SetPartition::from_growth(&labels, prefix_max[size - 1] + 1));
        let Some(pos) = (1..size).rev().find(|&p| labels[p] <= prefix_max[p - 1]) else {
            return out;
        };
        labels[pos] += 1;
        prefix_max[pos] = prefix_max[pos - 1].max(labels[pos]);
        for p in pos + 1..size {
            labels[p] = 0;
            prefix_max[p] = prefix_max[pos];
        }
    }
}

/// Partitions of `{0, …, size-1}` into exactly `blocks` blocks.
pub fn set_partitions(size: usize, blocks: usize) -> Result<Vec<SetPartition>> {
    if blocks == 0 || blocks > size {
        return Err(JetError::PartitionArity { size, blocks });
    }
    Ok(all_set_partitions(size)
        .into_iter()
        .filter(|p| p.len() == blocks)
        .collect())
}

/// Number of invariant coordinates of the order-`r` Grassmann bundle:
/// `m·C(n+r, n) + n`.
pub fn grassmann_dim(n: usize, m: usize, r: usize) -> usize {
    m * binomial(n + r, n) + n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(raw: &[usize]) -> Vec<usize> {
        MultiIndex::from_one_based(raw, 9).unwrap().one_based()
    }

    #[test]
    fn canonicalize_sorts() {
        assert_eq!(idx(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(idx(&[]), Vec::<usize>::new());
        assert_eq!(idx(&[2, 2, 1]), vec![1, 2, 2]);
        let once = MultiIndex::from_one_based(&[3, 1, 2], 3).unwrap();
        assert_eq!(MultiIndex::new(once.entries().to_vec()), once);
    }

    #[test]
    fn canonicalize_rejects_out_of_range() {
        assert_eq!(
            MultiIndex::from_one_based(&[1, 4], 3),
            Err(JetError::IndexOutOfRange { value: 4, bound: 3 })
        );
        assert!(MultiIndex::from_one_based(&[0], 3).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let got: Vec<_> = enumerate_multiindices(2, 2)
            .iter()
            .map(|i| i.one_based())
            .collect();
        assert_eq!(got, vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
        let got: Vec<_> = enumerate_multiindices(1, 3)
            .iter()
            .map(|i| i.one_based())
            .collect();
        assert_eq!(got, vec![vec![1, 1, 1]]);
        assert_eq!(enumerate_multiindices(3, 0), vec![MultiIndex::empty()]);
    }

    #[test]
    fn enumerate_counts() {
        for n in 1..5 {
            for k in 0..6 {
                let list = enumerate_multiindices(n, k);
                assert_eq!(list.len(), binomial(n + k - 1, k), "n={n} k={k}");
                assert!(list.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn layout_offsets_match_enumeration() {
        for n in 1..5 {
            for r in 0..5 {
                let layout = Layout::new(n, r);
                let all = layout.indices();
                assert_eq!(all.len(), layout.len());
                for (pos, index) in all.iter().enumerate() {
                    assert_eq!(layout.offset(index), pos);
                }
            }
        }
    }

    #[test]
    fn partition_examples() {
        let p22 = set_partitions(2, 2).unwrap();
        assert_eq!(p22.len(), 1);
        assert_eq!(alloc::format!("{}", p22[0]), "{{1},{2}}");
        let p32: Vec<_> = set_partitions(3, 2)
            .unwrap()
            .iter()
            .map(|p| alloc::format!("{p}"))
            .collect();
        assert_eq!(p32, vec!["{{1,2},{3}}", "{{1,3},{2}}", "{{1},{2,3}}"]);
        assert_eq!(set_partitions(4, 2).unwrap().len(), 7);
        assert!(set_partitions(3, 0).is_err());
        assert!(set_partitions(3, 4).is_err());
    }

    #[test]
    fn bell_numbers_and_cover() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (s, &expected) in bell.iter().enumerate().skip(1) {
            let total: usize = (1..=s).map(|p| set_partitions(s, p).unwrap().len()).sum();
            assert_eq!(total, expected);
            for part in all_set_partitions(s) {
                let mut seen = vec![false; s];
                for block in part.blocks() {
                    assert!(!block.is_empty());
                    for &p in block {
                        assert!(!seen[p]);
                        seen[p] = true;
                    }
                }
                assert!(seen.iter().all(|&x| x));
            }
        }
    }

    #[test]
    fn grassmann_dimension() {
        assert_eq!(grassmann_dim(2, 1, 2), 8);
        assert_eq!(grassmann_dim(1, 1, 1), 3);
        assert_eq!(grassmann_dim(3, 2, 0), 5);
    }
}
