//! Strictly increasing multi-indices: the monomial basis of S^k(W) for a
//! purely odd space W, and the sign bookkeeping for odd letters.

use std::cmp::Ordering;
use std::fmt;

/// A basis word w_{i1}...w_{ik} of S^k(W), stored as a strictly increasing
/// index list with entries in 1..=n.
///
/// The canonical enumeration order is colexicographic: words compare by
/// their largest letter first. For pairs and n = 4 this yields
/// (1,2),(1,3),(2,3),(1,4),(2,4),(3,4).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u8>);

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, i) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i)?;
        }
        write!(f, ")")
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // colex within a degree; shorter words sort first across degrees
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MultiIndex {
    /// Build from a strictly increasing list. Panics on violations; inputs
    /// come from internal enumeration or validated parsing.
    pub fn new(indices: Vec<u8>) -> Self {
        assert!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "multi-index must be strictly increasing: {:?}",
            indices
        );
        MultiIndex(indices)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn pair(a: u8, b: u8) -> Self {
        assert!(a < b, "pair must be increasing");
        MultiIndex(vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn max_index(&self) -> u8 {
        self.0.last().copied().unwrap_or(0)
    }

    /// Sort an arbitrary distinct-letter word into a canonical multi-index,
    /// returning the permutation sign (all letters are odd). Returns `None`
    /// if a letter repeats (odd squares vanish).
    pub fn from_word(word: &[u8]) -> Option<(MultiIndex, i8)> {
        let mut v = word.to_vec();
        let mut sign = 1i8;
        // insertion sort, counting swaps of adjacent odd letters
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((MultiIndex(v), sign))
    }

    /// Multiply by one extra odd letter on the left: w_j * self.
    pub fn insert_letter(&self, j: u8) -> Option<(MultiIndex, i8)> {
        let mut word = Vec::with_capacity(self.0.len() + 1);
        word.push(j);
        word.extend_from_slice(&self.0);
        Self::from_word(&word)
    }

    /// All degree-k multi-indices on 1..=n in canonical (colex) order.
    pub fn enumerate(n: u8, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        if k > n as usize {
            return out;
        }
        let mut all: Vec<Vec<u8>> = Vec::new();
        fn rec(n: u8, k: usize, start: u8, acc: &mut Vec<u8>, all: &mut Vec<Vec<u8>>) {
            if acc.len() == k {
                all.push(acc.clone());
                return;
            }
            for i in start..=n {
                acc.push(i);
                rec(n, k, i + 1, acc, all);
                acc.pop();
            }
        }
        rec(n, k, 1, &mut Vec::new(), &mut all);
        all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        for v in all {
            out.push(MultiIndex(v));
        }
        out
    }

    /// Position of this multi-index in the canonical enumeration of its
    /// degree (the combinatorial number system for colex order).
    pub fn colex_rank(&self) -> usize {
        let mut rank = 0usize;
        for (pos, &i) in self.0.iter().enumerate() {
            rank += binomial((i - 1) as usize, pos + 1);
        }
        rank
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for j in 0..k {
        num = num * (n - j) / (j + 1);
    }
    num
}

/// All (l, r)-shuffles of 0..l+r: permutations increasing on the first l
/// slots and on the last r slots, with their signs. Enumerated by choosing
/// which positions land in the first block, in lexicographic order of that
/// choice, so the output order is fixed.
pub fn shuffles(l: usize, r: usize) -> Vec<(Vec<usize>, i8)> {
    let n = l + r;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..l).collect();
    loop {
        let mut perm: Vec<usize> = idx.clone();
        perm.extend((0..n).filter(|i| !idx.contains(i)));
        out.push((perm.clone(), perm_sign(&perm)));
        if l == 0 {
            break;
        }
        // advance to the next l-subset of 0..n in lexicographic order
        let mut i = l as isize - 1;
        while i >= 0 && idx[i as usize] == n - l + i as usize {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..l {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Sign of a permutation given as the image list perm[slot] = source index.
pub fn perm_sign(perm: &[usize]) -> i8 {
    let mut sign = 1i8;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_order_matches_catalog_convention() {
        let pairs = MultiIndex::enumerate(4, 2);
        let expect = [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)];
        assert_eq!(pairs.len(), 6);
        for (mi, (a, b)) in pairs.iter().zip(expect) {
            assert_eq!(mi.indices(), &[a, b]);
            assert_eq!(pairs[mi.colex_rank()], *mi);
        }
        let pairs3 = MultiIndex::enumerate(3, 2);
        assert_eq!(
            pairs3.iter().map(|m| m.indices().to_vec()).collect::<Vec<_>>(),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn word_sorting_signs() {
        let (mi, s) = MultiIndex::from_word(&[3, 1, 2]).unwrap();
        assert_eq!(mi.indices(), &[1, 2, 3]);
        assert_eq!(s, 1); // cyclic shift of 3 letters is even
        let (_, s) = MultiIndex::from_word(&[2, 1]).unwrap();
        assert_eq!(s, -1);
        assert!(MultiIndex::from_word(&[1, 1]).is_none());
    }

    #[test]
    fn shuffle_counts_and_signs() {
        // Sh(2,1) on three letters: 3 shuffles with signs +, -, +
        let sh = shuffles(2, 1);
        assert_eq!(sh.len(), 3);
        assert_eq!(sh[0], (vec![0, 1, 2], 1));
        assert_eq!(sh[1], (vec![0, 2, 1], -1));
        assert_eq!(sh[2], (vec![1, 2, 0], 1));
        assert_eq!(shuffles(0, 2).len(), 1);
        assert_eq!(shuffles(3, 2).len(), 10);
    }
}
