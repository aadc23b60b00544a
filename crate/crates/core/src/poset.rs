//! Finite posets, lower sets and the chain tree over a maximal element.

use std::collections::HashMap;
use std::fmt;

/// Largest supported poset; lower sets are `u64` bitsets.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("`{0}` is not maximal")]
    NotMaximal(String),
    #[error("{0} elements exceed the supported maximum of {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("not a lower set: `{0}` is missing below `{1}`")]
    NotLowerSet(String, String),
}

/// A set of element indices closed downward. Bit `i` is element `i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LowerSet(pub u64);

impl LowerSet {
    pub const EMPTY: LowerSet = LowerSet(0);

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, o: LowerSet) -> LowerSet {
        LowerSet(self.0 | o.0)
    }

    #[inline]
    pub fn intersection(self, o: LowerSet) -> LowerSet {
        LowerSet(self.0 & o.0)
    }

    #[inline]
    pub fn is_subset(self, o: LowerSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn members(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for LowerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Finite partial order on named elements, stored transitively closed.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    ids: Vec<String>,
    /// `below[i]`: mask of `x <= i`
    below: Vec<u64>,
    /// `above[i]`: mask of `x >= i`
    above: Vec<u64>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
}

impl Poset {
    /// Builds the order generated by `relations` (pairs `(below, above)`).
    pub fn new(ids: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = ids.len();
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        let mut seen = HashMap::new();
        for (k, id) in ids.iter().enumerate() {
            if seen.insert(id.as_str(), k).is_some() {
                return Err(PosetError::DuplicateElement(id.clone()));
            }
        }
        let mut below: Vec<u64> = (0..n).map(bit).collect();
        for &(a, b) in relations {
            assert!(a < n && b < n, "relation index out of range");
            below[b] |= bit(a);
        }
        // Warshall closure on bitsets
        for k in 0..n {
            for i in 0..n {
                if below[i] & bit(k) != 0 {
                    below[i] |= below[k];
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if below[i] & bit(j) != 0 && below[j] & bit(i) != 0 {
                    return Err(PosetError::Cycle(ids[i].clone(), ids[j].clone()));
                }
            }
        }
        Ok(Self::from_closure(ids, below))
    }

    /// Convenience constructor from string ids and `(below, above)` id pairs.
    pub fn from_pairs(ids: &[&str], pairs: &[(&str, &str)]) -> Result<Self, PosetError> {
        let owned: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            owned
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| PosetError::UnknownElement(s.to_string()))
        };
        let rel = pairs
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, PosetError>>()?;
        Self::new(owned, &rel)
    }

    fn from_closure(ids: Vec<String>, below: Vec<u64>) -> Self {
        let n = ids.len();
        let mut above = vec![0u64; n];
        for (i, &b) in below.iter().enumerate() {
            for j in LowerSet(b).iter() {
                above[j] |= bit(i);
            }
        }
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for i in 0..n {
            let strict = below[i] & !bit(i);
            for j in LowerSet(strict).iter() {
                // j < i is a cover iff no k with j < k < i
                let between = strict & above[j] & !bit(j);
                if between == 0 {
                    lower_covers[i].push(j);
                    upper_covers[j].push(i);
                }
            }
        }
        Self { ids, below, above, lower_covers, upper_covers }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, PosetError> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| PosetError::UnknownElement(id.to_string()))
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.below[j] & bit(i) != 0
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le(i, j) || self.le(j, i)
    }

    pub fn all(&self) -> LowerSet {
        LowerSet(if self.len() == 64 { u64::MAX } else { bit(self.len()) - 1 })
    }

    /// `I down i`.
    pub fn down(&self, i: usize) -> LowerSet {
        LowerSet(self.below[i])
    }

    /// Mask of elements `>= i`.
    pub fn up_mask(&self, i: usize) -> u64 {
        self.above[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper_covers[i]
    }

    /// All strict relations `(i, j)` with `i < j`, in index order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            for i in LowerSet(self.below[j] & !bit(j)).iter() {
                out.push((i, j));
            }
        }
        out.sort_unstable();
        out
    }

    /// Cover relations `(below, above)`, in index order.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            for &i in &self.lower_covers[j] {
                out.push((i, j));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_lower_set(&self, mask: u64) -> bool {
        LowerSet(mask).iter().all(|i| self.below[i] & !mask == 0)
    }

    pub fn lower_set(&self, mask: u64) -> Result<LowerSet, PosetError> {
        for i in LowerSet(mask).iter() {
            let missing = self.below[i] & !mask;
            if missing != 0 {
                let j = missing.trailing_zeros() as usize;
                return Err(PosetError::NotLowerSet(self.ids[j].clone(), self.ids[i].clone()));
            }
        }
        Ok(LowerSet(mask))
    }

    /// Smallest lower set containing `mask`.
    pub fn lower_closure(&self, mask: u64) -> LowerSet {
        LowerSet(LowerSet(mask).iter().fold(0, |acc, i| acc | self.below[i]))
    }

    pub fn max_of(&self, a: LowerSet) -> Vec<usize> {
        a.iter()
            .filter(|&i| self.above[i] & a.0 == bit(i))
            .collect()
    }

    pub fn max_mask(&self, a: LowerSet) -> u64 {
        self.max_of(a).into_iter().fold(0, |acc, i| acc | bit(i))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        self.max_of(self.all())
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.upper_covers[i].is_empty()
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        self.lower_covers[i].is_empty()
    }

    /// Every lower set, ordered by size and then by sorted member list.
    pub fn lower_sets(&self) -> Vec<LowerSet> {
        self.lower_sets_within(self.all())
    }

    /// Every lower set contained in `bound` (which must be a lower set).
    pub fn lower_sets_within(&self, bound: LowerSet) -> Vec<LowerSet> {
        let order = self.linear_extension();
        let elems: Vec<usize> = order.into_iter().filter(|&i| bound.contains(i)).collect();
        let mut out = Vec::new();
        fn rec(p: &Poset, elems: &[usize], k: usize, cur: u64, out: &mut Vec<LowerSet>) {
            if k == elems.len() {
                out.push(LowerSet(cur));
                return;
            }
            let i = elems[k];
            rec(p, elems, k + 1, cur, out);
            if p.below[i] & !bit(i) & !cur == 0 {
                rec(p, elems, k + 1, cur | bit(i), out);
            }
        }
        rec(self, &elems, 0, 0, &mut out);
        sort_lower_sets(&mut out);
        out
    }

    /// Topological order, smallest available index first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = 0u64;
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&i| placed & bit(i) == 0 && self.below[i] & !bit(i) & !placed == 0)
                .expect("partial order has no cycles");
            placed |= bit(next);
            out.push(next);
        }
        out
    }

    /// True iff every up-set `{ j : i <= j }` is a chain.
    pub fn chain_up_property(&self) -> bool {
        (0..self.len()).all(|i| self.is_chain(self.above[i]))
    }

    pub fn is_chain(&self, mask: u64) -> bool {
        let m: Vec<usize> = LowerSet(mask).iter().collect();
        m.iter().enumerate().all(|(k, &a)| m[k + 1..].iter().all(|&b| self.comparable(a, b)))
    }

    /// The subposet on `mask` with elements renumbered in index order; also
    /// returns the old index of each new element.
    pub fn induced(&self, mask: u64) -> (Poset, Vec<usize>) {
        let old: Vec<usize> = LowerSet(mask).iter().collect();
        let ids = old.iter().map(|&i| self.ids[i].clone()).collect();
        let below = old
            .iter()
            .map(|&j| {
                old.iter()
                    .enumerate()
                    .filter(|(_, &i)| self.le(i, j))
                    .fold(0u64, |acc, (k, _)| acc | bit(k))
            })
            .collect();
        (Self::from_closure(ids, below), old)
    }

    /// Saturated descending chains from `k`; see [`ChainTree`].
    pub fn chain_tree(&self, k: usize) -> Result<ChainTree, PosetError> {
        if !self.is_maximal(k) {
            return Err(PosetError::NotMaximal(self.ids[k].clone()));
        }
        ChainTree::build(self, k)
    }

    /// Order isomorphisms `self -> other` (as index maps), all of them.
    pub fn isomorphisms(&self, other: &Poset) -> Vec<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return vec![];
        }
        let sig = |p: &Poset, i: usize| {
            (
                LowerSet(p.below[i]).len(),
                LowerSet(p.above[i]).len(),
                p.lower_covers[i].len(),
                p.upper_covers[i].len(),
            )
        };
        let order = self.linear_extension();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; n];
        let mut used = 0u64;
        fn rec(
            a: &Poset,
            b: &Poset,
            order: &[usize],
            k: usize,
            map: &mut Vec<usize>,
            used: &mut u64,
            out: &mut Vec<Vec<usize>>,
            sig: &dyn Fn(&Poset, usize) -> (usize, usize, usize, usize),
        ) {
            if k == order.len() {
                out.push(map.clone());
                return;
            }
            let i = order[k];
            for j in 0..b.len() {
                if *used & bit(j) != 0 || sig(a, i) != sig(b, j) {
                    continue;
                }
                // relations with already mapped elements must agree
                let ok = order[..k]
                    .iter()
                    .all(|&x| a.le(x, i) == b.le(map[x], j) && a.le(i, x) == b.le(j, map[x]));
                if !ok {
                    continue;
                }
                map[i] = j;
                *used |= bit(j);
                rec(a, b, order, k + 1, map, used, out, sig);
                *used &= !bit(j);
                map[i] = usize::MAX;
            }
        }
        rec(self, other, &order, 0, &mut map, &mut used, &mut out, &sig);
        out
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        !self.isomorphisms(other).is_empty()
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.ids[a], self.ids[b]))
            .collect();
        write!(f, "Poset[{}; {}]", self.ids.join(","), covers.join(","))
    }
}

pub fn sort_lower_sets(v: &mut [LowerSet]) {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members().cmp(&b.members())));
}

/// Tree of saturated descending chains `k = t_0 > t_1 > ... > t_m` (each step a
/// cover) ordered by reverse prefix, with `psi` sending a chain to its last element.
#[derive(Clone, Debug)]
pub struct ChainTree {
    pub tree: Poset,
    /// Element chain of each node, as indices into the base poset.
    pub chains: Vec<Vec<usize>>,
    /// `psi[t]` is the last element of `chains[t]`.
    pub psi: Vec<usize>,
    pub root: usize,
}

impl ChainTree {
    fn build(base: &Poset, k: usize) -> Result<Self, PosetError> {
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut stack = vec![vec![k]];
        while let Some(c) = stack.pop() {
            let last = *c.last().expect("chains are nonempty");
            for &l in base.lower_covers(last).iter().rev() {
                let mut d = c.clone();
                d.push(l);
                stack.push(d);
            }
            chains.push(c);
            if chains.len() > MAX_ELEMENTS {
                return Err(PosetError::TooLarge(chains.len()));
            }
        }
        let ids: Vec<String> = chains
            .iter()
            .map(|c| c.iter().map(|&i| base.id(i)).collect::<Vec<_>>().join("/"))
            .collect();
        let mut rel = Vec::new();
        for (t, c) in chains.iter().enumerate() {
            if c.len() > 1 {
                let parent = chains
                    .iter()
                    .position(|p| p[..] == c[..c.len() - 1])
                    .expect("prefix chain present");
                rel.push((t, parent));
            }
        }
        let tree = Poset::new(ids, &rel)?;
        let psi = chains.iter().map(|c| *c.last().expect("nonempty")).collect();
        Ok(Self { tree, chains, psi, root: 0 })
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    /// Checks the structural properties of the projection against `base`;
    /// returns a description of the first failure.
    pub fn check(&self, base: &Poset) -> Result<(), String> {
        let t = &self.tree;
        let k = self.psi[self.root];
        if !t.chain_up_property() {
            return Err("some interval [t, root] is not a chain".into());
        }
        // surjective onto down(k)
        let image = self.psi.iter().fold(0u64, |acc, &i| acc | bit(i));
        if image != base.down(k).0 {
            return Err("projection is not onto the down-set of the root".into());
        }
        for a in 0..t.len() {
            for b in 0..t.len() {
                if t.lt(a, b) && !base.lt(self.psi[a], self.psi[b]) {
                    return Err(format!("projection not strictly monotone at {} < {}", t.id(a), t.id(b)));
                }
            }
            // lower covers biject
            let mut img: Vec<usize> = t.lower_covers(a).iter().map(|&c| self.psi[c]).collect();
            img.sort_unstable();
            let before = img.len();
            img.dedup();
            let mut want = base.lower_covers(self.psi[a]).to_vec();
            want.sort_unstable();
            if img.len() != before || img != want {
                return Err(format!("lower covers of {} do not biject", t.id(a)));
            }
        }
        Ok(())
    }

    /// Maximal chains of the tree (root to leaf) mapped through `psi`.
    pub fn projected_maximal_chains(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .filter(|&t| self.tree.is_minimal(t))
            .map(|t| self.chains[t].clone())
            .collect()
    }
}

/// Maximal chains of `down(k)` from `k` downward, each as a descending element list.
pub fn maximal_chains_from(p: &Poset, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![k]];
    while let Some(c) = stack.pop() {
        let last = *c.last().expect("nonempty");
        if p.lower_covers(last).is_empty() {
            out.push(c);
            continue;
        }
        for &l in p.lower_covers(last) {
            let mut d = c.clone();
            d.push(l);
            stack.push(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn diamond() -> Poset {
        Poset::from_pairs(&["b", "x", "y", "t"], &[("b", "x"), ("b", "y"), ("x", "t"), ("y", "t")]).unwrap()
    }

    pub(crate) fn sys_d_poset() -> Poset {
        let ids = ["*", "1", "2", "11", "12", "22", "111", "112", "122", "221", "222"];
        let pairs = [
            ("1", "*"),
            ("2", "*"),
            ("11", "1"),
            ("12", "1"),
            ("12", "2"),
            ("22", "2"),
            ("111", "11"),
            ("112", "11"),
            ("112", "12"),
            ("122", "12"),
            ("221", "22"),
            ("222", "22"),
        ];
        Poset::from_pairs(&ids, &pairs).unwrap()
    }

    #[test]
    fn two_chain() {
        let p = Poset::from_pairs(&["q", "p"], &[("q", "p")]).unwrap();
        assert_eq!(p.down(1), LowerSet(0b11));
        assert_eq!(p.max_of(p.down(1)), vec![1]);
        assert!(p.chain_up_property());
        let t = p.chain_tree(1).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.tree.is_isomorphic(&p));
    }

    #[test]
    fn antichain_lower_sets() {
        let p = Poset::from_pairs(&["x", "y"], &[]).unwrap();
        let ls = p.lower_sets();
        assert_eq!(ls, vec![LowerSet(0), LowerSet(1), LowerSet(2), LowerSet(3)]);
    }

    #[test]
    fn cycle_rejected() {
        let e = Poset::from_pairs(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(e, PosetError::Cycle(..)));
    }

    #[test]
    fn diamond_tree() {
        let d = diamond();
        assert!(!d.chain_up_property());
        let t = d.chain_tree(3).unwrap();
        assert_eq!(t.len(), 5);
        assert!(t.tree.chain_up_property());
        t.check(&d).unwrap();
        assert!(matches!(d.chain_tree(0), Err(PosetError::NotMaximal(_))));
    }

    #[test]
    fn figure_poset() {
        let p = sys_d_poset();
        let star = p.index_of("*").unwrap();
        let mut lc: Vec<&str> = p.lower_covers(star).iter().map(|&i| p.id(i)).collect();
        lc.sort();
        assert_eq!(lc, vec!["1", "2"]);
        let t = p.chain_tree(star).unwrap();
        assert_eq!(t.len(), 15);
        t.check(&p).unwrap();
        let mut a = t.projected_maximal_chains();
        let mut b = maximal_chains_from(&p, star);
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn induced_subposet() {
        let d = diamond();
        let (sub, old) = d.induced(d.down(1).0);
        assert_eq!(old, vec![0, 1]);
        assert!(sub.lt(0, 1));
    }
}
