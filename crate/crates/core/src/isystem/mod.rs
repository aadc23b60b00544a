//! Poset-indexed systems of abelian groups and the constructions on them.

mod hom;
mod json;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::fgab::{feasible_constrained, Budget, CoordConstraint, FgGroup, FgabError, GroupElem, GroupHom, IntMatrix};
use crate::poset::{LowerSet, Poset, PosetError};

pub use hom::{CompatiblePair, SystemHom};
pub use json::{from_json, parse_system, parse_system_unchecked, serialize_system, to_json, SystemJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Free,
    Reg,
}

impl Kind {
    pub fn is_free(self) -> bool {
        self == Kind::Free
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Free => "free",
            Kind::Reg => "reg",
        })
    }
}

/// An element of `M_i` (when `n` is present, of `N x G_i`) or of its group hull `Z x G_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalElem {
    pub n: Option<BigInt>,
    pub g: GroupElem,
}

impl LocalElem {
    pub fn reg(g: GroupElem) -> Self {
        Self { n: None, g }
    }

    pub fn free(n: impl Into<BigInt>, g: GroupElem) -> Self {
        Self { n: Some(n.into()), g }
    }

    /// Coordinates in `Z x G` (or `G`), `n` first.
    pub fn coords(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.g.coords.len() + 1);
        if let Some(n) = &self.n {
            v.push(n.clone());
        }
        v.extend(self.g.coords.iter().cloned());
        v
    }
}

impl fmt::Debug for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.n {
            Some(n) => write!(f, "({n};{:?})", self.g),
            None => write!(f, "{:?}", self.g),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `phi_ji` differs from `phi_jm . phi_mi`.
    Functoriality { i: String, m: String, j: String },
    /// A minimal free element with a nontrivial group.
    MinimalFreeNontrivial { i: String },
    /// `g` is not reached by the semigroup generated from below.
    NotGenerated { i: String, g: String },
    /// The generation check ran out of budget.
    Undecided { i: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Functoriality { i, m, j } => {
                write!(f, "(c1) at {i} < {m} < {j}: composite map differs from the direct map")
            }
            Violation::MinimalFreeNontrivial { i } => {
                write!(f, "(c2) at {i}: minimal free element must have a trivial group")
            }
            Violation::NotGenerated { i, g } => {
                write!(f, "(c2) at {i}: {g} is not generated by the images from below")
            }
            Violation::Undecided { i } => write!(f, "(c2) at {i}: undecided within the search budget"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SystemError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Group(#[from] FgabError),
    #[error("missing map for the cover {0} < {1}")]
    MissingMap(String, String),
    #[error("map given for {0}, {1} which are not related as {0} < {1}")]
    NotRelated(String, String),
    #[error("map {0} -> {1}: {2}")]
    BadMap(String, String, String),
    #[error("{0} elements, but {1} kinds and {2} groups")]
    Shape(usize, usize, usize),
    #[error("invalid system: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("bad projection: {0}")]
    BadProjection(String),
    #[error("invalid compatible pair: {0}")]
    InvalidPair(String),
    #[error("malformed system description: {0}")]
    Parse(String),
}

/// Finite poset with a free/regular partition, groups `G_i` and maps
/// `phi_ji: M_i -> G_j` for every `i < j`.
#[derive(Clone, PartialEq)]
pub struct ISystem {
    poset: Poset,
    kinds: Vec<Kind>,
    groups: Vec<FgGroup>,
    /// keyed `(i, j)` for `i < j`
    maps: BTreeMap<(usize, usize), GroupHom>,
}

impl fmt::Debug for ISystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ISystem {:?}", self.poset)?;
        for i in 0..self.len() {
            writeln!(f, "  {} {} {}", self.poset.id(i), self.kinds[i], self.groups[i])?;
        }
        for ((i, j), m) in &self.maps {
            writeln!(f, "  {} -> {}: c={:?} h={:?}", self.poset.id(*i), self.poset.id(*j), m.c, m.h)?;
        }
        Ok(())
    }
}

impl ISystem {
    /// Assembles and validates.
    pub fn new(
        poset: Poset,
        kinds: Vec<Kind>,
        groups: Vec<FgGroup>,
        maps: Vec<(usize, usize, GroupHom)>,
    ) -> Result<Self, SystemError> {
        let s = Self::assemble(poset, kinds, groups, maps)?;
        let v = s.validate();
        if v.is_empty() {
            Ok(s)
        } else {
            Err(SystemError::Invalid(v))
        }
    }

    /// Checks shapes, requires a map on every cover and derives the remaining maps
    /// by composition; explicit non-cover maps are kept (and cross-checked by
    /// [`ISystem::validate`]).
    pub fn assemble(
        poset: Poset,
        kinds: Vec<Kind>,
        groups: Vec<FgGroup>,
        given: Vec<(usize, usize, GroupHom)>,
    ) -> Result<Self, SystemError> {
        let n = poset.len();
        if kinds.len() != n || groups.len() != n {
            return Err(SystemError::Shape(n, kinds.len(), groups.len()));
        }
        let id = |i: usize| poset.id(i).to_string();
        let mut maps = BTreeMap::new();
        for (i, j, m) in given {
            if !poset.lt(i, j) {
                return Err(SystemError::NotRelated(id(i), id(j)));
            }
            if m.source != groups[i] || m.target != groups[j] {
                return Err(SystemError::BadMap(id(i), id(j), "groups do not match the elements".into()));
            }
            if m.c.is_some() != kinds[i].is_free() {
                return Err(SystemError::BadMap(
                    id(i),
                    id(j),
                    "translation part must be present exactly for free sources".into(),
                ));
            }
            maps.insert((i, j), m);
        }
        for (i, j) in poset.cover_pairs() {
            if !maps.contains_key(&(i, j)) {
                return Err(SystemError::MissingMap(id(i), id(j)));
            }
        }
        let mut pairs = poset.strict_pairs();
        let width = |(i, j): (usize, usize)| (poset.up_mask(i) & poset.down(j).0).count_ones();
        pairs.sort_by_key(|&p| (width(p), p));
        for (i, j) in pairs {
            if maps.contains_key(&(i, j)) {
                continue;
            }
            let m = *poset
                .upper_covers(i)
                .iter()
                .find(|&&m| poset.lt(m, j))
                .expect("a non-cover pair has an intermediate element");
            let composite = maps[&(i, m)].then(&maps[&(m, j)]);
            maps.insert((i, j), composite);
        }
        Ok(Self { poset, kinds, groups, maps })
    }

    pub fn empty() -> Self {
        Self {
            poset: Poset::new(vec![], &[]).expect("empty poset"),
            kinds: vec![],
            groups: vec![],
            maps: BTreeMap::new(),
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn kind(&self, i: usize) -> Kind {
        self.kinds[i]
    }

    pub fn kinds(&self) -> &[Kind] {
        &self.kinds
    }

    pub fn group(&self, i: usize) -> &FgGroup {
        &self.groups[i]
    }

    pub fn groups(&self) -> &[FgGroup] {
        &self.groups
    }

    pub fn id(&self, i: usize) -> &str {
        self.poset.id(i)
    }

    pub fn index_of(&self, id: &str) -> Result<usize, PosetError> {
        self.poset.index_of(id)
    }

    /// `phi_ji` for `i < j`.
    pub fn map(&self, i: usize, j: usize) -> &GroupHom {
        self.maps
            .get(&(i, j))
            .unwrap_or_else(|| panic!("no map {} -> {}", self.id(i), self.id(j)))
    }

    pub fn maps(&self) -> &BTreeMap<(usize, usize), GroupHom> {
        &self.maps
    }

    /// Group hull `Z x G_i` (free) or `G_i` (regular).
    pub fn hat_group(&self, i: usize) -> FgGroup {
        match self.kinds[i] {
            Kind::Free => self.groups[i].hat(),
            Kind::Reg => self.groups[i].clone(),
        }
    }

    pub fn hat_len(&self, i: usize) -> usize {
        self.groups[i].len() + usize::from(self.kinds[i].is_free())
    }

    pub fn free_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.kinds[i].is_free()).collect()
    }

    /// `phi_ji` extended to the group hull of `M_i`.
    pub fn apply_hat(&self, i: usize, j: usize, x: &LocalElem) -> GroupElem {
        let m = self.map(i, j);
        match &x.n {
            Some(n) => m.apply_hat(n, &x.g),
            None => m.apply(&x.g),
        }
    }

    /// Checks that `x` is an element of `M_i` (so `n >= 1` for free `i`).
    pub fn check_local(&self, i: usize, x: &LocalElem) -> Result<(), String> {
        if x.g.coords.len() != self.groups[i].len() {
            return Err(format!("{}: expected {} group coordinates", self.id(i), self.groups[i].len()));
        }
        match (self.kinds[i], &x.n) {
            (Kind::Free, Some(n)) if *n >= BigInt::one() => Ok(()),
            (Kind::Free, _) => Err(format!("{} is free: needs n >= 1", self.id(i))),
            (Kind::Reg, None) => Ok(()),
            (Kind::Reg, Some(_)) => Err(format!("{} is regular: no n coordinate", self.id(i))),
        }
    }

    /// All violations of functoriality and generation-from-below.
    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with(&mut Budget::default())
    }

    pub fn validate_with(&self, budget: &mut Budget) -> Vec<Violation> {
        let mut out = Vec::new();
        let p = &self.poset;
        for (i, j) in p.strict_pairs() {
            for m in 0..self.len() {
                if p.lt(i, m) && p.lt(m, j) {
                    let comp = self.map(i, m).then(self.map(m, j));
                    if !comp.same_map(self.map(i, j)) {
                        out.push(Violation::Functoriality {
                            i: self.id(i).into(),
                            m: self.id(m).into(),
                            j: self.id(j).into(),
                        });
                    }
                }
            }
        }
        for i in self.free_elements() {
            let g = &self.groups[i];
            if g.is_trivial() {
                continue;
            }
            if p.is_minimal(i) {
                out.push(Violation::MinimalFreeNontrivial { i: self.id(i).into() });
                continue;
            }
            for gen in g.semigroup_generators() {
                match self.decompose_from_below(i, &gen, budget) {
                    Ok(Some(_)) => {}
                    Ok(None) => out.push(Violation::NotGenerated {
                        i: self.id(i).into(),
                        g: format!("{gen:?}"),
                    }),
                    Err(_) => {
                        out.push(Violation::Undecided { i: self.id(i).into() });
                        break;
                    }
                }
            }
        }
        out
    }

    /// Writes `beta` as `sum_k phi_ik(delta_k)` over `k < i` with `delta_k` in `M_k`.
    /// Only nonzero contributions are listed; `None` if impossible.
    pub fn decompose_from_below(
        &self,
        i: usize,
        beta: &GroupElem,
        budget: &mut Budget,
    ) -> Result<Option<Vec<(usize, LocalElem)>>, FgabError> {
        let below: Vec<usize> = (0..self.len()).filter(|&k| self.poset.lt(k, i)).collect();
        let target = &self.groups[i];
        let mut blocks = Vec::new();
        let mut cols = Vec::new();
        let mut constraints = Vec::new();
        for &k in &below {
            let hm = self.map(k, i).hat_matrix();
            let start = cols.len();
            for c in 0..hm.cols() {
                cols.push(hm.column(c));
            }
            if self.kinds[k].is_free() {
                constraints.push(CoordConstraint::ZeroOrGe1 { block: start + 1..cols.len() });
                constraints.extend(std::iter::repeat_n(CoordConstraint::Free, hm.cols() - 1));
            } else {
                constraints.extend(std::iter::repeat_n(CoordConstraint::Free, hm.cols()));
            }
            blocks.push((k, start, cols.len()));
        }
        let a = IntMatrix::from_columns(&cols, target.len());
        let Some(x) = feasible_constrained(&a, &beta.coords, &target.moduli(), &constraints, budget)? else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for (k, s, e) in blocks {
            let v = &x[s..e];
            let gk = &self.groups[k];
            let elem = if self.kinds[k].is_free() {
                if v[0].is_zero() {
                    continue;
                }
                LocalElem::free(v[0].clone(), gk.elem(v[1..].to_vec())?)
            } else {
                let g = gk.elem(v.to_vec())?;
                if g.is_zero() {
                    continue;
                }
                LocalElem::reg(g)
            };
            out.push((k, elem));
        }
        Ok(Some(out))
    }

    /// Restriction to the lower set `l`, with element ids kept.
    pub fn restrict(&self, l: LowerSet) -> Result<ISystem, SystemError> {
        self.poset.lower_set(l.0)?;
        let (poset, old) = self.poset.induced(l.0);
        let kinds = old.iter().map(|&i| self.kinds[i]).collect();
        let groups = old.iter().map(|&i| self.groups[i].clone()).collect();
        let mut maps = Vec::new();
        for (a, &i) in old.iter().enumerate() {
            for (b, &j) in old.iter().enumerate() {
                if self.poset.lt(i, j) {
                    maps.push((a, b, self.map(i, j).clone()));
                }
            }
        }
        let s = ISystem::assemble(poset, kinds, groups, maps)?;
        debug_assert!(s.validate().is_empty(), "restriction of a valid system is valid");
        Ok(s)
    }

    /// Same poset and kinds with every group collapsed, and the collapsing hom.
    pub fn antisymmetrize(&self) -> (ISystem, SystemHom) {
        let n = self.len();
        let kinds = self.kinds.clone();
        let groups = vec![FgGroup::trivial(); n];
        let maps = self
            .poset
            .cover_pairs()
            .into_iter()
            .map(|(i, j)| (i, j, GroupHom::zero(FgGroup::trivial(), FgGroup::trivial(), kinds[i].is_free())))
            .collect();
        let t = ISystem::assemble(self.poset.clone(), kinds, groups, maps).expect("collapsed system is well formed");
        let gm = (0..n)
            .map(|i| GroupHom::zero(self.groups[i].clone(), FgGroup::trivial(), false))
            .collect();
        let f = SystemHom::new(self.clone(), t.clone(), (0..n).collect(), gm).expect("collapse is a hom");
        (t, f)
    }

    /// The system over `p1` induced along `psi: p1 -> self.poset()`, and the canonical hom.
    pub fn pullback(&self, p1: Poset, psi: Vec<usize>) -> Result<(ISystem, SystemHom), SystemError> {
        check_projection(&p1, &self.poset, &psi).map_err(SystemError::BadProjection)?;
        let kinds = psi.iter().map(|&i| self.kinds[i]).collect();
        let groups: Vec<FgGroup> = psi.iter().map(|&i| self.groups[i].clone()).collect();
        let maps = p1
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| (a, b, self.map(psi[a], psi[b]).clone()))
            .collect();
        let s = ISystem::new(p1, kinds, groups.clone(), maps)?;
        let gm = groups.into_iter().map(|g| GroupHom::identity(g, false)).collect();
        let f = SystemHom::new(s.clone(), self.clone(), psi, gm).map_err(SystemError::BadProjection)?;
        Ok((s, f))
    }

    /// Structural identity: same ids, order, kinds, groups and maps (up to index order).
    pub fn same_as(&self, other: &ISystem) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let Ok(idx) = (0..self.len())
            .map(|i| other.index_of(self.id(i)))
            .collect::<Result<Vec<_>, _>>()
        else {
            return false;
        };
        (0..self.len()).all(|i| self.kinds[i] == other.kinds[idx[i]] && self.groups[i] == other.groups[idx[i]])
            && (0..self.len()).all(|i| {
                (0..self.len()).all(|j| {
                    self.poset.le(i, j) == other.poset.le(idx[i], idx[j])
                        && (!self.poset.lt(i, j) || self.map(i, j).same_map(other.map(idx[i], idx[j])))
                })
            })
    }

    /// Disjoint union, with ids prefixed by `prefixes[k]`.
    pub fn disjoint_union(parts: &[(String, &ISystem)]) -> Result<ISystem, SystemError> {
        let mut ids = Vec::new();
        let mut rel = Vec::new();
        let mut kinds = Vec::new();
        let mut groups = Vec::new();
        let mut maps = Vec::new();
        for (prefix, s) in parts {
            let off = ids.len();
            for i in 0..s.len() {
                ids.push(format!("{prefix}{}", s.id(i)));
                kinds.push(s.kinds[i]);
                groups.push(s.groups[i].clone());
            }
            for (i, j) in s.poset.cover_pairs() {
                rel.push((off + i, off + j));
                maps.push((off + i, off + j, s.map(i, j).clone()));
            }
        }
        let p = Poset::new(ids, &rel)?;
        ISystem::assemble(p, kinds, groups, maps)
    }
}

/// Surjective, strictly monotone, and bijective on lower covers.
pub fn check_projection(p1: &Poset, p2: &Poset, psi: &[usize]) -> Result<(), String> {
    if psi.len() != p1.len() {
        return Err(format!("map has {} entries for {} elements", psi.len(), p1.len()));
    }
    if let Some(&bad) = psi.iter().find(|&&x| x >= p2.len()) {
        return Err(format!("image index {bad} out of range"));
    }
    let image = psi.iter().fold(0u64, |acc, &x| acc | 1 << x);
    if image != p2.all().0 {
        return Err("not surjective".into());
    }
    for (a, b) in p1.strict_pairs() {
        if !p2.lt(psi[a], psi[b]) {
            return Err(format!("{} < {} is not sent to a strict relation", p1.id(a), p1.id(b)));
        }
    }
    for t in 0..p1.len() {
        let mut img: Vec<usize> = p1.lower_covers(t).iter().map(|&c| psi[c]).collect();
        img.sort_unstable();
        let n = img.len();
        img.dedup();
        let mut want = p2.lower_covers(psi[t]).to_vec();
        want.sort_unstable();
        if img.len() != n || img != want {
            return Err(format!("lower covers of {} are not mapped bijectively", p1.id(t)));
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests;
