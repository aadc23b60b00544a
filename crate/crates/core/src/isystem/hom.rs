use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fgab::{FgGroup, GroupHom, IntMatrix};
use crate::poset::{LowerSet, Poset};

use super::{ISystem, SystemError};

/// Structure-preserving map between systems: an order map on indices (strict on
/// chains, kind-preserving) with group homs `f_i: G_i -> G_psi(i)` commuting with
/// the structure maps.
#[derive(Clone, Debug)]
pub struct SystemHom {
    pub source: Arc<ISystem>,
    pub target: Arc<ISystem>,
    pub vertex: Vec<usize>,
    pub group_maps: Vec<GroupHom>,
}

/// `diag(1, f)` for free indices, `f` otherwise.
fn bar(f: &GroupHom, free: bool) -> IntMatrix {
    if !free {
        return f.h.clone();
    }
    let mut m = IntMatrix::zeros(f.h.rows() + 1, f.h.cols() + 1);
    m[(0, 0)] = 1.into();
    for r in 0..f.h.rows() {
        for c in 0..f.h.cols() {
            m[(r + 1, c + 1)] = f.h[(r, c)].clone();
        }
    }
    m
}

impl SystemHom {
    pub fn new(
        source: impl Into<Arc<ISystem>>,
        target: impl Into<Arc<ISystem>>,
        vertex: Vec<usize>,
        group_maps: Vec<GroupHom>,
    ) -> Result<Self, String> {
        let h = Self { source: source.into(), target: target.into(), vertex, group_maps };
        h.check()?;
        Ok(h)
    }

    pub fn check(&self) -> Result<(), String> {
        let (s, t) = (&*self.source, &*self.target);
        if self.vertex.len() != s.len() || self.group_maps.len() != s.len() {
            return Err("vertex or group map has the wrong length".into());
        }
        for i in 0..s.len() {
            let v = self.vertex[i];
            if v >= t.len() {
                return Err(format!("{} is sent out of range", s.id(i)));
            }
            if s.kind(i) != t.kind(v) {
                return Err(format!("{} and {} have different kinds", s.id(i), t.id(v)));
            }
            let f = &self.group_maps[i];
            if f.source != *s.group(i) || f.target != *t.group(v) || f.c.is_some() {
                return Err(format!("group map at {} has the wrong shape", s.id(i)));
            }
        }
        for (i, j) in s.poset().strict_pairs() {
            let (vi, vj) = (self.vertex[i], self.vertex[j]);
            if !t.poset().lt(vi, vj) {
                return Err(format!("{} < {} is not sent to a strict relation", s.id(i), s.id(j)));
            }
            let lhs = &t.map(vi, vj).hat_matrix() * &bar(&self.group_maps[i], s.kind(i).is_free());
            let rhs = &self.group_maps[j].h * &s.map(i, j).hat_matrix();
            let mut d = IntMatrix::zeros(lhs.rows(), lhs.cols());
            for r in 0..lhs.rows() {
                for c in 0..lhs.cols() {
                    d[(r, c)] = &lhs[(r, c)] - &rhs[(r, c)];
                }
            }
            d.reduce_rows(&t.group(vj).moduli());
            if !d.is_zero() {
                return Err(format!("square at {} < {} does not commute", s.id(i), s.id(j)));
            }
        }
        Ok(())
    }

    pub fn identity(s: &ISystem) -> Self {
        let a = Arc::new(s.clone());
        let gm = s.groups().iter().map(|g| GroupHom::identity(g.clone(), false)).collect();
        Self { source: a.clone(), target: a, vertex: (0..s.len()).collect(), group_maps: gm }
    }

    /// `other . self`.
    pub fn then(&self, other: &SystemHom) -> Result<SystemHom, String> {
        if self.target.len() != other.source.len() {
            return Err("composing homs with mismatched systems".into());
        }
        let vertex = self.vertex.iter().map(|&v| other.vertex[v]).collect();
        let gm = self
            .group_maps
            .iter()
            .zip(&self.vertex)
            .map(|(f, &v)| f.then(&other.group_maps[v]))
            .collect();
        SystemHom::new(self.source.clone(), other.target.clone(), vertex, gm)
    }
}

/// Two disjoint lower sets with an order isomorphism `iso: I1 -> I2` along which
/// kinds, groups and maps agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatiblePair {
    pub i1: LowerSet,
    pub i2: LowerSet,
    pub iso: BTreeMap<usize, usize>,
}

impl CompatiblePair {
    pub fn trivial() -> Self {
        Self { i1: LowerSet::EMPTY, i2: LowerSet::EMPTY, iso: BTreeMap::new() }
    }

    pub fn check(&self, j: &ISystem) -> Result<(), String> {
        let p = j.poset();
        if !p.is_lower_set(self.i1.0) || !p.is_lower_set(self.i2.0) {
            return Err("I1 and I2 must be lower sets".into());
        }
        if !self.i1.intersection(self.i2).is_empty() {
            return Err("I1 and I2 must be disjoint".into());
        }
        let dom = self.iso.keys().fold(0u64, |a, &k| a | 1 << k);
        let img = self.iso.values().fold(0u64, |a, &k| a | 1 << k);
        if dom != self.i1.0 || img != self.i2.0 || self.iso.len() != self.i2.len() {
            return Err("iso must be a bijection from I1 onto I2".into());
        }
        for (&a, &pa) in &self.iso {
            for (&b, &pb) in &self.iso {
                if p.le(a, b) != p.le(pa, pb) {
                    return Err(format!("iso is not an order isomorphism at {}, {}", j.id(a), j.id(b)));
                }
            }
            if j.kind(a) != j.kind(pa) {
                return Err(format!("{} and {} have different kinds", j.id(a), j.id(pa)));
            }
            if j.group(a) != j.group(pa) {
                return Err(format!("{} and {} carry different groups", j.id(a), j.id(pa)));
            }
        }
        for (&a, &pa) in &self.iso {
            for (&b, &pb) in &self.iso {
                if p.lt(a, b) && !j.map(a, b).same_map(j.map(pa, pb)) {
                    return Err(format!("maps differ on {} < {} and its image", j.id(a), j.id(b)));
                }
            }
            let outside = !(self.i1.0 | self.i2.0);
            for k in LowerSet(p.all().0 & outside).iter() {
                if p.lt(a, k) && p.lt(pa, k) && !j.map(a, k).same_map(j.map(pa, k)) {
                    return Err(format!(
                        "maps into {} from {} and {} differ",
                        j.id(k),
                        j.id(a),
                        j.id(pa)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Gluing `I2` onto `I1`: drops `I2`, adds `i <' j` whenever `iso(i) < j` for `j`
    /// outside both sets, and re-routes the maps accordingly. Also returns the
    /// projection hom `J -> J'`.
    pub fn crown_system(&self, j: &ISystem) -> Result<(ISystem, SystemHom), SystemError> {
        self.check(j).map_err(SystemError::InvalidPair)?;
        let p = j.poset();
        let keep: Vec<usize> = (0..j.len()).filter(|&x| !self.i2.contains(x)).collect();
        let mut new_index = vec![usize::MAX; j.len()];
        for (k, &x) in keep.iter().enumerate() {
            new_index[x] = k;
        }
        let outside = |x: usize| !self.i1.contains(x) && !self.i2.contains(x);
        let crown_lt = |a: usize, b: usize| self.i1.contains(a) && outside(b) && p.lt(self.iso[&a], b);
        let mut rel = Vec::new();
        for &a in &keep {
            for &b in &keep {
                if p.lt(a, b) || crown_lt(a, b) {
                    rel.push((new_index[a], new_index[b]));
                }
            }
        }
        let ids = keep.iter().map(|&x| j.id(x).to_string()).collect();
        let poset = Poset::new(ids, &rel)?;
        let mut maps = Vec::new();
        for (a, b) in poset.strict_pairs() {
            let (oa, ob) = (keep[a], keep[b]);
            let m = if p.lt(oa, ob) {
                j.map(oa, ob).clone()
            } else if crown_lt(oa, ob) {
                j.map(self.iso[&oa], ob).clone()
            } else {
                return Err(SystemError::InvalidPair("glued order is not transitively closed".into()));
            };
            maps.push((a, b, m));
        }
        let kinds = keep.iter().map(|&x| j.kind(x)).collect();
        let groups: Vec<FgGroup> = keep.iter().map(|&x| j.group(x).clone()).collect();
        let after = ISystem::new(poset, kinds, groups, maps)?;
        let mut back = BTreeMap::new();
        for (&a, &b) in &self.iso {
            back.insert(b, a);
        }
        let vertex: Vec<usize> = (0..j.len())
            .map(|x| if self.i2.contains(x) { new_index[back[&x]] } else { new_index[x] })
            .collect();
        let gm = (0..j.len()).map(|x| GroupHom::identity(j.group(x).clone(), false)).collect();
        let proj = SystemHom::new(j.clone(), after.clone(), vertex, gm).map_err(SystemError::InvalidPair)?;
        Ok((after, proj))
    }
}
