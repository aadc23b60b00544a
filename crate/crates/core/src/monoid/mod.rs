//! The monoid `M(J)` of a system: elements are a support lower set plus a vector,
//! compared modulo the relation subgroup of that support.

mod chain_up;
mod derive;
mod json;
mod refine;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::fgab::{
    feasible_constrained, Budget, CoordConstraint, FgGroup, FgabError, GroupElem, IntMatrix, Quotient,
};
use crate::isystem::{ISystem, Kind, LocalElem, SystemHom};
use crate::poset::{bit, LowerSet};

pub use derive::{derive_system, roundtrip_check, DerivedSystem};
pub use json::{elem_from_json, elem_to_json};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("bad coordinate: {0}")]
    BadCoordinate(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("poset does not have chains as up-sets")]
    NotChainUp,
    #[error("feasibility search exceeded its node budget")]
    ResourceLimit,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

impl From<FgabError> for MonoidError {
    fn from(e: FgabError) -> Self {
        match e {
            FgabError::ResourceLimit => MonoidError::ResourceLimit,
            other => MonoidError::InternalInvariantViolation(other.to_string()),
        }
    }
}

/// Element of `M(J)`: a support lower set and a representative vector over the
/// global coordinate layout (zero outside the support, torsion reduced).
///
/// The derived equality is representational; use [`Monoid::eq`] for monoid equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonElem {
    pub support: LowerSet,
    pub vec: Vec<BigInt>,
}

impl fmt::Debug for MonElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vec.iter().map(ToString::to_string).collect();
        write!(f, "<{:?}|{}>", self.support, v.join(","))
    }
}

impl MonElem {
    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }
}

/// Witness for `x1 + x2 = y1 + y2`: row sums give the `x`, column sums the `y`.
#[derive(Clone, Debug)]
pub struct RefinementSquare {
    pub z11: MonElem,
    pub z12: MonElem,
    pub z21: MonElem,
    pub z22: MonElem,
}

impl RefinementSquare {
    pub fn transpose(self) -> Self {
        Self { z11: self.z11, z12: self.z21, z21: self.z12, z22: self.z22 }
    }

    pub fn swap_rows(self) -> Self {
        Self { z11: self.z21, z12: self.z22, z21: self.z11, z22: self.z12 }
    }

    pub fn swap_cols(self) -> Self {
        Self { z11: self.z12, z12: self.z11, z21: self.z22, z22: self.z21 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElemClass {
    Zero,
    FreeElt,
    RegElt,
}

/// One family of primes: `chi_i(x)` for `x` in `G_i` (regular `i`) or `chi_i(1, x)` (free `i`).
#[derive(Clone, Debug)]
pub struct PrimeFamily {
    pub element: usize,
    pub kind: Kind,
    pub group: FgGroup,
}

/// Quotient data of one support.
#[derive(Debug)]
pub(crate) struct SupportData {
    /// Global coordinates of the support, ascending.
    pub coords: Vec<usize>,
    pub q: Quotient,
}

impl SupportData {
    fn project(&self, v: &[BigInt]) -> GroupElem {
        let g: Vec<BigInt> = self.coords.iter().map(|&c| v[c].clone()).collect();
        self.q.project(&g)
    }
}

pub struct Monoid {
    sys: Arc<ISystem>,
    offsets: Vec<usize>,
    owners: Vec<usize>,
    moduli: Vec<BigInt>,
    dim: usize,
    lower_sets: Vec<LowerSet>,
    cache: RwLock<HashMap<u64, Arc<SupportData>>>,
    budget_nodes: u64,
}

impl fmt::Debug for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monoid over {} elements, {} coordinates", self.sys.len(), self.dim)
    }
}

impl Monoid {
    pub fn new(sys: impl Into<Arc<ISystem>>) -> Self {
        let sys = sys.into();
        let mut offsets = Vec::with_capacity(sys.len());
        let mut moduli = Vec::new();
        let mut owners = Vec::new();
        for i in 0..sys.len() {
            offsets.push(moduli.len());
            moduli.extend(sys.hat_group(i).moduli());
            owners.resize(moduli.len(), i);
        }
        let dim = moduli.len();
        let lower_sets = sys.poset().lower_sets();
        Self {
            sys,
            offsets,
            owners,
            moduli,
            dim,
            lower_sets,
            cache: RwLock::new(HashMap::new()),
            budget_nodes: Budget::DEFAULT_NODES,
        }
    }

    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.budget_nodes = nodes;
        self
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget::new(self.budget_nodes)
    }

    pub fn system(&self) -> &ISystem {
        &self.sys
    }

    pub fn system_arc(&self) -> &Arc<ISystem> {
        &self.sys
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower_sets(&self) -> &[LowerSet] {
        &self.lower_sets
    }

    /// Global coordinate range of element `i`.
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.sys.hat_len(i)
    }

    /// Range of the group part of element `i` (skipping `n` for free `i`).
    pub(crate) fn g_range(&self, i: usize) -> std::ops::Range<usize> {
        let r = self.range(i);
        if self.sys.kind(i).is_free() {
            r.start + 1..r.end
        } else {
            r
        }
    }

    fn reduce(&self, v: &mut [BigInt]) {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if !m.is_zero() && (x.is_negative() || &*x >= m) {
                *x = num_integer::Integer::mod_floor(&*x, m);
            }
        }
    }

    pub fn zero(&self) -> MonElem {
        MonElem { support: LowerSet::EMPTY, vec: vec![BigInt::zero(); self.dim] }
    }

    /// The coordinate of `x` at `i`, as an element of `Z x G_i` or `G_i`.
    pub fn local(&self, x: &MonElem, i: usize) -> LocalElem {
        let g = self.sys.group(i);
        let gr = self.g_range(i);
        let ge = GroupElem { coords: x.vec[gr].to_vec() };
        let ge = g.reduce(ge);
        if self.sys.kind(i).is_free() {
            LocalElem::free(x.vec[self.offsets[i]].clone(), ge)
        } else {
            LocalElem::reg(ge)
        }
    }

    fn set_local(&self, v: &mut [BigInt], i: usize, x: &LocalElem) {
        let r = self.range(i);
        let c = x.coords();
        v[r].clone_from_slice(&c);
    }

    fn add_local(&self, v: &mut [BigInt], i: usize, x: &LocalElem) {
        let r = self.range(i);
        for (a, b) in v[r].iter_mut().zip(x.coords()) {
            *a += b;
        }
    }

    /// The free coordinate `n` of `x` at free element `i`.
    pub fn n_at(&self, x: &MonElem, i: usize) -> BigInt {
        debug_assert!(self.sys.kind(i).is_free());
        x.vec[self.offsets[i]].clone()
    }

    /// `chi_i(x)`: support `down(i)`, coordinate `x` at `i`.
    pub fn chi(&self, i: usize, x: &LocalElem) -> Result<MonElem, MonoidError> {
        self.sys.check_local(i, x).map_err(MonoidError::BadCoordinate)?;
        let mut v = vec![BigInt::zero(); self.dim];
        self.set_local(&mut v, i, x);
        self.reduce(&mut v);
        Ok(MonElem { support: self.sys.poset().down(i), vec: v })
    }

    /// `chi_i(1, 0)` for free `i`, `chi_i(0)` for regular `i`.
    pub fn unit_chi(&self, i: usize) -> MonElem {
        let g = self.sys.group(i).zero();
        let x = match self.sys.kind(i) {
            Kind::Free => LocalElem::free(1, g),
            Kind::Reg => LocalElem::reg(g),
        };
        self.chi(i, &x).expect("unit coordinate is valid")
    }

    /// Builds an element from a support and a full vector, checking membership in `H_a`.
    pub fn from_vec(&self, support: LowerSet, mut vec: Vec<BigInt>) -> Result<MonElem, MonoidError> {
        if vec.len() != self.dim {
            return Err(MonoidError::BadCoordinate(format!("vector of length {} for {} coordinates", vec.len(), self.dim)));
        }
        if !self.sys.poset().is_lower_set(support.0) {
            return Err(MonoidError::BadCoordinate("support is not a lower set".into()));
        }
        self.reduce(&mut vec);
        let x = MonElem { support, vec };
        self.check_h(&x).map_err(MonoidError::BadCoordinate)?;
        Ok(x)
    }

    /// Membership of the representative in `H_a`.
    pub fn check_h(&self, x: &MonElem) -> Result<(), String> {
        let p = self.sys.poset();
        let maxes = p.max_mask(x.support);
        for i in 0..self.sys.len() {
            let r = self.range(i);
            if !x.support.contains(i) {
                if x.vec[r].iter().any(|v| !v.is_zero()) {
                    return Err(format!("nonzero coordinate outside the support at {}", self.sys.id(i)));
                }
                continue;
            }
            if !self.sys.kind(i).is_free() {
                continue;
            }
            let n = &x.vec[r.start];
            if maxes & bit(i) != 0 {
                if *n < BigInt::one() {
                    return Err(format!("free maximal element {} needs n >= 1", self.sys.id(i)));
                }
            } else if n.is_negative() || (n.is_zero() && x.vec[r].iter().any(|v| !v.is_zero())) {
                return Err(format!("free element {} needs (0,0) or n >= 1", self.sys.id(i)));
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &MonElem, y: &MonElem) -> MonElem {
        let mut v: Vec<BigInt> = x.vec.iter().zip(&y.vec).map(|(a, b)| a + b).collect();
        self.reduce(&mut v);
        MonElem { support: x.support.union(y.support), vec: v }
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a MonElem>) -> MonElem {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn scale(&self, k: u32, x: &MonElem) -> MonElem {
        if k == 0 {
            return self.zero();
        }
        let kb = BigInt::from(k);
        let mut v: Vec<BigInt> = x.vec.iter().map(|a| a * &kb).collect();
        self.reduce(&mut v);
        MonElem { support: x.support, vec: v }
    }

    pub(crate) fn support_data(&self, a: LowerSet) -> Arc<SupportData> {
        if let Some(d) = self.cache.read().expect("cache lock").get(&a.0) {
            return d.clone();
        }
        let d = Arc::new(self.build_support_data(a));
        self.cache.write().expect("cache lock").entry(a.0).or_insert(d).clone()
    }

    fn build_support_data(&self, a: LowerSet) -> SupportData {
        let coords: Vec<usize> = a.iter().flat_map(|i| self.range(i)).collect();
        let local: HashMap<usize, usize> = coords.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let n = coords.len();
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for (k, &c) in coords.iter().enumerate() {
            if !self.moduli[c].is_zero() {
                let mut col = vec![BigInt::zero(); n];
                col[k] = self.moduli[c].clone();
                cols.push(col);
            }
        }
        let p = self.sys.poset();
        for j in p.max_of(a) {
            let gj = self.g_range(j);
            for i in a.iter().filter(|&i| p.lt(i, j)) {
                let hm = self.sys.map(i, j).hat_matrix();
                for (u, c) in self.range(i).enumerate() {
                    let mut col = vec![BigInt::zero(); n];
                    col[local[&c]] = BigInt::one();
                    for (r, gc) in gj.clone().enumerate() {
                        col[local[&gc]] -= &hm[(r, u)];
                    }
                    cols.push(col);
                }
            }
        }
        let rel = IntMatrix::from_columns(&cols, n);
        SupportData { coords, q: Quotient::new(n, &rel) }
    }

    /// Canonical invariant of the class of `x`: support and quotient coordinates.
    pub fn class_key(&self, x: &MonElem) -> (LowerSet, GroupElem) {
        let d = self.support_data(x.support);
        (x.support, d.project(&x.vec))
    }

    /// Monoid equality.
    pub fn eq(&self, x: &MonElem, y: &MonElem) -> bool {
        if x.support != y.support {
            return false;
        }
        let d = self.support_data(x.support);
        d.project(&x.vec) == d.project(&y.vec)
    }

    /// Constraints describing `H_c` on the coordinates of `c` (in support-local order).
    pub(crate) fn h_constraints(&self, c: LowerSet) -> Vec<CoordConstraint> {
        let p = self.sys.poset();
        let maxes = p.max_mask(c);
        let mut out = Vec::new();
        for i in c.iter() {
            let w = self.sys.hat_len(i);
            if self.sys.kind(i).is_free() {
                let start = out.len();
                if maxes & bit(i) != 0 {
                    out.push(CoordConstraint::Ge1);
                } else {
                    out.push(CoordConstraint::ZeroOrGe1 { block: start + 1..start + w });
                }
                out.extend(std::iter::repeat_n(CoordConstraint::Free, w - 1));
            } else {
                out.extend(std::iter::repeat_n(CoordConstraint::Free, w));
            }
        }
        out
    }

    /// Columns of the projection of support `b` that belong to the coordinates of `c`.
    pub(crate) fn projection_columns(&self, b: &SupportData, c: LowerSet) -> IntMatrix {
        let cols: Vec<usize> = b
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &g)| c.contains(self.owner(g)))
            .map(|(k, _)| k)
            .collect();
        b.q.proj.select_columns(&cols)
    }

    /// Element owning a global coordinate.
    pub(crate) fn owner(&self, coord: usize) -> usize {
        self.owners[coord]
    }

    /// Scatters support-local values of `c` into a full vector.
    pub(crate) fn scatter(&self, c: LowerSet, vals: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        let mut k = 0;
        for i in c.iter() {
            for g in self.range(i) {
                v[g] = vals[k].clone();
                k += 1;
            }
        }
        debug_assert_eq!(k, vals.len());
        self.reduce(&mut v);
        v
    }

    pub(crate) fn coords_len(&self, c: LowerSet) -> usize {
        c.iter().map(|i| self.sys.hat_len(i)).sum()
    }

    /// Necessary condition from the invariant `n` coordinates: for free `j` maximal in
    /// `b`, decides whether `j` must be in, must not be in, or cannot be in any `c`.
    fn n_requirements(&self, x: &MonElem, y: &MonElem) -> Option<(u64, u64)> {
        let p = self.sys.poset();
        let (mut must, mut must_not) = (0u64, 0u64);
        for j in p.max_of(y.support) {
            if !self.sys.kind(j).is_free() {
                continue;
            }
            let ny = self.n_at(y, j);
            let nx = if x.support.contains(j) { self.n_at(x, j) } else { BigInt::zero() };
            let d = ny - nx;
            if d.is_negative() {
                return None;
            }
            if d.is_zero() {
                must_not |= bit(j);
            } else {
                must |= bit(j);
            }
        }
        Some((must, must_not))
    }

    /// Some `z` with `x + z = y`, or `None` if `x` is not below `y`.
    pub fn leq(&self, x: &MonElem, y: &MonElem) -> Result<Option<MonElem>, MonoidError> {
        let (a, b) = (x.support, y.support);
        if !a.is_subset(b) {
            return Ok(None);
        }
        let Some((must, must_not)) = self.n_requirements(x, y) else {
            return Ok(None);
        };
        let p = self.sys.poset();
        let required = p.lower_closure(b.0 & !a.0).0 | must;
        let bd = self.support_data(b);
        let rhs: Vec<BigInt> = {
            let diff: Vec<BigInt> = y.vec.iter().zip(&x.vec).map(|(u, v)| u - v).collect();
            bd.project(&diff).coords
        };
        let moduli = bd.q.group.moduli();
        let mut budget = self.budget();
        for &c in &self.lower_sets {
            if !c.is_subset(b) || c.0 & required != required || c.0 & must_not != 0 {
                continue;
            }
            let a_mat = self.projection_columns(&bd, c);
            let cons = self.h_constraints(c);
            if let Some(sol) = feasible_constrained(&a_mat, &rhs, &moduli, &cons, &mut budget)? {
                let z = MonElem { support: c, vec: self.scatter(c, &sol) };
                self.check_h(&z).map_err(MonoidError::InternalInvariantViolation)?;
                if !self.eq(&self.add(x, &z), y) {
                    return Err(MonoidError::InternalInvariantViolation("order witness fails".into()));
                }
                return Ok(Some(z));
            }
        }
        Ok(None)
    }

    pub fn is_leq(&self, x: &MonElem, y: &MonElem) -> Result<bool, MonoidError> {
        Ok(self.leq(x, y)?.is_some())
    }

    /// Moves every non-maximal coordinate up to a maximal element above it.
    pub fn concentrate(&self, x: &MonElem) -> MonElem {
        let p = self.sys.poset();
        let maxes = p.max_mask(x.support);
        let mut v = x.vec.clone();
        for i in x.support.iter() {
            if maxes & bit(i) != 0 {
                continue;
            }
            let li = self.local(&MonElem { support: x.support, vec: v.clone() }, i);
            if li.coords().iter().all(Zero::is_zero) {
                continue;
            }
            let j = LowerSet(maxes).iter().find(|&j| p.lt(i, j)).expect("maximal element above");
            let img = self.sys.apply_hat(i, j, &li);
            for (g, val) in self.g_range(j).zip(img.coords) {
                v[g] += val;
            }
            for g in self.range(i) {
                v[g] = BigInt::zero();
            }
        }
        self.reduce(&mut v);
        let out = MonElem { support: x.support, vec: v };
        debug_assert!(self.eq(&out, x));
        out
    }

    /// Writes `beta` in `G_i` as `sum_k phi_ik(delta_k)` with `delta_k` in `M_k`, `k < i`.
    pub fn decompose_via_c2(&self, i: usize, beta: &GroupElem) -> Result<Vec<(usize, LocalElem)>, MonoidError> {
        if !self.sys.kind(i).is_free() {
            return Err(MonoidError::PreconditionViolated(format!("{} is not free", self.sys.id(i))));
        }
        if beta.is_zero() {
            return Ok(vec![]);
        }
        match self.sys.decompose_from_below(i, beta, &mut self.budget())? {
            Some(w) => Ok(w),
            None => Err(MonoidError::InternalInvariantViolation(format!(
                "{beta:?} is not generated below {}",
                self.sys.id(i)
            ))),
        }
    }

    pub fn prime_families(&self) -> Vec<PrimeFamily> {
        (0..self.sys.len())
            .map(|i| PrimeFamily { element: i, kind: self.sys.kind(i), group: self.sys.group(i).clone() })
            .collect()
    }

    /// All primes, when every group is finite.
    pub fn primes(&self) -> Option<Vec<MonElem>> {
        let mut out = Vec::new();
        for f in self.prime_families() {
            for g in f.group.enumerate()? {
                let x = match f.kind {
                    Kind::Free => LocalElem::free(1, g),
                    Kind::Reg => LocalElem::reg(g),
                };
                out.push(self.chi(f.element, &x).expect("prime coordinate is valid"));
            }
        }
        Some(out)
    }

    /// Principal support, and `n = 1` at the top when it is free.
    pub fn is_prime(&self, x: &MonElem) -> bool {
        let p = self.sys.poset();
        let m = p.max_of(x.support);
        if m.len() != 1 {
            return false;
        }
        let i = m[0];
        !self.sys.kind(i).is_free() || self.n_at(x, i).is_one()
    }

    /// `chi_i(1, 0)` for free `i`; `chi_i(g)` for semigroup generators `g` of `G_i`
    /// (or `chi_i(0)` for trivial `G_i`) for regular `i`.
    pub fn generators(&self) -> Vec<MonElem> {
        let mut out = Vec::new();
        for i in 0..self.sys.len() {
            match self.sys.kind(i) {
                Kind::Free => out.push(self.unit_chi(i)),
                Kind::Reg => {
                    let g = self.sys.group(i);
                    if g.is_trivial() {
                        out.push(self.unit_chi(i));
                    }
                    for s in g.semigroup_generators() {
                        out.push(self.chi(i, &LocalElem::reg(s)).expect("valid"));
                    }
                }
            }
        }
        out
    }

    /// Zero, regular (`2x <= x`) or free, by the support criterion.
    pub fn classify(&self, x: &MonElem) -> ElemClass {
        if x.is_zero() {
            return ElemClass::Zero;
        }
        let p = self.sys.poset();
        if p.max_of(x.support).into_iter().any(|j| self.sys.kind(j).is_free()) {
            ElemClass::FreeElt
        } else {
            ElemClass::RegElt
        }
    }

    pub fn is_idempotent(&self, x: &MonElem) -> bool {
        self.eq(&self.scale(2, x), x)
    }

    /// The lower set corresponding to the order-ideal generated by `x`.
    pub fn ideal_generated_by(&self, x: &MonElem) -> LowerSet {
        x.support
    }

    /// Membership in the order-ideal `M(J_L)`.
    pub fn in_ideal(&self, x: &MonElem, l: LowerSet) -> bool {
        x.support.is_subset(l)
    }

    /// A random element: uniform support, small coordinates clamped to `H_a`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MonElem {
        let a = self.lower_sets[rng.gen_range(0..self.lower_sets.len())];
        self.sample_in(a, rng)
    }

    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> MonElem {
        if self.lower_sets.len() <= 1 {
            return self.zero();
        }
        let a = self.lower_sets[rng.gen_range(1..self.lower_sets.len())];
        self.sample_in(a, rng)
    }

    pub fn sample_in<R: Rng + ?Sized>(&self, a: LowerSet, rng: &mut R) -> MonElem {
        let p = self.sys.poset();
        let maxes = p.max_mask(a);
        let mut v = vec![BigInt::zero(); self.dim];
        for i in a.iter() {
            let g = self.sys.group(i);
            let mut coords: Vec<BigInt> = (0..g.len())
                .map(|k| {
                    if k < g.rank() {
                        BigInt::from(rng.gen_range(-3i64..=3))
                    } else {
                        let d = &g.torsion()[k - g.rank()];
                        let d = num_traits::ToPrimitive::to_i64(d).unwrap_or(i64::MAX);
                        BigInt::from(rng.gen_range(0..d))
                    }
                })
                .collect();
            if self.sys.kind(i).is_free() {
                let max = maxes & bit(i) != 0;
                let n = if max || rng.gen_bool(0.5) { rng.gen_range(1i64..=3) } else { 0 };
                if n == 0 {
                    coords.iter_mut().for_each(|c| *c = BigInt::zero());
                }
                coords.insert(0, BigInt::from(n));
            }
            let r = self.range(i);
            v[r].clone_from_slice(&coords);
        }
        MonElem { support: a, vec: v }
    }

    /// Image of `x` under the monoid map induced by `f` (this monoid must be over `f.source`).
    pub fn map_elem(&self, f: &SystemHom, target: &Monoid, x: &MonElem) -> MonElem {
        debug_assert_eq!(f.source.len(), self.sys.len());
        let tp = target.sys.poset();
        let mut v = vec![BigInt::zero(); target.dim];
        let mut img = 0u64;
        for i in x.support.iter() {
            let j = f.vertex[i];
            img |= bit(j);
            let li = self.local(x, i);
            let g = f.group_maps[i].apply(&li.g);
            let lj = LocalElem { n: li.n.clone(), g };
            target.add_local(&mut v, j, &lj);
        }
        target.reduce(&mut v);
        MonElem { support: tp.lower_closure(img), vec: v }
    }

    /// Checks a square against the four sums.
    pub fn square_is_valid(&self, s: &RefinementSquare, x1: &MonElem, x2: &MonElem, y1: &MonElem, y2: &MonElem) -> bool {
        [&s.z11, &s.z12, &s.z21, &s.z22].iter().all(|z| self.check_h(z).is_ok())
            && self.eq(&self.add(&s.z11, &s.z12), x1)
            && self.eq(&self.add(&s.z21, &s.z22), x2)
            && self.eq(&self.add(&s.z11, &s.z21), y1)
            && self.eq(&self.add(&s.z12, &s.z22), y2)
    }
}
