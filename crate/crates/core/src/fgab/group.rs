use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::{solution_lattice, solve_linear};
use super::matrix::IntMatrix;
use super::FgabError;

/// `Z^rank + Z/d_1 + ... + Z/d_s` with `2 <= d_1 | d_2 | ... | d_s`.
///
/// Coordinates are laid out free part first, then one coordinate per torsion factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self, FgabError> {
        let two = BigInt::from(2);
        if let Some(d) = torsion.iter().find(|d| **d < two) {
            return Err(FgabError::InvalidGroup(format!("torsion factor {d} is below 2")));
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(FgabError::InvalidGroup(format!(
                    "torsion factors {} and {} do not form a divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { rank, torsion })
    }

    pub fn trivial() -> Self {
        Self { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        Self { rank, torsion: vec![] }
    }

    /// `Z/d`; `d = 1` gives the trivial group.
    pub fn cyclic(d: u64) -> Self {
        if d <= 1 {
            Self::trivial()
        } else {
            Self { rank: 0, torsion: vec![BigInt::from(d)] }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of coordinates.
    pub fn len(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 0
    }

    /// Per-coordinate modulus, 0 for free coordinates.
    pub fn moduli(&self) -> Vec<BigInt> {
        let mut m = vec![BigInt::zero(); self.rank];
        m.extend(self.torsion.iter().cloned());
        m
    }

    /// `Z x G`, with the new free coordinate in front.
    pub fn hat(&self) -> Self {
        Self { rank: self.rank + 1, torsion: self.torsion.clone() }
    }

    /// Number of elements, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem { coords: vec![BigInt::zero(); self.len()] }
    }

    /// The `k`-th standard generator.
    pub fn basis(&self, k: usize) -> GroupElem {
        let mut e = self.zero();
        e.coords[k] = BigInt::one();
        self.reduce(e)
    }

    pub fn elem(&self, coords: Vec<BigInt>) -> Result<GroupElem, FgabError> {
        if coords.len() != self.len() {
            return Err(FgabError::Dimension(format!(
                "element has {} coordinates, group has {}",
                coords.len(),
                self.len()
            )));
        }
        Ok(self.reduce(GroupElem { coords }))
    }

    pub fn elem_i64(&self, coords: &[i64]) -> Result<GroupElem, FgabError> {
        self.elem(coords.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Reduces torsion coordinates to `0 <= c < d`.
    pub fn reduce(&self, mut x: GroupElem) -> GroupElem {
        reduce_in_place(&mut x.coords[self.rank..], &self.torsion);
        x
    }

    pub fn add(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        let coords = x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect();
        self.reduce(GroupElem { coords })
    }

    pub fn neg(&self, x: &GroupElem) -> GroupElem {
        self.reduce(GroupElem { coords: x.coords.iter().map(|a| -a).collect() })
    }

    pub fn sub(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, k: &BigInt, x: &GroupElem) -> GroupElem {
        self.reduce(GroupElem { coords: x.coords.iter().map(|a| a * k).collect() })
    }

    /// Every element of a finite group, in lexicographic coordinate order.
    pub fn enumerate(&self) -> Option<Vec<GroupElem>> {
        if self.rank > 0 {
            return None;
        }
        let mut out = vec![self.zero()];
        for (t, d) in self.torsion.iter().enumerate() {
            let mut next = Vec::new();
            for e in &out {
                let mut v = BigInt::zero();
                while &v < d {
                    let mut f = e.clone();
                    f.coords[t] = v.clone();
                    next.push(f);
                    v += 1;
                }
            }
            out = next;
        }
        Some(out)
    }

    /// A semigroup generating set: torsion generators, and both signs of free generators.
    pub fn semigroup_generators(&self) -> Vec<GroupElem> {
        let mut out = Vec::new();
        for k in 0..self.rank {
            let e = self.basis(k);
            out.push(self.neg(&e));
            out.push(e);
        }
        for t in 0..self.torsion.len() {
            out.push(self.basis(self.rank + t));
        }
        out
    }
}

impl fmt::Debug for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub(crate) fn reduce_in_place(xs: &mut [BigInt], moduli: &[BigInt]) {
    for (x, d) in xs.iter_mut().zip(moduli) {
        if !d.is_zero() && (x.is_negative() || &*x >= d) {
            *x = x.mod_floor(d);
        }
    }
}

/// Element of an [`FgGroup`], stored with canonical torsion residues.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    pub coords: Vec<BigInt>,
}

impl GroupElem {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", c.join(","))
    }
}

/// Homomorphism out of `G` or, when `c` is present, semigroup homomorphism out of `N x G`
/// given by `(n, g) -> n c + h g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    pub source: FgGroup,
    pub target: FgGroup,
    /// `target.len() x source.len()`
    pub h: IntMatrix,
    pub c: Option<GroupElem>,
}

impl GroupHom {
    pub fn new(source: FgGroup, target: FgGroup, mut h: IntMatrix, c: Option<GroupElem>) -> Result<Self, FgabError> {
        if h.rows() != target.len() || h.cols() != source.len() {
            return Err(FgabError::Dimension(format!(
                "map matrix is {}x{}, expected {}x{}",
                h.rows(),
                h.cols(),
                target.len(),
                source.len()
            )));
        }
        h.reduce_rows(&target.moduli());
        // torsion must go to torsion of compatible order
        let tm = target.moduli();
        for (t, d) in source.torsion().iter().enumerate() {
            let col = source.rank() + t;
            for (i, m) in tm.iter().enumerate() {
                let v = &h[(i, col)] * d;
                let ok = if m.is_zero() { v.is_zero() } else { v.is_multiple_of(m) };
                if !ok {
                    return Err(FgabError::BadHom(format!(
                        "generator of order {d} (coordinate {col}) has image of different order"
                    )));
                }
            }
        }
        let c = match c {
            Some(c) => Some(target.elem(c.coords)?),
            None => None,
        };
        Ok(Self { source, target, h, c })
    }

    pub fn zero(source: FgGroup, target: FgGroup, free_source: bool) -> Self {
        let h = IntMatrix::zeros(target.len(), source.len());
        let c = free_source.then(|| target.zero());
        Self { source, target, h, c }
    }

    pub fn identity(g: FgGroup, free_source: bool) -> Self {
        let h = IntMatrix::identity(g.len());
        let c = free_source.then(|| g.zero());
        Self { source: g.clone(), target: g, h, c }
    }

    pub fn is_free_source(&self) -> bool {
        self.c.is_some()
    }

    /// Group part `h(g)`.
    pub fn apply(&self, g: &GroupElem) -> GroupElem {
        self.target.reduce(GroupElem { coords: self.h.mul_vec(&g.coords) })
    }

    /// `(n, g) -> n c + h g` on `Z x G`; without `c` the `n` is ignored.
    pub fn apply_hat(&self, n: &BigInt, g: &GroupElem) -> GroupElem {
        let mut v = self.h.mul_vec(&g.coords);
        if let Some(c) = &self.c {
            for (x, ci) in v.iter_mut().zip(&c.coords) {
                *x += n * ci;
            }
        }
        self.target.reduce(GroupElem { coords: v })
    }

    /// Matrix of the extension to the Grothendieck group: `[c | h]` for free sources, else `h`.
    pub fn hat_matrix(&self) -> IntMatrix {
        match &self.c {
            Some(c) => IntMatrix::from_columns(std::slice::from_ref(&c.coords), self.target.len()).hconcat(&self.h),
            None => self.h.clone(),
        }
    }

    /// `other . self`; the translation part is carried along (`c -> h_other c`).
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.target, other.source, "composing homs with mismatched groups");
        let mut h = &other.h * &self.h;
        h.reduce_rows(&other.target.moduli());
        let c = self.c.as_ref().map(|c| other.apply(c));
        GroupHom { source: self.source.clone(), target: other.target.clone(), h, c }
    }

    /// Equality as maps (matrices compared modulo target torsion).
    pub fn same_map(&self, other: &GroupHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        if self.c.is_some() != other.c.is_some() {
            return false;
        }
        let mut a = self.hat_matrix();
        let mut b = other.hat_matrix();
        let m = self.target.moduli();
        a.reduce_rows(&m);
        b.reduce_rows(&m);
        a == b
    }

    pub fn is_surjective(&self) -> bool {
        image_is_everything(&self.h, &self.target)
    }

    pub fn is_injective(&self) -> bool {
        kernel_is_trivial(&self.h, &self.source, &self.target)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }
}

/// Columns of `h` generate `target`.
pub(crate) fn image_is_everything(h: &IntMatrix, target: &FgGroup) -> bool {
    let n = target.len();
    (0..n).all(|k| {
        let v = target.basis(k);
        subgroup_membership_matrix(h, target, &v).is_some()
    })
}

/// Kernel of `h: source -> target` is trivial.
pub(crate) fn kernel_is_trivial(h: &IntMatrix, source: &FgGroup, target: &FgGroup) -> bool {
    // x with h x = 0 in target
    let Some(lat) = solution_lattice(h, &vec![BigInt::zero(); target.len()], &target.moduli()) else {
        return false;
    };
    let sm = source.moduli();
    (0..lat.basis.cols()).all(|k| {
        lat.basis
            .column(k)
            .iter()
            .zip(&sm)
            .all(|(x, d)| if d.is_zero() { x.is_zero() } else { x.is_multiple_of(d) })
    })
}

fn subgroup_membership_matrix(cols: &IntMatrix, group: &FgGroup, v: &GroupElem) -> Option<Vec<BigInt>> {
    solve_linear(cols, &v.coords, &group.moduli())
}

/// Coefficients `l` with `sum l_k gens_k = v` in `group`, or `None` if `v` is outside
/// the subgroup generated by `gens`.
pub fn subgroup_membership(group: &FgGroup, gens: &[GroupElem], v: &GroupElem) -> Option<Vec<BigInt>> {
    let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
    let m = IntMatrix::from_columns(&cols, group.len());
    let lambda = subgroup_membership_matrix(&m, group, v)?;
    debug_assert_eq!(group.reduce(GroupElem { coords: m.mul_vec(&lambda) }), *v);
    Some(lambda)
}
