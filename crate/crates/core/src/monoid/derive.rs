//! Reading a system back off the monoid: primes, their order, the archimedean
//! component groups and the maps `x -> (p + x) - p`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::fgab::{smith, unimodular_inverse, FgGroup, GroupElem, GroupHom, IntMatrix};
use crate::isystem::{ISystem, Kind, SystemError, SystemHom};
use crate::poset::Poset;

use super::{MonElem, Monoid, MonoidError};

/// The system recovered from `M(J)`, indexed like `J` (index `i` is the prime `chi_i(unit)`).
#[derive(Clone, Debug)]
pub struct DerivedSystem {
    pub system: ISystem,
    pub primes: Vec<MonElem>,
    /// Natural identifications `G_i -> G_{p_i}`.
    pub identifications: Vec<GroupHom>,
}

/// Component group of one prime, embedded in the quotient of `down(i)`.
struct Component {
    group: FgGroup,
    /// quotient coordinates of the prime itself
    prime: Vec<BigInt>,
    /// `G_p -> Q`
    embed: IntMatrix,
    /// `Q -> G_p`, valid on the kernel of the `n` functional
    coords: IntMatrix,
}

fn block_diag(a: &IntMatrix, n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(a.rows() + n, a.cols() + n);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            m[(r, c)] = a[(r, c)].clone();
        }
    }
    for k in 0..n {
        m[(a.rows() + k, a.cols() + k)] = 1.into();
    }
    m
}

impl Monoid {
    fn component_of(&self, i: usize) -> Result<Component, MonoidError> {
        let sys = self.system();
        let d = self.support_data(sys.poset().down(i));
        let q = &d.q.group;
        let prime = d.project(&self.unit_chi(i).vec).coords;
        if !sys.kind(i).is_free() {
            let id = IntMatrix::identity(q.len());
            return Ok(Component { group: q.clone(), prime, embed: id.clone(), coords: id });
        }
        // the n coordinate at i is a homomorphism Q -> Z vanishing on torsion
        let pos = d.coords.iter().position(|&c| c == self.range(i).start).expect("n coordinate in support");
        let w = d.q.lift.row(pos).to_vec();
        let r = q.rank();
        if w[r..].iter().any(|x| !x.is_zero()) || r == 0 {
            return Err(MonoidError::InternalInvariantViolation("n functional is not a free projection".into()));
        }
        let s = smith(&IntMatrix::from_rows(&[w[..r].to_vec()], r));
        let ker = s.v.select_columns(&(1..r).collect::<Vec<_>>());
        let vinv = unimodular_inverse(&s.v).select_rows(&(1..r).collect::<Vec<_>>());
        let t = q.torsion().len();
        let group = FgGroup::new(r - 1, q.torsion().to_vec())?;
        Ok(Component { group, prime, embed: block_diag(&ker, t), coords: block_diag(&vinv, t) })
    }

    /// `Q_i -> Q_j` induced by padding representatives of `down(i)` into `down(j)`.
    fn transport(&self, i: usize, j: usize) -> IntMatrix {
        let p = self.system().poset();
        let (di, dj) = (self.support_data(p.down(i)), self.support_data(p.down(j)));
        let mut pad = IntMatrix::zeros(dj.coords.len(), di.coords.len());
        for (c, g) in di.coords.iter().enumerate() {
            let r = dj.coords.iter().position(|x| x == g).expect("down(i) inside down(j)");
            pad[(r, c)] = 1.into();
        }
        &(&dj.q.proj * &pad) * &di.q.lift
    }
}

/// Builds the derived system from monoid operations only.
pub fn derive_system(m: &Monoid) -> Result<DerivedSystem, MonoidError> {
    let sys = m.system();
    let n = sys.len();
    let primes: Vec<MonElem> = (0..n).map(|i| m.unit_chi(i)).collect();
    let mut rel = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && m.is_leq(&primes[a], &primes[b])? {
                rel.push((a, b));
            }
        }
    }
    let ids = (0..n).map(|i| format!("p_{}", sys.id(i))).collect();
    let poset = Poset::new(ids, &rel).map_err(|e| MonoidError::InternalInvariantViolation(e.to_string()))?;
    let mut kinds = Vec::with_capacity(n);
    for p in &primes {
        kinds.push(if m.is_leq(&m.scale(2, p), p)? { Kind::Reg } else { Kind::Free });
    }
    let comps = (0..n).map(|i| m.component_of(i)).collect::<Result<Vec<_>, _>>()?;
    let mut maps = Vec::new();
    for (a, b) in poset.strict_pairs() {
        let l = m.transport(a, b);
        let h = &(&comps[b].coords * &l) * &comps[a].embed;
        let c = (kinds[a] == Kind::Free).then(|| GroupElem { coords: (&comps[b].coords * &l).mul_vec(&comps[a].prime) });
        let hom = GroupHom::new(comps[a].group.clone(), comps[b].group.clone(), h, c)?;
        maps.push((a, b, hom));
    }
    let groups = comps.iter().map(|c| c.group.clone()).collect();
    let system = ISystem::new(poset, kinds, groups, maps).map_err(|e| match e {
        SystemError::Invalid(v) => MonoidError::InternalInvariantViolation(format!("derived system is invalid: {v:?}")),
        other => MonoidError::InternalInvariantViolation(other.to_string()),
    })?;
    let mut identifications = Vec::with_capacity(n);
    for (i, comp) in comps.iter().enumerate() {
        let d = m.support_data(sys.poset().down(i));
        let gr = m.g_range(i);
        let cols: Vec<Vec<BigInt>> = gr
            .map(|g| {
                let mut v = vec![BigInt::zero(); m.dim()];
                v[g] = 1.into();
                comp.coords.mul_vec(&d.project(&v).coords)
            })
            .collect();
        let h = IntMatrix::from_columns(&cols, comp.group.len());
        identifications.push(GroupHom::new(sys.group(i).clone(), comp.group.clone(), h, None)?);
    }
    Ok(DerivedSystem { system, primes, identifications })
}

/// True iff the derived system is isomorphic to the original through the natural
/// identification of primes with elements and of `G_i` with the component groups.
pub fn roundtrip_check(m: &Monoid) -> Result<bool, MonoidError> {
    let d = derive_system(m)?;
    let sys = m.system();
    if sys.poset().strict_pairs() != d.system.poset().strict_pairs() {
        return Ok(false);
    }
    if !d.identifications.iter().all(GroupHom::is_isomorphism) {
        return Ok(false);
    }
    let hom = SystemHom::new(sys.clone(), d.system.clone(), (0..sys.len()).collect(), d.identifications.clone());
    Ok(hom.is_ok())
}
