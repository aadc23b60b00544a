//! Collapsing a lifted system back onto its target by a sequence of gluings of
//! isomorphic down-sets, each checked as a pushout of monoids.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::isystem::{check_projection, CompatiblePair, ISystem, LocalElem, SystemError, SystemHom};
use crate::monoid::{MonElem, Monoid};
use crate::poset::{bit, LowerSet};

#[derive(Debug, Clone, thiserror::Error)]
pub enum SurgeryError {
    #[error("{0} is not a maximal element")]
    NotMaximal(String),
    #[error("no valid collapse step from a system with {0} elements")]
    NoValidStep(usize),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("trace check failed: {0}")]
    Check(String),
}

/// One gluing `before -> after` of `pair.i2` onto `pair.i1`.
#[derive(Clone, Debug)]
pub struct SurgeryStep {
    pub before: Arc<ISystem>,
    pub after: Arc<ISystem>,
    pub pair: CompatiblePair,
    pub projection: SystemHom,
}

#[derive(Clone, Debug)]
pub struct SurgeryTrace {
    pub initial: Arc<ISystem>,
    pub steps: Vec<SurgeryStep>,
    pub final_system: Arc<ISystem>,
    pub target: Arc<ISystem>,
    /// Map from the initial system onto the target.
    pub psi: Vec<usize>,
    /// Map from the final system onto the target; bijective.
    pub final_map: Vec<usize>,
}

impl SurgeryStep {
    /// A preimage of `x` under the step projection.
    pub fn section(&self, after: &Monoid, before: &Monoid, x: &MonElem) -> MonElem {
        let b = &self.before;
        // after-index -> before-index
        let mut back = vec![usize::MAX; self.after.len()];
        for (i, &v) in self.projection.vertex.iter().enumerate() {
            if !self.pair.i2.contains(i) {
                back[v] = i;
            }
        }
        let mut keep = 0u64;
        let mut vec = before.zero().vec;
        for a in x.support.iter() {
            let i = back[a];
            let l = after.local(x, a);
            let zero = l.n.as_ref().is_some_and(|n| n.sign() == num_bigint::Sign::NoSign) && l.g.is_zero();
            if !zero {
                keep |= bit(i);
            }
            for (s, v) in before.range(i).zip(l.coords()) {
                vec[s] = v;
            }
        }
        let support = b.poset().lower_closure(keep);
        for i in 0..b.len() {
            if !support.contains(i) {
                for s in before.range(i) {
                    vec[s] = 0.into();
                }
            }
        }
        MonElem { support, vec }
    }

    /// Moves an element supported in `I1` onto `I2` along the pair's isomorphism.
    pub fn transport(&self, m: &Monoid, x: &MonElem) -> MonElem {
        let mut vec = m.zero().vec;
        let mut support = 0u64;
        for i in x.support.iter() {
            let j = self.pair.iso[&i];
            support |= bit(j);
            for (s, t) in m.range(i).zip(m.range(j)) {
                vec[t] = x.vec[s].clone();
            }
        }
        MonElem { support: LowerSet(support), vec }
    }
}

/// Outcome of sampled pushout checks on one step.
#[derive(Clone, Debug, Default)]
pub struct PushoutReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl PushoutReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples the coequalizer properties of a step: equalization of the two ideal
/// embeddings, the section property and invariance under elementary moves.
pub fn verify_pushout<R: Rng + ?Sized>(step: &SurgeryStep, samples: usize, rng: &mut R) -> PushoutReport {
    let before = Monoid::new(step.before.clone());
    let after = Monoid::new(step.after.clone());
    let pi = |x: &MonElem| before.map_elem(&step.projection, &after, x);
    let mut rep = PushoutReport::default();
    let in_i1: Vec<LowerSet> =
        before.lower_sets().iter().copied().filter(|l| l.is_subset(step.pair.i1)).collect();
    let i1: Vec<usize> = step.pair.i1.iter().collect();
    for n in 0..samples {
        let x = before.sample_in(in_i1[rng.gen_range(0..in_i1.len())], rng);
        let y = step.transport(&before, &x);
        rep.checks += 1;
        if !after.eq(&pi(&x), &pi(&y)) {
            rep.failures.push(format!("sample {n}: embeddings of {x:?} not equalized"));
        }
        let z = after.sample(rng);
        rep.checks += 1;
        let s = step.section(&after, &before, &z);
        if before.check_h(&s).is_err() || !after.eq(&pi(&s), &z) {
            rep.failures.push(format!("sample {n}: section fails on {z:?}"));
        }
        if !i1.is_empty() {
            let i = i1[rng.gen_range(0..i1.len())];
            let j = step.pair.iso[&i];
            let u = before.sample_in(before.system().poset().down(i), rng);
            let u = before.local(&before.concentrate(&u), i);
            let base = before.sample(rng);
            let l = LocalElem { n: u.n.clone(), g: u.g };
            let (Ok(a), Ok(b)) = (before.chi(i, &l), before.chi(j, &l)) else {
                rep.failures.push(format!("sample {n}: invalid local coordinate"));
                continue;
            };
            rep.checks += 1;
            if !after.eq(&pi(&before.add(&base, &a)), &pi(&before.add(&base, &b))) {
                rep.failures.push(format!("sample {n}: elementary move at {} changes the image", before.system().id(i)));
            }
        }
        let (u, v) = (before.sample(rng), before.sample(rng));
        rep.checks += 1;
        if !after.eq(&pi(&before.add(&u, &v)), &after.add(&pi(&u), &pi(&v))) {
            rep.failures.push(format!("sample {n}: projection is not additive"));
        }
    }
    rep
}

/// Candidate gluings of `cur` compatible with `psi`, best first: larger images in a
/// linear extension of the target first, then smaller indices.
fn candidates(cur: &ISystem, target: &ISystem, psi: &[usize]) -> Vec<CompatiblePair> {
    let p = cur.poset();
    let rank: BTreeMap<usize, usize> =
        target.poset().linear_extension().into_iter().enumerate().map(|(r, i)| (i, r)).collect();
    let injective_on = |l: LowerSet| {
        let img = l.iter().fold(0u64, |a, i| a | bit(psi[i]));
        (img.count_ones() as usize == l.len()).then_some(img)
    };
    let mut out = Vec::new();
    for u in 0..cur.len() {
        for v in u + 1..cur.len() {
            if psi[u] != psi[v] {
                continue;
            }
            let (du, dv) = (p.down(u), p.down(v));
            if !du.intersection(dv).is_empty() {
                continue;
            }
            match (injective_on(du), injective_on(dv)) {
                (Some(a), Some(b)) if a == b => {}
                _ => continue,
            }
            let iso = du
                .iter()
                .map(|a| (a, dv.iter().find(|&b| psi[b] == psi[a]).expect("equal images")))
                .collect();
            out.push((rank[&psi[u]], u, v, CompatiblePair { i1: du, i2: dv, iso }));
        }
    }
    out.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    out.into_iter().map(|c| c.3).collect()
}

const SEARCH_NODES: usize = 10_000;

fn collapse(
    cur: Arc<ISystem>,
    target: &ISystem,
    psi: Vec<usize>,
    steps: &mut Vec<SurgeryStep>,
    nodes: &mut usize,
) -> Result<Option<(Arc<ISystem>, Vec<usize>)>, SurgeryError> {
    if cur.len() == target.len() {
        return Ok(Some((cur, psi)));
    }
    for pair in candidates(&cur, target, &psi) {
        *nodes += 1;
        if *nodes > SEARCH_NODES {
            return Err(SurgeryError::NoValidStep(cur.len()));
        }
        let Ok((after, proj)) = pair.crown_system(&cur) else {
            continue;
        };
        let mut next = vec![usize::MAX; after.len()];
        for (i, &v) in proj.vertex.iter().enumerate() {
            next[v] = psi[i];
        }
        if check_projection(after.poset(), target.poset(), &next).is_err() {
            continue;
        }
        let after = Arc::new(after);
        steps.push(SurgeryStep { before: cur.clone(), after: after.clone(), pair, projection: proj });
        if let Some(done) = collapse(after, target, next, steps, nodes)? {
            return Ok(Some(done));
        }
        steps.pop();
    }
    Ok(None)
}

fn run(initial: ISystem, target: ISystem, psi: Vec<usize>) -> Result<SurgeryTrace, SurgeryError> {
    check_projection(initial.poset(), target.poset(), &psi).map_err(SurgeryError::Check)?;
    let initial = Arc::new(initial);
    let mut steps = Vec::new();
    let mut nodes = 0;
    let (final_system, final_map) = collapse(initial.clone(), &target, psi.clone(), &mut steps, &mut nodes)?
        .ok_or(SurgeryError::NoValidStep(initial.len()))?;
    let trace = SurgeryTrace { initial, steps, final_system, target: Arc::new(target), psi, final_map };
    trace.check()?;
    Ok(trace)
}

/// Lifts `down(k)` to its chain tree and collapses back, recording each gluing.
pub fn collapse_sequence(j: &ISystem, k: usize) -> Result<SurgeryTrace, SurgeryError> {
    let p = j.poset();
    if !p.is_maximal(k) {
        return Err(SurgeryError::NotMaximal(j.id(k).to_string()));
    }
    let base = j.restrict(p.down(k))?;
    let top = base.index_of(j.id(k)).map_err(SystemError::from)?;
    let tree = base.poset().chain_tree(top).map_err(SystemError::from)?;
    let (initial, _) = base.pullback(tree.tree.clone(), tree.psi.clone())?;
    if !initial.poset().chain_up_property() {
        return Err(SurgeryError::Check("lifted poset does not have chains as up-sets".into()));
    }
    run(initial, base, tree.psi)
}

/// Starts from the disjoint union of the systems over `down(k)`, `k` maximal, and
/// glues shared parts until the original system is reached.
pub fn maximal_decomposition(j: &ISystem) -> Result<SurgeryTrace, SurgeryError> {
    let p = j.poset();
    let mut parts = Vec::new();
    let mut psi = Vec::new();
    for k in p.maximal_elements() {
        let r = j.restrict(p.down(k))?;
        for i in 0..r.len() {
            psi.push(j.index_of(r.id(i)).map_err(SystemError::from)?);
        }
        parts.push((format!("{}:", j.id(k)), r));
    }
    let refs: Vec<(String, &ISystem)> = parts.iter().map(|(s, r)| (s.clone(), r)).collect();
    let initial = ISystem::disjoint_union(&refs)?;
    run(initial, j.clone(), psi)
}

impl SurgeryTrace {
    /// Re-validates every stage: systems valid, projections composing to `psi`,
    /// final map an isomorphism of systems onto the target.
    pub fn check(&self) -> Result<(), SurgeryError> {
        let fail = |s: String| Err(SurgeryError::Check(s));
        let mut map: Vec<usize> = (0..self.initial.len()).collect();
        let mut cur = self.initial.clone();
        for (n, st) in self.steps.iter().enumerate() {
            if !Arc::ptr_eq(&st.before, &cur) && !st.before.same_as(&cur) {
                return fail(format!("step {n} does not start where the previous ended"));
            }
            if !st.after.validate().is_empty() {
                return fail(format!("step {n} produces an invalid system"));
            }
            st.projection.check().map_err(SurgeryError::Check)?;
            map = map.iter().map(|&i| st.projection.vertex[i]).collect();
            cur = st.after.clone();
        }
        if self.final_system.len() != cur.len() {
            return fail("final system differs from the last step".into());
        }
        for (i, &m) in map.iter().enumerate() {
            if self.final_map[m] != self.psi[i] {
                return fail(format!("composite projection differs at {}", self.initial.id(i)));
            }
        }
        let mut seen = self.final_map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.target.len() || self.final_map.len() != self.target.len() {
            return fail("final map is not bijective".into());
        }
        let gm = (0..cur.len()).map(|i| crate::fgab::GroupHom::identity(cur.group(i).clone(), false)).collect();
        SystemHom::new(cur.clone(), self.target.clone(), self.final_map.clone(), gm).map_err(SurgeryError::Check)?;
        if !cur.poset().is_isomorphic(self.target.poset()) {
            return fail("final poset is not isomorphic to the target".into());
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Systems in order: initial, after each step.
    pub fn stages(&self) -> Vec<Arc<ISystem>> {
        std::iter::once(self.initial.clone()).chain(self.steps.iter().map(|s| s.after.clone())).collect()
    }
}
