//! Independent oracles for the acceptance harness and integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use refmon::fgab::GroupElem;
use refmon::{FgGroup, ISystem, LocalElem, LowerSet, MonElem, Monoid};

/// Normal form in a trivial-group system: support and multiplicities at free maxima.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pierce {
    pub support: u64,
    pub mult: BTreeMap<usize, i64>,
}

pub fn maxima(s: &ISystem, a: u64) -> Vec<usize> {
    s.poset().max_of(LowerSet(a))
}

impl Pierce {
    pub fn of(m: &Monoid, x: &MonElem) -> Self {
        let s = m.system();
        let mult = maxima(s, x.support.0)
            .into_iter()
            .filter(|&j| s.kind(j).is_free())
            .map(|j| (j, m.n_at(x, j).to_i64().unwrap()))
            .collect();
        Self { support: x.support.0, mult }
    }

    pub fn add(s: &ISystem, x: &Self, y: &Self) -> Self {
        let support = x.support | y.support;
        let mult = maxima(s, support)
            .into_iter()
            .filter(|&j| s.kind(j).is_free())
            .map(|j| (j, x.mult.get(&j).copied().unwrap_or(0) + y.mult.get(&j).copied().unwrap_or(0)))
            .collect();
        Self { support, mult }
    }

    pub fn leq(s: &ISystem, x: &Self, y: &Self) -> bool {
        if x.support & !y.support != 0 {
            return false;
        }
        maxima(s, y.support)
            .into_iter()
            .filter(|&j| s.kind(j).is_free() && x.support & (1 << j) != 0)
            .all(|j| x.mult[&j] <= y.mult[&j])
    }
}

/// Every representative vector of a trivial-group system with `n <= bound`.
pub fn trivial_group_elements(m: &Monoid, bound: i64) -> Vec<MonElem> {
    let s = m.system();
    let mut out = Vec::new();
    for &a in m.lower_sets() {
        let maxes = maxima(s, a.0);
        let free: Vec<usize> = a.iter().filter(|&i| s.kind(i).is_free()).collect();
        let ranges: Vec<(i64, i64)> =
            free.iter().map(|i| if maxes.contains(i) { (1, bound) } else { (0, bound) }).collect();
        let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let mut v = m.zero().vec;
            for (k, &i) in free.iter().enumerate() {
                v[m.range(i).start] = cur[k].into();
            }
            out.push(MonElem { support: a, vec: v });
            let mut k = 0;
            loop {
                if k == cur.len() {
                    break;
                }
                if cur[k] < ranges[k].1 {
                    cur[k] += 1;
                    break;
                }
                cur[k] = ranges[k].0;
                k += 1;
            }
            if k == cur.len() {
                break;
            }
        }
    }
    out
}

/// All local coordinates at `i` with `1 <= n <= nmax` (free) over a finite group.
pub fn local_elems(s: &ISystem, i: usize, nmax: i64, with_zero: bool) -> Vec<LocalElem> {
    let gs = s.group(i).enumerate().expect("finite group");
    let mut out = Vec::new();
    if s.kind(i).is_free() {
        if with_zero {
            out.push(LocalElem::free(0, s.group(i).zero()));
        }
        for n in 1..=nmax {
            for g in &gs {
                out.push(LocalElem::free(n, g.clone()));
            }
        }
    } else {
        for g in gs {
            out.push(LocalElem::reg(g));
        }
    }
    out
}

/// The vectors of `H_a` with `n <= nmax` and the partition generated by the moves
/// `x + chi(a,i,alpha) <-> x + chi(a,j,phi_ji(alpha))`, `i < j` maximal in `a`.
/// Returns the number of discrepancies against `Monoid::eq`.
pub fn congruence_discrepancies(m: &Monoid, a: LowerSet, nmax: i64) -> (usize, usize) {
    let s = m.system();
    let p = s.poset();
    let maxes = p.max_of(a);
    let members: Vec<usize> = a.iter().collect();
    let choices: Vec<Vec<LocalElem>> =
        members.iter().map(|&i| local_elems(s, i, nmax, !maxes.contains(&i))).collect();
    let mut vecs: Vec<Vec<BigInt>> = Vec::new();
    let mut idx = vec![0usize; members.len()];
    'outer: loop {
        let mut v = m.zero().vec;
        for (k, &i) in members.iter().enumerate() {
            for (slot, c) in m.range(i).zip(choices[k][idx[k]].coords()) {
                v[slot] = c;
            }
        }
        vecs.push(v);
        for k in 0..idx.len() {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    let pos: HashMap<Vec<BigInt>, usize> = vecs.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
    let mut uf: Vec<usize> = (0..vecs.len()).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let n = uf[y];
            uf[y] = r;
            y = n;
        }
        r
    }
    let reduce = |v: &mut Vec<BigInt>| {
        for i in a.iter() {
            let r = m.range(i);
            let hat = s.hat_group(i);
            let red = hat.reduce(GroupElem { coords: v[r.clone()].to_vec() });
            v[r].clone_from_slice(&red.coords);
        }
    };
    for x in &vecs {
        for &j in &maxes {
            for i in a.iter().filter(|&i| p.lt(i, j)) {
                for alpha in local_elems(s, i, nmax, false) {
                    let mut u = x.clone();
                    for (slot, c) in m.range(i).zip(alpha.coords()) {
                        u[slot] += c;
                    }
                    let mut w = x.clone();
                    let img = s.apply_hat(i, j, &alpha);
                    let gj = m.range(j).start + usize::from(s.kind(j).is_free());
                    for (k, c) in img.coords.into_iter().enumerate() {
                        w[gj + k] += c;
                    }
                    reduce(&mut u);
                    reduce(&mut w);
                    if let (Some(&pu), Some(&pw)) = (pos.get(&u), pos.get(&w)) {
                        let (ru, rw) = (find(&mut uf, pu), find(&mut uf, pw));
                        uf[ru] = rw;
                    }
                }
            }
        }
    }
    // compare partitions: union-find classes against quotient keys
    let mut by_root: HashMap<usize, GroupElem> = HashMap::new();
    let mut by_key: HashMap<GroupElem, usize> = HashMap::new();
    let mut bad = 0;
    for (k, v) in vecs.iter().enumerate() {
        let r = find(&mut uf, k);
        let key = m.class_key(&MonElem { support: a, vec: v.clone() }).1;
        match by_root.get(&r) {
            Some(prev) if *prev != key => bad += 1,
            Some(_) => {}
            None => {
                by_root.insert(r, key.clone());
            }
        }
        match by_key.get(&key) {
            Some(&prev) if prev != r => bad += 1,
            Some(_) => {}
            None => {
                by_key.insert(key, r);
            }
        }
    }
    (vecs.len(), bad)
}

/// Subgroup generated by `gens` in a finite group, by closure.
pub fn finite_span(g: &FgGroup, gens: &[GroupElem]) -> HashSet<GroupElem> {
    let mut seen: HashSet<GroupElem> = HashSet::new();
    let mut stack = vec![g.zero()];
    seen.insert(g.zero());
    while let Some(x) = stack.pop() {
        for s in gens {
            for y in [g.add(&x, s), g.sub(&x, s)] {
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
    }
    seen
}
