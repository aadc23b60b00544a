//! Seeded generators: posets, valid systems, and equal sums for refinement tests.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::fgab::{Budget, FgGroup, GroupHom, IntMatrix, Quotient};
use crate::isystem::{ISystem, Kind};
use crate::monoid::{MonElem, Monoid, MonoidError};
use crate::poset::Poset;

#[derive(Clone, Debug)]
pub struct GenParams {
    pub min_size: usize,
    pub max_size: usize,
    /// Probability of each relation `i < j` in the underlying order (before closure).
    pub edge_prob: f64,
    pub free_prob: f64,
    /// Every up-set a chain (a forest, roots on top).
    pub chain_up: bool,
    pub groups: Vec<FgGroup>,
    /// Attempts at maps satisfying generation-from-below before a free element turns regular.
    pub retries: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            min_size: 1,
            max_size: 5,
            edge_prob: 0.4,
            free_prob: 0.5,
            chain_up: false,
            groups: vec![
                FgGroup::trivial(),
                FgGroup::cyclic(2),
                FgGroup::cyclic(3),
                FgGroup::cyclic(4),
                FgGroup::free(1),
            ],
            retries: 20,
        }
    }
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Random order on `n` points; indices are a linear extension.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, n: usize, edge_prob: f64, chain_up: bool) -> Poset {
    let mut rel = Vec::new();
    for i in 0..n {
        if chain_up {
            // one upper cover at most
            if i + 1 < n && rng.gen_bool(edge_prob.max(0.5)) {
                rel.push((i, rng.gen_range(i + 1..n)));
            }
        } else {
            for j in i + 1..n {
                if rng.gen_bool(edge_prob) {
                    rel.push((i, j));
                }
            }
        }
    }
    Poset::new(ids(n), &rel).expect("index order is acyclic")
}

/// All orders on `n` points up to isomorphism.
pub fn all_posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen: HashSet<Vec<Vec<bool>>> = HashSet::new();
    let mut out = Vec::new();
    let perms = permutations(n);
    for mask in 0u64..1 << pairs.len() {
        let rel: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &p)| p).collect();
        let p = Poset::new(ids(n), &rel).expect("index order is acyclic");
        // only the transitively closed relation sets, to visit each labeled order once
        if p.strict_pairs().len() != rel.len() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|s| (0..n).map(|a| (0..n).map(|b| p.lt(s[a], s[b])).collect()).collect::<Vec<Vec<bool>>>())
            .min()
            .expect("at least one permutation");
        if seen.insert(canon) {
            out.push(p);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// A random hom from a quotient group into `g`, as a matrix on quotient coordinates.
fn random_hom<R: Rng + ?Sized>(rng: &mut R, q: &FgGroup, g: &FgGroup) -> IntMatrix {
    let mut m = IntMatrix::zeros(g.len(), q.len());
    for c in 0..q.len() {
        let order = (c >= q.rank()).then(|| q.torsion()[c - q.rank()].clone());
        for r in 0..g.len() {
            let v = if r < g.rank() {
                // torsion generators must go to zero in a free coordinate
                if order.is_some() {
                    BigInt::zero()
                } else {
                    BigInt::from(rng.gen_range(-2i64..=2))
                }
            } else {
                let e = &g.torsion()[r - g.rank()];
                let step = match &order {
                    Some(d) => e / d.gcd(e),
                    None => BigInt::from(1),
                };
                let k = (e / &step).to_i64().expect("small modulus");
                step * rng.gen_range(0..k)
            };
            m[(r, c)] = v;
        }
    }
    m
}

/// Random valid system on a given order. Maps into `j` are a random cocone out of the
/// colimit of the system below `j`, so composites always agree.
pub fn random_system_on<R: Rng + ?Sized>(rng: &mut R, poset: Poset, params: &GenParams) -> ISystem {
    let n = poset.len();
    let mut kinds = Vec::with_capacity(n);
    let mut groups = Vec::with_capacity(n);
    let mut maps: BTreeMap<(usize, usize), GroupHom> = BTreeMap::new();
    for j in poset.linear_extension() {
        debug_assert_eq!(kinds.len(), j, "indices are a linear extension");
        let below: Vec<usize> = (0..n).filter(|&i| poset.lt(i, j)).collect();
        let mut kind = if rng.gen_bool(params.free_prob) { Kind::Free } else { Kind::Reg };
        let mut group = params.groups.choose(rng).expect("nonempty group palette").clone();
        if kind == Kind::Free && below.is_empty() {
            group = FgGroup::trivial();
        }
        kinds.push(kind);
        groups.push(group.clone());
        // colimit presentation of the part below j
        let hats: BTreeMap<usize, FgGroup> = below
            .iter()
            .map(|&i| (i, if kinds[i].is_free() { groups[i].hat() } else { groups[i].clone() }))
            .collect();
        let hat = |i: usize| hats[&i].clone();
        let mut offs = BTreeMap::new();
        let mut dim = 0;
        for &i in &below {
            offs.insert(i, dim);
            dim += hat(i).len();
        }
        let mut cols = Vec::new();
        for &i in &below {
            for (k, d) in hat(i).moduli().into_iter().enumerate() {
                if !d.is_zero() {
                    let mut c = vec![BigInt::zero(); dim];
                    c[offs[&i] + k] = d;
                    cols.push(c);
                }
            }
            for &m in below.iter().filter(|&&m| poset.lt(i, m)) {
                let hm = maps[&(i, m)].hat_matrix();
                let gm = offs[&m] + usize::from(kinds[m].is_free());
                for u in 0..hm.cols() {
                    let mut c = vec![BigInt::zero(); dim];
                    c[offs[&i] + u] += 1;
                    for r in 0..hm.rows() {
                        c[gm + r] -= &hm[(r, u)];
                    }
                    cols.push(c);
                }
            }
        }
        let q = Quotient::new(dim, &IntMatrix::from_columns(&cols, dim));
        let mut attempts = 0;
        loop {
            let f = &random_hom(rng, &q.group, &group) * &q.proj;
            let mut new_maps = Vec::new();
            for &i in &below {
                let w = hat(i).len();
                let block = f.select_columns(&(offs[&i]..offs[&i] + w).collect::<Vec<_>>());
                let (c, h) = if kinds[i].is_free() {
                    let c = crate::fgab::GroupElem { coords: block.column(0) };
                    (Some(c), block.select_columns(&(1..w).collect::<Vec<_>>()))
                } else {
                    (None, block)
                };
                let hom = GroupHom::new(groups[i].clone(), group.clone(), h, c).expect("cocone gives homs");
                new_maps.push(((i, j), hom));
            }
            let ok = kind == Kind::Reg || group.is_trivial() || {
                let (partial, top) = assemble_prefix(&poset, &kinds, &groups, &maps, &new_maps, j);
                group
                    .semigroup_generators()
                    .iter()
                    .all(|g| matches!(partial.decompose_from_below(top, g, &mut Budget::default()), Ok(Some(_))))
            };
            if ok {
                maps.extend(new_maps);
                break;
            }
            attempts += 1;
            if attempts >= params.retries {
                kind = Kind::Reg;
                kinds[j] = kind;
            }
        }
    }
    let covers = poset.cover_pairs().into_iter().map(|(i, j)| (i, j, maps[&(i, j)].clone())).collect();
    ISystem::new(poset, kinds, groups, covers).expect("generated system is valid")
}

/// The system on `down(j)` with the maps generated so far, and the index of `j` in it.
fn assemble_prefix(
    poset: &Poset,
    kinds: &[Kind],
    groups: &[FgGroup],
    maps: &BTreeMap<(usize, usize), GroupHom>,
    new_maps: &[((usize, usize), GroupHom)],
    j: usize,
) -> (ISystem, usize) {
    let d = poset.down(j);
    let (sub, old) = poset.induced(d.0);
    let pos = |x: usize| old.iter().position(|&o| o == x).expect("inside down(j)");
    let mut given = Vec::new();
    for (a, b) in sub.cover_pairs() {
        let (oa, ob) = (old[a], old[b]);
        let m = maps
            .get(&(oa, ob))
            .cloned()
            .or_else(|| new_maps.iter().find(|(k, _)| *k == (oa, ob)).map(|(_, m)| m.clone()))
            .expect("map on cover");
        given.push((pos(oa), pos(ob), m));
    }
    let k = old.iter().map(|&o| kinds[o]).collect();
    let g = old.iter().map(|&o| groups[o].clone()).collect();
    (ISystem::assemble(sub, k, g, given).expect("prefix is well formed"), pos(j))
}

/// A random valid system with `min_size..=max_size` elements.
pub fn random_system<R: Rng + ?Sized>(rng: &mut R, params: &GenParams) -> ISystem {
    let n = rng.gen_range(params.min_size..=params.max_size);
    let p = random_poset(rng, n, params.edge_prob, params.chain_up);
    random_system_on(rng, p, params)
}

/// Samples a square and returns its row and column sums `[x1, x2, y1, y2]`.
pub fn planted_equation<R: Rng + ?Sized>(m: &Monoid, rng: &mut R) -> [MonElem; 4] {
    let z: Vec<MonElem> = (0..4).map(|_| m.sample(rng)).collect();
    [m.add(&z[0], &z[1]), m.add(&z[2], &z[3]), m.add(&z[0], &z[2]), m.add(&z[1], &z[3])]
}

/// Samples `x1, x2, y1` until `y1 <= x1 + x2`, then completes `y2` by the order witness.
pub fn rejection_equation<R: Rng + ?Sized>(m: &Monoid, rng: &mut R, tries: usize) -> Result<Option<[MonElem; 4]>, MonoidError> {
    for _ in 0..tries {
        let (x1, x2, y1) = (m.sample(rng), m.sample(rng), m.sample(rng));
        let s = m.add(&x1, &x2);
        if let Some(y2) = m.leq(&y1, &s)? {
            return Ok(Some([x1, x2, y1, y2]));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn poset_counts() {
        // unlabeled posets on 1..=4 points
        let counts: Vec<usize> = (1..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16]);
    }

    #[test]
    fn generated_systems_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = GenParams::default();
        let mut free_nontrivial = 0;
        for _ in 0..40 {
            let s = random_system(&mut rng, &params);
            assert!(s.validate().is_empty());
            free_nontrivial += s.free_elements().iter().filter(|&&i| !s.group(i).is_trivial()).count();
        }
        assert!(free_nontrivial > 0, "generator never produced a free element with a nontrivial group");
    }

    #[test]
    fn chain_up_generation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let params = GenParams { chain_up: true, ..GenParams::default() };
        for _ in 0..20 {
            assert!(random_system(&mut rng, &params).poset().chain_up_property());
        }
    }
}
