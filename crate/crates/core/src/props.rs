//! Sampled property suites over one system, deterministic in the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::isystem::{ISystem, SystemHom};
use crate::monoid::{ElemClass, Monoid, MonoidError};
use crate::random::{planted_equation, rejection_equation};

#[derive(Clone, Debug)]
pub struct PropConfig {
    pub seed: u64,
    pub samples: usize,
    pub budget: u64,
}

impl Default for PropConfig {
    fn default() -> Self {
        Self { seed: 0, samples: 30, budget: crate::fgab::Budget::DEFAULT_NODES }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PropResult {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// Cases abandoned on the feasibility budget.
    pub aborted: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropReport {
    pub seed: u64,
    pub samples: usize,
    pub results: Vec<PropResult>,
}

impl PropReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failed == 0)
    }

    pub fn aborted(&self) -> bool {
        self.results.iter().any(|r| r.aborted > 0)
    }
}

struct Tally {
    res: PropResult,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { res: PropResult { name, checked: 0, failed: 0, aborted: 0, first_failure: None } }
    }

    fn record(&mut self, outcome: Result<bool, MonoidError>, what: impl FnOnce() -> String) {
        match outcome {
            Ok(true) => self.res.checked += 1,
            Ok(false) => {
                self.res.checked += 1;
                self.res.failed += 1;
                if self.res.first_failure.is_none() {
                    self.res.first_failure = Some(what());
                }
            }
            Err(MonoidError::ResourceLimit) => self.res.aborted += 1,
            Err(e) => {
                self.res.checked += 1;
                self.res.failed += 1;
                if self.res.first_failure.is_none() {
                    self.res.first_failure = Some(format!("{}: {e}", what()));
                }
            }
        }
    }
}

pub const PROPERTY_NAMES: [&str; 12] = [
    "conical",
    "defining-relations",
    "congruence",
    "refinement",
    "refinement-rejection",
    "chain-up-refinement",
    "separativity",
    "unperforation",
    "classification",
    "ideals",
    "induced-maps",
    "primes",
];

/// Runs every suite on `sys`; the same seed gives the same report.
pub fn run_props(sys: &ISystem, cfg: &PropConfig) -> PropReport {
    let m = Monoid::new(sys.clone()).with_budget(cfg.budget);
    let results = PROPERTY_NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(k as u64));
            run_one(&m, name, cfg.samples, &mut rng)
        })
        .collect();
    PropReport { seed: cfg.seed, samples: cfg.samples, results }
}

fn run_one(m: &Monoid, name: &'static str, samples: usize, rng: &mut ChaCha8Rng) -> PropResult {
    let mut t = Tally::new(name);
    let sys = m.system();
    for _ in 0..samples {
        match name {
            "conical" => {
                let (x, y) = (m.sample(rng), m.sample(rng));
                let s = m.add(&x, &y);
                t.record(Ok(!m.eq(&s, &m.zero()) || (x.is_zero() && y.is_zero())), || format!("{x:?} + {y:?}"));
            }
            "defining-relations" => {
                let pairs = sys.poset().strict_pairs();
                if pairs.is_empty() {
                    break;
                }
                let (i, j) = pairs[rng.gen_range(0..pairs.len())];
                let xj = m.local(&m.concentrate(&m.sample_in(sys.poset().down(j), rng)), j);
                let yi = m.local(&m.concentrate(&m.sample_in(sys.poset().down(i), rng)), i);
                let lhs = m.add(&m.chi(j, &xj).expect("valid"), &m.chi(i, &yi).expect("valid"));
                let mut moved = xj.clone();
                let g = sys.group(j);
                moved.g = g.add(&xj.g, &sys.apply_hat(i, j, &yi));
                let rhs = m.chi(j, &moved).expect("valid");
                t.record(Ok(m.eq(&lhs, &rhs)), || format!("at {} < {}", sys.id(i), sys.id(j)));
            }
            "congruence" => {
                // x ~ y implies x + z ~ y + z, with y another representative of x
                let x = m.sample(rng);
                let y = m.concentrate(&x);
                let z = m.sample(rng);
                t.record(Ok(m.eq(&x, &y) && m.eq(&m.add(&x, &z), &m.add(&y, &z))), || format!("{x:?}, {z:?}"));
            }
            "refinement" => {
                let [x1, x2, y1, y2] = planted_equation(m, rng);
                t.record(m.refine(&x1, &x2, &y1, &y2).map(|s| m.square_is_valid(&s, &x1, &x2, &y1, &y2)), || {
                    format!("{x1:?} + {x2:?} = {y1:?} + {y2:?}")
                });
            }
            "refinement-rejection" => match rejection_equation(m, rng, 20) {
                Ok(Some([x1, x2, y1, y2])) => {
                    t.record(m.refine(&x1, &x2, &y1, &y2).map(|s| m.square_is_valid(&s, &x1, &x2, &y1, &y2)), || {
                        format!("{x1:?} + {x2:?} = {y1:?} + {y2:?}")
                    })
                }
                Ok(None) => {}
                Err(e) => t.record(Err(e), String::new),
            },
            "chain-up-refinement" => {
                if !sys.poset().chain_up_property() {
                    break;
                }
                let [x1, x2, y1, y2] = planted_equation(m, rng);
                t.record(
                    m.refine_chain_up(&x1, &x2, &y1, &y2).map(|s| m.square_is_valid(&s, &x1, &x2, &y1, &y2)),
                    || format!("{x1:?} + {x2:?} = {y1:?} + {y2:?}"),
                );
            }
            "separativity" => {
                let x = m.sample(rng);
                let y = m.sample_in(x.support, rng);
                let (x2, y2, xy) = (m.scale(2, &x), m.scale(2, &y), m.add(&x, &y));
                let hyp = m.eq(&x2, &y2) && m.eq(&y2, &xy);
                t.record(Ok(!hyp || m.eq(&x, &y)), || format!("{x:?}, {y:?}"));
            }
            "unperforation" => {
                let x = m.sample(rng);
                let y = if rng.gen_bool(0.5) { m.add(&x, &m.sample(rng)) } else { m.sample(rng) };
                let n = rng.gen_range(2..=4u32);
                let out = m.is_leq(&m.scale(n, &x), &m.scale(n, &y)).and_then(|h| Ok(!h || m.is_leq(&x, &y)?));
                t.record(out, || format!("{n}: {x:?} <= {y:?}"));
            }
            "classification" => {
                let x = m.sample(rng);
                let out = m.is_leq(&m.scale(2, &x), &x).map(|reg| {
                    let c = m.classify(&x);
                    let support_says_reg = c != ElemClass::FreeElt;
                    let n_invariant = sys
                        .poset()
                        .max_of(x.support)
                        .into_iter()
                        .filter(|&j| sys.kind(j).is_free())
                        .all(|j| m.n_at(&x, j) == m.n_at(&m.concentrate(&x), j));
                    reg == support_says_reg && (c == ElemClass::Zero) == x.is_zero() && n_invariant
                });
                t.record(out, || format!("{x:?}"));
            }
            "ideals" => {
                let ls = m.lower_sets();
                let (a, b) = (ls[rng.gen_range(0..ls.len())], ls[rng.gen_range(0..ls.len())]);
                let x = m.sample(rng);
                let ok = m.in_ideal(&x, a.union(b)) == (x.support.is_subset(a.union(b)))
                    && (m.in_ideal(&x, a) && m.in_ideal(&x, b)) == m.in_ideal(&x, a.intersection(b))
                    && m.ideal_generated_by(&x) == x.support;
                t.record(Ok(ok), || format!("{x:?} against {a:?}, {b:?}"));
            }
            "induced-maps" => {
                let (quot, f) = sys.antisymmetrize();
                let q = Monoid::new(quot);
                let id = SystemHom::identity(sys);
                let (x, y) = (m.sample(rng), m.sample(rng));
                let add_ok = q.eq(&m.map_elem(&f, &q, &m.add(&x, &y)), &q.add(&m.map_elem(&f, &q, &x), &m.map_elem(&f, &q, &y)));
                let id_ok = m.eq(&m.map_elem(&id, m, &x), &x);
                t.record(Ok(add_ok && id_ok), || format!("{x:?}, {y:?}"));
            }
            "primes" => {
                let x = m.sample_nonzero(rng);
                if !m.is_prime(&x) {
                    continue;
                }
                let (a, b) = (m.sample(rng), m.sample(rng));
                let out = (|| {
                    if !m.is_leq(&x, &m.add(&a, &b))? {
                        return Ok(true);
                    }
                    Ok(m.is_leq(&x, &a)? || m.is_leq(&x, &b)?)
                })();
                t.record(out, || format!("{x:?} below {a:?} + {b:?}"));
            }
            _ => unreachable!("unknown property {name}"),
        }
    }
    t.res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_pass() {
        let cfg = PropConfig { samples: 6, ..PropConfig::default() };
        for (name, text) in fixtures::ALL {
            let r = run_props(&fixtures::load(text), &cfg);
            assert!(r.passed(), "{name}: {:?}", r.results);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let s = fixtures::load(fixtures::SYS_B);
        let cfg = PropConfig { seed: 9, samples: 5, ..PropConfig::default() };
        assert_eq!(run_props(&s, &cfg).results, run_props(&s, &cfg).results);
    }
}
