//! Fixed workloads shared by the benchmarks, so the timed code sees the same inputs
//! on every run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use refmon::random::{planted_equation, random_system, GenParams};
use refmon::{fixtures, MonElem, Monoid};

/// Equations `x1 + x2 = y1 + y2`.
pub type Equation = [MonElem; 4];

pub struct Workload {
    pub name: String,
    pub monoid: Monoid,
    pub equations: Vec<Equation>,
    pub samples: Vec<MonElem>,
}

fn build(name: String, m: Monoid, rng: &mut ChaCha8Rng, n: usize) -> Workload {
    let equations = (0..n).map(|_| planted_equation(&m, rng)).collect();
    let samples = (0..n).map(|_| m.sample(rng)).collect();
    Workload { name, monoid: m, equations, samples }
}

/// One workload per fixture.
pub fn fixture_workloads(n: usize, seed: u64) -> Vec<Workload> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fixtures::ALL
        .iter()
        .map(|(name, text)| build(name.to_string(), Monoid::new(fixtures::load(text)), &mut rng, n))
        .collect()
}

/// Random systems of exactly `size` elements.
pub fn random_workload(size: usize, chain_up: bool, n: usize, seed: u64) -> Workload {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = GenParams { min_size: size, max_size: size, chain_up, ..GenParams::default() };
    let m = Monoid::new(random_system(&mut rng, &params));
    build(format!("random{size}{}", if chain_up { "-up" } else { "" }), m, &mut rng, n)
}
