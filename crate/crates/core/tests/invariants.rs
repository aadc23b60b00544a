use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use refmon::fgab::{smith, subgroup_membership, IntMatrix};
use refmon::isystem::{parse_system, serialize_system};
use refmon::random::{planted_equation, random_poset, random_system, GenParams};
use refmon::{FgGroup, GroupElem, Monoid};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..=4, 0usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-12i64..=12, c), r).prop_map(move |rows| {
            let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            IntMatrix::from_rows(&rows, c)
        })
    })
}

fn system(seed: u64, chain_up: bool) -> Monoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Monoid::new(random_system(&mut rng, &GenParams { chain_up, ..GenParams::default() }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_decomposes(a in matrix()) {
        let s = smith(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let inv = s.invariants();
        prop_assert!(inv.windows(2).all(|w| &w[1] % &w[0] == BigInt::from(0)));
        prop_assert_eq!(inv.len(), s.rank());
    }

    #[test]
    fn membership_witness_sums_to_target(
        t in prop::collection::vec(2i64..=6, 0..=2),
        rank in 0usize..=1,
        raw in prop::collection::vec(prop::collection::vec(-7i64..=7, 3), 0..=3),
        target in prop::collection::vec(-7i64..=7, 3),
    ) {
        let mut t = t;
        t.sort_unstable();
        // keep a divisibility chain
        if t.len() == 2 { t[1] *= t[0]; }
        let g = FgGroup::new(rank, t.iter().map(|&x| BigInt::from(x)).collect()).unwrap();
        let n = g.len();
        let elem = |v: &[i64]| g.reduce(GroupElem { coords: v[..n].iter().map(|&x| BigInt::from(x)).collect() });
        let gens: Vec<GroupElem> = raw.iter().map(|v| elem(v)).collect();
        let v = elem(&target);
        if let Some(coef) = subgroup_membership(&g, &gens, &v) {
            let sum = gens.iter().zip(&coef).fold(g.zero(), |acc, (x, c)| g.add(&acc, &g.scale(c, x)));
            prop_assert_eq!(sum, v);
        }
    }

    #[test]
    fn lower_sets_form_a_lattice(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poset(&mut rng, 5, 0.4, false);
        let ls = p.lower_sets();
        for &a in &ls {
            for &b in &ls {
                prop_assert!(p.is_lower_set(a.union(b).0) && p.is_lower_set(a.intersection(b).0));
            }
        }
        let ext = p.linear_extension();
        for (i, j) in p.strict_pairs() {
            let pos = |x| ext.iter().position(|&e| e == x).unwrap();
            prop_assert!(pos(i) < pos(j));
        }
    }

    #[test]
    fn serialization_is_canonical(seed in any::<u64>()) {
        let m = system(seed, false);
        let text = serialize_system(m.system());
        let back = parse_system(&text).unwrap();
        prop_assert!(back.same_as(m.system()));
        prop_assert_eq!(serialize_system(&back), text);
    }

    #[test]
    fn addition_is_commutative_and_associative(seed in any::<u64>()) {
        let m = system(seed, false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let (x, y, z) = (m.sample(&mut rng), m.sample(&mut rng), m.sample(&mut rng));
        prop_assert!(m.eq(&m.add(&x, &y), &m.add(&y, &x)));
        prop_assert!(m.eq(&m.add(&m.add(&x, &y), &z), &m.add(&x, &m.add(&y, &z))));
        prop_assert!(m.eq(&m.add(&x, &m.zero()), &x));
        prop_assert!(m.eq(&m.concentrate(&x), &x));
    }

    #[test]
    fn order_is_a_preorder_with_witnesses(seed in any::<u64>()) {
        let m = system(seed, false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let (x, z, w) = (m.sample(&mut rng), m.sample(&mut rng), m.sample(&mut rng));
        let y = m.add(&x, &z);
        let u = m.add(&y, &w);
        prop_assert!(m.is_leq(&x, &x).unwrap());
        prop_assert!(m.is_leq(&m.zero(), &x).unwrap());
        let wit = m.leq(&x, &y).unwrap();
        prop_assert!(wit.is_some());
        prop_assert!(m.eq(&m.add(&x, &wit.unwrap()), &y));
        prop_assert!(m.is_leq(&x, &u).unwrap());
    }

    #[test]
    fn planted_equations_refine(seed in any::<u64>(), chain_up in any::<bool>()) {
        let m = system(seed, chain_up);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let [x1, x2, y1, y2] = planted_equation(&m, &mut rng);
        let s = m.refine(&x1, &x2, &y1, &y2).unwrap();
        prop_assert!(m.square_is_valid(&s, &x1, &x2, &y1, &y2));
        if chain_up {
            let s = m.refine_chain_up(&x1, &x2, &y1, &y2).unwrap();
            prop_assert!(m.square_is_valid(&s, &x1, &x2, &y1, &y2));
        }
    }
}
