use refmon_bench::{fixture_workloads, random_workload};

#[test]
fn planted_equations_hold() {
    for w in fixture_workloads(4, 11) {
        for [x1, x2, y1, y2] in &w.equations {
            let m = &w.monoid;
            assert!(m.eq(&m.add(x1, x2), &m.add(y1, y2)), "{}", w.name);
        }
    }
}

#[test]
fn workloads_are_deterministic() {
    let (a, b) = (random_workload(4, true, 5, 9), random_workload(4, true, 5, 9));
    assert_eq!(a.monoid.system().len(), 4);
    assert!(a.monoid.system().poset().chain_up_property());
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert_eq!(x.vec, y.vec);
    }
}
