use super::*;
use crate::fgab::ints;
use crate::fixtures;

#[test]
fn fixtures_are_valid() {
    for (name, text) in fixtures::ALL {
        let s = parse_system_unchecked(text).unwrap();
        assert!(s.validate().is_empty(), "{name}: {:?}", s.validate());
    }
}

#[test]
fn zero_map_breaks_generation() {
    let s = parse_system_unchecked(fixtures::SYS_B_ZERO_MAP).unwrap();
    let v = s.validate();
    assert_eq!(v.len(), 1);
    assert!(matches!(&v[0], Violation::NotGenerated { i, .. } if i == "j"));
    let s = parse_system_unchecked(fixtures::MINIMAL_FREE_TORSION).unwrap();
    assert!(matches!(&s.validate()[0], Violation::MinimalFreeNontrivial { .. }));
}

#[test]
fn functoriality_violation_detected() {
    // diamond with one path twisted by the nonzero translation
    let text = fixtures::DIAMOND.replace(r#"{"from": "y", "to": "t", "h": [[1]]}"#, r#"{"from": "y", "to": "t", "h": [[0]]}"#);
    let s = parse_system_unchecked(&text).unwrap();
    assert!(s.validate().iter().any(|v| matches!(v, Violation::Functoriality { .. })));
}

#[test]
fn json_round_trip_is_canonical() {
    for (_, text) in fixtures::ALL {
        let s = parse_system(text).unwrap();
        let out = serialize_system(&s);
        let again = parse_system(&out).unwrap();
        assert!(again.same_as(&s));
        assert_eq!(serialize_system(&again), out);
    }
}

#[test]
fn parse_errors_carry_context() {
    let e = parse_system("{\"elements\": [ {\"id\": \"x\"}").unwrap_err();
    assert!(matches!(e, SystemError::Parse(msg) if msg.contains("line")));
    let e = parse_system(r#"{"elements":[{"id":"x","kind":"odd"}]}"#).unwrap_err();
    assert!(e.to_string().contains("`x`"));
}

#[test]
fn restrictions() {
    let b = fixtures::load(fixtures::SYS_B);
    let e = b.restrict(LowerSet::EMPTY).unwrap();
    assert!(e.is_empty());
    let r = b.restrict(LowerSet(0b01)).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r.kind(0), Kind::Reg);
    assert_eq!(*r.group(0), FgGroup::cyclic(2));
    assert!(b.restrict(LowerSet(0b10)).is_err());
    let d = fixtures::load(fixtures::SYS_D);
    let i11 = d.index_of("11").unwrap();
    let r = d.restrict(d.poset().down(i11)).unwrap();
    // 11 covers 111 and 112 only
    assert_eq!(r.len(), 3);
    assert!(r.validate().is_empty());
}

#[test]
fn antisymmetrization() {
    let b = fixtures::load(fixtures::SYS_B);
    let (t, f) = b.antisymmetrize();
    assert!(t.groups().iter().all(FgGroup::is_trivial));
    assert_eq!(t.kinds(), b.kinds());
    assert!(f.check().is_ok());
    let c = fixtures::load(fixtures::SYS_C);
    assert!(c.antisymmetrize().0.group(0).is_trivial());
    let a = fixtures::load(fixtures::SYS_A);
    assert!(a.antisymmetrize().0.same_as(&a));
}

#[test]
fn pullbacks() {
    let d = fixtures::load(fixtures::SYS_D);
    let star = d.index_of("*").unwrap();
    let (s, f) = d.pullback(d.poset().clone(), (0..d.len()).collect()).unwrap();
    assert!(s.same_as(&d));
    assert!(f.check().is_ok());
    let tree = d.poset().chain_tree(star).unwrap();
    let (s, _) = d.pullback(tree.tree.clone(), tree.psi.clone()).unwrap();
    assert_eq!(s.len(), 15);
    assert!(s.validate().is_empty());
    // collapsing the diamond's two middle elements is not cover-bijective
    let dia = fixtures::load(fixtures::DIAMOND);
    let chain = Poset::from_pairs(&["b", "m", "t"], &[("b", "m"), ("m", "t")]).unwrap();
    let p1 = dia.poset().clone();
    let err = fixtures::load(fixtures::SYS_A).pullback(p1, vec![0, 1, 1, 1]).unwrap_err();
    assert!(matches!(err, SystemError::BadProjection(_)));
    let _ = chain;
}

#[test]
fn decompose_examples() {
    let b = fixtures::load(fixtures::SYS_B);
    let j = b.index_of("j").unwrap();
    let one = b.group(j).elem(ints(&[1])).unwrap();
    let w = b.decompose_from_below(j, &one, &mut Budget::default()).unwrap().unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(w[0].0, b.index_of("i").unwrap());
    let v = fixtures::load(fixtures::VEE_Z);
    let j = v.index_of("j").unwrap();
    let beta = v.group(j).elem(ints(&[-2])).unwrap();
    let w = v.decompose_from_below(j, &beta, &mut Budget::default()).unwrap().unwrap();
    let total: GroupElem = w.iter().fold(v.group(j).zero(), |acc, (k, x)| v.group(j).add(&acc, &v.apply_hat(*k, j, x)));
    assert_eq!(total, beta);
}

fn doubled_chain() -> ISystem {
    let text = r#"{
      "elements": [
        {"id": "q1", "kind": "free"}, {"id": "p1", "kind": "free"},
        {"id": "q2", "kind": "free"}, {"id": "p2", "kind": "free"}
      ],
      "order": [["q1", "p1"], ["q2", "p2"]],
      "maps": [{"from": "q1", "to": "p1", "c": []}, {"from": "q2", "to": "p2", "c": []}]
    }"#;
    parse_system(text).unwrap()
}

#[test]
fn crown_of_doubled_chain() {
    let s = doubled_chain();
    let p = s.poset();
    let cp = CompatiblePair {
        i1: p.down(1),
        i2: p.down(3),
        iso: [(0, 2), (1, 3)].into_iter().collect(),
    };
    let (after, proj) = cp.crown_system(&s).unwrap();
    assert_eq!(after.len(), 2);
    assert!(after.poset().is_isomorphic(&fixtures::load(fixtures::SYS_A).poset().clone()));
    assert_eq!(proj.vertex, vec![0, 1, 0, 1]);
    let (same, _) = CompatiblePair::trivial().crown_system(&s).unwrap();
    assert!(same.same_as(&s));
}

#[test]
fn crown_rejects_bad_pair() {
    let s = doubled_chain();
    let cp = CompatiblePair { i1: LowerSet(0b1), i2: LowerSet(0b10), iso: [(0, 1)].into_iter().collect() };
    assert!(matches!(cp.crown_system(&s), Err(SystemError::InvalidPair(_))));
}
