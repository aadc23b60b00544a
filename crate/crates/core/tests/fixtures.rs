use refmon::isystem::{parse_system, parse_system_unchecked, serialize_system};
use refmon::monoid::roundtrip_check;
use refmon::{fixtures, Monoid, SystemError, Violation};

#[test]
fn every_fixture_parses_and_serializes_canonically() {
    for (name, text) in fixtures::ALL {
        let s = parse_system(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let once = serialize_system(&s);
        assert_eq!(serialize_system(&parse_system(&once).unwrap()), once, "{name}");
    }
}

#[test]
fn zero_map_breaks_generation() {
    let s = parse_system_unchecked(fixtures::SYS_B_ZERO_MAP).unwrap();
    let v = s.validate();
    assert!(v.iter().any(|x| matches!(x, Violation::NotGenerated { i, .. } if i == "j")), "{v:?}");
    assert!(matches!(parse_system(fixtures::SYS_B_ZERO_MAP), Err(SystemError::Invalid(_))));
}

#[test]
fn minimal_free_element_needs_trivial_group() {
    let v = parse_system_unchecked(fixtures::MINIMAL_FREE_TORSION).unwrap().validate();
    assert!(v.iter().any(|x| matches!(x, Violation::MinimalFreeNontrivial { .. })), "{v:?}");
}

#[test]
fn malformed_json_reports_position() {
    let e = parse_system("{\"elements\": [ {\"id\": \"a\"").unwrap_err();
    assert!(matches!(e, SystemError::Parse(ref m) if m.contains("line")), "{e}");
    let e = parse_system(r#"{"elements": [], "extra": 1}"#).unwrap_err();
    assert!(matches!(e, SystemError::Parse(_)));
}

#[test]
fn round_trip_on_fixtures() {
    for (name, text) in fixtures::ALL {
        assert!(roundtrip_check(&Monoid::new(fixtures::load(text))).unwrap(), "{name}");
    }
}
