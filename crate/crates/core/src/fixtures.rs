//! Systems shipped with the library, used by tests, benches and the CLI.

use crate::isystem::{parse_system, ISystem};

pub const SYS_A: &str = include_str!("../fixtures/sys_a.json");
pub const SYS_B: &str = include_str!("../fixtures/sys_b.json");
pub const SYS_C: &str = include_str!("../fixtures/sys_c.json");
pub const SYS_D: &str = include_str!("../fixtures/sys_d.json");
pub const DIAMOND: &str = include_str!("../fixtures/diamond.json");
pub const VEE_Z: &str = include_str!("../fixtures/vee_z.json");
pub const MIXED: &str = include_str!("../fixtures/mixed.json");
pub const VEE: &str = include_str!("../fixtures/vee.json");
pub const TWO_POINTS: &str = include_str!("../fixtures/two_points.json");
pub const PIERCE_FORK: &str = include_str!("../fixtures/pierce_fork.json");

pub const SYS_B_ZERO_MAP: &str = include_str!("../fixtures/invalid/sys_b_zero_map.json");
pub const MINIMAL_FREE_TORSION: &str = include_str!("../fixtures/invalid/minimal_free_torsion.json");

pub const ALL: [(&str, &str); 10] = [
    ("sys_a", SYS_A),
    ("sys_b", SYS_B),
    ("sys_c", SYS_C),
    ("sys_d", SYS_D),
    ("diamond", DIAMOND),
    ("vee_z", VEE_Z),
    ("mixed", MIXED),
    ("vee", VEE),
    ("two_points", TWO_POINTS),
    ("pierce_fork", PIERCE_FORK),
];

/// Parses a shipped fixture; panics if it is invalid.
pub fn load(text: &str) -> ISystem {
    parse_system(text).expect("shipped fixture is a valid system")
}

pub fn all() -> Vec<(&'static str, ISystem)> {
    ALL.iter().map(|(n, t)| (*n, load(t))).collect()
}
