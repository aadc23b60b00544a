use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::poset::LowerSet;

use super::{MonElem, Monoid, MonoidError};

#[derive(Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
struct CoordJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(default)]
    g: Vec<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct ElemJson {
    support: Vec<String>,
    #[serde(default)]
    coords: BTreeMap<String, CoordJson>,
}

/// Parses `{"support": [ids], "coords": {id: {"n": k, "g": [..]}}}`. Omitted coordinates are zero.
pub fn elem_from_json(m: &Monoid, v: &serde_json::Value) -> Result<MonElem, MonoidError> {
    let raw: ElemJson = serde_json::from_value(v.clone()).map_err(|e| MonoidError::BadCoordinate(e.to_string()))?;
    let sys = m.system();
    let idx = |id: &str| sys.index_of(id).map_err(|e| MonoidError::BadCoordinate(e.to_string()));
    let mut mask = 0u64;
    for id in &raw.support {
        mask |= 1 << idx(id)?;
    }
    let mut vec = vec![BigInt::from(0); m.dim()];
    for (id, c) in &raw.coords {
        let i = idx(id)?;
        if mask & (1 << i) == 0 {
            return Err(MonoidError::BadCoordinate(format!("coordinate for `{id}` outside the support")));
        }
        let glen = sys.group(i).len();
        if c.g.len() != glen {
            return Err(MonoidError::BadCoordinate(format!("`{id}` expects {glen} group coordinates")));
        }
        let mut vals: Vec<BigInt> = c.g.iter().map(|&x| x.into()).collect();
        match (sys.kind(i).is_free(), c.n) {
            (true, n) => vals.insert(0, n.unwrap_or(0).into()),
            (false, None) => {}
            (false, Some(_)) => return Err(MonoidError::BadCoordinate(format!("`{id}` is regular: no n"))),
        }
        for (slot, v) in m.range(i).zip(vals) {
            vec[slot] = v;
        }
    }
    m.from_vec(LowerSet(mask), vec)
}

pub fn elem_to_json(m: &Monoid, x: &MonElem) -> serde_json::Value {
    let sys = m.system();
    let small = |b: &BigInt| b.to_i64().expect("coordinate fits in 64 bits");
    let mut coords = BTreeMap::new();
    for i in x.support.iter() {
        let l = m.local(x, i);
        coords.insert(
            sys.id(i).to_string(),
            CoordJson { n: l.n.as_ref().map(small), g: l.g.coords.iter().map(small).collect() },
        );
    }
    let mut support: Vec<String> = x.support.iter().map(|i| sys.id(i).to_string()).collect();
    support.sort();
    serde_json::to_value(ElemJson { support, coords }).expect("element serializes")
}
