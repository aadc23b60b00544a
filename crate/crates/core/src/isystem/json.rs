use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::fgab::{FgGroup, GroupElem, GroupHom, IntMatrix};
use crate::poset::Poset;

use super::{ISystem, Kind, SystemError};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub elements: Vec<ElementJson>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub maps: Vec<MapJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub id: String,
    pub kind: String,
    #[serde(default)]
    pub group: GroupJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    #[serde(default)]
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<i64>>,
    #[serde(default)]
    pub h: Option<Vec<Vec<i64>>>,
}

fn parse_kind(id: &str, s: &str) -> Result<Kind, SystemError> {
    match s.to_ascii_lowercase().as_str() {
        "free" => Ok(Kind::Free),
        "reg" | "regular" => Ok(Kind::Reg),
        other => Err(SystemError::Parse(format!("element `{id}`: unknown kind `{other}`"))),
    }
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Reads a system and checks its shape, without checking (c1)/(c2).
pub fn parse_system_unchecked(text: &str) -> Result<ISystem, SystemError> {
    let raw: SystemJson = serde_json::from_str(text).map_err(|e| SystemError::Parse(e.to_string()))?;
    from_json(&raw)
}

/// Reads and validates a system.
pub fn parse_system(text: &str) -> Result<ISystem, SystemError> {
    let s = parse_system_unchecked(text)?;
    let v = s.validate();
    if v.is_empty() {
        Ok(s)
    } else {
        Err(SystemError::Invalid(v))
    }
}

pub fn from_json(raw: &SystemJson) -> Result<ISystem, SystemError> {
    let ids: Vec<String> = raw.elements.iter().map(|e| e.id.clone()).collect();
    let mut kinds = Vec::new();
    let mut groups = Vec::new();
    for e in &raw.elements {
        kinds.push(parse_kind(&e.id, &e.kind)?);
        let g = FgGroup::new(e.group.rank, big(&e.group.torsion))
            .map_err(|err| SystemError::Parse(format!("element `{}`: {err}", e.id)))?;
        groups.push(g);
    }
    let pos = |s: &str| {
        ids.iter()
            .position(|x| x == s)
            .ok_or_else(|| SystemError::Parse(format!("unknown element `{s}`")))
    };
    let rel = raw
        .order
        .iter()
        .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
        .collect::<Result<Vec<_>, SystemError>>()?;
    let poset = Poset::new(ids.clone(), &rel)?;
    let mut maps = Vec::new();
    for m in &raw.maps {
        let (i, j) = (pos(&m.from)?, pos(&m.to)?);
        let ctx = |msg: String| SystemError::Parse(format!("map `{}` -> `{}`: {msg}", m.from, m.to));
        let (src, tgt) = (&groups[i], &groups[j]);
        let h = match &m.h {
            None => IntMatrix::zeros(tgt.len(), src.len()),
            Some(rows) => {
                if rows.len() != tgt.len() || rows.iter().any(|r| r.len() != src.len()) {
                    return Err(ctx(format!("h must be {}x{}", tgt.len(), src.len())));
                }
                let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| big(r)).collect();
                IntMatrix::from_rows(&rows, src.len())
            }
        };
        let c = match (&m.c, kinds[i]) {
            (Some(c), Kind::Free) => {
                if c.len() != tgt.len() {
                    return Err(ctx(format!("c must have {} entries", tgt.len())));
                }
                Some(GroupElem { coords: big(c) })
            }
            (None, Kind::Free) => Some(tgt.zero()),
            (Some(_), Kind::Reg) => return Err(ctx("c is only allowed for free sources".into())),
            (None, Kind::Reg) => None,
        };
        let hom = GroupHom::new(src.clone(), tgt.clone(), h, c).map_err(|e| ctx(e.to_string()))?;
        maps.push((i, j, hom));
    }
    ISystem::assemble(poset, kinds, groups, maps)
}

fn small(v: &BigInt) -> i64 {
    v.to_i64().expect("coefficient fits in 64 bits for serialization")
}

/// Canonical form: elements sorted by id, order reduced to covers, maps on covers only.
pub fn to_json(s: &ISystem) -> SystemJson {
    let p = s.poset();
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.sort_by(|&a, &b| s.id(a).cmp(s.id(b)));
    let elements = idx
        .iter()
        .map(|&i| ElementJson {
            id: s.id(i).to_string(),
            kind: s.kind(i).to_string(),
            group: GroupJson {
                rank: s.group(i).rank(),
                torsion: s.group(i).torsion().iter().map(small).collect(),
            },
        })
        .collect();
    let mut covers: Vec<(usize, usize)> = p.cover_pairs();
    covers.sort_by(|a, b| (s.id(a.0), s.id(a.1)).cmp(&(s.id(b.0), s.id(b.1))));
    let order = covers.iter().map(|&(a, b)| (s.id(a).to_string(), s.id(b).to_string())).collect();
    let maps = covers
        .iter()
        .map(|&(a, b)| {
            let m = s.map(a, b);
            MapJson {
                from: s.id(a).to_string(),
                to: s.id(b).to_string(),
                c: m.c.as_ref().map(|c| c.coords.iter().map(small).collect()),
                h: Some((0..m.h.rows()).map(|r| m.h.row(r).iter().map(small).collect()).collect()),
            }
        })
        .collect();
    SystemJson { elements, order, maps }
}

pub fn serialize_system(s: &ISystem) -> String {
    serde_json::to_string_pretty(&to_json(s)).expect("system JSON serializes")
}
