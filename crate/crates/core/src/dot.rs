//! Graphviz output: element ids as labels, covers as edges drawn upward.

use std::fmt::Write;

use crate::isystem::ISystem;
use crate::poset::{ChainTree, Poset};
use crate::surgery::SurgeryTrace;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render(name: &str, p: &Poset, label: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for i in 0..p.len() {
        writeln!(out, "  n{i} [label={}];", quote(&label(i))).unwrap();
    }
    for (i, j) in p.cover_pairs() {
        writeln!(out, "  n{i} -> n{j};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn poset_dot(name: &str, p: &Poset) -> String {
    render(name, p, |i| p.id(i).to_string())
}

/// Nodes carry kind and group.
pub fn system_dot(name: &str, s: &ISystem) -> String {
    render(name, s.poset(), |i| format!("{}\n{} {}", s.id(i), s.kind(i), s.group(i)))
}

/// Tree nodes labelled by their chain; the projected element is the last id.
pub fn chain_tree_dot(name: &str, t: &ChainTree) -> String {
    poset_dot(name, &t.tree)
}

/// One graph per stage: the initial system, each collapse, and the target.
pub fn trace_dot(t: &SurgeryTrace) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (k, s) in t.stages().iter().enumerate() {
        let name = format!("stage{k}");
        out.push((name.clone(), system_dot(&name, s)));
    }
    out.push(("target".into(), system_dot("target", &t.target)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_become_edges() {
        let p = Poset::from_pairs(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let d = poset_dot("p", &p);
        assert!(d.starts_with("digraph \"p\" {"));
        assert_eq!(d.matches("->").count(), 2);
        assert!(d.contains("n0 -> n1;") && !d.contains("n0 -> n2;"));
    }

    #[test]
    fn labels_are_escaped() {
        let p = Poset::from_pairs(&["x\"y"], &[]).unwrap();
        assert!(poset_dot("q", &p).contains("label=\"x\\\"y\""));
    }

    #[test]
    fn chain_tree_of_example() {
        let d = crate::fixtures::load(crate::fixtures::SYS_D);
        let star = d.index_of("*").unwrap();
        let t = d.poset().chain_tree(star).unwrap();
        let text = chain_tree_dot("tree", &t);
        assert_eq!(text.matches("label=").count(), 15);
        assert_eq!(text.matches("->").count(), 14);
    }
}
