use std::collections::BTreeMap;
use std::fmt::Write;

use super::model::{DiagramModel, NodeKind, RelationKind};
use crate::model::Term;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DotOptions {
    pub legend: bool,
}

/// `(arrowhead, arrowtail, dir)` for each relation kind.
pub fn style(kind: RelationKind) -> (&'static str, &'static str, &'static str) {
    match kind {
        RelationKind::Subclass => ("onormal", "none", "forward"),
        RelationKind::TypeAssertion => ("odot", "none", "forward"),
        RelationKind::DomainRange => ("normal", "none", "forward"),
        RelationKind::Imperative => ("normal", "dot", "both"),
        RelationKind::Optional => ("vee", "odot", "both"),
        RelationKind::Individual => ("diamond", "none", "forward"),
    }
}

fn shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Class => "box",
        NodeKind::Individual => "ellipse",
        NodeKind::Literal => "note",
        NodeKind::AnonymousRestriction => "point",
    }
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn edge_attrs(label: &str, kind: RelationKind) -> String {
    let (head, tail, dir) = style(kind);
    format!(
        "label={}, arrowhead={head}, arrowtail={tail}, dir={dir}",
        quote(label)
    )
}

const PREAMBLE: &str = "    graph [rankdir=BT, fontname=\"Helvetica\"];\n    \
                        node [fontname=\"Helvetica\", fontsize=10];\n    \
                        edge [fontname=\"Helvetica\", fontsize=9];\n";

/// Renders the model as a DOT digraph. Nodes get ids `n0`, `n1`, ... in
/// term order, so equal models give identical text.
pub fn emit_dot(model: &DiagramModel, options: DotOptions) -> String {
    let mut out = String::from("digraph {\n");
    out.push_str(PREAMBLE);
    let ids: BTreeMap<&Term, String> = model
        .nodes
        .keys()
        .enumerate()
        .map(|(i, term)| (term, format!("n{i}")))
        .collect();

    for (term, node) in &model.nodes {
        let mut label = node.label.clone();
        for line in &node.annotations {
            label.push('\n');
            label.push_str(line);
        }
        let _ = write!(
            out,
            "    {} [label={}, shape={}",
            ids[term],
            quote(&label),
            shape(node.kind)
        );
        if node.kind == NodeKind::AnonymousRestriction {
            out.push_str(", xlabel=");
            out.push_str(&quote(&node.label));
        }
        out.push_str("];\n");
    }

    let mut edges: Vec<_> = model
        .edges
        .iter()
        .map(|e| (&ids[&e.from], &ids[&e.to], e.kind, &e.label))
        .collect();
    edges.sort();
    for (from, to, kind, label) in edges {
        let _ = writeln!(out, "    {from} -> {to} [{}];", edge_attrs(label, kind));
    }

    if options.legend {
        out.push_str("    subgraph cluster_legend {\n        label=\"Legend\";\n");
        for (i, kind) in RelationKind::ALL.into_iter().enumerate() {
            let _ = writeln!(
                out,
                "        legend{i}a [label=\"\", shape=point];\n        \
                 legend{i}b [label=\"\", shape=point];\n        \
                 legend{i}a -> legend{i}b [{}];",
                edge_attrs(kind.name(), kind)
            );
        }
        out.push_str("    }\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{DiagramEdge, DiagramNode};
    use std::collections::{BTreeSet, HashSet};

    fn node(iri: &str, kind: NodeKind) -> DiagramNode {
        DiagramNode {
            id: Term::iri(iri).unwrap(),
            kind,
            label: iri.rsplit('/').next().unwrap().to_owned(),
            annotations: BTreeSet::new(),
        }
    }

    #[test]
    fn empty_model() {
        let dot = emit_dot(&DiagramModel::default(), DotOptions::default());
        assert_eq!(dot, format!("digraph {{\n{PREAMBLE}}}\n"));
    }

    #[test]
    fn one_subclass_edge() {
        let mut m = DiagramModel::default();
        for n in [
            node("http://e/Dog", NodeKind::Class),
            node("http://e/Animal", NodeKind::Class),
        ] {
            m.nodes.insert(n.id.clone(), n);
        }
        m.edges.insert(DiagramEdge {
            from: Term::iri("http://e/Dog").unwrap(),
            to: Term::iri("http://e/Animal").unwrap(),
            label: String::new(),
            kind: RelationKind::Subclass,
        });
        let dot = emit_dot(&m, DotOptions::default());
        let edges: Vec<_> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(
            edges,
            vec!["    n1 -> n0 [label=\"\", arrowhead=onormal, arrowtail=none, dir=forward];"]
        );
        assert!(dot.contains("n0 [label=\"Animal\", shape=box];"));
    }

    #[test]
    fn style_table_is_injective() {
        let pairs: HashSet<_> = RelationKind::ALL
            .iter()
            .map(|k| (style(*k).0, style(*k).1))
            .collect();
        assert_eq!(pairs.len(), 6);
    }

    #[test]
    fn legend_lists_every_kind() {
        let dot = emit_dot(&DiagramModel::default(), DotOptions { legend: true });
        assert_eq!(dot.matches("->").count(), 6);
        assert!(!dot.contains("color") && !dot.contains("dashed") && !dot.contains("dotted"));
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(quote("a \"b\"\\\nc"), r#""a \"b\"\\\nc""#);
    }
}
