use std::collections::BTreeMap;
use std::fmt::Write;

use crate::graph::{Dataset, Graph};
use crate::model::{escape_string, Iri, Literal, Term, Triple};
use crate::vocab::{rdf, xsd};

/// Writes a dataset as Turtle, named graphs as `GRAPH <iri> { ... }` blocks.
///
/// Output is deterministic: prefixes are sorted by name, triples by the
/// canonical text of subject, predicate and object.
pub fn serialize(dataset: &Dataset) -> String {
    let writer = Writer {
        prefixes: &dataset.prefixes,
    };
    let mut out = String::new();
    for (prefix, ns) in &dataset.prefixes {
        writeln!(out, "@prefix {prefix}: {ns} .").unwrap();
    }
    let mut sections: Vec<String> = Vec::new();
    if !dataset.default.is_empty() {
        sections.push(writer.statements(&dataset.default, ""));
    }
    for (name, graph) in &dataset.named {
        let mut block = format!("GRAPH {} {{\n", writer.iri(name));
        block.push_str(&writer.statements(graph, "    "));
        block.push_str("}\n");
        sections.push(block);
    }
    if !out.is_empty() && !sections.is_empty() {
        out.push('\n');
    }
    out.push_str(&sections.join("\n"));
    out
}

/// Serializes a single graph with the given prefixes.
pub fn serialize_graph(graph: &Graph, prefixes: &BTreeMap<String, Iri>) -> String {
    serialize(&Dataset {
        default: graph.clone(),
        named: BTreeMap::new(),
        prefixes: prefixes.clone(),
    })
}

struct Writer<'a> {
    prefixes: &'a BTreeMap<String, Iri>,
}

impl Writer<'_> {
    fn statements(&self, graph: &Graph, indent: &str) -> String {
        let mut triples: Vec<&Triple> = graph.iter().collect();
        triples.sort_by_cached_key(|t| t.sort_key());

        let mut out = String::new();
        let mut i = 0;
        while i < triples.len() {
            let subject = triples[i].subject();
            let mut j = i;
            while j < triples.len() && triples[j].subject() == subject {
                j += 1;
            }
            write!(out, "{indent}{}", self.term(subject)).unwrap();
            let group = &triples[i..j];
            let mut k = 0;
            while k < group.len() {
                let predicate = group[k].predicate();
                let mut m = k;
                while m < group.len() && group[m].predicate() == predicate {
                    m += 1;
                }
                if k > 0 {
                    write!(out, " ;\n{indent}    ").unwrap();
                } else {
                    out.push(' ');
                }
                out.push_str(&self.predicate(predicate));
                out.push(' ');
                let objects: Vec<String> =
                    group[k..m].iter().map(|t| self.term(t.object())).collect();
                out.push_str(&objects.join(" , "));
                k = m;
            }
            out.push_str(" .\n");
            i = j;
        }
        out
    }

    fn predicate(&self, p: &Iri) -> String {
        if p.as_str() == rdf::TYPE {
            "a".to_owned()
        } else {
            self.iri(p)
        }
    }

    fn term(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.iri(iri),
            Term::Blank(b) => b.to_string(),
            Term::Literal(l) => self.literal(l),
        }
    }

    fn literal(&self, l: &Literal) -> String {
        let lex = l.lexical();
        let dt = l.datatype().as_str();
        if l.language().is_none() {
            let bare = match dt {
                xsd::INTEGER => is_integer(lex),
                xsd::DECIMAL => is_decimal(lex),
                xsd::BOOLEAN => lex == "true" || lex == "false",
                _ => false,
            };
            if bare {
                return lex.to_owned();
            }
        }
        let mut out = format!("\"{}\"", escape_string(lex));
        match l.language() {
            Some(lang) => write!(out, "@{lang}").unwrap(),
            None if dt == xsd::STRING => {}
            None => write!(out, "^^{}", self.iri(l.datatype())).unwrap(),
        }
        out
    }

    /// Prefixed form when some prefix covers the IRI with a simple local part.
    fn iri(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        self.prefixes
            .iter()
            .filter_map(|(prefix, ns)| {
                let local = s.strip_prefix(ns.as_str())?;
                is_simple_local(local).then_some((ns.as_str().len(), prefix, local))
            })
            // longest namespace wins, then the alphabetically first prefix
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)))
            .map_or_else(
                || iri.to_string(),
                |(_, prefix, local)| format!("{prefix}:{local}"),
            )
    }
}

fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        Some(_) => false,
    }
}

fn is_integer(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    !body.is_empty() && body.chars().all(|c| c.is_ascii_digit())
}

fn is_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.chars().all(|c| c.is_ascii_digit())
                && !frac.is_empty()
                && frac.chars().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}
