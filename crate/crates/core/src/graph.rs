//! In-memory triple sets and datasets.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::diagnostic::{Diagnostic, Severity};
use crate::model::{BlankNode, Iri, Term, Triple};

/// A set of triples with subject, predicate and object indexes.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    by_subject: BTreeMap<Term, BTreeSet<Triple>>,
    by_predicate: BTreeMap<Iri, BTreeSet<Triple>>,
    by_object: BTreeMap<Term, BTreeSet<Triple>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.triples.contains(&triple) {
            return false;
        }
        self.by_subject
            .entry(triple.subject().clone())
            .or_default()
            .insert(triple.clone());
        self.by_predicate
            .entry(triple.predicate().clone())
            .or_default()
            .insert(triple.clone());
        self.by_object
            .entry(triple.object().clone())
            .or_default()
            .insert(triple.clone());
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        if !self.triples.remove(triple) {
            return false;
        }
        fn drop_from<K: Ord + Clone>(
            index: &mut BTreeMap<K, BTreeSet<Triple>>,
            key: &K,
            t: &Triple,
        ) {
            if let Some(set) = index.get_mut(key) {
                set.remove(t);
                if set.is_empty() {
                    index.remove(key);
                }
            }
        }
        drop_from(&mut self.by_subject, triple.subject(), triple);
        drop_from(&mut self.by_predicate, triple.predicate(), triple);
        drop_from(&mut self.by_object, triple.object(), triple);
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        for t in triples {
            self.insert(t);
        }
    }

    pub fn is_subset(&self, other: &Graph) -> bool {
        self.triples.is_subset(&other.triples)
    }

    /// Triples agreeing with every bound position, in graph order.
    pub fn matching(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<&Triple> {
        // Scan the smallest candidate set among the bound positions.
        let mut candidates: Option<&BTreeSet<Triple>> = None;
        let bound = [
            s.map(|s| self.by_subject.get(s)),
            p.map(|p| self.by_predicate.get(p)),
            o.map(|o| self.by_object.get(o)),
        ];
        for set in bound.into_iter().flatten() {
            let Some(set) = set else {
                return Vec::new();
            };
            if candidates.is_none_or(|c| set.len() < c.len()) {
                candidates = Some(set);
            }
        }
        candidates
            .unwrap_or(&self.triples)
            .iter()
            .filter(|t| {
                s.is_none_or(|s| t.subject() == s)
                    && p.is_none_or(|p| t.predicate() == p)
                    && o.is_none_or(|o| t.object() == o)
            })
            .collect()
    }

    pub fn objects<'a>(&'a self, s: &Term, p: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.matching(Some(s), Some(p), None)
            .into_iter()
            .map(Triple::object)
    }

    pub fn subjects<'a>(&'a self, p: &Iri, o: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.matching(None, Some(p), Some(o))
            .into_iter()
            .map(Triple::subject)
    }

    pub fn with_predicate<'a>(&'a self, p: &Iri) -> impl Iterator<Item = &'a Triple> + 'a {
        self.by_predicate.get(p).into_iter().flatten()
    }

    pub fn has_subject(&self, s: &Term) -> bool {
        self.by_subject.contains_key(s)
    }

    /// Every blank node occurring in the graph.
    pub fn blank_nodes(&self) -> BTreeSet<BlankNode> {
        self.triples
            .iter()
            .flat_map(|t| [t.subject(), t.object()])
            .filter_map(|t| t.as_blank().cloned())
            .collect()
    }

    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        g.extend(other.iter().cloned());
        g
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// A default graph, named graphs and prefix bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub default: Graph,
    pub named: BTreeMap<Iri, Graph>,
    pub prefixes: BTreeMap<String, Iri>,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_graph(graph: Graph) -> Self {
        Dataset {
            default: graph,
            ..Dataset::default()
        }
    }

    pub fn named_graph_mut(&mut self, name: Iri) -> &mut Graph {
        self.named.entry(name).or_default()
    }

    /// `(graph name, graph)` pairs, default graph first.
    pub fn graphs(&self) -> impl Iterator<Item = (Option<&Iri>, &Graph)> + '_ {
        std::iter::once((None, &self.default)).chain(self.named.iter().map(|(k, g)| (Some(k), g)))
    }

    /// Union of the default and all named graphs.
    pub fn flatten(&self) -> Graph {
        let mut g = self.default.clone();
        for named in self.named.values() {
            g.extend(named.iter().cloned());
        }
        g
    }

    /// Total number of (graph, triple) pairs.
    pub fn quad_count(&self) -> usize {
        self.graphs().map(|(_, g)| g.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs().all(|(_, g)| g.is_empty())
    }

    pub fn blank_nodes(&self) -> BTreeSet<BlankNode> {
        self.graphs().flat_map(|(_, g)| g.blank_nodes()).collect()
    }

    /// Applies `f` to every blank node of every graph.
    pub fn map_blank_nodes(&self, mut f: impl FnMut(&BlankNode) -> BlankNode) -> Dataset {
        let mut map_term = |t: &Term| match t {
            Term::Blank(b) => Term::Blank(f(b)),
            other => other.clone(),
        };
        let mut map_graph = |g: &Graph| -> Graph {
            g.iter()
                .map(|t| {
                    Triple::new(
                        map_term(t.subject()),
                        t.predicate().clone(),
                        map_term(t.object()),
                    )
                    .expect("renaming blanks keeps subjects non-literal")
                })
                .collect()
        };
        Dataset {
            default: map_graph(&self.default),
            named: self
                .named
                .iter()
                .map(|(k, g)| (k.clone(), map_graph(g)))
                .collect(),
            prefixes: self.prefixes.clone(),
        }
    }
}

/// Result of [`merge`]: the union plus any prefix conflict warnings.
#[derive(Debug, Clone)]
pub struct Merged {
    pub dataset: Dataset,
    pub warnings: Vec<Diagnostic>,
}

/// Union of two datasets. Blank nodes of `b` are renamed so they never
/// collide with those of `a`; conflicting prefixes keep `a`'s binding.
pub fn merge(a: &Dataset, b: &Dataset) -> Merged {
    let mut taken: HashSet<String> = a
        .blank_nodes()
        .into_iter()
        .map(|b| b.id().to_owned())
        .collect();
    let mut renames: BTreeMap<BlankNode, BlankNode> = BTreeMap::new();
    let mut counter = 0usize;
    let b_renamed = b.map_blank_nodes(|node| {
        renames
            .entry(node.clone())
            .or_insert_with(|| loop {
                let candidate = format!("b{counter}");
                counter += 1;
                if taken.insert(candidate.clone()) {
                    break BlankNode::new(candidate).expect("generated id is valid");
                }
            })
            .clone()
    });

    let mut out = a.clone();
    out.default.extend(b_renamed.default.iter().cloned());
    for (name, g) in &b_renamed.named {
        out.named_graph_mut(name.clone()).extend(g.iter().cloned());
    }
    let mut warnings = Vec::new();
    for (prefix, iri) in &b.prefixes {
        match out.prefixes.get(prefix) {
            None => {
                out.prefixes.insert(prefix.clone(), iri.clone());
            }
            Some(existing) if existing != iri => warnings.push(Diagnostic::new(
                Severity::Warning,
                "MERGE001",
                Term::Iri(iri.clone()),
                format!("prefix {prefix}: already bound to {existing}; keeping the first binding"),
                "merge",
            )),
            Some(_) => {}
        }
    }
    Merged {
        dataset: out,
        warnings,
    }
}
