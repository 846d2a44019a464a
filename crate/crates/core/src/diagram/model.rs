use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{sort_diagnostics, Diagnostic, Severity};
use crate::graph::{Dataset, Graph};
use crate::model::{BlankNode, Iri, Term};
use crate::potential::Profiles;
use crate::skos::ClassInventory;
use crate::vocab::{is_reserved, owl, rdf, rdfs, xsd, WELL_KNOWN_PREFIXES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Class,
    Individual,
    Literal,
    AnonymousRestriction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramNode {
    pub id: Term,
    pub kind: NodeKind,
    pub label: String,
    /// Literal-valued data about the node, as `property = value` lines.
    pub annotations: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    Subclass,
    TypeAssertion,
    DomainRange,
    Imperative,
    Optional,
    Individual,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::Subclass,
        RelationKind::TypeAssertion,
        RelationKind::DomainRange,
        RelationKind::Imperative,
        RelationKind::Optional,
        RelationKind::Individual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Subclass => "subclass",
            RelationKind::TypeAssertion => "type assertion",
            RelationKind::DomainRange => "domain/range",
            RelationKind::Imperative => "imperative",
            RelationKind::Optional => "optional",
            RelationKind::Individual => "individual",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagramEdge {
    pub from: Term,
    pub to: Term,
    pub label: String,
    pub kind: RelationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiagramModel {
    pub nodes: BTreeMap<Term, DiagramNode>,
    pub edges: BTreeSet<DiagramEdge>,
    pub diagnostics: Vec<Diagnostic>,
}

impl DiagramModel {
    pub fn edges_of_kind(&self, kind: RelationKind) -> impl Iterator<Item = &DiagramEdge> + '_ {
        self.edges.iter().filter(move |e| e.kind == kind)
    }
}

/// Placeholder endpoint for potential relations declared on one side only.
pub fn any_node() -> Term {
    Term::Blank(BlankNode::new("_any").expect("valid id"))
}

const RESTRICTION_PREDICATES: [&str; 9] = [
    owl::SOME_VALUES_FROM,
    owl::ALL_VALUES_FROM,
    owl::HAS_VALUE,
    owl::MIN_CARDINALITY,
    owl::MAX_CARDINALITY,
    owl::CARDINALITY,
    owl::MIN_QUALIFIED_CARDINALITY,
    owl::MAX_QUALIFIED_CARDINALITY,
    owl::QUALIFIED_CARDINALITY,
];

const PROPERTY_AXIOMS: [(&str, &str); 7] = [
    (owl::TRANSITIVE_PROPERTY, "transitive"),
    (owl::SYMMETRIC_PROPERTY, "symmetric"),
    (owl::ASYMMETRIC_PROPERTY, "asymmetric"),
    (owl::REFLEXIVE_PROPERTY, "reflexive"),
    (owl::IRREFLEXIVE_PROPERTY, "irreflexive"),
    (owl::FUNCTIONAL_PROPERTY, "functional"),
    (owl::INVERSE_FUNCTIONAL_PROPERTY, "inverse functional"),
];

struct Builder<'a> {
    graph: Graph,
    inventory: &'a ClassInventory,
    prefixes: BTreeMap<String, Iri>,
    rdfe_base: String,
    model: DiagramModel,
}

/// Classifies the dataset's triples into diagram nodes and edges.
///
/// Rules, in order: named `rdfs:subClassOf` (Subclass); existential,
/// value and positive minimum/exact cardinality restrictions (Imperative);
/// universal, zero-minimum and maximum restrictions (Optional); declared
/// domain/range pairs (DomainRange); potential domain/range and class
/// profiles (Optional); `rdf:type` of non-classes (TypeAssertion);
/// non-vocabulary relations between individuals (Individual). A
/// non-vocabulary relation between two classes is drawn as DomainRange.
pub fn build_model(
    dataset: &Dataset,
    profiles: &Profiles,
    inventory: &ClassInventory,
) -> DiagramModel {
    let mut prefixes: BTreeMap<String, Iri> = WELL_KNOWN_PREFIXES
        .iter()
        .filter(|(p, _)| *p != "rdfe")
        .map(|(p, ns)| ((*p).to_owned(), Iri::new(*ns).expect("namespace")))
        .collect();
    prefixes.insert("rdfe".to_owned(), profiles.vocab.base().clone());
    prefixes.extend(dataset.prefixes.clone());
    let mut b = Builder {
        graph: dataset.flatten(),
        inventory,
        prefixes,
        rdfe_base: profiles.vocab.base().as_str().to_owned(),
        model: DiagramModel::default(),
    };
    b.subclass_and_restrictions();
    b.domain_range(profiles);
    b.potential(profiles);
    b.type_assertions();
    b.relations();
    sort_diagnostics(&mut b.model.diagnostics);
    b.model
}

impl Builder<'_> {
    fn label(&self, term: &Term) -> String {
        match term {
            Term::Literal(l) => l.lexical().to_owned(),
            Term::Blank(_) if *term == any_node() => "any".to_owned(),
            Term::Blank(b) => b.to_string(),
            Term::Iri(iri) => compact(iri, &self.prefixes),
        }
    }

    fn kind_of(&self, term: &Term) -> NodeKind {
        match term {
            Term::Literal(_) => NodeKind::Literal,
            Term::Iri(iri)
                if self.inventory.class_evidence.contains_key(iri) || *iri == owl::thing() =>
            {
                NodeKind::Class
            }
            Term::Iri(_) => NodeKind::Individual,
            Term::Blank(_) if *term == any_node() || self.is_restriction(term) => {
                NodeKind::AnonymousRestriction
            }
            Term::Blank(_) => NodeKind::Individual,
        }
    }

    fn is_restriction(&self, term: &Term) -> bool {
        self.graph
            .objects(term, &rdf::type_())
            .any(|c| *c == owl::restriction())
            || self
                .graph
                .objects(term, &owl::on_property())
                .next()
                .is_some()
            || RESTRICTION_PREDICATES.iter().any(|p| {
                self.graph
                    .objects(term, &Iri::from_static(p))
                    .next()
                    .is_some()
            })
    }

    fn node(&mut self, term: &Term) {
        if !self.model.nodes.contains_key(term) {
            let node = DiagramNode {
                id: term.clone(),
                kind: self.kind_of(term),
                label: self.label(term),
                annotations: BTreeSet::new(),
            };
            self.model.nodes.insert(term.clone(), node);
        }
    }

    fn edge(&mut self, from: &Term, to: &Term, label: String, kind: RelationKind) {
        self.node(from);
        self.node(to);
        self.model.edges.insert(DiagramEdge {
            from: from.clone(),
            to: to.clone(),
            label,
            kind,
        });
    }

    /// Property label with bracketed axiom tags such as `[transitive]`.
    fn property_label(&self, p: &Iri) -> String {
        let mut label = compact(p, &self.prefixes);
        let subject = Term::Iri(p.clone());
        for (class, tag) in PROPERTY_AXIOMS {
            if self
                .graph
                .objects(&subject, &rdf::type_())
                .any(|c| c.as_iri().is_some_and(|c| c.as_str() == class))
            {
                label.push_str(&format!(" [{tag}]"));
            }
        }
        label
    }

    fn diagnostic(&mut self, severity: Severity, code: &'static str, focus: &Term, message: &str) {
        self.model.diagnostics.push(Diagnostic::new(
            severity,
            code,
            focus.clone(),
            message,
            "build_model",
        ));
    }

    fn subclass_and_restrictions(&mut self) {
        let triples: Vec<_> = self
            .graph
            .with_predicate(&rdfs::sub_class_of())
            .cloned()
            .collect();
        for t in triples {
            match t.object() {
                Term::Iri(_) => self.edge(
                    t.subject(),
                    t.object(),
                    String::new(),
                    RelationKind::Subclass,
                ),
                Term::Blank(_) => self.restriction(t.subject(), t.object()),
                Term::Literal(_) => {}
            }
        }
    }

    fn restriction(&mut self, class: &Term, node: &Term) {
        if !self.is_restriction(node) {
            self.diagnostic(
                Severity::Info,
                "DIAG002",
                node,
                "anonymous class expression is not drawn",
            );
            return;
        }
        let Some(Term::Iri(property)) = self
            .graph
            .objects(node, &owl::on_property())
            .next()
            .cloned()
        else {
            self.diagnostic(
                Severity::Warning,
                "DIAG001",
                node,
                "restriction has no owl:onProperty and is skipped",
            );
            return;
        };
        let label = self.property_label(&property);
        let first =
            |b: &Self, p: &'static str| b.graph.objects(node, &Iri::from_static(p)).next().cloned();
        let mut drawn = false;

        if let Some(target) = first(self, owl::SOME_VALUES_FROM) {
            self.edge(class, &target, label.clone(), RelationKind::Imperative);
            drawn = true;
        }
        if let Some(value) = first(self, owl::HAS_VALUE) {
            self.edge(class, &value, label.clone(), RelationKind::Imperative);
            drawn = true;
        }
        if let Some(target) = first(self, owl::ALL_VALUES_FROM) {
            self.edge(
                class,
                &target,
                format!("{label} [only]"),
                RelationKind::Optional,
            );
            drawn = true;
        }
        let target = first(self, owl::ON_CLASS).unwrap_or_else(|| Term::Iri(owl::thing()));
        for (predicate, symbol) in [
            (owl::MIN_CARDINALITY, "≥"),
            (owl::MIN_QUALIFIED_CARDINALITY, "≥"),
            (owl::CARDINALITY, "="),
            (owl::QUALIFIED_CARDINALITY, "="),
            (owl::MAX_CARDINALITY, "≤"),
            (owl::MAX_QUALIFIED_CARDINALITY, "≤"),
        ] {
            let Some(n) = first(self, predicate) else {
                continue;
            };
            let Some(count) = n
                .as_literal()
                .and_then(|l| l.lexical().trim().parse::<u64>().ok())
            else {
                self.diagnostic(
                    Severity::Warning,
                    "DIAG003",
                    &n,
                    "cardinality is not a non-negative integer",
                );
                continue;
            };
            // At least one value is forced only by a positive lower bound.
            let kind = if symbol != "≤" && count >= 1 {
                RelationKind::Imperative
            } else {
                RelationKind::Optional
            };
            self.edge(class, &target, format!("{label} [{symbol}{count}]"), kind);
            drawn = true;
        }
        if !drawn {
            self.diagnostic(
                Severity::Info,
                "DIAG002",
                node,
                "restriction kind is not drawn",
            );
        }
    }

    fn domain_range(&mut self, profiles: &Profiles) {
        let thing = Term::Iri(owl::thing());
        for profile in profiles.properties.values() {
            if profile.declared_domains.is_empty() && profile.declared_ranges.is_empty() {
                continue;
            }
            let label = self.property_label(&profile.property);
            let sides = |set: &BTreeSet<Iri>| -> Vec<Term> {
                if set.is_empty() {
                    vec![thing.clone()]
                } else {
                    set.iter().cloned().map(Term::Iri).collect()
                }
            };
            for from in sides(&profile.declared_domains) {
                for to in sides(&profile.declared_ranges) {
                    self.edge(&from, &to, label.clone(), RelationKind::DomainRange);
                }
            }
        }
    }

    fn potential(&mut self, profiles: &Profiles) {
        let any = any_node();
        for profile in profiles.properties.values() {
            if profile.potential_domains.is_empty() && profile.potential_ranges.is_empty() {
                continue;
            }
            let label = self.property_label(&profile.property);
            let sides = |set: &BTreeSet<Iri>| -> Vec<Term> {
                if set.is_empty() {
                    vec![any.clone()]
                } else {
                    set.iter().cloned().map(Term::Iri).collect()
                }
            };
            for from in sides(&profile.potential_domains) {
                for to in sides(&profile.potential_ranges) {
                    self.edge(&from, &to, label.clone(), RelationKind::Optional);
                }
            }
        }
        for class in profiles.classes.values() {
            let c = Term::Iri(class.class.clone());
            for p in &class.potential_predicates {
                let label = self.property_label(p);
                self.edge(&c, &any, label, RelationKind::Optional);
            }
            for p in &class.potential_post_predicates {
                let label = self.property_label(p);
                self.edge(&any, &c, label, RelationKind::Optional);
            }
        }
    }

    fn type_assertions(&mut self) {
        let triples: Vec<_> = self.graph.with_predicate(&rdf::type_()).cloned().collect();
        for t in triples {
            let Term::Iri(class) = t.object() else {
                continue;
            };
            let s = class.as_str();
            let schema = [rdf::NS, rdfs::NS, owl::NS, xsd::NS, self.rdfe_base.as_str()]
                .iter()
                .any(|ns| s.starts_with(ns));
            if schema || self.inventory.is_class(t.subject()) {
                continue;
            }
            self.edge(
                t.subject(),
                t.object(),
                String::new(),
                RelationKind::TypeAssertion,
            );
        }
    }

    fn individual_like(&self, term: &Term) -> bool {
        self.inventory.is_individual(term)
            || matches!(term, Term::Iri(_)
                if !self.inventory.is_class(term)
                    && self.graph.objects(term, &rdf::type_()).next().is_none())
    }

    fn relations(&mut self) {
        let triples: Vec<_> = self
            .graph
            .iter()
            .filter(|t| !is_reserved(t.predicate(), &self.rdfe_base))
            .cloned()
            .collect();
        for t in triples {
            let (s, o) = (t.subject(), t.object());
            if let Term::Literal(l) = o {
                self.node(s);
                let line = format!(
                    "{} = {}",
                    compact(t.predicate(), &self.prefixes),
                    l.lexical()
                );
                if let Some(node) = self.model.nodes.get_mut(s) {
                    node.annotations.insert(line);
                }
                continue;
            }
            if self.inventory.is_class(s) && self.inventory.is_class(o) {
                let label = self.property_label(t.predicate());
                self.edge(s, o, label, RelationKind::DomainRange);
            } else if self.individual_like(s) && self.individual_like(o) {
                let label = self.property_label(t.predicate());
                self.edge(s, o, label, RelationKind::Individual);
            }
        }
    }
}

/// `prefix:local` when a prefix covers the IRI, else `<iri>`.
pub fn compact(iri: &Iri, prefixes: &BTreeMap<String, Iri>) -> String {
    let s = iri.as_str();
    prefixes
        .iter()
        .filter_map(|(prefix, ns)| {
            s.strip_prefix(ns.as_str())
                .map(|local| (ns.as_str().len(), prefix, local))
        })
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)))
        .map_or_else(
            || iri.to_string(),
            |(_, prefix, local)| format!("{prefix}:{local}"),
        )
}
