//! OWL/SKOS bridging: class inventory, OWL Full detection, OWL to SKOS
//! translation, the subclass-of-`skos:Concept` annotation strategy and a
//! small SKOS quality check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::diagnostic::{sort_diagnostics, Diagnostic, Severity};
use crate::graph::Graph;
use crate::model::{Iri, Term, Triple};
use crate::vocab::{owl, rdf, rdfs, skos, xsd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Evidence {
    TypedOwlClass,
    TypedRdfsClass,
    SubclassOfSubject,
    SubclassOfObject,
    RdfTypeObject,
    DomainObject,
    RangeObject,
}

impl Evidence {
    pub fn tag(self) -> &'static str {
        match self {
            Evidence::TypedOwlClass => "typed-owl-class",
            Evidence::TypedRdfsClass => "typed-rdfs-class",
            Evidence::SubclassOfSubject => "subclassof-subject",
            Evidence::SubclassOfObject => "subclassof-object",
            Evidence::RdfTypeObject => "rdf-type-object",
            Evidence::DomainObject => "domain-object",
            Evidence::RangeObject => "range-object",
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Classes whose instances are schema elements (classes, properties,
/// ontologies, datatypes, restrictions) rather than individuals.
pub const METACLASSES: [&str; 17] = [
    owl::CLASS,
    rdfs::CLASS,
    rdf::PROPERTY,
    owl::OBJECT_PROPERTY,
    owl::DATATYPE_PROPERTY,
    owl::ANNOTATION_PROPERTY,
    owl::ONTOLOGY,
    rdfs::DATATYPE,
    owl::RESTRICTION,
    owl::TRANSITIVE_PROPERTY,
    owl::SYMMETRIC_PROPERTY,
    owl::ASYMMETRIC_PROPERTY,
    owl::REFLEXIVE_PROPERTY,
    owl::IRREFLEXIVE_PROPERTY,
    owl::FUNCTIONAL_PROPERTY,
    owl::INVERSE_FUNCTIONAL_PROPERTY,
    "http://www.w3.org/2002/07/owl#DeprecatedClass",
];

pub fn is_metaclass(iri: &Iri) -> bool {
    METACLASSES.contains(&iri.as_str())
}

/// Modelling vocabulary never counts as a user class.
fn is_vocabulary(iri: &Iri) -> bool {
    let s = iri.as_str();
    [rdf::NS, rdfs::NS, owl::NS, skos::NS, xsd::NS]
        .iter()
        .any(|ns| s.starts_with(ns))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassInventory {
    /// Evidence-bearing IRIs outside the RDF/RDFS/OWL/SKOS/XSD namespaces.
    pub named_classes: BTreeSet<Iri>,
    pub class_evidence: BTreeMap<Iri, BTreeSet<Evidence>>,
    /// Term -> classes it is asserted to be an instance of.
    pub individual_evidence: BTreeMap<Term, BTreeSet<Iri>>,
}

impl ClassInventory {
    pub fn is_class(&self, term: &Term) -> bool {
        term.as_iri()
            .is_some_and(|iri| self.class_evidence.contains_key(iri))
    }

    pub fn is_individual(&self, term: &Term) -> bool {
        self.individual_evidence.contains_key(term)
    }
}

pub fn inventory(graph: &Graph) -> ClassInventory {
    let mut inv = ClassInventory::default();
    let mut add = |term: &Term, ev: Evidence| {
        if let Term::Iri(iri) = term {
            inv.class_evidence
                .entry(iri.clone())
                .or_default()
                .insert(ev);
        }
    };
    for t in graph.iter() {
        let p = t.predicate().as_str();
        match p {
            rdf::TYPE => {
                if *t.object() == owl::class() {
                    add(t.subject(), Evidence::TypedOwlClass);
                } else if *t.object() == rdfs::class() {
                    add(t.subject(), Evidence::TypedRdfsClass);
                }
                add(t.object(), Evidence::RdfTypeObject);
            }
            rdfs::SUB_CLASS_OF => {
                add(t.subject(), Evidence::SubclassOfSubject);
                add(t.object(), Evidence::SubclassOfObject);
            }
            rdfs::DOMAIN => add(t.object(), Evidence::DomainObject),
            rdfs::RANGE => add(t.object(), Evidence::RangeObject),
            _ => {}
        }
    }
    for t in graph.with_predicate(&rdf::type_()) {
        if let Term::Iri(class) = t.object() {
            if !is_metaclass(class) {
                inv.individual_evidence
                    .entry(t.subject().clone())
                    .or_default()
                    .insert(class.clone());
            }
        }
    }
    inv.named_classes = inv
        .class_evidence
        .keys()
        .filter(|iri| !is_vocabulary(iri))
        .cloned()
        .collect();
    inv
}

/// A term used both as a class and as an individual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwlFullFinding {
    pub term: Term,
    pub class_evidence: BTreeSet<Evidence>,
    pub individual_evidence: BTreeSet<Iri>,
    /// Individual-hood comes only from the `skos:Concept` domain/range of
    /// the SKOS properties the term takes part in.
    pub via_skos_entailment: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OwlFullReport {
    pub findings: Vec<OwlFullFinding>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Terms whose use of SKOS relations makes them `skos:Concept` instances.
fn skos_entailed_concepts(graph: &Graph) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for p in [skos::broader(), skos::narrower(), skos::related()] {
        for t in graph.with_predicate(&p) {
            out.insert(t.subject().clone());
            out.insert(t.object().clone());
        }
    }
    for p in [skos::in_scheme(), skos::top_concept_of()] {
        for t in graph.with_predicate(&p) {
            out.insert(t.subject().clone());
        }
    }
    out
}

pub fn detect_owl_full(graph: &Graph) -> OwlFullReport {
    let inv = inventory(graph);
    let entailed = skos_entailed_concepts(graph);
    let mut report = OwlFullReport::default();
    for (iri, class_evidence) in &inv.class_evidence {
        let term = Term::Iri(iri.clone());
        let explicit = inv
            .individual_evidence
            .get(&term)
            .cloned()
            .unwrap_or_default();
        let via_skos = entailed.contains(&term);
        if explicit.is_empty() && !via_skos {
            continue;
        }
        let mut individual_evidence = explicit.clone();
        if via_skos {
            individual_evidence.insert(skos::concept());
        }
        let tags: Vec<&str> = class_evidence.iter().map(|e| e.tag()).collect();
        let classes: Vec<String> = individual_evidence.iter().map(Iri::to_string).collect();
        let diagnostic = if explicit.is_empty() {
            Diagnostic::new(
                Severity::Error,
                "OWLFULL002",
                term.clone(),
                format!(
                    "used as a class ({}) and as the subject or object of SKOS relations whose domain/range is skos:Concept, which makes it an individual",
                    tags.join(", ")
                ),
                "detect_owl_full",
            )
        } else {
            Diagnostic::new(
                Severity::Error,
                "OWLFULL001",
                term.clone(),
                format!(
                    "used as a class ({}) and as an instance of {}",
                    tags.join(", "),
                    classes.join(", ")
                ),
                "detect_owl_full",
            )
        };
        report.diagnostics.push(diagnostic);
        report.findings.push(OwlFullFinding {
            term,
            class_evidence: class_evidence.clone(),
            individual_evidence,
            via_skos_entailment: explicit.is_empty(),
        });
    }
    sort_diagnostics(&mut report.diagnostics);
    report
}

/// Named classes that take part in the translation and annotation.
fn translatable_classes(inv: &ClassInventory) -> BTreeSet<Iri> {
    inv.named_classes
        .iter()
        .filter(|c| !is_metaclass(c) && **c != owl::thing() && **c != owl::nothing())
        .cloned()
        .collect()
}

fn t(s: &Iri, p: Iri, o: impl Into<Term>) -> Triple {
    Triple::new(Term::Iri(s.clone()), p, o).expect("IRI subject")
}

/// Translates the class structure of an OWL ontology into a standalone SKOS
/// concept scheme.
pub fn skosify(owl_graph: &Graph, scheme: &Iri) -> Graph {
    let classes = translatable_classes(&inventory(owl_graph));
    let mut out = Graph::new();
    out.insert(t(scheme, rdf::type_(), skos::concept_scheme()));
    for class in &classes {
        let subject = Term::Iri(class.clone());
        out.insert(t(class, rdf::type_(), skos::concept()));
        out.insert(t(class, skos::in_scheme(), scheme.clone()));
        let mut has_named_super = false;
        for sup in owl_graph.objects(&subject, &rdfs::sub_class_of()) {
            if let Term::Iri(sup) = sup {
                if sup != class && classes.contains(sup) {
                    out.insert(t(class, skos::broader(), sup.clone()));
                    has_named_super = true;
                }
            }
        }
        for label in owl_graph.objects(&subject, &rdfs::label()) {
            out.insert(t(class, skos::pref_label(), label.clone()));
        }
        for comment in owl_graph.objects(&subject, &rdfs::comment()) {
            out.insert(t(class, skos::definition(), comment.clone()));
        }
        if !has_named_super {
            out.insert(t(scheme, skos::has_top_concept(), class.clone()));
            out.insert(t(class, skos::top_concept_of(), scheme.clone()));
        }
    }
    out
}

/// Adds `C rdfs:subClassOf skos:Concept` for every named class.
pub fn annotate_subclass_strategy(owl_graph: &Graph) -> (Graph, Vec<Diagnostic>) {
    let classes = translatable_classes(&inventory(owl_graph));
    let mut out = owl_graph.clone();
    let mut diagnostics = Vec::new();
    let concept = Term::Iri(skos::concept());
    for class in &classes {
        out.insert(t(class, rdfs::sub_class_of(), skos::concept()));
        let typed = t(class, rdf::type_(), concept.clone());
        if owl_graph.contains(&typed) {
            diagnostics.push(Diagnostic::new(
                Severity::Warning,
                "SKOS001",
                typed,
                "class is also typed skos:Concept; together with the subclass annotation this is an OWL Full construction",
                "annotate_subclass_strategy",
            ));
        }
    }
    diagnostics.push(Diagnostic::new(
        Severity::Info,
        "SKOS002",
        concept,
        "declaring OWL classes as subclasses of skos:Concept may conflict with the SKOS and OWL specifications and has not been validated",
        "annotate_subclass_strategy",
    ));
    sort_diagnostics(&mut diagnostics);
    (out, diagnostics)
}

/// Checks duplicate preferred labels per language, `skos:broader` loops and
/// cycles, and concepts that belong to no scheme.
pub fn validate_skos(graph: &Graph) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();
    let concepts: BTreeSet<&Term> = graph
        .subjects(&rdf::type_(), &Term::Iri(skos::concept()))
        .collect();

    for concept in &concepts {
        let mut by_lang: BTreeMap<Option<&str>, Vec<&Term>> = BTreeMap::new();
        for label in graph.objects(concept, &skos::pref_label()) {
            let lang = label.as_literal().and_then(|l| l.language());
            by_lang.entry(lang).or_default().push(label);
        }
        for (lang, labels) in by_lang {
            if labels.len() > 1 {
                let texts: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                diagnostics.push(Diagnostic::new(
                    Severity::Warning,
                    "SKOS101",
                    (*concept).clone(),
                    format!(
                        "{} skos:prefLabel values share the language {}: {}",
                        labels.len(),
                        lang.unwrap_or("(none)"),
                        texts.join(", ")
                    ),
                    "validate_skos",
                ));
            }
        }
        let in_scheme = graph.objects(concept, &skos::in_scheme()).next().is_some()
            || graph
                .objects(concept, &skos::top_concept_of())
                .next()
                .is_some()
            || graph
                .subjects(&skos::has_top_concept(), concept)
                .next()
                .is_some();
        if !in_scheme {
            diagnostics.push(Diagnostic::new(
                Severity::Warning,
                "SKOS104",
                (*concept).clone(),
                "concept is not in any concept scheme",
                "validate_skos",
            ));
        }
    }

    let mut nodes: BTreeMap<&Term, petgraph::graph::NodeIndex> = BTreeMap::new();
    let mut broader = DiGraph::<&Term, ()>::new();
    for edge in graph.with_predicate(&skos::broader()) {
        if edge.subject() == edge.object() {
            diagnostics.push(Diagnostic::new(
                Severity::Warning,
                "SKOS102",
                edge.clone(),
                "concept is broader than itself",
                "validate_skos",
            ));
            continue;
        }
        let mut index = |term| *nodes.entry(term).or_insert_with(|| broader.add_node(term));
        let (a, b) = (index(edge.subject()), index(edge.object()));
        broader.add_edge(a, b, ());
    }
    for component in tarjan_scc(&broader) {
        if component.len() < 2 {
            continue;
        }
        let mut members: Vec<&Term> = component.iter().map(|i| broader[*i]).collect();
        members.sort();
        let names: Vec<String> = members.iter().map(|m| m.to_string()).collect();
        diagnostics.push(Diagnostic::new(
            Severity::Warning,
            "SKOS103",
            members[0].clone(),
            format!("skos:broader cycle through {}", names.join(", ")),
            "validate_skos",
        ));
    }
    sort_diagnostics(&mut diagnostics);
    diagnostics
}
