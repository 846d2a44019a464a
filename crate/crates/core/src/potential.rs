//! The `rdfe:` extension vocabulary: potential (non-restrictive) domains,
//! ranges and predicates.
//!
//! These properties document how a property or class is likely to be used
//! without licensing any inference. Nothing here adds triples to a graph;
//! the vocabulary is only ever read for linting, suggestions and diagrams.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{sort_diagnostics, Diagnostic, Severity};
use crate::graph::Graph;
use crate::model::{Iri, Term, TermError, Triple};
use crate::reasoner::{closure, Rule, RuleSet};
use crate::skos::inventory;
use crate::vocab::{is_reserved, rdf, rdfs, RDFE_DEFAULT_BASE};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionVocabulary {
    base: Iri,
}

impl Default for ExtensionVocabulary {
    fn default() -> Self {
        ExtensionVocabulary {
            base: Iri::from_static(RDFE_DEFAULT_BASE),
        }
    }
}

impl ExtensionVocabulary {
    pub fn new(base: Iri) -> Self {
        ExtensionVocabulary { base }
    }

    pub fn with_base(base: &str) -> Result<Self, TermError> {
        Iri::new(base).map(Self::new)
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    fn term(&self, local: &str) -> Iri {
        Iri::new(format!("{}{local}", self.base.as_str())).expect("base plus a simple local name")
    }

    pub fn potential_domain(&self) -> Iri {
        self.term("potentialDomain")
    }

    pub fn potential_range(&self) -> Iri {
        self.term("potentialRange")
    }

    pub fn potential_predicate(&self) -> Iri {
        self.term("potentialPredicate")
    }

    pub fn potential_post_predicate(&self) -> Iri {
        self.term("potentialPostPredicate")
    }

    pub fn fundamental(&self) -> Iri {
        self.term("fundamental")
    }

    /// The four potential-relation properties (not `fundamental`).
    pub fn potential_properties(&self) -> [Iri; 4] {
        [
            self.potential_domain(),
            self.potential_range(),
            self.potential_predicate(),
            self.potential_post_predicate(),
        ]
    }

    pub fn is_potential_property(&self, p: &Iri) -> bool {
        self.potential_properties().contains(p)
    }

    /// The triples of `graph` whose predicate is a potential-relation property.
    pub fn potential_triples(&self, graph: &Graph) -> Graph {
        self.potential_properties()
            .iter()
            .flat_map(|p| graph.with_predicate(p).cloned())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyProfile {
    pub property: Iri,
    pub potential_domains: BTreeSet<Iri>,
    pub potential_ranges: BTreeSet<Iri>,
    pub declared_domains: BTreeSet<Iri>,
    pub declared_ranges: BTreeSet<Iri>,
}

impl PropertyProfile {
    fn new(property: Iri) -> Self {
        PropertyProfile {
            property,
            potential_domains: BTreeSet::new(),
            potential_ranges: BTreeSet::new(),
            declared_domains: BTreeSet::new(),
            declared_ranges: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassProfile {
    pub class: Iri,
    /// Properties an instance of the class may be the subject of.
    pub potential_predicates: BTreeSet<Iri>,
    /// Properties an instance of the class may be the object of.
    pub potential_post_predicates: BTreeSet<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profiles {
    pub vocab: ExtensionVocabulary,
    pub properties: BTreeMap<Iri, PropertyProfile>,
    pub classes: BTreeMap<Iri, ClassProfile>,
    /// Strict transitive superclasses of each class, from `rdfs:subClassOf`.
    pub superclasses: BTreeMap<Iri, BTreeSet<Iri>>,
}

/// Reads property and class profiles. `p rdfe:potentialPredicate C` and
/// `p rdfe:potentialPostPredicate C` have the property as subject. Objects
/// that are not IRIs are left out; [`lint`] reports them.
pub fn extract_profiles(ontology: &Graph, vocab: &ExtensionVocabulary) -> Profiles {
    let mut properties: BTreeMap<Iri, PropertyProfile> = BTreeMap::new();
    let mut classes: BTreeMap<Iri, ClassProfile> = BTreeMap::new();

    type Slot = fn(&mut PropertyProfile) -> &mut BTreeSet<Iri>;
    let property_slots: [(Iri, Slot); 4] = [
        (vocab.potential_domain(), |p| &mut p.potential_domains),
        (vocab.potential_range(), |p| &mut p.potential_ranges),
        (rdfs::domain(), |p| &mut p.declared_domains),
        (rdfs::range(), |p| &mut p.declared_ranges),
    ];
    for (predicate, slot) in property_slots {
        for t in ontology.with_predicate(&predicate) {
            let Term::Iri(property) = t.subject() else {
                continue;
            };
            let profile = properties
                .entry(property.clone())
                .or_insert_with(|| PropertyProfile::new(property.clone()));
            if let Term::Iri(class) = t.object() {
                slot(profile).insert(class.clone());
            }
        }
    }

    for (predicate, post) in [
        (vocab.potential_predicate(), false),
        (vocab.potential_post_predicate(), true),
    ] {
        for t in ontology.with_predicate(&predicate) {
            let (Term::Iri(property), Term::Iri(class)) = (t.subject(), t.object()) else {
                continue;
            };
            let profile = classes
                .entry(class.clone())
                .or_insert_with(|| ClassProfile {
                    class: class.clone(),
                    potential_predicates: BTreeSet::new(),
                    potential_post_predicates: BTreeSet::new(),
                });
            if post {
                profile.potential_post_predicates.insert(property.clone());
            } else {
                profile.potential_predicates.insert(property.clone());
            }
        }
    }

    let hierarchy: Graph = ontology
        .with_predicate(&rdfs::sub_class_of())
        .cloned()
        .collect();
    let rules = RuleSet::new([Rule::SubclassTransitivity]).expect("non-empty");
    let mut superclasses: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for t in closure(&hierarchy, &rules).iter() {
        if let (Term::Iri(sub), Term::Iri(sup)) = (t.subject(), t.object()) {
            if sub != sup {
                superclasses
                    .entry(sub.clone())
                    .or_default()
                    .insert(sup.clone());
            }
        }
    }

    Profiles {
        vocab: vocab.clone(),
        properties,
        classes,
        superclasses,
    }
}

/// Non-restrictive lint over `data`, using `ontology` for the vocabulary
/// declarations. Never reports errors and never modifies either graph.
///
/// | code    | severity | finding |
/// |---------|----------|---------|
/// | RDFE001 | warning  | property has both `rdfs:domain` and `rdfe:potentialDomain` (or range) |
/// | RDFE002 | hint     | object of a potential triple is a literal, a blank node or never used as a class |
/// | RDFE003 | info     | subject used with a property whose potential domain it is not typed with |
/// | RDFE004 | info     | the same for objects and potential ranges |
pub fn lint(data: &Graph, ontology: &Graph, vocab: &ExtensionVocabulary) -> Vec<Diagnostic> {
    let combined = data.union(ontology);
    let profiles = extract_profiles(&combined, vocab);
    let mut out = Vec::new();

    for profile in profiles.properties.values() {
        for (declared, potential, what, potential_name) in [
            (
                &profile.declared_domains,
                &profile.potential_domains,
                "rdfs:domain",
                "rdfe:potentialDomain",
            ),
            (
                &profile.declared_ranges,
                &profile.potential_ranges,
                "rdfs:range",
                "rdfe:potentialRange",
            ),
        ] {
            if declared.is_empty() || potential.is_empty() {
                continue;
            }
            out.push(Diagnostic::new(
                Severity::Warning,
                "RDFE001",
                Term::Iri(profile.property.clone()),
                format!(
                    "declares both {what} ({}) and {potential_name} ({}); the first forces class membership, the second only documents likely use",
                    join(declared),
                    join(potential)
                ),
                "lint",
            ));
        }
    }

    let potential = vocab.potential_triples(&combined);
    let without_potential: Graph = combined
        .iter()
        .filter(|t| !potential.contains(t))
        .cloned()
        .collect();
    let classes = inventory(&without_potential);
    for t in potential.iter() {
        let problem = match t.object() {
            Term::Literal(_) => Some("object is a literal, expected a class IRI"),
            Term::Blank(_) => {
                Some("object is a blank node; anonymous classes are not recorded in profiles")
            }
            Term::Iri(iri) if is_reserved(iri, vocab.base().as_str()) => None,
            Term::Iri(iri) if !classes.class_evidence.contains_key(iri) => {
                Some("object is never used as a class elsewhere")
            }
            Term::Iri(_) => None,
        };
        let problem = problem.or(t
            .subject()
            .is_blank()
            .then_some("subject is a blank node, expected a property IRI"));
        if let Some(message) = problem {
            out.push(Diagnostic::new(
                Severity::Hint,
                "RDFE002",
                t.clone(),
                message,
                "lint",
            ));
        }
    }

    let entailed = closure(&combined, &RuleSet::all());
    let type_ = rdf::type_();
    for t in data.iter() {
        let Some(profile) = profiles.properties.get(t.predicate()) else {
            continue;
        };
        for class in &profile.potential_domains {
            if !is_typed(&entailed, t.subject(), &type_, class) {
                out.push(Diagnostic::new(
                    Severity::Info,
                    "RDFE003",
                    t.clone(),
                    format!(
                        "subject is not typed {class} (potential domain of {}); this use is allowed and nothing is inferred",
                        t.predicate()
                    ),
                    "lint",
                ));
            }
        }
        // Literals can never be typed, so they are not reported.
        if t.object().is_literal() {
            continue;
        }
        for class in &profile.potential_ranges {
            if !is_typed(&entailed, t.object(), &type_, class) {
                out.push(Diagnostic::new(
                    Severity::Info,
                    "RDFE004",
                    t.clone(),
                    format!(
                        "object is not typed {class} (potential range of {}); this use is allowed and nothing is inferred",
                        t.predicate()
                    ),
                    "lint",
                ));
            }
        }
    }
    sort_diagnostics(&mut out);
    out
}

fn is_typed(graph: &Graph, term: &Term, type_: &Iri, class: &Iri) -> bool {
    Triple::new(term.clone(), type_.clone(), class.clone()).is_ok_and(|t| graph.contains(&t))
}

fn join(set: &BTreeSet<Iri>) -> String {
    set.iter()
        .map(Iri::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    /// Instances of the class are likely subjects of the property.
    Subject,
    /// Instances of the class are likely objects of the property.
    Object,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Suggestion {
    pub property: Iri,
    pub position: Position,
    /// The class the suggestion was declared on: the queried class or one
    /// of its superclasses.
    pub via_class: Iri,
    /// The vocabulary triple the suggestion comes from.
    pub provenance: Triple,
}

/// Properties likely to apply to instances of `class`, including those
/// declared on its superclasses.
pub fn suggest(class: &Iri, profiles: &Profiles) -> Vec<Suggestion> {
    let vocab = &profiles.vocab;
    let mut lineage: BTreeSet<&Iri> = BTreeSet::from([class]);
    if let Some(supers) = profiles.superclasses.get(class) {
        lineage.extend(supers);
    }
    let mut out = BTreeSet::new();
    let mut add = |property: &Iri, position, via: &Iri, predicate: Iri| {
        out.insert(Suggestion {
            property: property.clone(),
            position,
            via_class: via.clone(),
            provenance: Triple::new(property.clone(), predicate, via.clone()).expect("IRI subject"),
        });
    };
    for via in &lineage {
        if let Some(cp) = profiles.classes.get(*via) {
            for p in &cp.potential_predicates {
                add(p, Position::Subject, via, vocab.potential_predicate());
            }
            for p in &cp.potential_post_predicates {
                add(p, Position::Object, via, vocab.potential_post_predicate());
            }
        }
        for pp in profiles.properties.values() {
            if pp.potential_domains.contains(*via) {
                add(
                    &pp.property,
                    Position::Subject,
                    via,
                    vocab.potential_domain(),
                );
            }
            if pp.potential_ranges.contains(*via) {
                add(&pp.property, Position::Object, via, vocab.potential_range());
            }
        }
    }
    out.into_iter().collect()
}
