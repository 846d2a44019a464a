//! Forward-chaining RDFS closure over a small rule subset.
//!
//! Evaluation is semi-naive: each round only joins the triples derived in
//! the previous round against everything known so far. Every derived triple
//! remembers the first rule application that produced it, which is what
//! [`explain`] walks back through.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Graph;
use crate::model::{Iri, Term, Triple};
use crate::vocab::{rdf, rdfs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `p rdfs:domain C`, `s p o` => `s rdf:type C`
    Domain,
    /// `p rdfs:range C`, `s p o` => `o rdf:type C`
    Range,
    /// `s rdf:type C`, `C rdfs:subClassOf D` => `s rdf:type D`
    SubclassInstance,
    SubclassTransitivity,
    SubpropertyTransitivity,
    /// `p rdfs:subPropertyOf q`, `s p o` => `s q o`
    SubpropertyPropagation,
}

impl Rule {
    pub const ALL: [Rule; 6] = [
        Rule::Domain,
        Rule::Range,
        Rule::SubclassInstance,
        Rule::SubclassTransitivity,
        Rule::SubpropertyTransitivity,
        Rule::SubpropertyPropagation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Domain => "domain",
            Rule::Range => "range",
            Rule::SubclassInstance => "subclass-instance",
            Rule::SubclassTransitivity => "subclass-transitivity",
            Rule::SubpropertyTransitivity => "subproperty-transitivity",
            Rule::SubpropertyPropagation => "subproperty-propagation",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleSetError {
    #[error("a rule set needs at least one rule")]
    Empty,
    #[error("unknown rule {0:?}; expected one of domain, range, subclass-instance, subclass-transitivity, subproperty-transitivity, subproperty-propagation, all")]
    Unknown(String),
}

impl FromStr for Rule {
    type Err = RuleSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| RuleSetError::Unknown(s.to_owned()))
    }
}

/// A non-empty selection of rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet(BTreeSet<Rule>);

impl RuleSet {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Result<Self, RuleSetError> {
        let rules: BTreeSet<Rule> = rules.into_iter().collect();
        if rules.is_empty() {
            return Err(RuleSetError::Empty);
        }
        Ok(RuleSet(rules))
    }

    pub fn all() -> Self {
        RuleSet(Rule::ALL.into_iter().collect())
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.0.contains(&rule)
    }

    pub fn iter(&self) -> impl Iterator<Item = Rule> + '_ {
        self.0.iter().copied()
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::all()
    }
}

impl FromStr for RuleSet {
    type Err = RuleSetError;

    /// Comma-separated rule names, or `all`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rules = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                rules.extend(Rule::ALL);
            } else {
                rules.insert(part.parse()?);
            }
        }
        RuleSet::new(rules)
    }
}

/// Least fixed point of `rules` over `graph`. Input triples are retained.
pub fn closure(graph: &Graph, rules: &RuleSet) -> Graph {
    Saturation::run(graph, rules).into_graph()
}

/// One rule application: the conclusion and the premises it used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub premises: Vec<Triple>,
    pub conclusion: Triple,
}

/// Steps leading from asserted triples to the requested one; each step's
/// premises are asserted or concluded by an earlier step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplainError {
    #[error("{0} is asserted, not inferred")]
    Asserted(Box<Triple>),
    #[error("{0} is not entailed by the graph under the selected rules")]
    NotEntailed(Box<Triple>),
}

pub fn explain(
    graph: &Graph,
    inferred: &Triple,
    rules: &RuleSet,
) -> Result<Derivation, ExplainError> {
    if graph.contains(inferred) {
        return Err(ExplainError::Asserted(Box::new(inferred.clone())));
    }
    let sat = Saturation::run(graph, rules);
    if !sat.known.contains(inferred) {
        return Err(ExplainError::NotEntailed(Box::new(inferred.clone())));
    }
    let mut steps = Vec::new();
    let mut done = HashSet::new();
    collect_steps(&sat, inferred, &mut done, &mut steps);
    Ok(Derivation { steps })
}

fn collect_steps(sat: &Saturation, t: &Triple, done: &mut HashSet<Triple>, out: &mut Vec<Step>) {
    let Some(step) = sat.provenance.get(t) else {
        return;
    };
    if !done.insert(t.clone()) {
        return;
    }
    for premise in &step.premises {
        collect_steps(sat, premise, done, out);
    }
    out.push(step.clone());
}

struct Saturation {
    known: HashSet<Triple>,
    /// (predicate, subject) -> objects
    by_sp: HashMap<(Iri, Term), Vec<Term>>,
    /// (predicate, object) -> subjects
    by_po: HashMap<(Iri, Term), Vec<Term>>,
    by_p: HashMap<Iri, Vec<(Term, Term)>>,
    provenance: HashMap<Triple, Step>,
    order: Vec<Triple>,
}

impl Saturation {
    fn run(graph: &Graph, rules: &RuleSet) -> Saturation {
        let mut sat = Saturation {
            known: HashSet::new(),
            by_sp: HashMap::new(),
            by_po: HashMap::new(),
            by_p: HashMap::new(),
            provenance: HashMap::new(),
            order: Vec::new(),
        };
        for t in graph.iter() {
            sat.add(t.clone());
        }
        let mut delta: Vec<Triple> = graph.iter().cloned().collect();
        while !delta.is_empty() {
            let mut next = Vec::new();
            for t in &delta {
                for step in sat.fire(t, rules) {
                    if !sat.known.contains(&step.conclusion) {
                        sat.add(step.conclusion.clone());
                        next.push(step.conclusion.clone());
                        sat.provenance.insert(step.conclusion.clone(), step);
                    }
                }
            }
            delta = next;
        }
        sat
    }

    fn into_graph(self) -> Graph {
        self.order.into_iter().collect()
    }

    fn add(&mut self, t: Triple) {
        let (s, p, o) = (
            t.subject().clone(),
            t.predicate().clone(),
            t.object().clone(),
        );
        self.by_sp
            .entry((p.clone(), s.clone()))
            .or_default()
            .push(o.clone());
        self.by_po
            .entry((p.clone(), o.clone()))
            .or_default()
            .push(s.clone());
        self.by_p.entry(p).or_default().push((s, o));
        self.known.insert(t.clone());
        self.order.push(t);
    }

    fn objects(&self, p: &Iri, s: &Term) -> &[Term] {
        self.by_sp
            .get(&(p.clone(), s.clone()))
            .map_or(&[], Vec::as_slice)
    }

    fn subjects(&self, p: &Iri, o: &Term) -> &[Term] {
        self.by_po
            .get(&(p.clone(), o.clone()))
            .map_or(&[], Vec::as_slice)
    }

    fn pairs(&self, p: &Iri) -> &[(Term, Term)] {
        self.by_p.get(p).map_or(&[], Vec::as_slice)
    }

    /// Every conclusion that uses `t` as one of its premises, the other
    /// premise being any known triple.
    fn fire(&self, t: &Triple, rules: &RuleSet) -> Vec<Step> {
        let mut out = Vec::new();
        let (s, p, o) = (t.subject(), t.predicate(), t.object());
        let mut emit =
            |rule: Rule, premises: [&Triple; 2], subject: &Term, predicate: Iri, object: &Term| {
                // Conclusions with a literal subject are not valid triples.
                if let Ok(conclusion) = Triple::new(subject.clone(), predicate, object.clone()) {
                    out.push(Step {
                        rule,
                        premises: premises.into_iter().cloned().collect(),
                        conclusion,
                    });
                }
            };
        let triple = |s: &Term, p: &Iri, o: &Term| {
            Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed subject")
        };
        let type_ = rdf::type_();
        let sco = rdfs::sub_class_of();
        let spo = rdfs::sub_property_of();

        for (rule, schema_pred, to_object) in [
            (Rule::Domain, rdfs::domain(), false),
            (Rule::Range, rdfs::range(), true),
        ] {
            if !rules.contains(rule) {
                continue;
            }
            // t is the schema triple `p domain C`
            if *p == schema_pred {
                if let Term::Iri(prop) = s {
                    for (ds, dobj) in self.pairs(prop) {
                        let usage = triple(ds, prop, dobj);
                        let target = if to_object { dobj } else { ds };
                        emit(rule, [t, &usage], target, type_.clone(), o);
                    }
                }
            }
            // t is a usage `s p o`
            for class in self.objects(&schema_pred, &Term::Iri(p.clone())) {
                let schema = triple(&Term::Iri(p.clone()), &schema_pred, class);
                let target = if to_object { o } else { s };
                emit(rule, [&schema, t], target, type_.clone(), class);
            }
        }

        if rules.contains(Rule::SubclassInstance) {
            if *p == type_ {
                for sup in self.objects(&sco, o) {
                    let schema = triple(o, &sco, sup);
                    emit(Rule::SubclassInstance, [t, &schema], s, type_.clone(), sup);
                }
            }
            if *p == sco {
                for inst in self.subjects(&type_, s) {
                    let typing = triple(inst, &type_, s);
                    emit(Rule::SubclassInstance, [&typing, t], inst, type_.clone(), o);
                }
            }
        }

        for (rule, pred) in [
            (Rule::SubclassTransitivity, &sco),
            (Rule::SubpropertyTransitivity, &spo),
        ] {
            if !rules.contains(rule) || p != pred {
                continue;
            }
            // s < o, o < x  =>  s < x
            for up in self.objects(pred, o) {
                let second = triple(o, pred, up);
                emit(rule, [t, &second], s, pred.clone(), up);
            }
            // x < s, s < o  =>  x < o
            for down in self.subjects(pred, s) {
                let first = triple(down, pred, s);
                emit(rule, [&first, t], down, pred.clone(), o);
            }
        }

        if rules.contains(Rule::SubpropertyPropagation) {
            if *p == spo {
                if let (Term::Iri(sub), Term::Iri(sup)) = (s, o) {
                    for (us, uo) in self.pairs(sub) {
                        let usage = triple(us, sub, uo);
                        emit(
                            Rule::SubpropertyPropagation,
                            [t, &usage],
                            us,
                            sup.clone(),
                            uo,
                        );
                    }
                }
            }
            for sup in self.objects(&spo, &Term::Iri(p.clone())) {
                if let Term::Iri(sup_iri) = sup {
                    let schema = triple(&Term::Iri(p.clone()), &spo, sup);
                    emit(
                        Rule::SubpropertyPropagation,
                        [&schema, t],
                        s,
                        sup_iri.clone(),
                        o,
                    );
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turtle::parse;

    fn graph(src: &str) -> Graph {
        parse(&format!("@prefix ex: <http://example.org/> .\n{src}"), None)
            .unwrap()
            .default
    }

    fn t(src: &str) -> Triple {
        graph(src).iter().next().unwrap().clone()
    }

    #[test]
    fn domain_makes_the_hammer_an_animal() {
        let g = graph("ex:name rdfs:domain ex:Animal . ex:hammer ex:name \"Maul\" .");
        let c = closure(&g, &RuleSet::all());
        assert!(c.contains(&t("ex:hammer a ex:Animal .")));
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn empty_graph() {
        assert!(closure(&Graph::new(), &RuleSet::all()).is_empty());
    }

    #[test]
    fn range_skips_literal_objects() {
        let g =
            graph("ex:name rdfs:range ex:Name . ex:hammer ex:name \"Maul\" . ex:a ex:name ex:n .");
        let c = closure(&g, &RuleSet::all());
        assert_eq!(c.len(), 4);
        assert!(c.contains(&t("ex:n a ex:Name .")));
    }

    #[test]
    fn transitivity_and_propagation() {
        let g = graph(
            "ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C . ex:x a ex:A .\n\
             ex:p rdfs:subPropertyOf ex:q . ex:q rdfs:subPropertyOf ex:r . ex:x ex:p ex:y .",
        );
        let c = closure(&g, &RuleSet::all());
        for expected in [
            "ex:A rdfs:subClassOf ex:C .",
            "ex:x a ex:B .",
            "ex:x a ex:C .",
            "ex:p rdfs:subPropertyOf ex:r .",
            "ex:x ex:q ex:y .",
            "ex:x ex:r ex:y .",
        ] {
            assert!(c.contains(&t(expected)), "{expected}");
        }
        assert_eq!(c.len(), g.len() + 6);
    }

    #[test]
    fn rule_selection() {
        let g = graph("ex:name rdfs:domain ex:Animal . ex:hammer ex:name \"Maul\" .");
        let rules: RuleSet = "range,subclass-instance".parse().unwrap();
        assert_eq!(closure(&g, &rules), g);
        assert_eq!("".parse::<RuleSet>(), Err(RuleSetError::Empty));
        assert!(matches!(
            "domain,bogus".parse::<RuleSet>(),
            Err(RuleSetError::Unknown(_))
        ));
        assert_eq!("all".parse::<RuleSet>().unwrap(), RuleSet::all());
    }

    #[test]
    fn explain_one_step() {
        let g = graph("ex:name rdfs:domain ex:Animal . ex:hammer ex:name \"Maul\" .");
        let d = explain(&g, &t("ex:hammer a ex:Animal ."), &RuleSet::all()).unwrap();
        assert_eq!(d.steps.len(), 1);
        assert_eq!(d.steps[0].rule, Rule::Domain);
        let premises: BTreeSet<_> = d.steps[0].premises.iter().cloned().collect();
        assert_eq!(premises, g.iter().cloned().collect());
    }

    #[test]
    fn explain_errors() {
        let g = graph("ex:name rdfs:domain ex:Animal . ex:hammer ex:name \"Maul\" .");
        assert!(matches!(
            explain(&g, &t("ex:name rdfs:domain ex:Animal ."), &RuleSet::all()),
            Err(ExplainError::Asserted(_))
        ));
        assert!(matches!(
            explain(&g, &t("ex:hammer a ex:Tool ."), &RuleSet::all()),
            Err(ExplainError::NotEntailed(_))
        ));
    }

    #[test]
    fn explain_multi_step_chain_is_ordered() {
        let g = graph("ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C . ex:p rdfs:domain ex:A . ex:x ex:p ex:y .");
        let target = t("ex:x a ex:C .");
        let d = explain(&g, &target, &RuleSet::all()).unwrap();
        assert_eq!(d.steps.last().unwrap().conclusion, target);
        let mut available: HashSet<Triple> = g.iter().cloned().collect();
        for step in &d.steps {
            assert!(step.premises.iter().all(|p| available.contains(p)));
            available.insert(step.conclusion.clone());
        }
    }
}
