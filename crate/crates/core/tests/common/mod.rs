#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use rdfe::reasoner::{Rule, RuleSet};
use rdfe::turtle::parse;
use rdfe::vocab::{rdf, rdfs};
use rdfe::{Dataset, Graph, Iri, Literal, Term, Triple};

pub const EX: &str = "http://example.org/";

pub fn ex(local: &str) -> Iri {
    Iri::new(format!("{EX}{local}")).unwrap()
}

pub fn ext(local: &str) -> Term {
    Term::Iri(ex(local))
}

pub fn triple(s: impl Into<Term>, p: Iri, o: impl Into<Term>) -> Triple {
    Triple::new(s, p, o).unwrap()
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).unwrap()
}

pub fn parse_str(src: &str) -> Dataset {
    parse(src, None).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

/// Parses a Turtle snippet with the `ex:` prefix already declared.
pub fn ttl(src: &str) -> Dataset {
    parse_str(&format!("@prefix ex: <{EX}> .\n{src}"))
}

/// The round-trip corpus, sorted by file name.
pub fn corpus() -> Vec<(String, Dataset)> {
    let mut paths: Vec<_> = std::fs::read_dir(fixture_dir().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&p).unwrap();
            let dataset = parse(&text, None).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, dataset)
        })
        .collect()
}

/// Brute-force RDFS fixed point: apply every enabled rule to every pair of
/// triples until nothing changes.
pub fn naive_closure(graph: &Graph, rules: &RuleSet) -> Graph {
    let type_ = rdf::type_();
    let sco = rdfs::sub_class_of();
    let spo = rdfs::sub_property_of();
    let mut known: BTreeSet<Triple> = graph.iter().cloned().collect();
    loop {
        let mut new = Vec::new();
        let all: Vec<Triple> = known.iter().cloned().collect();
        // every rule has a first premise with one of these predicates
        let schema = [
            rdf::TYPE,
            rdfs::DOMAIN,
            rdfs::RANGE,
            rdfs::SUB_CLASS_OF,
            rdfs::SUB_PROPERTY_OF,
        ];
        for a in all
            .iter()
            .filter(|t| schema.contains(&t.predicate().as_str()))
        {
            for b in &all {
                let (asub, apred, aobj) = (a.subject(), a.predicate(), a.object());
                let (bsub, bpred, bobj) = (b.subject(), b.predicate(), b.object());
                let mut add = |s: &Term, p: &Iri, o: &Term| {
                    if let Ok(t) = Triple::new(s.clone(), p.clone(), o.clone()) {
                        new.push(t);
                    }
                };
                let a_names_b_pred = asub.as_iri() == Some(bpred);
                if rules.contains(Rule::Domain) && apred.as_str() == rdfs::DOMAIN && a_names_b_pred
                {
                    add(bsub, &type_, aobj);
                }
                if rules.contains(Rule::Range) && apred.as_str() == rdfs::RANGE && a_names_b_pred {
                    add(bobj, &type_, aobj);
                }
                if rules.contains(Rule::SubclassInstance)
                    && *apred == type_
                    && *bpred == sco
                    && aobj == bsub
                {
                    add(asub, &type_, bobj);
                }
                if rules.contains(Rule::SubclassTransitivity)
                    && *apred == sco
                    && *bpred == sco
                    && aobj == bsub
                {
                    add(asub, &sco, bobj);
                }
                if rules.contains(Rule::SubpropertyTransitivity)
                    && *apred == spo
                    && *bpred == spo
                    && aobj == bsub
                {
                    add(asub, &spo, bobj);
                }
                if rules.contains(Rule::SubpropertyPropagation) && *apred == spo && a_names_b_pred {
                    if let Term::Iri(super_property) = aobj {
                        add(bsub, super_property, bobj);
                    }
                }
            }
        }
        let before = known.len();
        known.extend(new);
        if known.len() == before {
            return known.into_iter().collect();
        }
    }
}

/// Every non-empty subset of the six rules.
pub fn all_rule_subsets() -> Vec<RuleSet> {
    (1u32..64)
        .map(|mask| {
            RuleSet::new(
                Rule::ALL
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, r)| *r),
            )
            .unwrap()
        })
        .collect()
}

/// Ten node terms: seven IRIs, two blank nodes and one literal.
pub fn node_pool() -> Vec<Term> {
    let mut pool: Vec<Term> = (0..7).map(|i| ext(&format!("t{i}"))).collect();
    pool.push(Term::blank("x").unwrap());
    pool.push(Term::blank("y").unwrap());
    pool.push(Term::Literal(Literal::simple("lit")));
    pool
}

pub fn predicate_pool() -> Vec<Iri> {
    let mut pool = vec![
        rdf::type_(),
        rdfs::sub_class_of(),
        rdfs::sub_property_of(),
        rdfs::domain(),
        rdfs::range(),
    ];
    pool.extend((0..4).map(|i| ex(&format!("t{i}"))));
    pool
}

/// Graphs of at most `max` triples over [`node_pool`] and [`predicate_pool`].
pub fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    let nodes = node_pool();
    let preds = predicate_pool();
    let subjects = nodes.len() - 1;
    prop::collection::vec((0..subjects, 0..preds.len(), 0..nodes.len()), 0..=max).prop_map(
        move |raw| {
            raw.into_iter()
                .map(|(s, p, o)| {
                    Triple::new(nodes[s].clone(), preds[p].clone(), nodes[o].clone()).unwrap()
                })
                .collect()
        },
    )
}
