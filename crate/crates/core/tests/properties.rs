mod common;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use common::*;
use proptest::prelude::*;
use rdfe::diagram::{build_model, emit_dot, style, DotOptions, RelationKind};
use rdfe::iso::{graphs_isomorphic, is_isomorphic};
use rdfe::layers::{layer_with_levels, read_levels, FundamentalityMap};
use rdfe::potential::{extract_profiles, suggest, ExtensionVocabulary, Position};
use rdfe::reasoner::{closure, RuleSet};
use rdfe::reify::{dereify, reify};
use rdfe::skos::{detect_owl_full, inventory, is_metaclass, skosify, validate_skos};
use rdfe::turtle::{parse, serialize};
use rdfe::vocab::{owl, rdf, rdfs, skos};
use rdfe::{merge, BlankNode, Dataset, Graph, Iri, Literal, Term, Triple};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn arb_dataset() -> impl Strategy<Value = Dataset> {
    (arb_graph(12), arb_graph(6), arb_graph(6)).prop_map(|(d, g1, g2)| {
        let mut out = Dataset::from_graph(d);
        if !g1.is_empty() {
            *out.named_graph_mut(ex("g1")) = g1;
        }
        if !g2.is_empty() {
            *out.named_graph_mut(ex("g2")) = g2;
        }
        out
    })
}

fn relabel(dataset: &Dataset, salt: usize) -> Dataset {
    dataset.map_blank_nodes(|b| BlankNode::new(format!("r{salt}_{}", b.id())).unwrap())
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn closure_matches_naive_fixed_point(g in arb_graph(30), mask in 1u32..64) {
        let rules = &all_rule_subsets()[(mask - 1) as usize];
        prop_assert_eq!(closure(&g, rules), naive_closure(&g, rules));
    }

    #[test]
    fn closure_is_extensive_and_idempotent(g in arb_graph(30)) {
        let rules = RuleSet::all();
        let c = closure(&g, &rules);
        prop_assert!(g.is_subset(&c));
        prop_assert_eq!(closure(&c, &rules), c);
    }

    #[test]
    fn matching_agrees_with_linear_scan(g in arb_graph(30), s in 0usize..10, p in 0usize..9, o in 0usize..10, mask in 0u8..8) {
        let nodes = node_pool();
        let preds = predicate_pool();
        let s = (mask & 1 != 0).then(|| nodes[s].clone());
        let p = (mask & 2 != 0).then(|| preds[p].clone());
        let o = (mask & 4 != 0).then(|| nodes[o].clone());
        let mut found: Vec<&Triple> = g.matching(s.as_ref(), p.as_ref(), o.as_ref());
        found.sort();
        let expected: Vec<&Triple> = g
            .iter()
            .filter(|t| s.as_ref().is_none_or(|s| t.subject() == s))
            .filter(|t| p.as_ref().is_none_or(|p| t.predicate() == p))
            .filter(|t| o.as_ref().is_none_or(|o| t.object() == o))
            .collect();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn merge_keeps_blank_nodes_apart(a in arb_dataset(), b in arb_dataset()) {
        let merged = merge(&a, &b).dataset;
        let ground = |g: &Graph| -> BTreeSet<Triple> {
            g.iter().filter(|t| !t.subject().is_blank() && !t.object().is_blank()).cloned().collect()
        };
        let empty = Graph::new();
        let mut expected = 0;
        let names: BTreeSet<Option<&Iri>> = a.graphs().chain(b.graphs()).map(|(n, _)| n).collect();
        for name in names {
            let pick = |d: &'_ Dataset| -> Graph {
                match name {
                    None => d.default.clone(),
                    Some(n) => d.named.get(n).cloned().unwrap_or_else(|| empty.clone()),
                }
            };
            let (ga, gb) = (pick(&a), pick(&b));
            expected += ga.len() + gb.len() - ground(&ga).intersection(&ground(&gb)).count();
        }
        prop_assert_eq!(merged.quad_count(), expected);
        prop_assert!(merged.blank_nodes().len() == a.blank_nodes().len() + b.blank_nodes().len());
    }

    #[test]
    fn serialize_round_trips(d in arb_dataset()) {
        let text = serialize(&d);
        let again = parse(&text, None).unwrap();
        prop_assert!(is_isomorphic(&d, &again), "{}", text);
    }

    #[test]
    fn isomorphism_ignores_blank_labels(d in arb_dataset(), salt in 0usize..100) {
        prop_assert!(is_isomorphic(&d, &relabel(&d, salt)));
    }

    #[test]
    fn isomorphism_detects_an_extra_triple(d in arb_dataset()) {
        let mut bigger = d.clone();
        let extra = triple(ex("fresh"), ex("fresh"), Term::blank("x").unwrap());
        if bigger.default.insert(extra) {
            prop_assert!(!is_isomorphic(&d, &bigger));
        }
    }

    #[test]
    fn reification_round_trips(g in arb_graph(10)) {
        let mut reified = Graph::new();
        let mut expected = BTreeMap::new();
        for (i, t) in g.iter().enumerate() {
            let node = ex(&format!("stmt{i}"));
            reified.extend(reify(t, &node));
            expected.insert(Term::Iri(node), t.clone());
        }
        prop_assert_eq!(dereify(&reified), expected);
    }

    #[test]
    fn potential_triples_never_add_inferences(g in arb_graph(20), extra in prop::collection::vec((0usize..7, 0usize..4, 0usize..7), 0..8)) {
        let vocab = ExtensionVocabulary::default();
        let props = vocab.potential_properties();
        let mut with = g.clone();
        for (s, p, o) in extra {
            with.insert(triple(ext(&format!("t{s}")), props[p].clone(), ext(&format!("t{o}"))));
        }
        let potential = vocab.potential_triples(&with);
        let mut without = with.clone();
        for t in potential.iter() {
            without.remove(t);
        }
        let rules = RuleSet::all();
        prop_assert_eq!(closure(&with, &rules), closure(&without, &rules).union(&potential));
    }

    #[test]
    fn layers_are_anti_monotone(levels in prop::collection::vec(-50i64..150, 7), default in -20i64..20, g in arb_graph(25), thresholds in prop::collection::vec(-60i64..160, 2)) {
        let map = FundamentalityMap {
            term_levels: levels
                .iter()
                .enumerate()
                .map(|(i, l)| (ext(&format!("t{i}")), *l as f64))
                .collect(),
            default_level: default as f64,
            ..FundamentalityMap::default()
        };
        let d = Dataset::from_graph(g);
        let (lo, hi) = (thresholds[0].min(thresholds[1]) as f64, thresholds[0].max(thresholds[1]) as f64);
        let low = layer_with_levels(&d, &map, lo);
        let high = layer_with_levels(&d, &map, hi);
        prop_assert!(high.kept.is_subset(&low.kept));
        prop_assert_eq!(layer_with_levels(&d, &map.shifted(17.0), hi + 17.0).kept, high.kept);
        prop_assert_eq!(low.kept.len() + low.dropped_count, d.flatten().len());
    }
}

/// Random class hierarchy: edges only go from higher to lower index, so it
/// is acyclic.
fn arb_hierarchy() -> impl Strategy<Value = Graph> {
    prop::collection::vec((1usize..8, 0usize..8, any::<bool>()), 0..14).prop_map(|edges| {
        let mut g = Graph::new();
        for (a, b, labelled) in edges {
            let (sub, sup) = (ext(&format!("C{a}")), ext(&format!("C{}", b % a)));
            g.insert(triple(sub.clone(), rdfs::sub_class_of(), sup.clone()));
            g.insert(triple(sup, rdf::type_(), owl::class()));
            if labelled {
                g.insert(triple(
                    sub,
                    rdfs::label(),
                    Literal::lang(format!("class {a}"), "en").unwrap(),
                ));
            }
        }
        g
    })
}

fn reachable(graph: &Graph, start: &Iri) -> BTreeSet<Iri> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([Term::Iri(start.clone())]);
    while let Some(next) = queue.pop_front() {
        for sup in graph.objects(&next, &rdfs::sub_class_of()) {
            if let Term::Iri(iri) = sup {
                if seen.insert(iri.clone()) {
                    queue.push_back(sup.clone());
                }
            }
        }
    }
    seen.remove(start);
    seen
}

/// OWL Full findings straight from the definitions: a term with any class
/// evidence that is typed with an ordinary class or used in a SKOS relation.
fn owl_full_oracle(g: &Graph) -> BTreeSet<(Term, bool)> {
    let mut classy = BTreeSet::new();
    let mut typed = BTreeSet::new();
    let mut skosy = BTreeSet::new();
    for t in g.iter() {
        let (s, p, o) = (t.subject(), t.predicate().as_str(), t.object());
        match p {
            rdf::TYPE => {
                if *o == owl::class() || *o == rdfs::class() {
                    classy.insert(s.clone());
                }
                classy.insert(o.clone());
                if o.as_iri().is_some_and(|c| !is_metaclass(c)) {
                    typed.insert(s.clone());
                }
            }
            rdfs::SUB_CLASS_OF => {
                classy.insert(s.clone());
                classy.insert(o.clone());
            }
            rdfs::DOMAIN | rdfs::RANGE => {
                classy.insert(o.clone());
            }
            skos::BROADER | skos::NARROWER | skos::RELATED => {
                skosy.insert(s.clone());
                skosy.insert(o.clone());
            }
            skos::IN_SCHEME | skos::TOP_CONCEPT_OF => {
                skosy.insert(s.clone());
            }
            _ => {}
        }
    }
    classy
        .into_iter()
        .filter(|c| c.as_iri().is_some())
        .filter(|c| typed.contains(c) || skosy.contains(c))
        .map(|c| {
            let via = !typed.contains(&c);
            (c, via)
        })
        .collect()
}

fn arb_owl_skos_graph() -> impl Strategy<Value = Graph> {
    let preds = [
        rdf::type_(),
        rdfs::sub_class_of(),
        rdfs::domain(),
        skos::broader(),
        skos::related(),
        skos::in_scheme(),
        ex("p"),
    ];
    let mut objects: Vec<Term> = (0..5).map(|i| ext(&format!("n{i}"))).collect();
    objects.extend([
        Term::Iri(owl::class()),
        Term::Iri(skos::concept()),
        Term::Iri(owl::object_property()),
    ]);
    prop::collection::vec((0usize..5, 0..preds.len(), 0..objects.len()), 0..12).prop_map(
        move |raw| {
            raw.into_iter()
                .map(|(s, p, o)| {
                    triple(ext(&format!("n{s}")), preds[p].clone(), objects[o].clone())
                })
                .collect()
        },
    )
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn skosify_broader_is_bijective(g in arb_hierarchy()) {
        let scheme = ex("scheme");
        let out = skosify(&g, &scheme);
        let expected: BTreeSet<(Term, Term)> = g
            .with_predicate(&rdfs::sub_class_of())
            .filter(|t| t.subject() != t.object())
            .map(|t| (t.subject().clone(), t.object().clone()))
            .collect();
        let broader: BTreeSet<(Term, Term)> = out
            .with_predicate(&skos::broader())
            .map(|t| (t.subject().clone(), t.object().clone()))
            .collect();
        prop_assert_eq!(broader.len(), out.with_predicate(&skos::broader()).count());
        prop_assert_eq!(broader, expected);
        prop_assert!(detect_owl_full(&out).findings.is_empty());
        prop_assert!(validate_skos(&out).is_empty());
    }

    #[test]
    fn owl_full_matches_definition(g in arb_owl_skos_graph()) {
        let found: BTreeSet<(Term, bool)> = detect_owl_full(&g)
            .findings
            .into_iter()
            .map(|f| (f.term, f.via_skos_entailment))
            .collect();
        prop_assert_eq!(found, owl_full_oracle(&g));
    }

    #[test]
    fn suggest_matches_brute_force(g in arb_hierarchy(), decls in prop::collection::vec((0usize..3, 0usize..4, 0usize..8), 0..10), query in 0usize..8) {
        let vocab = ExtensionVocabulary::default();
        let props = vocab.potential_properties();
        let mut g = g;
        for (p, kind, c) in decls {
            g.insert(triple(ext(&format!("p{p}")), props[kind].clone(), ext(&format!("C{c}"))));
        }
        let class = ex(&format!("C{query}"));
        let profiles = extract_profiles(&g, &vocab);
        let got: BTreeSet<(Iri, Position, Iri, Triple)> = suggest(&class, &profiles)
            .into_iter()
            .map(|s| (s.property, s.position, s.via_class, s.provenance))
            .collect();

        let mut lineage = reachable(&g, &class);
        lineage.insert(class.clone());
        let mut expected = BTreeSet::new();
        for t in g.iter() {
            let (Term::Iri(p), Term::Iri(via)) = (t.subject(), t.object()) else { continue };
            if !lineage.contains(via) {
                continue;
            }
            let position = if *t.predicate() == vocab.potential_domain() || *t.predicate() == vocab.potential_predicate() {
                Position::Subject
            } else if *t.predicate() == vocab.potential_range() || *t.predicate() == vocab.potential_post_predicate() {
                Position::Object
            } else {
                continue;
            };
            expected.insert((p.clone(), position, via.clone(), t.clone()));
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn diagram_output_is_monochrome_and_styled(g in arb_graph(20), h in arb_hierarchy(), legend in any::<bool>()) {
        let d = Dataset::from_graph(g.union(&h));
        let flat = d.flatten();
        let model = build_model(&d, &extract_profiles(&flat, &ExtensionVocabulary::default()), &inventory(&flat));
        let dot = emit_dot(&model, DotOptions { legend });
        prop_assert_eq!(&dot, &emit_dot(&model.clone(), DotOptions { legend }));
        prop_assert!(!dot.contains("color") && !dot.contains("dashed") && !dot.contains("dotted"));

        let edges: Vec<&str> = dot.lines().filter(|l| l.contains(" -> ") && !l.contains("legend")).collect();
        prop_assert_eq!(edges.len(), model.edges.len());
        let kinds: BTreeMap<(&str, &str), RelationKind> = RelationKind::ALL.iter().map(|k| ((style(*k).0, style(*k).1), *k)).collect();
        let mut counted: BTreeMap<RelationKind, usize> = BTreeMap::new();
        for line in edges {
            let attr = |name: &str| line.split(&format!("{name}=")).nth(1).unwrap().split([',', ']']).next().unwrap().to_owned();
            let head = attr("arrowhead");
            let tail = attr("arrowtail");
            *counted.entry(kinds[&(head.as_str(), tail.as_str())]).or_default() += 1;
        }
        for kind in RelationKind::ALL {
            prop_assert_eq!(counted.get(&kind).copied().unwrap_or(0), model.edges_of_kind(kind).count());
        }

        let named_subclass: BTreeSet<(Term, Term)> = flat
            .with_predicate(&rdfs::sub_class_of())
            .filter(|t| t.object().as_iri().is_some())
            .map(|t| (t.subject().clone(), t.object().clone()))
            .collect();
        let subclass_edges: BTreeSet<(Term, Term)> = model
            .edges_of_kind(RelationKind::Subclass)
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect();
        prop_assert_eq!(subclass_edges, named_subclass);
        for e in &model.edges {
            prop_assert!(model.nodes.contains_key(&e.from) && model.nodes.contains_key(&e.to));
            prop_assert!(!model.nodes[&e.from].id.is_literal());
        }
    }
}

#[test]
fn corpus_levels_are_readable() {
    let vocab = ExtensionVocabulary::default();
    for (name, d) in corpus() {
        assert!(read_levels(&d, &vocab).is_ok(), "{name}");
    }
}

#[test]
fn isomorphism_of_blank_cycles() {
    let a = ttl("_:a ex:p _:b . _:b ex:p _:c . _:c ex:p _:a .");
    let b = ttl("_:x ex:p _:y . _:y ex:p _:x . _:z ex:p _:z .");
    assert!(!graphs_isomorphic(&a.default, &b.default));
    let c = ttl("_:q ex:p _:r . _:r ex:p _:s . _:s ex:p _:q .");
    assert!(graphs_isomorphic(&a.default, &c.default));
}
