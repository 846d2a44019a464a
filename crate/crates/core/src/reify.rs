//! RDF reification and its inverse.

use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::model::{Iri, Term, Triple};
use crate::vocab::rdf;

/// The four triples describing `triple` as the statement `statement`.
pub fn reify(triple: &Triple, statement: &Iri) -> Vec<Triple> {
    let st = Term::Iri(statement.clone());
    let mk = |p: Iri, o: Term| Triple::new(st.clone(), p, o).expect("IRI subject");
    vec![
        mk(rdf::type_(), Term::Iri(rdf::statement())),
        mk(rdf::subject(), triple.subject().clone()),
        mk(rdf::predicate(), Term::Iri(triple.predicate().clone())),
        mk(rdf::object(), triple.object().clone()),
    ]
}

/// Recovers the triple behind every node typed `rdf:Statement` that has
/// exactly one `rdf:subject`, `rdf:predicate` and `rdf:object`. Incomplete
/// or ambiguous statements, and those whose parts would not form a valid
/// triple, are left out.
pub fn dereify(graph: &Graph) -> BTreeMap<Term, Triple> {
    let statement = Term::Iri(rdf::statement());
    let single = |node: &Term, p: &Iri| -> Option<Term> {
        let mut it = graph.objects(node, p);
        let first = it.next()?.clone();
        it.next().is_none().then_some(first)
    };
    graph
        .subjects(&rdf::type_(), &statement)
        .filter_map(|node| {
            let s = single(node, &rdf::subject())?;
            let p = single(node, &rdf::predicate())?;
            let o = single(node, &rdf::object())?;
            let triple = Triple::new(s, p.as_iri()?.clone(), o).ok()?;
            Some((node.clone(), triple))
        })
        .collect()
}
