//! Dataset equality up to blank node renaming.
//!
//! Blank nodes are first partitioned by iterated neighbourhood hashing
//! (colour refinement); the remaining ambiguity is resolved by backtracking
//! over same-coloured candidates.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use crate::graph::{Dataset, Graph};
use crate::model::{BlankNode, Iri, Term, Triple};

type Quad = (Option<Iri>, Triple);

/// Side of the quad the node is on, graph name, predicate, far end.
type Signature<'a> = (u8, Option<&'a Iri>, &'a Iri, (u8, u64));

fn quads(d: &Dataset) -> Vec<Quad> {
    d.graphs()
        .flat_map(|(name, g)| g.iter().map(move |t| (name.cloned(), t.clone())))
        .collect()
}

fn has_blank(q: &Quad) -> bool {
    q.1.subject().is_blank() || q.1.object().is_blank()
}

/// True when some bijection of blank nodes maps `a` onto `b`. Prefixes are
/// not compared.
pub fn is_isomorphic(a: &Dataset, b: &Dataset) -> bool {
    let qa = quads(a);
    let qb = quads(b);
    if qa.len() != qb.len() {
        return false;
    }
    let (ground_a, blank_a): (Vec<Quad>, Vec<Quad>) = qa.into_iter().partition(|q| !has_blank(q));
    let (ground_b, blank_b): (Vec<Quad>, Vec<Quad>) = qb.into_iter().partition(|q| !has_blank(q));
    if ground_a.len() != ground_b.len() || blank_a.len() != blank_b.len() {
        return false;
    }
    let ground_b: HashSet<&Quad> = ground_b.iter().collect();
    if !ground_a.iter().all(|q| ground_b.contains(q)) {
        return false;
    }
    if blank_a.is_empty() {
        return true;
    }

    let colours_a = refine(&blank_a);
    let colours_b = refine(&blank_b);
    let mut hist_a: Vec<u64> = colours_a.values().copied().collect();
    let mut hist_b: Vec<u64> = colours_b.values().copied().collect();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return false;
    }

    // Most constrained nodes first.
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for c in colours_b.values() {
        *counts.entry(*c).or_default() += 1;
    }
    let mut order: Vec<&BlankNode> = colours_a.keys().collect();
    order.sort_by_key(|n| (counts[&colours_a[*n]], (*n).clone()));

    let target: HashSet<&Quad> = blank_b.iter().collect();
    let mut by_node: HashMap<&BlankNode, Vec<&Quad>> = HashMap::new();
    for q in &blank_a {
        for t in [q.1.subject(), q.1.object()] {
            if let Term::Blank(n) = t {
                by_node.entry(n).or_default().push(q);
            }
        }
    }
    let mut search = Search {
        order,
        colours_a: &colours_a,
        colours_b: &colours_b,
        by_node,
        target,
        mapping: HashMap::new(),
        used: HashSet::new(),
    };
    search.extend(0)
}

pub fn graphs_isomorphic(a: &Graph, b: &Graph) -> bool {
    is_isomorphic(
        &Dataset::from_graph(a.clone()),
        &Dataset::from_graph(b.clone()),
    )
}

fn hash_of(value: impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

fn refine(quads: &[Quad]) -> BTreeMap<BlankNode, u64> {
    let mut colours: BTreeMap<BlankNode, u64> = BTreeMap::new();
    for q in quads {
        for t in [q.1.subject(), q.1.object()] {
            if let Term::Blank(n) = t {
                colours.insert(n.clone(), 0);
            }
        }
    }
    let term_sig = |t: &Term, colours: &BTreeMap<BlankNode, u64>| match t {
        Term::Blank(n) => (1u8, colours[n]),
        other => (0u8, hash_of(other)),
    };
    let mut classes = 1;
    for _ in 0..=colours.len() {
        let mut signatures: BTreeMap<BlankNode, Vec<Signature>> = BTreeMap::new();
        for q in quads {
            let (s, p, o) = (q.1.subject(), q.1.predicate(), q.1.object());
            if let Term::Blank(n) = s {
                signatures.entry(n.clone()).or_default().push((
                    0,
                    q.0.as_ref(),
                    p,
                    term_sig(o, &colours),
                ));
            }
            if let Term::Blank(n) = o {
                signatures.entry(n.clone()).or_default().push((
                    1,
                    q.0.as_ref(),
                    p,
                    term_sig(s, &colours),
                ));
            }
        }
        let next: BTreeMap<BlankNode, u64> = signatures
            .into_iter()
            .map(|(n, mut sig)| {
                sig.sort_unstable();
                let c = hash_of((colours[&n], sig));
                (n, c)
            })
            .collect();
        let next_classes = next.values().collect::<BTreeSet<_>>().len();
        colours = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    colours
}

struct Search<'a> {
    order: Vec<&'a BlankNode>,
    colours_a: &'a BTreeMap<BlankNode, u64>,
    colours_b: &'a BTreeMap<BlankNode, u64>,
    by_node: HashMap<&'a BlankNode, Vec<&'a Quad>>,
    target: HashSet<&'a Quad>,
    mapping: HashMap<BlankNode, BlankNode>,
    used: HashSet<BlankNode>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(&node) = self.order.get(depth) else {
            return true;
        };
        let colour = self.colours_a[node];
        let candidates: Vec<BlankNode> = self
            .colours_b
            .iter()
            .filter(|(n, c)| **c == colour && !self.used.contains(*n))
            .map(|(n, _)| n.clone())
            .collect();
        for candidate in candidates {
            self.mapping.insert(node.clone(), candidate.clone());
            self.used.insert(candidate.clone());
            if self.consistent(node) && self.extend(depth + 1) {
                return true;
            }
            self.mapping.remove(node);
            self.used.remove(&candidate);
        }
        false
    }

    /// Every quad touching `node` whose blanks are all mapped must exist in
    /// the target.
    fn consistent(&self, node: &BlankNode) -> bool {
        let map = |t: &Term| -> Option<Term> {
            match t {
                Term::Blank(n) => self.mapping.get(n).cloned().map(Term::Blank),
                other => Some(other.clone()),
            }
        };
        self.by_node.get(node).into_iter().flatten().all(|q| {
            match (map(q.1.subject()), map(q.1.object())) {
                (Some(s), Some(o)) => {
                    let t = Triple::new(s, q.1.predicate().clone(), o)
                        .expect("mapped subject stays non-literal");
                    self.target.contains(&(q.0.clone(), t))
                }
                _ => true,
            }
        })
    }
}
