//! Fundamentality levels and threshold-filtered layer views.
//!
//! Levels come from `X rdfe:fundamental n` assertions about terms, named
//! graphs and reified statements. A triple's level is, by precedence, the
//! level of its reified statement, then the level of the named graph it
//! sits in, then the minimum level of its three terms.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::diagnostic::{sort_diagnostics, Diagnostic, Severity};
use crate::graph::{Dataset, Graph};
use crate::model::{parse_number, Iri, Term, Triple};
use crate::potential::ExtensionVocabulary;
use crate::reify::dereify;
use crate::vocab::xsd;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FundamentalityMap {
    pub term_levels: BTreeMap<Term, f64>,
    pub graph_levels: BTreeMap<Iri, f64>,
    pub statement_levels: BTreeMap<Triple, f64>,
    pub default_level: f64,
}

impl FundamentalityMap {
    pub fn term_level(&self, term: &Term) -> f64 {
        self.term_levels
            .get(term)
            .copied()
            .unwrap_or(self.default_level)
    }

    /// Every level, the default included, moved by `delta`.
    pub fn shifted(&self, delta: f64) -> FundamentalityMap {
        FundamentalityMap {
            term_levels: self
                .term_levels
                .iter()
                .map(|(k, v)| (k.clone(), v + delta))
                .collect(),
            graph_levels: self
                .graph_levels
                .iter()
                .map(|(k, v)| (k.clone(), v + delta))
                .collect(),
            statement_levels: self
                .statement_levels
                .iter()
                .map(|(k, v)| (k.clone(), v + delta))
                .collect(),
            default_level: self.default_level + delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} invalid fundamentality assertion(s)", diagnostics.len())]
pub struct LevelError {
    pub diagnostics: Vec<Diagnostic>,
}

fn level_of(object: &Term) -> Option<f64> {
    let literal = object.as_literal()?;
    if literal.datatype().as_str() == xsd::STRING {
        return parse_number(literal.lexical());
    }
    literal.as_number()
}

/// Collects the levels asserted anywhere in the dataset. Fails, without a
/// partial result, if any level is not numeric or a target is given two
/// different levels.
pub fn read_levels(
    dataset: &Dataset,
    vocab: &ExtensionVocabulary,
) -> Result<FundamentalityMap, LevelError> {
    let fundamental = vocab.fundamental();
    let flat = dataset.flatten();
    let statements = dereify(&flat);
    let mut diagnostics = Vec::new();
    let mut map = FundamentalityMap::default();

    let mut assertions: Vec<(&Triple, f64)> = Vec::new();
    for t in flat.with_predicate(&fundamental) {
        match level_of(t.object()) {
            Some(level) => assertions.push((t, level)),
            None => diagnostics.push(Diagnostic::new(
                Severity::Error,
                "LAYER001",
                t.clone(),
                "fundamentality level is not a finite number",
                "read_levels",
            )),
        }
    }

    fn record<K: Ord + Clone>(
        slot: &mut BTreeMap<K, f64>,
        key: &K,
        level: f64,
        source: &Triple,
        diagnostics: &mut Vec<Diagnostic>,
    ) {
        match slot.get(key) {
            Some(existing) if *existing != level => diagnostics.push(Diagnostic::new(
                Severity::Error,
                "LAYER002",
                source.clone(),
                format!("conflicting fundamentality levels {existing} and {level}"),
                "read_levels",
            )),
            _ => {
                slot.insert(key.clone(), level);
            }
        }
    }

    for (t, level) in assertions {
        let subject = t.subject();
        record(&mut map.term_levels, subject, level, t, &mut diagnostics);
        if let Term::Iri(iri) = subject {
            if dataset.named.contains_key(iri) {
                record(&mut map.graph_levels, iri, level, t, &mut diagnostics);
            }
        }
        if let Some(statement) = statements.get(subject) {
            record(
                &mut map.statement_levels,
                statement,
                level,
                t,
                &mut diagnostics,
            );
        }
    }

    if diagnostics.is_empty() {
        Ok(map)
    } else {
        sort_diagnostics(&mut diagnostics);
        Err(LevelError { diagnostics })
    }
}

pub fn triple_level(triple: &Triple, in_graph: Option<&Iri>, map: &FundamentalityMap) -> f64 {
    if let Some(level) = map.statement_levels.get(triple) {
        return *level;
    }
    if let Some(level) = in_graph.and_then(|g| map.graph_levels.get(g)) {
        return *level;
    }
    triple
        .terms()
        .iter()
        .map(|t| map.term_level(t))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerView {
    pub threshold: f64,
    pub kept: Graph,
    pub dropped_count: usize,
    /// Terms of kept triples whose own level is below the threshold.
    pub dangling_terms: BTreeSet<Term>,
}

impl LayerView {
    pub fn summary(&self) -> String {
        format!(
            "kept={} dropped={} dangling={}",
            self.kept.len(),
            self.dropped_count,
            self.dangling_terms.len()
        )
    }
}

pub fn extract_layer(
    dataset: &Dataset,
    threshold: f64,
    vocab: &ExtensionVocabulary,
) -> Result<LayerView, LevelError> {
    let map = read_levels(dataset, vocab)?;
    Ok(layer_with_levels(dataset, &map, threshold))
}

/// Layer view of the flattened dataset. A triple stated in several graphs
/// is kept when any of its occurrences reaches the threshold.
pub fn layer_with_levels(dataset: &Dataset, map: &FundamentalityMap, threshold: f64) -> LayerView {
    let mut kept = Graph::new();
    for (name, graph) in dataset.graphs() {
        for t in graph.iter() {
            if triple_level(t, name, map) >= threshold {
                kept.insert(t.clone());
            }
        }
    }
    let source = dataset.flatten().len();
    let dangling_terms = kept
        .iter()
        .flat_map(|t| t.terms())
        .filter(|t| map.term_level(t) < threshold)
        .collect();
    LayerView {
        threshold,
        dropped_count: source - kept.len(),
        kept,
        dangling_terms,
    }
}
