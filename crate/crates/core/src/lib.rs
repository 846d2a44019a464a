//! Turtle store and RDFS reasoner with tooling for potential relations,
//! fundamentality layers, diagram conventions and OWL/SKOS bridging.

pub mod cli;
pub mod diagnostic;
pub mod diagram;
pub mod graph;
pub mod iso;
pub mod layers;
pub mod model;
pub mod potential;
pub mod reasoner;
pub mod reify;
pub mod skos;
pub mod turtle;
pub mod vocab;

pub use diagnostic::{Diagnostic, Focus, Severity};
pub use graph::{merge, Dataset, Graph, Merged};
pub use model::{BlankNode, Iri, Literal, Term, TermError, Triple};
