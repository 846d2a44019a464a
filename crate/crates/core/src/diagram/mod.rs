//! Classified diagram model and black-and-white DOT output.

mod dot;
mod model;

pub use dot::{emit_dot, style, DotOptions};
pub use model::{
    any_node, build_model, compact, DiagramEdge, DiagramModel, DiagramNode, NodeKind, RelationKind,
};
