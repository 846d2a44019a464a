//! Turtle reading and writing.

mod parser;
mod serializer;

pub use parser::{parse, ParseError, ParseErrorKind, TurtleParser};
pub use serializer::{serialize, serialize_graph};
