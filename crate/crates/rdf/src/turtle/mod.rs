//! Turtle reading and writing.

mod parser;
mod writer;

pub use parser::{parse_turtle, TurtleError, TurtleParser};
pub use writer::serialize_turtle;
