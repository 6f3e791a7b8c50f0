//! Input documents and serialized traces.

pub mod input;
pub mod trace;

pub use input::{parse_input, InputDocument, InputError};
pub use trace::{from_json, replay, to_json, trace_document, ReplayReport, TraceDocument, TraceError};
