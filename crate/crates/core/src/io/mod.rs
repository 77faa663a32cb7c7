//! Graph input formats, random instances and certificate documents.

mod certificate;
mod generate;
mod parse;

pub use certificate::{verify_certificate, Certificate, CertificateDocument, CertificateError, Verdict, FORMAT_VERSION};
pub use generate::{derive_seeds, generate_random, GeneratorConfig};
pub use parse::{detect_format, parse_dot_subset, parse_edge_list, parse_graph, to_edge_list, Format, ParseError, ParseErrorKind};
