//! Extensible data type declarations and their encoding into ordinary
//! algebraic data types.
//!
//! The pipeline is [`parser`] → [`validator`] → [`encoder`] → [`emitter`].
//! [`growlang`] runs the same idea at runtime on a small lambda language.

pub mod cli;
pub mod diagnostic;
pub mod emitter;
pub mod encoder;
pub mod growlang;
pub mod parser;
pub mod syntax;
pub mod validator;

pub use diagnostic::{Code, Diagnostic, Severity, SourceSpan};
pub use encoder::{encode_program, EncodeMode};
pub use parser::parse_program;
pub use syntax::Program;
pub use validator::validate_program;
