use std::fmt;

/// Byte range into a source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(begin: usize, end: usize) -> Self {
        debug_assert!(begin <= end);
        SourceSpan { begin, end }
    }

    /// 1-based line and column of `begin` in `text`. Columns count chars.
    pub fn line_col(&self, text: &str) -> (usize, usize) {
        line_col(text, self.begin)
    }
}

pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let column = text[line_start..offset].chars().count() + 1;
    (line, column)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

/// The published diagnostic codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Lexical or syntax error.
    E000,
    /// Duplicate name.
    E001,
    /// Unknown base declaration.
    E002,
    /// Bad parameter map.
    E003,
    /// Unknown constructor.
    E004,
    /// Duplicate extension clause.
    E005,
    /// Oplus on a non-extensible type (or in a disallowed position).
    E006,
    /// Arity mismatch.
    E007,
    /// Base constructor not covered by a non-partial extension.
    E008,
    /// Unused parameter.
    W001,
}

impl Code {
    pub const ALL: [Code; 10] = [
        Code::E000,
        Code::E001,
        Code::E002,
        Code::E003,
        Code::E004,
        Code::E005,
        Code::E006,
        Code::E007,
        Code::E008,
        Code::W001,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::E000 => "E000",
            Code::E001 => "E001",
            Code::E002 => "E002",
            Code::E003 => "E003",
            Code::E004 => "E004",
            Code::E005 => "E005",
            Code::E006 => "E006",
            Code::E007 => "E007",
            Code::E008 => "E008",
            Code::W001 => "W001",
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Code::E000 => "syntax-error",
            Code::E001 => "duplicate-name",
            Code::E002 => "unknown-base",
            Code::E003 => "bad-param-map",
            Code::E004 => "unknown-constructor",
            Code::E005 => "duplicate-extension-clause",
            Code::E006 => "oplus-on-nonextensible",
            Code::E007 => "arity-mismatch",
            Code::E008 => "constructor-not-covered",
            Code::W001 => "unused-parameter",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Code::W001 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: Option<SourceSpan>,
    pub location: Option<Location>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: code.severity(),
            code,
            message: message.into(),
            span: None,
            location: None,
        }
    }

    pub fn with_span(mut self, span: Option<SourceSpan>) -> Self {
        self.span = span;
        self
    }

    /// Resolves `span` against the source text into a line/column location.
    pub fn locate(mut self, file: Option<&str>, text: &str) -> Self {
        if let Some(span) = self.span {
            let (line, column) = span.line_col(text);
            self.location = Some(Location {
                file: file.map(str::to_owned),
                line,
                column,
            });
        }
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(loc) = &self.location {
            if let Some(file) = &loc.file {
                write!(f, "{file}:")?;
            }
            write!(f, "{}:{}: ", loc.line, loc.column)?;
        }
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{kind}[{}]: {}", self.code, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_col_counts_from_one() {
        let text = "ab\ncd\n";
        assert_eq!(line_col(text, 0), (1, 1));
        assert_eq!(line_col(text, 4), (2, 2));
        assert_eq!(line_col(text, 100), (3, 1));
    }

    #[test]
    fn display_includes_file_and_code() {
        let d = Diagnostic::new(Code::E003, "bad")
            .with_span(Some(SourceSpan::new(3, 4)))
            .locate(Some("x.xdt"), "ab\ncd");
        assert_eq!(d.to_string(), "x.xdt:2:1: error[E003]: bad");
    }
}
