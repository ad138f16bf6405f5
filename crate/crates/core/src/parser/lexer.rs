use crate::diagnostic::{Code, Diagnostic, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Upper(String),
    Lower(String),
    Int(i64),
    Extensible,
    Data,
    Extends,
    By,
    Empty,
    Partial,
    Eq,
    Bar,
    LParen,
    RParen,
    Oplus,
    Wildcard,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Upper(s) | Tok::Lower(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Extensible => "`extensible`".into(),
            Tok::Data => "`data`".into(),
            Tok::Extends => "`extends`".into(),
            Tok::By => "`by`".into(),
            Tok::Empty => "`empty`".into(),
            Tok::Partial => "`partial`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Bar => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Oplus => "`<+>`".into(),
            Tok::Wildcard => "`_`".into(),
        }
    }

    /// Tokens that can only start a declaration.
    pub fn starts_decl(&self) -> bool {
        matches!(self, Tok::Extensible | Tok::Data | Tok::Partial)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'-' if bytes.get(i + 1) == Some(&b'-') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'=' => {
                out.push(tok(Tok::Eq, start, i + 1));
                i += 1;
            }
            b'|' => {
                out.push(tok(Tok::Bar, start, i + 1));
                i += 1;
            }
            b'(' => {
                out.push(tok(Tok::LParen, start, i + 1));
                i += 1;
            }
            b')' => {
                out.push(tok(Tok::RParen, start, i + 1));
                i += 1;
            }
            b'<' if text[i..].starts_with("<+>") => {
                out.push(tok(Tok::Oplus, start, i + 3));
                i += 3;
            }
            b'_' if !bytes.get(i + 1).is_some_and(|b| is_ident_byte(*b)) => {
                out.push(tok(Tok::Wildcard, start, i + 1));
                i += 1;
            }
            b'0'..=b'9' | b'-' => {
                if c == b'-' {
                    i += 1;
                    if !bytes.get(i).is_some_and(u8::is_ascii_digit) {
                        return Err(lex_error(text, start));
                    }
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value: i64 = text[start..i].parse().map_err(|_| {
                    Diagnostic::new(Code::E000, format!("integer literal `{}` out of range", &text[start..i]))
                        .with_span(Some(SourceSpan::new(start, i)))
                })?;
                out.push(tok(Tok::Int(value), start, i));
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && is_ident_byte(bytes[i]) {
                    i += 1;
                }
                let word = &text[start..i];
                let t = match word {
                    "extensible" => Tok::Extensible,
                    "data" => Tok::Data,
                    "extends" => Tok::Extends,
                    "by" => Tok::By,
                    "empty" => Tok::Empty,
                    "partial" => Tok::Partial,
                    w if c.is_ascii_uppercase() => Tok::Upper(w.to_owned()),
                    w => Tok::Lower(w.to_owned()),
                };
                out.push(tok(t, start, i));
            }
            _ => return Err(lex_error(text, start)),
        }
    }
    Ok(out)
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'\''
}

fn tok(tok: Tok, begin: usize, end: usize) -> Token {
    Token {
        tok,
        span: SourceSpan::new(begin, end),
    }
}

fn lex_error(text: &str, at: usize) -> Diagnostic {
    let ch = text[at..].chars().next().unwrap_or(' ');
    let end = at + ch.len_utf8();
    Diagnostic::new(Code::E000, format!("unexpected character {ch:?}"))
        .with_span(Some(SourceSpan::new(at, end)))
}
