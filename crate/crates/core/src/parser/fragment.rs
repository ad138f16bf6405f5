use std::fmt;

use super::lexer::{lex, Tok};
use super::Parser;
use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::syntax::Ident;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FragmentKind {
    Type,
    Pattern,
    ConApp,
}

impl FragmentKind {
    pub fn name(self) -> &'static str {
        match self {
            FragmentKind::Type => "type",
            FragmentKind::Pattern => "pattern",
            FragmentKind::ConApp => "constructor application",
        }
    }
}

/// A sub-term of a fragment. Which variants may appear depends on the
/// fragment kind: types admit only `Var` and `Con`, constructor applications
/// add `Int`, patterns add `Wildcard`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(Ident),
    Con { head: Ident, args: Vec<Term> },
    Int(i64),
    Wildcard,
}

impl Term {
    fn is_atomic(&self) -> bool {
        match self {
            Term::Con { args, .. } => args.is_empty(),
            Term::Int(i) => *i >= 0,
            Term::Var(_) | Term::Wildcard => true,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Int(i) => write!(f, "{i}"),
            Term::Wildcard => f.write_str("_"),
            Term::Con { head, args } => {
                write!(f, "{head}")?;
                for a in args {
                    write_arg(a, f)?;
                }
                Ok(())
            }
        }
    }
}

fn write_arg(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if t.is_atomic() {
        write!(f, " {t}")
    } else {
        write!(f, " ({t})")
    }
}

/// `Head a1 .. an <+> e` in one of the three syntactic categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OplusFragment {
    pub kind: FragmentKind,
    pub head: Ident,
    pub ordinary_args: Vec<Term>,
    pub extension_arg: Term,
}

impl fmt::Display for OplusFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for a in &self.ordinary_args {
            write_arg(a, f)?;
        }
        write!(f, " <+>")?;
        write_arg(&self.extension_arg, f)
    }
}

pub fn parse_fragment(text: &str, kind: FragmentKind) -> Result<OplusFragment, Vec<Diagnostic>> {
    let tokens = lex(text).map_err(|d| vec![d])?;
    let oplus: Vec<SourceSpan> = tokens
        .iter()
        .filter(|t| t.tok == Tok::Oplus)
        .map(|t| t.span)
        .collect();
    match oplus.len() {
        0 => {
            let span = SourceSpan::new(0, text.len());
            return Err(vec![Diagnostic::new(Code::E000, "missing `<+>` in fragment").with_span(Some(span))]);
        }
        1 => {}
        _ => {
            return Err(vec![Diagnostic::new(Code::E006, "nested `<+>` has no meaning")
                .with_span(Some(oplus[1]))]);
        }
    }

    let mut p = Parser::new(&tokens, text.len());
    let frag = FragmentParser { p: &mut p, kind }.fragment().map_err(|d| vec![d])?;
    Ok(frag)
}

struct FragmentParser<'a, 't> {
    p: &'a mut Parser<'t>,
    kind: FragmentKind,
}

impl FragmentParser<'_, '_> {
    fn fragment(&mut self) -> Result<OplusFragment, Diagnostic> {
        let head = self.p.upper("a constructor or type name")?;
        let mut ordinary_args = Vec::new();
        while self.starts_atom() {
            ordinary_args.push(self.atom()?);
        }
        if !self.p.eat(&Tok::Oplus) {
            return Err(self.p.unexpected("`<+>`"));
        }
        let extension_arg = self.app()?;
        if !self.p.at_end() {
            return Err(self.p.unexpected("end of fragment"));
        }
        Ok(OplusFragment {
            kind: self.kind,
            head,
            ordinary_args,
            extension_arg,
        })
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.p.peek(),
            Some(Tok::Upper(_) | Tok::Lower(_) | Tok::Int(_) | Tok::Wildcard | Tok::LParen)
        )
    }

    fn app(&mut self) -> Result<Term, Diagnostic> {
        if let Some(Tok::Upper(_)) = self.p.peek() {
            let head = self.p.upper("a constructor")?;
            let mut args = Vec::new();
            while self.starts_atom() {
                args.push(self.atom()?);
            }
            Ok(Term::Con { head, args })
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Term, Diagnostic> {
        let span = self.p.here();
        let term = match self.p.peek() {
            Some(Tok::Upper(_)) => Term::Con {
                head: self.p.upper("a constructor")?,
                args: Vec::new(),
            },
            Some(Tok::Lower(s)) => {
                let v = Ident::new(s.clone()).map_err(|e| self.p.unexpected(&e.to_string()))?;
                self.p.bump();
                Term::Var(v)
            }
            Some(Tok::Int(i)) => {
                let i = *i;
                self.p.bump();
                Term::Int(i)
            }
            Some(Tok::Wildcard) => {
                self.p.bump();
                Term::Wildcard
            }
            Some(Tok::LParen) => {
                self.p.bump();
                let t = self.app()?;
                if !self.p.eat(&Tok::RParen) {
                    return Err(self.p.unexpected("`)`"));
                }
                return Ok(t);
            }
            _ => return Err(self.p.unexpected("an argument")),
        };
        let allowed = !matches!(
            (&term, self.kind),
            (Term::Int(_), FragmentKind::Type) | (Term::Wildcard, FragmentKind::Type | FragmentKind::ConApp)
        );
        if allowed {
            Ok(term)
        } else {
            Err(Diagnostic::new(
                Code::E000,
                format!("`{term}` cannot appear in a {}", self.kind.name()),
            )
            .with_span(Some(span)))
        }
    }
}
