//! Parser for `.xdt` declaration files and standalone `<+>` fragments.
//!
//! The grammar is documented in `docs/grammar.md`. Declarations are
//! layout-insensitive: each one runs until the next `extensible`, `data` or
//! `partial` keyword or the end of input.

mod fragment;
mod lexer;

use std::collections::BTreeMap;

pub use fragment::{parse_fragment, FragmentKind, OplusFragment, Term};
pub use lexer::{lex, Tok, Token};

use crate::diagnostic::{Code, Diagnostic, SourceSpan};
use crate::syntax::{
    ConExtensionClause, ConstructorDecl, ExtensibleDataDecl, ExtensionAlt, ExtensionDecl, Ident,
    Program, TypeExpr,
};

/// Parses a whole `.xdt` file. Errors carry spans; resolve them to line and
/// column with [`Diagnostic::locate`].
pub fn parse_program(text: &str) -> Result<Program, Vec<Diagnostic>> {
    let tokens = lex(text).map_err(|d| vec![d])?;
    let mut p = Parser::new(&tokens, text.len());
    let mut extensibles = Vec::new();
    let mut extensions = Vec::new();
    let mut errors = Vec::new();

    while !p.at_end() {
        let start = p.pos;
        match p.decl() {
            Ok(Decl::Data(d)) => extensibles.push(d),
            Ok(Decl::Extension(e)) => extensions.push(e),
            Err(d) => {
                errors.push(d);
                p.recover(start);
            }
        }
    }

    if errors.is_empty() {
        Ok(Program::new(extensibles, extensions).with_spans(p.spans))
    } else {
        Err(errors)
    }
}

enum Decl {
    Data(ExtensibleDataDecl),
    Extension(ExtensionDecl),
}

pub(crate) struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    eof: usize,
    spans: BTreeMap<String, SourceSpan>,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'t> Parser<'t> {
    pub(crate) fn new(tokens: &'t [Token], eof: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            eof,
            spans: BTreeMap::new(),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    pub(crate) fn here(&self) -> SourceSpan {
        self.tokens
            .get(self.pos)
            .map_or(SourceSpan::new(self.eof, self.eof), |t| t.span)
    }

    pub(crate) fn bump(&mut self) -> &'t Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> Diagnostic {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".to_owned(),
        };
        Diagnostic::new(Code::E000, format!("expected {expected}, found {found}"))
            .with_span(Some(self.here()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn upper(&mut self, what: &str) -> PResult<Ident> {
        match self.peek() {
            Some(Tok::Upper(s)) => {
                let id = Ident::new(s.clone()).map_err(|e| self.unexpected(&e.to_string()))?;
                self.pos += 1;
                Ok(id)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn upper_recorded(&mut self, what: &str) -> PResult<Ident> {
        let span = self.here();
        let id = self.upper(what)?;
        self.spans.entry(id.to_string()).or_insert(span);
        Ok(id)
    }

    fn lowers(&mut self) -> Vec<Ident> {
        let mut out = Vec::new();
        while let Some(Tok::Lower(s)) = self.peek() {
            if let Ok(id) = Ident::new(s.clone()) {
                out.push(id);
            }
            self.pos += 1;
        }
        out
    }

    fn recover(&mut self, decl_start: usize) {
        if self.pos == decl_start && !self.at_end() {
            self.pos += 1;
        }
        while let Some(t) = self.peek() {
            if t.starts_decl() {
                break;
            }
            self.pos += 1;
        }
    }

    fn end_of_decl(&self) -> bool {
        self.peek().is_none_or(Tok::starts_decl)
    }

    fn decl(&mut self) -> PResult<Decl> {
        match self.peek() {
            Some(Tok::Extensible) => {
                self.bump();
                self.expect(Tok::Data)?;
                let (name, params) = self.head()?;
                self.expect(Tok::Eq)?;
                let constructors = self.constructors()?;
                Ok(Decl::Data(ExtensibleDataDecl {
                    name,
                    params,
                    constructors,
                    extensible: true,
                }))
            }
            Some(Tok::Partial) => {
                self.bump();
                if self.peek() != Some(&Tok::Data) {
                    return Err(self.unexpected("`data` after `partial`"));
                }
                match self.data_decl(true)? {
                    d @ Decl::Extension(_) => Ok(d),
                    Decl::Data(d) => Err(Diagnostic::new(
                        Code::E000,
                        format!("`partial` applies only to extension declarations, not `{}`", d.name),
                    )
                    .with_span(self.spans.get(d.name.as_str()).copied())),
                }
            }
            Some(Tok::Data) => self.data_decl(false),
            _ => Err(self.unexpected("a declaration")),
        }
    }

    fn head(&mut self) -> PResult<(Ident, Vec<Ident>)> {
        let name = self.upper_recorded("a type name")?;
        let params = self.lowers();
        Ok((name, params))
    }

    fn data_decl(&mut self, partial: bool) -> PResult<Decl> {
        self.expect(Tok::Data)?;
        let (name, params) = self.head()?;
        if self.eat(&Tok::Extends) {
            let base_name = self.upper("a base type name")?;
            let base_args = self.lowers();
            let alternatives = if self.eat(&Tok::Eq) {
                self.alternatives()?
            } else if self.end_of_decl() {
                Vec::new()
            } else {
                return Err(self.unexpected("`=` or a new declaration"));
            };
            Ok(Decl::Extension(ExtensionDecl {
                name,
                params,
                base_name,
                base_args,
                alternatives,
                partial,
            }))
        } else {
            self.expect(Tok::Eq)?;
            let constructors = self.constructors()?;
            Ok(Decl::Data(ExtensibleDataDecl {
                name,
                params,
                constructors,
                extensible: false,
            }))
        }
    }

    fn constructors(&mut self) -> PResult<Vec<ConstructorDecl>> {
        let mut out = vec![self.constructor()?];
        while self.eat(&Tok::Bar) {
            out.push(self.constructor()?);
        }
        if !self.end_of_decl() {
            return Err(self.unexpected("`|` or a new declaration"));
        }
        Ok(out)
    }

    fn constructor(&mut self) -> PResult<ConstructorDecl> {
        let name = self.upper_recorded("a constructor name")?;
        let fields = self.atypes()?;
        Ok(ConstructorDecl { name, fields })
    }

    fn alternatives(&mut self) -> PResult<Vec<ExtensionAlt>> {
        let mut out = vec![self.alternative()?];
        while self.eat(&Tok::Bar) {
            out.push(self.alternative()?);
        }
        if !self.end_of_decl() {
            return Err(self.unexpected("`|` or a new declaration"));
        }
        Ok(out)
    }

    fn alternative(&mut self) -> PResult<ExtensionAlt> {
        let name = self.upper_recorded("a constructor name")?;
        if self.eat(&Tok::Extends) {
            let base_constructor = self.upper("a base constructor name")?;
            self.expect(Tok::By)?;
            let added_fields = if self.eat(&Tok::Empty) {
                Vec::new()
            } else {
                let fields = self.atypes()?;
                if fields.is_empty() {
                    return Err(self.unexpected("`empty` or at least one field type"));
                }
                fields
            };
            Ok(ExtensionAlt::Extend(ConExtensionClause {
                new_name: name,
                base_constructor,
                added_fields,
            }))
        } else {
            let fields = self.atypes()?;
            Ok(ExtensionAlt::New(ConstructorDecl { name, fields }))
        }
    }

    fn atypes(&mut self) -> PResult<Vec<TypeExpr>> {
        let mut out = Vec::new();
        while matches!(self.peek(), Some(Tok::Upper(_) | Tok::Lower(_) | Tok::LParen)) {
            out.push(self.atype()?);
        }
        Ok(out)
    }

    fn atype(&mut self) -> PResult<TypeExpr> {
        match self.peek() {
            Some(Tok::Upper(_)) => Ok(TypeExpr::Con {
                head: self.upper("a type")?,
                args: Vec::new(),
            }),
            Some(Tok::Lower(s)) => {
                let v = Ident::new(s.clone()).map_err(|e| self.unexpected(&e.to_string()))?;
                self.bump();
                Ok(TypeExpr::Var(v))
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.type_expr()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a type")),
        }
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        let start = self.here();
        let base = match self.peek() {
            Some(Tok::Upper(_)) => {
                let head = self.upper("a type")?;
                let args = self.atypes()?;
                TypeExpr::Con { head, args }
            }
            _ => self.atype()?,
        };
        if self.eat(&Tok::Oplus) {
            let extension = self.atype()?;
            if base.contains_oplus() || extension.contains_oplus() {
                return Err(Diagnostic::new(Code::E006, "nested `<+>` has no meaning")
                    .with_span(Some(SourceSpan::new(start.begin, self.prev_end()))));
            }
            Ok(TypeExpr::oplus(base, extension))
        } else {
            Ok(base)
        }
    }

    pub(crate) fn prev_end(&self) -> usize {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map_or(0, |t| t.span.end)
    }
}
