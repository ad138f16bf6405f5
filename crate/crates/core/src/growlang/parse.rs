//! Concrete syntax of the lambda language.
//!
//! ```text
//! exp  ::= (\ | λ) x . exp | let dec in exp | app (:: ty)*
//! app  ::= atom atom*
//! atom ::= integer | x | ( exp ) | ( exp , exp )
//! dec  ::= x := exp | ( x , y ) := exp
//! ty   ::= tatom ((-> | → | * | ×) ty)?
//! tatom ::= Int | ( ty )
//! ```

use super::tree::{Node, SrcSpan, Tree};
use crate::diagnostic::{Code, Diagnostic, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    IntTy,
    Let,
    In,
    Lambda,
    Dot,
    DColon,
    Assign,
    LParen,
    RParen,
    Comma,
    Arrow,
    Times,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(x) => format!("`{x}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::IntTy => "`Int`".into(),
            Tok::Let => "`let`".into(),
            Tok::In => "`in`".into(),
            Tok::Lambda => "`λ`".into(),
            Tok::Dot => "`.`".into(),
            Tok::DColon => "`::`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`→`".into(),
            Tok::Times => "`×`".into(),
        }
    }
}

type Spanned = (Tok, SrcSpan);

fn error(message: impl Into<String>, span: SrcSpan) -> Diagnostic {
    Diagnostic::new(Code::E000, message).with_span(Some(SourceSpan::new(span.begins, span.ends)))
}

fn lex(text: &str) -> Result<Vec<Spanned>, Diagnostic> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let one = |t: Tok| (t, SrcSpan::new(i, i + c.len_utf8()));
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '-' if text[i..].starts_with("--") => {
                while it.next_if(|&(_, c)| c != '\n').is_some() {}
            }
            '-' if text[i..].starts_with("->") => {
                out.push((Tok::Arrow, SrcSpan::new(i, i + 2)));
                it.next();
                it.next();
            }
            ':' if text[i..].starts_with("::") => {
                out.push((Tok::DColon, SrcSpan::new(i, i + 2)));
                it.next();
                it.next();
            }
            ':' if text[i..].starts_with(":=") => {
                out.push((Tok::Assign, SrcSpan::new(i, i + 2)));
                it.next();
                it.next();
            }
            '\\' | 'λ' => {
                out.push(one(Tok::Lambda));
                it.next();
            }
            '→' => {
                out.push(one(Tok::Arrow));
                it.next();
            }
            '*' | '×' => {
                out.push(one(Tok::Times));
                it.next();
            }
            '.' | '(' | ')' | ',' => {
                out.push(one(match c {
                    '.' => Tok::Dot,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                }));
                it.next();
            }
            c if c.is_ascii_digit() || (c == '-' && text[i + 1..].starts_with(|d: char| d.is_ascii_digit())) => {
                it.next();
                let mut end = i + 1;
                while let Some((j, _)) = it.next_if(|(_, d)| d.is_ascii_digit()) {
                    end = j + 1;
                }
                let span = SrcSpan::new(i, end);
                let v = text[i..end]
                    .parse()
                    .map_err(|_| error(format!("integer literal `{}` out of range", &text[i..end]), span))?;
                out.push((Tok::Int(v), span));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i;
                while let Some((j, d)) = it.next_if(|(_, d)| d.is_ascii_alphanumeric() || *d == '_' || *d == '\'') {
                    end = j + d.len_utf8();
                }
                let span = SrcSpan::new(i, end);
                let tok = match &text[i..end] {
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    "Int" => Tok::IntTy,
                    w if w.starts_with(|c: char| c.is_ascii_uppercase()) => {
                        return Err(error(format!("unknown type or constructor `{w}`"), span));
                    }
                    w => Tok::Name(w.to_owned()),
                };
                out.push((tok, span));
            }
            _ => return Err(error(format!("unexpected character {c:?}"), one(Tok::Dot).1)),
        }
    }
    Ok(out)
}

struct Parser<'t> {
    toks: &'t [Spanned],
    pos: usize,
    eof: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> SrcSpan {
        self.toks.get(self.pos).map_or(SrcSpan::new(self.eof, self.eof), |(_, s)| *s)
    }

    fn prev_end(&self) -> usize {
        self.pos.checked_sub(1).map_or(0, |i| self.toks[i].1.ends)
    }

    fn span_from(&self, begins: usize) -> SrcSpan {
        SrcSpan::new(begins, self.prev_end().max(begins))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let found = self.peek().map_or("end of input".to_owned(), Tok::describe);
        error(format!("expected {wanted}, found {found}"), self.here())
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Name(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn exp(&mut self) -> PResult<Node> {
        let start = self.here().begins;
        match self.peek() {
            Some(Tok::Lambda) => {
                self.pos += 1;
                let x = self.name()?;
                self.expect(Tok::Dot)?;
                let body = self.exp()?;
                Ok(Node::abs(&x, body).with_span(self.span_from(start)))
            }
            Some(Tok::Let) => {
                self.pos += 1;
                let d = self.dec()?;
                self.expect(Tok::In)?;
                let body = self.exp()?;
                Ok(Node::let_(d, body).with_span(self.span_from(start)))
            }
            _ => {
                let mut e = self.app()?;
                while self.eat(&Tok::DColon) {
                    let a = self.ty()?;
                    e = Node::ann(e, a).with_span(self.span_from(start));
                }
                Ok(e)
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Name(_) | Tok::LParen))
    }

    fn app(&mut self) -> PResult<Node> {
        let start = self.here().begins;
        let mut e = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            e = Node::app(e, arg).with_span(self.span_from(start));
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Node> {
        let start = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(i)) => {
                self.pos += 1;
                Ok(Node::lit(i).with_span(start))
            }
            Some(Tok::Name(x)) => {
                self.pos += 1;
                Ok(Node::var(&x).with_span(start))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let m = self.exp()?;
                if self.eat(&Tok::Comma) {
                    let n = self.exp()?;
                    self.expect(Tok::RParen)?;
                    Ok(Node::tup(m, n).with_span(self.span_from(start.begins)))
                } else {
                    self.expect(Tok::RParen)?;
                    Ok(m)
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn dec(&mut self) -> PResult<Node> {
        let start = self.here().begins;
        if self.eat(&Tok::LParen) {
            let x = self.name()?;
            self.expect(Tok::Comma)?;
            let y = self.name()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Assign)?;
            let l = self.exp()?;
            Ok(Node::prj(&x, &y, l).with_span(self.span_from(start)))
        } else {
            let x = self.name()?;
            self.expect(Tok::Assign)?;
            let m = self.exp()?;
            Ok(Node::val(&x, m).with_span(self.span_from(start)))
        }
    }

    fn ty(&mut self) -> PResult<Node> {
        let start = self.here().begins;
        let a = self.tatom()?;
        let make = match self.peek() {
            Some(Tok::Arrow) => Node::arr,
            Some(Tok::Times) => Node::prod,
            _ => return Ok(a),
        };
        self.pos += 1;
        let b = self.ty()?;
        Ok(make(a, b).with_span(self.span_from(start)))
    }

    fn tatom(&mut self) -> PResult<Node> {
        let start = self.here();
        if self.eat(&Tok::IntTy) {
            Ok(Node::int_ty().with_span(start))
        } else if self.eat(&Tok::LParen) {
            let t = self.ty()?;
            self.expect(Tok::RParen)?;
            Ok(t)
        } else {
            Err(self.unexpected("a type"))
        }
    }
}

fn run<F>(text: &str, f: F) -> Result<Tree, Vec<Diagnostic>>
where
    F: for<'a, 't> FnOnce(&'a mut Parser<'t>) -> PResult<Node>,
{
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        eof: text.len(),
    };
    let root = f(&mut p).and_then(|n| p.finish().map(|()| n)).map_err(|d| vec![d])?;
    Ok(Tree::plain(root).expect("the parser builds plain trees"))
}

pub fn parse_exp(text: &str) -> Result<Tree, Vec<Diagnostic>> {
    run(text, |p| p.exp())
}

pub fn parse_dec(text: &str) -> Result<Tree, Vec<Diagnostic>> {
    run(text, |p| p.dec())
}

pub fn parse_ty(text: &str) -> Result<Tree, Vec<Diagnostic>> {
    run(text, |p| p.ty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growlang::tree::Payload;

    fn exp(text: &str) -> Node {
        parse_exp(text).unwrap_or_else(|e| panic!("{text}: {e:?}")).into_root()
    }

    #[test]
    fn spec_examples() {
        let id = exp("\\x. x");
        assert_eq!(id, Node::abs("x", Node::var("x")));
        assert_eq!(id.ext, Payload::Unit);
        assert_eq!(exp("let x := 1 in x"), Node::let_(Node::val("x", Node::lit(1)), Node::var("x")));
        assert_eq!(exp("(1, 2)"), Node::tup(Node::lit(1), Node::lit(2)));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            exp("f x y :: Int"),
            Node::ann(Node::app(Node::app(Node::var("f"), Node::var("x")), Node::var("y")), Node::int_ty())
        );
        assert_eq!(
            exp("λx. x :: Int"),
            Node::abs("x", Node::ann(Node::var("x"), Node::int_ty()))
        );
        assert_eq!(
            exp("let (a, b) := p in a b"),
            Node::let_(
                Node::prj("a", "b", Node::var("p")),
                Node::app(Node::var("a"), Node::var("b"))
            )
        );
        assert_eq!(exp("f -1"), Node::app(Node::var("f"), Node::lit(-1)));
    }

    #[test]
    fn types_share_one_right_associative_level() {
        let t = parse_ty("Int -> Int * Int → Int").unwrap().into_root();
        assert_eq!(
            t,
            Node::arr(Node::int_ty(), Node::prod(Node::int_ty(), Node::arr(Node::int_ty(), Node::int_ty())))
        );
        let t = parse_ty("(Int × Int) → Int").unwrap().into_root();
        assert_eq!(t, Node::arr(Node::prod(Node::int_ty(), Node::int_ty()), Node::int_ty()));
    }

    #[test]
    fn comments_and_spans() {
        let n = exp("-- expect: Int\n  42");
        assert_eq!(n, Node::lit(42));
        assert_eq!(n.span, Some(SrcSpan::new(17, 19)));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_exp("let x = 1 in x").unwrap_err();
        assert_eq!(e[0].code, Code::E000);
        assert_eq!(e[0].span, Some(SourceSpan::new(6, 7)));
        assert!(parse_exp("(1, 2").is_err());
        assert!(parse_exp("").is_err());
        assert!(parse_exp("Foo").is_err());
        assert!(parse_exp("x )").is_err());
        assert!(parse_ty("Int ->").is_err());
    }
}
