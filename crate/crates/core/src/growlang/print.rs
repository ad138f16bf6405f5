//! Decoration-oblivious printers. Payloads are never inspected; nodes built
//! with a new constructor are handed to the matching handler.

use super::tree::{Class, Ctor, Node};

pub type Handler = fn(&Node, &Printer<'_>) -> String;

/// One handler per syntax class, called for the new-constructor cases.
#[derive(Clone, Copy)]
pub struct PrintHandlers {
    pub typ: Handler,
    pub exp: Handler,
    pub dec: Handler,
}

impl Default for PrintHandlers {
    fn default() -> Self {
        PrintHandlers {
            typ: default_typ,
            exp: default_exp,
            dec: default_dec,
        }
    }
}

fn default_typ(n: &Node, p: &Printer<'_>) -> String {
    match n.ctor {
        Ctor::Prod => format!("({}) × {}", p.ty(n.child(0)), p.ty(n.child(1))),
        other => unhandled(other),
    }
}

fn default_exp(n: &Node, p: &Printer<'_>) -> String {
    match n.ctor {
        Ctor::Tup => format!("({} , {})", p.exp(n.child(0)), p.exp(n.child(1))),
        other => unhandled(other),
    }
}

fn default_dec(n: &Node, p: &Printer<'_>) -> String {
    match n.ctor {
        Ctor::Prj => format!("({} , {}) := {}", n.name(0), n.name(1), p.exp(n.child(2))),
        other => unhandled(other),
    }
}

fn unhandled(c: Ctor) -> String {
    format!("<{c}>")
}

pub struct Printer<'h> {
    handlers: &'h PrintHandlers,
}

impl<'h> Printer<'h> {
    pub fn new(handlers: &'h PrintHandlers) -> Self {
        Printer { handlers }
    }

    pub fn ty(&self, n: &Node) -> String {
        match n.ctor {
            Ctor::Int => "Int".to_owned(),
            Ctor::Arr => format!("({}) → {}", self.ty(n.child(0)), self.ty(n.child(1))),
            _ => self.delegate(n),
        }
    }

    pub fn exp(&self, n: &Node) -> String {
        match n.ctor {
            Ctor::Lit => n.int(0).to_string(),
            Ctor::Var => n.name(0).to_owned(),
            Ctor::Ann => format!("({}) :: ({})", self.exp(n.child(0)), self.ty(n.child(1))),
            Ctor::Abs => format!("λ{}.{}", n.name(0), self.exp(n.child(1))),
            Ctor::App => format!("({}) ({})", self.exp(n.child(0)), self.exp(n.child(1))),
            Ctor::Let => format!("let {} in {}", self.dec(n.child(0)), self.exp(n.child(1))),
            _ => self.delegate(n),
        }
    }

    pub fn dec(&self, n: &Node) -> String {
        match n.ctor {
            Ctor::Val => format!("{} := {}", n.name(0), self.exp(n.child(1))),
            _ => self.delegate(n),
        }
    }

    pub fn any(&self, n: &Node) -> String {
        match n.class() {
            Class::Typ => self.ty(n),
            Class::Exp => self.exp(n),
            Class::Dec => self.dec(n),
        }
    }

    fn delegate(&self, n: &Node) -> String {
        let h = match n.class() {
            Class::Typ => self.handlers.typ,
            Class::Exp => self.handlers.exp,
            Class::Dec => self.handlers.dec,
        };
        h(n, self)
    }
}

pub fn print_ty(n: &Node, h: &PrintHandlers) -> String {
    Printer::new(h).ty(n)
}

pub fn print_exp(n: &Node, h: &PrintHandlers) -> String {
    Printer::new(h).exp(n)
}

pub fn print_dec(n: &Node, h: &PrintHandlers) -> String {
    Printer::new(h).dec(n)
}
