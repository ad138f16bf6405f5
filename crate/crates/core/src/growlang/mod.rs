//! A small lambda language on runtime extension slots.
//!
//! One set of constructors serves both the undecorated and the
//! type-decorated trees: a [`Descriptor`] says what each slot carries, and a
//! [`Tree`] is a root node validated against one. Parsing yields plain
//! trees, [`infer_exp`] yields typed ones, and [`strip`] goes back.
//!
//! ```
//! use xdt::growlang::{chk_exp, infer_exp, parse_exp, print_exp, PrintHandlers, Ty, TypeEnv};
//!
//! let t = parse_exp(r"((\x. x) :: Int -> Int) 1").unwrap();
//! let r = infer_exp(&t).unwrap();
//! assert_eq!(r.result, Ty::Int);
//! assert!(chk_exp(&r.tree, &TypeEnv::new(), &Ty::Int).unwrap());
//! assert_eq!(print_exp(r.tree.root(), &PrintHandlers::default()), "((λx.x) :: ((Int) → Int)) (1)");
//! ```

mod check;
mod infer;
mod parse;
mod print;
mod tree;
mod ty;

pub use check::{chk_dec, chk_exp};
pub use infer::{infer_dec, infer_exp, Inferred, TypeError, TypeErrorKind};
pub use parse::{parse_dec, parse_exp, parse_ty};
pub use print::{print_dec, print_exp, print_ty, Handler, PrintHandlers, Printer};
pub use tree::{
    node_to_ty, strip, ty_to_node, Class, Ctor, Descriptor, Field, FieldKind, Node, Payload, Shape, SrcSpan, Tree,
    TreeError,
};
pub use ty::{Ty, TypeEnv};

/// Constructor-style rendering that shows payloads, e.g.
/// `AppX {Int} (AbsX x (VarX x)) (LitX 1)`. Unit payloads are omitted.
pub fn render_decorated(n: &Node) -> String {
    let mut out = n.ctor.name().to_owned();
    match &n.ext {
        Payload::Unit => {}
        Payload::Ty(t) => out.push_str(&format!(" {{{t}}}")),
        Payload::Env(e) => out.push_str(&format!(" {{{e}}}")),
        Payload::Span(s) => out.push_str(&format!(" {{SrcSpan {} {}}}", s.begins, s.ends)),
    }
    for f in &n.fields {
        match f {
            Field::Name(x) => out.push_str(&format!(" {x}")),
            Field::Int(i) if *i < 0 => out.push_str(&format!(" ({i})")),
            Field::Int(i) => out.push_str(&format!(" {i}")),
            Field::Node(c) if c.fields.is_empty() && c.ext == Payload::Unit => {
                out.push_str(&format!(" {}", c.ctor.name()))
            }
            Field::Node(c) => out.push_str(&format!(" ({})", render_decorated(c))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn decorated_rendering() {
        let r = infer_exp(&parse_exp("let x := (\\y. y) 1 in (x, -2)").unwrap()).unwrap();
        assert_eq!(
            render_decorated(r.tree.root()),
            "LetX {[x : Int]} (ValX x (AppX {Int} (AbsX y (VarX y)) (LitX 1))) (Tup (VarX x) (LitX (-2)))"
        );
    }

    #[test]
    fn my_lit_with_source_span() {
        let located = Arc::new(Descriptor::with_slots("located", &[("LitX", Shape::Span)]));
        let my_lit = Node::lit(42).with_ext(Payload::Span(SrcSpan::new(0, 2)));
        let t = Tree::new(located.clone(), my_lit.clone()).unwrap();
        assert_eq!(t.root().ext, Payload::Span(SrcSpan { begins: 0, ends: 2 }));
        assert_eq!(print_exp(t.root(), &PrintHandlers::default()), "42");
        assert_eq!(strip(&t).root(), &Node::lit(42));
        assert!(Tree::plain(my_lit).is_err());
        assert!(Tree::new(located, Node::lit(42)).is_err());
    }
}
