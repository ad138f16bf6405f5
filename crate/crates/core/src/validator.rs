//! Well-formedness checks for extension declarations.
//!
//! The validator gates the encoder: when [`validate_program`] reports no
//! errors, every encoder operation on the program is total.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{Code, Diagnostic};
use crate::syntax::{ExtensibleDataDecl, ExtensionAlt, ExtensionDecl, Ident, Program, TypeExpr};

pub fn validate_program(p: &Program) -> Vec<Diagnostic> {
    let mut v = Validator { p, out: Vec::new() };
    v.names();
    for d in &p.extensibles {
        v.data_decl(d);
    }
    for e in &p.extensions {
        v.extension(e);
    }
    v.out
}

/// Base constructors that `ext` does not mention, in declaration order.
pub fn unextended_constructors(ext: &ExtensionDecl, base: &ExtensibleDataDecl) -> Vec<Ident> {
    let claused: BTreeSet<&Ident> = ext.extended_constructors().map(|c| &c.base_constructor).collect();
    base.constructors
        .iter()
        .filter(|c| !claused.contains(&c.name))
        .map(|c| c.name.clone())
        .collect()
}

struct Validator<'p> {
    p: &'p Program,
    out: Vec<Diagnostic>,
}

impl Validator<'_> {
    fn report(&mut self, code: Code, at: &Ident, message: String) {
        self.out
            .push(Diagnostic::new(code, message).with_span(self.p.span_of(at.as_str())));
    }

    /// Declaration names, and the constructor namespace (which includes the
    /// terminal constructor every extensible type gets).
    fn names(&mut self) {
        let mut types: BTreeMap<&Ident, usize> = BTreeMap::new();
        let decl_names = self
            .p
            .extensibles
            .iter()
            .map(|d| &d.name)
            .chain(self.p.extensions.iter().map(|e| &e.name));
        for name in decl_names {
            *types.entry(name).or_default() += 1;
        }
        for (name, n) in types {
            if n > 1 {
                self.report(Code::E001, name, format!("type `{name}` is declared {n} times"));
            }
        }

        let mut cons: BTreeMap<&Ident, Vec<&'static str>> = BTreeMap::new();
        for d in &self.p.extensibles {
            if d.extensible {
                cons.entry(&d.name).or_default().push("terminal constructor");
            }
            for c in &d.constructors {
                cons.entry(&c.name).or_default().push("constructor");
            }
        }
        for e in &self.p.extensions {
            for a in &e.alternatives {
                let what = match a {
                    ExtensionAlt::New(_) => "new constructor",
                    ExtensionAlt::Extend(_) => "extended constructor",
                };
                cons.entry(a.public_name()).or_default().push(what);
            }
        }
        for (name, uses) in cons {
            if uses.len() > 1 {
                self.report(
                    Code::E001,
                    name,
                    format!("constructor name `{name}` is used {} times ({})", uses.len(), uses.join(", ")),
                );
            }
        }
    }

    fn params(&mut self, owner: &Ident, params: &[Ident]) {
        let mut seen = BTreeSet::new();
        for a in params {
            if !seen.insert(a) {
                self.report(Code::E001, owner, format!("parameter `{a}` of `{owner}` is repeated"));
            }
        }
    }

    fn data_decl(&mut self, d: &ExtensibleDataDecl) {
        self.params(&d.name, &d.params);
        for c in &d.constructors {
            for f in &c.fields {
                if d.extensible && f.contains_oplus() {
                    self.report(
                        Code::E006,
                        &c.name,
                        format!("`<+>` in a field of extensible `{}`; its slots are implicit", d.name),
                    );
                }
            }
        }
        for a in &d.params {
            if !d.constructors.iter().flat_map(|c| &c.fields).any(|f| f.mentions_var(a)) {
                self.report(Code::W001, &d.name, format!("parameter `{a}` of `{}` is never used", d.name));
            }
        }
    }

    fn extension(&mut self, e: &ExtensionDecl) {
        self.params(&e.name, &e.params);

        // V2
        let mut bad_arg = false;
        for b in &e.base_args {
            if !e.params.contains(b) {
                bad_arg = true;
                self.report(
                    Code::E003,
                    &e.name,
                    format!("base argument `{b}` of `{}` is not one of its parameters", e.name),
                );
            }
        }
        if !bad_arg && e.base_args.len() > e.params.len() {
            self.report(
                Code::E003,
                &e.name,
                format!(
                    "`{}` passes {} base arguments but declares only {} parameters",
                    e.name,
                    e.base_args.len(),
                    e.params.len()
                ),
            );
        }

        for t in e.field_types() {
            self.oplus_heads(&e.name, t);
        }

        for a in &e.params {
            let used = e.base_args.contains(a) || e.field_types().any(|t| t.mentions_var(a));
            if !used {
                self.report(Code::W001, &e.name, format!("parameter `{a}` of `{}` is never used", e.name));
            }
        }

        // V1
        let Some(base) = self.p.extensible(&e.base_name) else {
            let what = if self.p.data_decl(&e.base_name).is_some() {
                "is not extensible"
            } else {
                "is not declared"
            };
            self.report(
                Code::E002,
                &e.name,
                format!("`{}` extends `{}`, which {what}", e.name, e.base_name),
            );
            return;
        };

        // V3
        if e.base_args.len() != base.params.len() {
            self.report(
                Code::E007,
                &e.name,
                format!(
                    "`{}` has {} parameters but `{}` instantiates it with {}",
                    base.name,
                    base.params.len(),
                    e.name,
                    e.base_args.len()
                ),
            );
        }

        // V4, V5
        let mut claused: BTreeSet<&Ident> = BTreeSet::new();
        for c in e.extended_constructors() {
            if base.constructor(&c.base_constructor).is_none() {
                self.report(
                    Code::E004,
                    &c.new_name,
                    format!("`{}` has no constructor `{}`", base.name, c.base_constructor),
                );
            } else if !claused.insert(&c.base_constructor) {
                self.report(
                    Code::E005,
                    &c.new_name,
                    format!("`{}` extends `{}` more than once", e.name, c.base_constructor),
                );
            }
        }

        if !e.partial {
            let missing = unextended_constructors(e, base);
            if !missing.is_empty() {
                let list: Vec<String> = missing.iter().map(|m| format!("`{m}`")).collect();
                self.report(
                    Code::E008,
                    &e.name,
                    format!(
                        "`{}` does not extend {} of `{}`; add clauses or declare it `partial`",
                        e.name,
                        list.join(", "),
                        base.name
                    ),
                );
            }
        }
    }

    // V6
    fn oplus_heads(&mut self, owner: &Ident, t: &TypeExpr) {
        match t {
            TypeExpr::Var(_) => {}
            TypeExpr::Con { args, .. } => {
                for a in args {
                    self.oplus_heads(owner, a);
                }
            }
            TypeExpr::Oplus { base, extension } => {
                match base.as_ref() {
                    TypeExpr::Con { head, .. } if self.p.is_extensible(head) => {}
                    other => {
                        self.report(
                            Code::E006,
                            owner,
                            format!("`<+>` applied to `{other}`, which is not an extensible type"),
                        );
                    }
                }
                self.oplus_heads(owner, base);
                self.oplus_heads(owner, extension);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;
    use crate::syntax::ident;

    fn codes(src: &str) -> Vec<Code> {
        let p = parse_program(src).unwrap_or_else(|e| panic!("{e:?}"));
        validate_program(&p).into_iter().map(|d| d.code).collect()
    }

    const TYPX: &str = "extensible data TypX = IntX | ArrX TypX TypX\n";

    #[test]
    fn typ_dot_is_clean() {
        let src = format!(
            "{TYPX}data TypDot extends TypX = ProdDot TypDot TypDot | IntDot extends IntX by empty | ArrDot extends ArrX by empty"
        );
        assert!(codes(&src).is_empty());
    }

    #[test]
    fn base_arg_not_a_parameter() {
        let src = "extensible data L a = Nil | Cons a (L a)\ndata M extends L b = N extends Nil by empty | C extends Cons by empty";
        assert_eq!(codes(src), [Code::E003]);
    }

    #[test]
    fn duplicate_clause() {
        let src = format!("{TYPX}data D extends TypX = I1 extends IntX by empty | I2 extends IntX by Int | A extends ArrX by empty");
        assert_eq!(codes(&src), [Code::E005]);
    }

    #[test]
    fn each_code() {
        let cases: &[(&str, Code)] = &[
            ("data D extends Nope = A", Code::E002),
            ("data T = A\ndata D extends T = B", Code::E002),
            ("data D extends TypX = I extends IntX by empty | A extends ArrX by empty | Z extends ZapX by empty", Code::E004),
            ("data D extends TypX = I extends IntX by empty | A extends ArrX by (Int <+> a)", Code::E006),
            ("data D extends TypX = I extends IntX by empty", Code::E008),
            ("data D extends TypX = IntX extends IntX by empty | A extends ArrX by empty", Code::E001),
            ("data D a extends TypX = I extends IntX by empty | A extends ArrX by empty", Code::W001),
        ];
        for (ext, code) in cases {
            let src = format!("{TYPX}{ext}");
            assert_eq!(&codes(&src), &[*code], "{ext}");
        }
    }

    #[test]
    fn arity_mismatch() {
        let src = "extensible data L a = Nil | Cons a (L a)\npartial data M a extends L";
        assert_eq!(codes(src), [Code::W001, Code::E007]);
    }

    #[test]
    fn partial_allows_missing_constructors() {
        let src = format!("{TYPX}partial data D extends TypX = I extends IntX by Int");
        assert!(codes(&src).is_empty());
    }

    #[test]
    fn constructor_named_like_extensible_type() {
        let src = format!("{TYPX}extensible data ExpX = LitX Integer | TypX ExpX TypX");
        assert_eq!(codes(&src), [Code::E001]);
    }

    #[test]
    fn unextended() {
        let p = parse_program(&format!("{TYPX}partial data D extends TypX = I extends IntX by empty\ndata E extends TypX"))
            .unwrap();
        let base = p.extensible(&ident("TypX")).unwrap();
        assert_eq!(unextended_constructors(&p.extensions[0], base), vec![ident("ArrX")]);
        assert_eq!(unextended_constructors(&p.extensions[1], base), vec![ident("IntX"), ident("ArrX")]);
    }
}
