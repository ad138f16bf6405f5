//! Text rendering for encoded declarations, lowered extensions and source
//! programs.
//!
//! Output is byte-deterministic: two-space indent, one constructor per
//! line, `\n` line ends and a trailing newline on whole documents.

use std::fmt::Write as _;

use crate::encoder::{EncodedConstructor, EncodedDataDecl, EncodedProgram, LoweredExtension, SlotParams, SlotRef};
use crate::syntax::{ConstructorDecl, ExtensibleDataDecl, ExtensionAlt, ExtensionDecl, Program, TypeExpr};

pub const INDENT: &str = "  ";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    Haskell,
    DslEcho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderConfig {
    pub backend: Backend,
    /// Advisory only; layout never depends on it.
    pub line_width: usize,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            backend: Backend::Haskell,
            line_width: 80,
        }
    }
}

struct Atomic<'a>(&'a TypeExpr);

impl std::fmt::Display for Atomic<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        crate::syntax::fmt_atomic(self.0, f)
    }
}

fn slot(s: &SlotRef) -> String {
    match s {
        SlotRef::Indexed { xi, label } => format!("({xi} \"{label}\")"),
        SlotRef::Var(v) => v.to_string(),
    }
}

fn encoded_constructor(c: &EncodedConstructor) -> String {
    let mut line = format!("{} {}", c.name, slot(&c.slot));
    for f in &c.fields {
        let _ = write!(line, " {}", Atomic(f));
    }
    line
}

fn plain_constructor(c: &ConstructorDecl) -> String {
    let mut line = c.name.to_string();
    for f in &c.fields {
        let _ = write!(line, " {}", Atomic(f));
    }
    line
}

/// `head` on its own line, then each alternative indented with `= ` / `| `.
fn alternatives(out: &mut String, head: &str, alts: impl IntoIterator<Item = String>) {
    out.push_str(head);
    for (i, alt) in alts.into_iter().enumerate() {
        let sep = if i == 0 { '=' } else { '|' };
        let _ = write!(out, "\n{INDENT}{sep} {alt}");
    }
    out.push('\n');
}

pub fn emit_encoded(d: &EncodedDataDecl, _cfg: &RenderConfig) -> String {
    let mut head = format!("data {}", d.name);
    let slots = match &d.slots {
        SlotParams::Indexed(xi) => vec![xi],
        SlotParams::PerSlot(vs) => vs.iter().collect(),
    };
    for v in slots.into_iter().chain(&d.params) {
        let _ = write!(head, " {v}");
    }
    let mut out = String::new();
    alternatives(&mut out, &head, d.all_constructors().map(encoded_constructor));
    out
}

pub fn emit_lowered(l: &LoweredExtension, _cfg: &RenderConfig) -> String {
    let mut out = String::new();
    let a = &l.alias;
    let _ = write!(out, "type {}", a.name);
    for p in &a.params {
        let _ = write!(out, " {p}");
    }
    let _ = writeln!(out, " = {}", a.rhs);

    if l.declares_family {
        let _ = writeln!(out, "\ndata family {} (label :: Symbol) :: *", l.family_name);
    }

    if !l.instances.is_empty() {
        out.push('\n');
    }
    for inst in &l.instances {
        let head = format!("data instance {} \"{}\"", l.family_name, inst.label);
        match inst.constructors.as_slice() {
            [only] => {
                let _ = writeln!(out, "{head} = {}", plain_constructor(only));
            }
            many => alternatives(&mut out, &head, many.iter().map(plain_constructor)),
        }
    }

    if !l.synonyms.is_empty() {
        out.push('\n');
    }
    for s in &l.synonyms {
        let xs: Vec<String> = (1..=s.ext_arg_count).map(|i| format!("x{i}")).collect();
        let ys: Vec<String> = (1..=s.ordinary_arg_count).map(|i| format!("y{i}")).collect();
        let mut lhs = format!("pattern {}", s.public_name);
        for v in xs.iter().chain(&ys) {
            let _ = write!(lhs, " {v}");
        }
        let payload = if xs.is_empty() {
            s.payload_constructor.to_string()
        } else {
            format!("({} {})", s.payload_constructor, xs.join(" "))
        };
        let mut rhs = format!("{} {payload}", s.underlying_constructor);
        for y in &ys {
            let _ = write!(rhs, " {y}");
        }
        let _ = writeln!(out, "{lhs} = {rhs}");
    }
    out
}

fn emit_plain(d: &ExtensibleDataDecl) -> String {
    let mut head = format!("data {}", d.name);
    for p in &d.params {
        let _ = write!(head, " {p}");
    }
    let mut out = String::new();
    alternatives(&mut out, &head, d.constructors.iter().map(plain_constructor));
    out
}

/// The full Haskell rendering of an encoded program: plain declarations,
/// then encoded declarations, then lowered extensions, separated by blank
/// lines.
pub fn emit_program(p: &EncodedProgram, cfg: &RenderConfig) -> String {
    let blocks: Vec<String> = p
        .plain
        .iter()
        .map(emit_plain)
        .chain(p.declarations.iter().map(|d| emit_encoded(d, cfg)))
        .chain(p.extensions.iter().map(|l| emit_lowered(l, cfg)))
        .collect();
    blocks.join("\n")
}

fn dsl_head(name: &crate::syntax::Ident, params: &[crate::syntax::Ident]) -> String {
    let mut s = name.to_string();
    for p in params {
        let _ = write!(s, " {p}");
    }
    s
}

fn dsl_alt(a: &ExtensionAlt) -> String {
    match a {
        ExtensionAlt::New(c) => plain_constructor(c),
        ExtensionAlt::Extend(cl) => {
            let mut s = format!("{} extends {} by", cl.new_name, cl.base_constructor);
            if cl.added_fields.is_empty() {
                s.push_str(" empty");
            }
            for f in &cl.added_fields {
                let _ = write!(s, " {}", Atomic(f));
            }
            s
        }
    }
}

fn dsl_extension(e: &ExtensionDecl) -> String {
    let mut head = String::new();
    if e.partial {
        head.push_str("partial ");
    }
    let _ = write!(head, "data {} extends {}", dsl_head(&e.name, &e.params), dsl_head(&e.base_name, &e.base_args));
    let mut out = String::new();
    alternatives(&mut out, &head, e.alternatives.iter().map(dsl_alt));
    out
}

/// Renders `p` back to `.xdt` source such that `parse_program` yields an
/// equal program.
pub fn emit_dsl(p: &Program) -> String {
    let blocks: Vec<String> = p
        .extensibles
        .iter()
        .map(|d| {
            let mut s = if d.extensible { "extensible ".to_owned() } else { String::new() };
            s.push_str(&emit_plain(d));
            s
        })
        .chain(p.extensions.iter().map(dsl_extension))
        .collect();
    blocks.join("\n")
}
