//! Abstract syntax of extensible data type declarations and their extensions.
//!
//! Everything here is an immutable value. A [`Program`] owns the declarations
//! in source order together with the mutual-recursion groups of its extensible
//! declarations, which decide how extension families are shared.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagnostic::{Code, Diagnostic, SourceSpan};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentKind {
    /// Type or data constructor.
    Upper,
    /// Variable.
    Lower,
}

/// A non-empty identifier matching `[A-Za-z][A-Za-z0-9_']*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(String);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid identifier {0:?}")]
pub struct InvalidIdent(pub String);

impl Ident {
    pub fn new(text: impl Into<String>) -> Result<Self, InvalidIdent> {
        let text = text.into();
        if Self::is_valid(&text) {
            Ok(Ident(text))
        } else {
            Err(InvalidIdent(text))
        }
    }

    pub fn is_valid(text: &str) -> bool {
        let mut chars = text.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> IdentKind {
        if self.0.as_bytes()[0].is_ascii_uppercase() {
            IdentKind::Upper
        } else {
            IdentKind::Lower
        }
    }

    pub fn is_upper(&self) -> bool {
        self.kind() == IdentKind::Upper
    }

    pub fn is_lower(&self) -> bool {
        self.kind() == IdentKind::Lower
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Ident {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Test and fixture helper. Panics on malformed input.
pub fn ident(text: &str) -> Ident {
    Ident::new(text).unwrap_or_else(|e| panic!("{e}"))
}

/// Index of one extension slot: a constructor name or the type's own name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(String);

impl Label {
    pub fn new(text: impl Into<String>) -> Self {
        Label(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&Ident> for Label {
    fn from(id: &Ident) -> Self {
        Label(id.0.clone())
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Var(Ident),
    Con { head: Ident, args: Vec<TypeExpr> },
    /// `base <+> extension`
    Oplus {
        base: Box<TypeExpr>,
        extension: Box<TypeExpr>,
    },
}

impl TypeExpr {
    pub fn con(head: Ident, args: Vec<TypeExpr>) -> Self {
        debug_assert!(head.is_upper());
        TypeExpr::Con { head, args }
    }

    pub fn nullary(head: &str) -> Self {
        TypeExpr::con(ident(head), Vec::new())
    }

    pub fn var(name: &str) -> Self {
        TypeExpr::Var(ident(name))
    }

    pub fn oplus(base: TypeExpr, extension: TypeExpr) -> Self {
        TypeExpr::Oplus {
            base: Box::new(base),
            extension: Box::new(extension),
        }
    }

    pub fn contains_oplus(&self) -> bool {
        match self {
            TypeExpr::Var(_) => false,
            TypeExpr::Con { args, .. } => args.iter().any(TypeExpr::contains_oplus),
            TypeExpr::Oplus { .. } => true,
        }
    }

    /// Every constructor head mentioned anywhere in the type.
    pub fn heads(&self) -> Vec<&Ident> {
        let mut out = Vec::new();
        self.collect_heads(&mut out);
        out
    }

    fn collect_heads<'a>(&'a self, out: &mut Vec<&'a Ident>) {
        match self {
            TypeExpr::Var(_) => {}
            TypeExpr::Con { head, args } => {
                out.push(head);
                for a in args {
                    a.collect_heads(out);
                }
            }
            TypeExpr::Oplus { base, extension } => {
                base.collect_heads(out);
                extension.collect_heads(out);
            }
        }
    }

    pub fn mentions_var(&self, v: &Ident) -> bool {
        match self {
            TypeExpr::Var(x) => x == v,
            TypeExpr::Con { args, .. } => args.iter().any(|a| a.mentions_var(v)),
            TypeExpr::Oplus { base, extension } => base.mentions_var(v) || extension.mentions_var(v),
        }
    }

    /// Applies the oplus type rule `TK T1..Tn <+> Tx` to `TK Tx T1..Tn`
    /// everywhere in the type.
    pub fn lower_oplus(&self) -> TypeExpr {
        match self {
            TypeExpr::Var(_) => self.clone(),
            TypeExpr::Con { head, args } => TypeExpr::Con {
                head: head.clone(),
                args: args.iter().map(TypeExpr::lower_oplus).collect(),
            },
            TypeExpr::Oplus { base, extension } => match base.lower_oplus() {
                TypeExpr::Con { head, args } => {
                    let mut new_args = Vec::with_capacity(args.len() + 1);
                    new_args.push(extension.lower_oplus());
                    new_args.extend(args);
                    TypeExpr::Con { head, args: new_args }
                }
                // A variable base has no constructor to receive the slot; the
                // validator rejects this shape, so keep it as written.
                other => TypeExpr::oplus(other, extension.lower_oplus()),
            },
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Var(v) => write!(f, "{v}"),
            TypeExpr::Con { head, args } => {
                write!(f, "{head}")?;
                for a in args {
                    write!(f, " ")?;
                    fmt_atomic(a, f)?;
                }
                Ok(())
            }
            TypeExpr::Oplus { base, extension } => {
                write!(f, "{base} <+> ")?;
                fmt_atomic(extension, f)
            }
        }
    }
}

/// Writes `t` in argument position: parenthesised unless it is a variable or a
/// nullary constructor.
pub fn fmt_atomic(t: &TypeExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        TypeExpr::Var(_) => write!(f, "{t}"),
        TypeExpr::Con { args, .. } if args.is_empty() => write!(f, "{t}"),
        _ => write!(f, "({t})"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructorDecl {
    pub name: Ident,
    pub fields: Vec<TypeExpr>,
}

impl ConstructorDecl {
    pub fn new(name: Ident, fields: Vec<TypeExpr>) -> Self {
        ConstructorDecl { name, fields }
    }

    pub fn arity(&self) -> usize {
        self.fields.len()
    }
}

/// `extensible data T a.. = C1 .. | C2 ..`, or a plain `data` declaration when
/// `extensible` is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensibleDataDecl {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub constructors: Vec<ConstructorDecl>,
    pub extensible: bool,
}

impl ExtensibleDataDecl {
    pub fn constructor(&self, name: &Ident) -> Option<&ConstructorDecl> {
        self.constructors.iter().find(|c| &c.name == name)
    }
}

/// `New extends Base by F1 .. Fn`; `by empty` is an empty field list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConExtensionClause {
    pub new_name: Ident,
    pub base_constructor: Ident,
    pub added_fields: Vec<TypeExpr>,
}

/// One alternative of an extension body, kept in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionAlt {
    New(ConstructorDecl),
    Extend(ConExtensionClause),
}

impl ExtensionAlt {
    pub fn public_name(&self) -> &Ident {
        match self {
            ExtensionAlt::New(c) => &c.name,
            ExtensionAlt::Extend(c) => &c.new_name,
        }
    }
}

/// `[partial] data T a1..an extends TX b1..bm = alts`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionDecl {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub base_name: Ident,
    pub base_args: Vec<Ident>,
    pub alternatives: Vec<ExtensionAlt>,
    /// Uncovered base constructors are implicitly extended `by empty`.
    pub partial: bool,
}

impl ExtensionDecl {
    pub fn new_constructors(&self) -> impl Iterator<Item = &ConstructorDecl> {
        self.alternatives.iter().filter_map(|a| match a {
            ExtensionAlt::New(c) => Some(c),
            ExtensionAlt::Extend(_) => None,
        })
    }

    pub fn extended_constructors(&self) -> impl Iterator<Item = &ConExtensionClause> {
        self.alternatives.iter().filter_map(|a| match a {
            ExtensionAlt::Extend(c) => Some(c),
            ExtensionAlt::New(_) => None,
        })
    }

    /// Every field type written in the extension body.
    pub fn field_types(&self) -> impl Iterator<Item = &TypeExpr> {
        self.alternatives.iter().flat_map(|a| match a {
            ExtensionAlt::New(c) => c.fields.iter(),
            ExtensionAlt::Extend(c) => c.added_fields.iter(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Program {
    pub extensibles: Vec<ExtensibleDataDecl>,
    pub extensions: Vec<ExtensionDecl>,
    mutual_groups: Vec<Vec<Ident>>,
    spans: BTreeMap<String, SourceSpan>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.extensibles == other.extensibles
            && self.extensions == other.extensions
            && self.mutual_groups == other.mutual_groups
    }
}

impl Eq for Program {}

impl Program {
    pub fn new(extensibles: Vec<ExtensibleDataDecl>, extensions: Vec<ExtensionDecl>) -> Self {
        let mutual_groups = compute_mutual_groups(&extensibles);
        Program {
            extensibles,
            extensions,
            mutual_groups,
            spans: BTreeMap::new(),
        }
    }

    pub(crate) fn with_spans(mut self, spans: BTreeMap<String, SourceSpan>) -> Self {
        self.spans = spans;
        self
    }

    /// Source span of the declaration or constructor called `name`, if the
    /// program came from the parser.
    pub fn span_of(&self, name: &str) -> Option<SourceSpan> {
        self.spans.get(name).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.extensibles.is_empty() && self.extensions.is_empty()
    }

    pub fn data_decl(&self, name: &Ident) -> Option<&ExtensibleDataDecl> {
        self.extensibles.iter().find(|d| &d.name == name)
    }

    /// The extensible declaration called `name`; plain `data` declarations
    /// are not returned.
    pub fn extensible(&self, name: &Ident) -> Option<&ExtensibleDataDecl> {
        self.data_decl(name).filter(|d| d.extensible)
    }

    pub fn extension(&self, name: &Ident) -> Option<&ExtensionDecl> {
        self.extensions.iter().find(|e| &e.name == name)
    }

    pub fn is_extensible(&self, name: &Ident) -> bool {
        self.extensible(name).is_some()
    }

    pub fn extensible_names(&self) -> BTreeSet<Ident> {
        self.extensibles
            .iter()
            .filter(|d| d.extensible)
            .map(|d| d.name.clone())
            .collect()
    }

    /// Partition of the extensible declarations into groups connected by type
    /// references (in either direction). Groups are ordered by their first
    /// member, members by source order.
    pub fn mutual_groups(&self) -> &[Vec<Ident>] {
        &self.mutual_groups
    }

    pub fn mutual_group_of(&self, name: &Ident) -> Option<&[Ident]> {
        self.mutual_groups
            .iter()
            .find(|g| g.contains(name))
            .map(Vec::as_slice)
    }

    /// Every name the program declares: types, constructors, terminal
    /// constructors and new constructors.
    pub fn declared_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        for d in &self.extensibles {
            names.insert(d.name.to_string());
            names.extend(d.constructors.iter().map(|c| c.name.to_string()));
        }
        for e in &self.extensions {
            names.insert(e.name.to_string());
            names.extend(e.alternatives.iter().map(|a| a.public_name().to_string()));
        }
        names
    }
}

fn compute_mutual_groups(decls: &[ExtensibleDataDecl]) -> Vec<Vec<Ident>> {
    let ext: Vec<&ExtensibleDataDecl> = decls.iter().filter(|d| d.extensible).collect();
    let index: BTreeMap<&Ident, usize> = ext.iter().enumerate().map(|(i, d)| (&d.name, i)).collect();
    let mut parent: Vec<usize> = (0..ext.len()).collect();

    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    for (i, d) in ext.iter().enumerate() {
        for c in &d.constructors {
            for f in &c.fields {
                for h in f.heads() {
                    if let Some(&j) = index.get(h) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        // Root at the smaller index so group order follows source order.
                        if a != b {
                            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                            parent[hi] = lo;
                        }
                    }
                }
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<Ident>> = BTreeMap::new();
    for (i, d) in ext.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(d.name.clone());
    }
    groups.into_values().collect()
}

/// One label per constructor in declaration order, then the type's own name
/// for the new-constructor slot.
pub fn slot_labels(decl: &ExtensibleDataDecl) -> Vec<Label> {
    debug_assert!(decl.extensible, "slot_labels on a non-extensible declaration");
    decl.constructors
        .iter()
        .map(|c| Label::from(&c.name))
        .chain(std::iter::once(Label::from(&decl.name)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtensionForm {
    /// New fields on existing constructors.
    FieldExtension,
    /// New constructors.
    ConstructorExtension,
    /// New type parameters.
    ParameterExtension,
}

pub fn classify_extension_forms(
    ext: &ExtensionDecl,
    program: &Program,
) -> Result<BTreeSet<ExtensionForm>, Diagnostic> {
    if program.extensible(&ext.base_name).is_none() {
        return Err(Diagnostic::new(
            Code::E002,
            format!("`{}` extends unknown extensible type `{}`", ext.name, ext.base_name),
        )
        .with_span(program.span_of(ext.name.as_str())));
    }
    let mut forms = BTreeSet::new();
    if ext.extended_constructors().any(|c| !c.added_fields.is_empty()) {
        forms.insert(ExtensionForm::FieldExtension);
    }
    if ext.new_constructors().next().is_some() {
        forms.insert(ExtensionForm::ConstructorExtension);
    }
    if ext.params.len() > ext.base_args.len() {
        forms.insert(ExtensionForm::ParameterExtension);
    }
    Ok(forms)
}
