//! Translation of extensible declarations into ordinary ADTs.
//!
//! Two encodings are provided. The naive one adds one type parameter per
//! slot. The compact one adds a single higher-order parameter `xi` and
//! projects it by label, so `ArrX TypX TypX` becomes
//! `ArrX (xi "ArrX") (TypX xi) (TypX xi)`. Extensions are lowered against the
//! compact encoding into a type alias, a data family with one instance per
//! touched label, and one pattern synonym per public constructor.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::Diagnostic;
use crate::parser::{FragmentKind, OplusFragment, Term};
use crate::syntax::{
    slot_labels, ConstructorDecl, ExtensibleDataDecl, ExtensionAlt, ExtensionDecl, Ident, Label,
    Program, TypeExpr,
};
use crate::validator::{unextended_constructors, validate_program};

pub const XI: &str = "xi";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EncodeMode {
    #[default]
    Compact,
    Naive,
}

/// How a declaration's slots are parameterised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotParams {
    /// One indexed parameter.
    Indexed(Ident),
    /// One parameter per slot label, in label order.
    PerSlot(Vec<Ident>),
}

/// The slot field carried first by every encoded constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotRef {
    /// `xi "Label"`
    Indexed { xi: Ident, label: Label },
    /// `xLabel`
    Var(Ident),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedConstructor {
    pub name: Ident,
    pub slot: SlotRef,
    pub fields: Vec<TypeExpr>,
}

impl EncodedConstructor {
    pub fn arity(&self) -> usize {
        self.fields.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedDataDecl {
    pub name: Ident,
    pub slots: SlotParams,
    pub params: Vec<Ident>,
    pub constructors: Vec<EncodedConstructor>,
    /// The new-constructor carrier, named after the type.
    pub terminal: EncodedConstructor,
}

impl EncodedDataDecl {
    pub fn mode(&self) -> EncodeMode {
        match self.slots {
            SlotParams::Indexed(_) => EncodeMode::Compact,
            SlotParams::PerSlot(_) => EncodeMode::Naive,
        }
    }

    pub fn all_constructors(&self) -> impl Iterator<Item = &EncodedConstructor> {
        self.constructors.iter().chain(std::iter::once(&self.terminal))
    }
}

fn check_encodable<'p>(decl: &ExtensibleDataDecl, p: &'p Program) -> Result<&'p [Ident], EncodeError> {
    if !decl.extensible {
        return Err(EncodeError::InvalidInput(format!("`{}` is not extensible", decl.name)));
    }
    if decl.constructors.iter().flat_map(|c| &c.fields).any(TypeExpr::contains_oplus) {
        return Err(EncodeError::InvalidInput(format!("`<+>` in a field of `{}`", decl.name)));
    }
    p.mutual_group_of(&decl.name)
        .ok_or_else(|| EncodeError::InvalidInput(format!("`{}` is not declared in the program", decl.name)))
}

/// Picks names for the compiler-introduced type variables that do not clash
/// with the declaration's own parameters.
fn reserved(decl: &ExtensibleDataDecl) -> BTreeSet<String> {
    decl.params.iter().map(|p| p.to_string()).collect()
}

pub fn encode_naive(decl: &ExtensibleDataDecl, p: &Program) -> Result<EncodedDataDecl, EncodeError> {
    let group = check_encodable(decl, p)?;

    // Slot variables for every member of the mutual group, so recursive
    // occurrences can be applied to their owner's full list.
    let mut slot_vars: BTreeMap<&Ident, Vec<Ident>> = BTreeMap::new();
    for member in group {
        let d = p
            .extensible(member)
            .ok_or_else(|| EncodeError::InvalidInput(format!("unknown group member `{member}`")))?;
        let mut scope = reserved(d);
        let vars = slot_labels(d)
            .iter()
            .map(|l| {
                let v = fresh_name(&format!("x{l}"), &scope);
                scope.insert(v.to_string());
                v
            })
            .collect();
        slot_vars.insert(member, vars);
    }
    let own = slot_vars[&decl.name].clone();

    let housed = |t: &TypeExpr| naive_house(t, &slot_vars);
    let constructors = decl
        .constructors
        .iter()
        .zip(&own)
        .map(|(c, v)| EncodedConstructor {
            name: c.name.clone(),
            slot: SlotRef::Var(v.clone()),
            fields: c.fields.iter().map(housed).collect(),
        })
        .collect();
    let terminal = EncodedConstructor {
        name: decl.name.clone(),
        slot: SlotRef::Var(own.last().cloned().expect("slot list is never empty")),
        fields: Vec::new(),
    };
    Ok(EncodedDataDecl {
        name: decl.name.clone(),
        slots: SlotParams::PerSlot(own),
        params: decl.params.clone(),
        constructors,
        terminal,
    })
}

fn naive_house(t: &TypeExpr, slot_vars: &BTreeMap<&Ident, Vec<Ident>>) -> TypeExpr {
    match t {
        TypeExpr::Con { head, args } => {
            let mut new_args: Vec<TypeExpr> = slot_vars
                .get(head)
                .map(|vs| vs.iter().cloned().map(TypeExpr::Var).collect())
                .unwrap_or_default();
            new_args.extend(args.iter().map(|a| naive_house(a, slot_vars)));
            TypeExpr::Con {
                head: head.clone(),
                args: new_args,
            }
        }
        _ => t.clone(),
    }
}

pub fn encode_compact(decl: &ExtensibleDataDecl, p: &Program) -> Result<EncodedDataDecl, EncodeError> {
    let group = check_encodable(decl, p)?;
    let xi = fresh_name(XI, &reserved(decl));
    let names: BTreeSet<Ident> = group.iter().cloned().collect();
    let slot = |label: Label| SlotRef::Indexed { xi: xi.clone(), label };

    let mut constructors = Vec::with_capacity(decl.constructors.len());
    for c in &decl.constructors {
        let fields = c
            .fields
            .iter()
            .map(|f| house_type(f, &xi, &names))
            .collect::<Result<_, _>>()?;
        constructors.push(EncodedConstructor {
            name: c.name.clone(),
            slot: slot(Label::from(&c.name)),
            fields,
        });
    }
    let terminal = EncodedConstructor {
        name: decl.name.clone(),
        slot: slot(Label::from(&decl.name)),
        fields: Vec::new(),
    };
    Ok(EncodedDataDecl {
        name: decl.name.clone(),
        slots: SlotParams::Indexed(xi),
        params: decl.params.clone(),
        constructors,
        terminal,
    })
}

/// `T` becomes `T xi` when `T` is extensible, recursively through argument
/// positions. An application that already carries `xi` first is left alone.
pub fn house_type(t: &TypeExpr, xi: &Ident, extensible: &BTreeSet<Ident>) -> Result<TypeExpr, EncodeError> {
    match t {
        TypeExpr::Var(_) => Ok(t.clone()),
        TypeExpr::Oplus { .. } => Err(EncodeError::InvalidInput(format!(
            "house_type on `{t}`: rewrite `<+>` first"
        ))),
        TypeExpr::Con { head, args } => {
            let housed = args
                .iter()
                .map(|a| house_type(a, xi, extensible))
                .collect::<Result<Vec<_>, _>>()?;
            let already = matches!(housed.first(), Some(TypeExpr::Var(v)) if v == xi);
            let args = if extensible.contains(head) && !already {
                std::iter::once(TypeExpr::Var(xi.clone())).chain(housed).collect()
            } else {
                housed
            };
            Ok(TypeExpr::Con {
                head: head.clone(),
                args,
            })
        }
    }
}

/// A fragment after the `<+>` rule: the extension argument moves to the
/// first argument position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewrittenFragment {
    pub kind: FragmentKind,
    pub term: Term,
}

impl std::fmt::Display for RewrittenFragment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.term.fmt(f)
    }
}

pub fn rewrite_oplus(frag: &OplusFragment) -> RewrittenFragment {
    let mut args = Vec::with_capacity(frag.ordinary_args.len() + 1);
    args.push(frag.extension_arg.clone());
    args.extend(frag.ordinary_args.iter().cloned());
    RewrittenFragment {
        kind: frag.kind,
        term: Term::Con {
            head: frag.head.clone(),
            args,
        },
    }
}

/// `base` itself when not in `scope`, otherwise `base` followed by the
/// smallest decimal suffix >= 1 that is free.
pub fn fresh_name(base: &str, scope: &BTreeSet<String>) -> Ident {
    let pick = if !scope.contains(base) {
        base.to_owned()
    } else {
        (1u64..)
            .map(|i| format!("{base}{i}"))
            .find(|c| !scope.contains(c))
            .expect("scope is finite")
    };
    Ident::new(pick).unwrap_or_else(|e| panic!("fresh_name on a malformed base: {e}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAlias {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub rhs: TypeExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub label: Label,
    pub constructors: Vec<ConstructorDecl>,
}

/// `pattern Public x1..xm y1..yk = Underlying (Payload x1..xm) y1..yk`.
/// Usable in both pattern and expression position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synonym {
    pub public_name: Ident,
    pub underlying_constructor: Ident,
    pub payload_constructor: Ident,
    pub ext_arg_count: usize,
    pub ordinary_arg_count: usize,
}

impl Synonym {
    pub fn public_arity(&self) -> usize {
        self.ext_arg_count + self.ordinary_arg_count
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoweredExtension {
    pub alias: TypeAlias,
    pub family_name: Ident,
    /// Whether this extension introduces the `data family` declaration; the
    /// other members of a shared family only add instances.
    pub declares_family: bool,
    /// In slot-label order of the base.
    pub instances: Vec<FamilyInstance>,
    /// In declaration order.
    pub synonyms: Vec<Synonym>,
}

/// Deterministic names for every generated family and payload constructor
/// in a program.
struct NamePlan {
    family_of: Vec<usize>,
    family_names: Vec<Ident>,
    payloads: Vec<BTreeMap<String, Ident>>,
}

impl NamePlan {
    fn new(p: &Program) -> Result<Self, EncodeError> {
        let exts = &p.extensions;
        let base_group = |e: &ExtensionDecl| -> Result<usize, EncodeError> {
            p.mutual_groups()
                .iter()
                .position(|g| g.contains(&e.base_name))
                .ok_or_else(|| EncodeError::InvalidInput(format!("`{}` extends unknown `{}`", e.name, e.base_name)))
        };
        let groups: Vec<usize> = exts.iter().map(base_group).collect::<Result<_, _>>()?;
        let index: BTreeMap<&Ident, usize> = exts.iter().enumerate().map(|(i, e)| (&e.name, i)).collect();

        // Components of mutually referencing extensions over distinct bases.
        let mut parent: Vec<usize> = (0..exts.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (i, e) in exts.iter().enumerate() {
            for t in e.field_types() {
                for h in t.heads() {
                    let Some(&j) = index.get(h) else { continue };
                    if groups[i] != groups[j] || exts[i].base_name == exts[j].base_name {
                        continue;
                    }
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        let (lo, hi) = (a.min(b), a.max(b));
                        parent[hi] = lo;
                    }
                }
            }
        }
        let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..exts.len() {
            let root = find(&mut parent, i);
            components.entry(root).or_default().push(i);
        }

        // Fold components into families, first fit by disjoint bases.
        let mut families: Vec<(usize, BTreeSet<&Ident>, Vec<usize>)> = Vec::new();
        for members in components.into_values() {
            let group = groups[members[0]];
            let bases: BTreeSet<&Ident> = members.iter().map(|&i| &exts[i].base_name).collect();
            match families
                .iter_mut()
                .find(|(g, b, _)| *g == group && b.is_disjoint(&bases))
            {
                Some((_, b, m)) => {
                    b.extend(bases);
                    m.extend(members);
                }
                None => families.push((group, bases, members)),
            }
        }

        let mut scope = p.declared_names();
        let mut family_of = vec![0; exts.len()];
        let mut family_names = Vec::with_capacity(families.len());
        for (f, (_, _, members)) in families.iter().enumerate() {
            let first = *members.iter().min().expect("families are non-empty");
            let name = fresh_name(&format!("Ext_{}", exts[first].name), &scope);
            scope.insert(name.to_string());
            family_names.push(name);
            for &m in members {
                family_of[m] = f;
            }
        }

        let mut payloads = Vec::with_capacity(exts.len());
        for e in exts {
            let mut names = BTreeMap::new();
            if let Some(base) = p.extensible(&e.base_name) {
                for (key, wanted) in payload_requests(e, base) {
                    let name = fresh_name(&wanted, &scope);
                    scope.insert(name.to_string());
                    names.insert(key, name);
                }
            }
            payloads.push(names);
        }

        Ok(NamePlan {
            family_of,
            family_names,
            payloads,
        })
    }

    fn first_of_family(&self, ext_index: usize) -> bool {
        let f = self.family_of[ext_index];
        self.family_of.iter().position(|&g| g == f) == Some(ext_index)
    }
}

/// Clauses of `ext` in base constructor order, with implicit empty clauses
/// for constructors a partial extension leaves out.
fn clauses_in_slot_order<'a>(
    ext: &'a ExtensionDecl,
    base: &'a ExtensibleDataDecl,
) -> Vec<(&'a Ident, Option<&'a crate::syntax::ConExtensionClause>)> {
    let missing = unextended_constructors(ext, base);
    base.constructors
        .iter()
        .filter_map(|c| {
            match ext.extended_constructors().find(|cl| cl.base_constructor == c.name) {
                Some(cl) => Some((&c.name, Some(cl))),
                None if ext.partial && missing.contains(&c.name) => Some((&c.name, None)),
                None => None,
            }
        })
        .collect()
}

/// (key, preferred name) for every payload constructor `ext` needs, in
/// instance order. Keys are base constructor names for clauses and public
/// names for new constructors.
fn payload_requests(ext: &ExtensionDecl, base: &ExtensibleDataDecl) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (con, clause) in clauses_in_slot_order(ext, base) {
        let empty = clause.is_none_or(|c| c.added_fields.is_empty());
        let wanted = if empty { format!("None_{con}") } else { format!("{con}_P") };
        out.push((format!("clause:{con}"), wanted));
    }
    for c in ext.new_constructors() {
        out.push((format!("new:{}", c.name), format!("{}_P", c.name)));
    }
    out
}

pub fn lower_extension(ext: &ExtensionDecl, p: &Program) -> Result<LoweredExtension, EncodeError> {
    let ext_index = p
        .extensions
        .iter()
        .position(|e| e == ext)
        .ok_or_else(|| EncodeError::InvalidInput(format!("`{}` is not part of the program", ext.name)))?;
    let base = p
        .extensible(&ext.base_name)
        .ok_or_else(|| EncodeError::InvalidInput(format!("`{}` extends unknown `{}`", ext.name, ext.base_name)))?;
    if ext.base_args.len() != base.params.len() {
        return Err(EncodeError::InvalidInput(format!(
            "`{}` instantiates `{}` with the wrong number of arguments",
            ext.name, base.name
        )));
    }
    let plan = NamePlan::new(p)?;
    let family_name = plan.family_names[plan.family_of[ext_index]].clone();
    let payload = |key: String| -> Result<Ident, EncodeError> {
        plan.payloads[ext_index]
            .get(&key)
            .cloned()
            .ok_or_else(|| EncodeError::InvalidInput(format!("no payload name for {key}")))
    };

    let alias = TypeAlias {
        name: ext.name.clone(),
        params: ext.params.clone(),
        rhs: TypeExpr::Con {
            head: base.name.clone(),
            args: std::iter::once(TypeExpr::Con {
                head: family_name.clone(),
                args: Vec::new(),
            })
            .chain(ext.base_args.iter().cloned().map(TypeExpr::Var))
            .collect(),
        },
    };

    let mut instances = Vec::new();
    let mut clause_payloads: BTreeMap<&Ident, Ident> = BTreeMap::new();
    for (con, clause) in clauses_in_slot_order(ext, base) {
        let name = payload(format!("clause:{con}"))?;
        let fields = clause
            .map(|c| c.added_fields.iter().map(TypeExpr::lower_oplus).collect())
            .unwrap_or_default();
        instances.push(FamilyInstance {
            label: Label::from(con),
            constructors: vec![ConstructorDecl::new(name.clone(), fields)],
        });
        clause_payloads.insert(con, name);
    }
    let mut new_payloads: BTreeMap<&Ident, Ident> = BTreeMap::new();
    let mut type_instance = Vec::new();
    for c in ext.new_constructors() {
        let name = payload(format!("new:{}", c.name))?;
        type_instance.push(ConstructorDecl::new(
            name.clone(),
            c.fields.iter().map(TypeExpr::lower_oplus).collect(),
        ));
        new_payloads.insert(&c.name, name);
    }
    if !type_instance.is_empty() {
        instances.push(FamilyInstance {
            label: Label::from(&base.name),
            constructors: type_instance,
        });
    }

    let mut synonyms = Vec::new();
    for alt in &ext.alternatives {
        let syn = match alt {
            ExtensionAlt::Extend(cl) => {
                let base_con = base.constructor(&cl.base_constructor).ok_or_else(|| {
                    EncodeError::InvalidInput(format!("`{}` has no constructor `{}`", base.name, cl.base_constructor))
                })?;
                Synonym {
                    public_name: cl.new_name.clone(),
                    underlying_constructor: cl.base_constructor.clone(),
                    payload_constructor: clause_payloads[&cl.base_constructor].clone(),
                    ext_arg_count: cl.added_fields.len(),
                    ordinary_arg_count: base_con.arity(),
                }
            }
            ExtensionAlt::New(c) => Synonym {
                public_name: c.name.clone(),
                underlying_constructor: base.name.clone(),
                payload_constructor: new_payloads[&c.name].clone(),
                ext_arg_count: c.arity(),
                ordinary_arg_count: 0,
            },
        };
        synonyms.push(syn);
    }

    Ok(LoweredExtension {
        alias,
        family_name,
        declares_family: plan.first_of_family(ext_index),
        instances,
        synonyms,
    })
}

/// Everything `xdt encode` produces for one program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedProgram {
    pub mode: EncodeMode,
    /// Non-extensible declarations, passed through unchanged.
    pub plain: Vec<ExtensibleDataDecl>,
    pub declarations: Vec<EncodedDataDecl>,
    /// Empty in naive mode.
    pub extensions: Vec<LoweredExtension>,
}

/// Validates, then encodes every extensible declaration and (in compact
/// mode) lowers every extension.
pub fn encode_program(p: &Program, mode: EncodeMode) -> Result<EncodedProgram, Vec<Diagnostic>> {
    let diags = validate_program(p);
    if crate::diagnostic::has_errors(&diags) {
        return Err(diags);
    }
    let internal = |e: EncodeError| vec![Diagnostic::new(crate::diagnostic::Code::E000, e.to_string())];
    let mut plain = Vec::new();
    let mut declarations = Vec::new();
    for d in &p.extensibles {
        if d.extensible {
            let enc = match mode {
                EncodeMode::Compact => encode_compact(d, p),
                EncodeMode::Naive => encode_naive(d, p),
            };
            declarations.push(enc.map_err(internal)?);
        } else {
            plain.push(d.clone());
        }
    }
    let extensions = match mode {
        EncodeMode::Compact => p
            .extensions
            .iter()
            .map(|e| lower_extension(e, p))
            .collect::<Result<_, _>>()
            .map_err(internal)?,
        EncodeMode::Naive => Vec::new(),
    };
    Ok(EncodedProgram {
        mode,
        plain,
        declarations,
        extensions,
    })
}
