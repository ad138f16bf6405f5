//! Unification-based inference from plain trees to typed trees.
//!
//! Every `App` is decorated with its argument type and every `Let` with the
//! bindings its declaration produces. Metavariables left unconstrained at
//! the end default to `Int`, with a warning.

use std::fmt;

use super::tree::{node_to_ty, Class, Ctor, Descriptor, Field, Node, Payload, SrcSpan, Tree, TreeError};
use super::ty::{Ty, TypeEnv};
use crate::diagnostic::line_col;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    Unbound(String),
    Occurs { meta: String, ty: String },
    Clash { expected: String, found: String },
    InvalidInput(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Option<SrcSpan>,
}

impl TypeError {
    pub fn message(&self) -> String {
        match &self.kind {
            TypeErrorKind::Unbound(x) => format!("unbound variable `{x}`"),
            TypeErrorKind::Occurs { meta, ty } => format!("occurs check: cannot construct the infinite type {meta} = {ty}"),
            TypeErrorKind::Clash { expected, found } => format!("type mismatch: expected {expected}, found {found}"),
            TypeErrorKind::InvalidInput(m) => m.clone(),
        }
    }

    /// `line:col: message`, resolved against the source text.
    pub fn render(&self, text: &str) -> String {
        let (line, col) = self.span.map_or((1, 1), |s| line_col(text, s.begins));
        format!("{line}:{col}: {}", self.message())
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "@{}: {}", s.begins, self.message()),
            None => f.write_str(&self.message()),
        }
    }
}

impl std::error::Error for TypeError {}

impl From<TreeError> for TypeError {
    fn from(e: TreeError) -> Self {
        TypeError {
            kind: TypeErrorKind::InvalidInput(e.to_string()),
            span: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inferred<T> {
    pub tree: Tree,
    pub result: T,
    pub warnings: Vec<String>,
}

pub fn infer_exp(t: &Tree) -> Result<Inferred<Ty>, TypeError> {
    t.require(&Descriptor::plain(), Class::Exp)?;
    let mut cx = Infer::default();
    let m = cx.exp(t.root(), &Vec::new())?;
    let (tree, warnings, m) = cx.finish(t.root(), m);
    Ok(Inferred {
        tree,
        result: m,
        warnings,
    })
}

pub fn infer_dec(t: &Tree) -> Result<Inferred<TypeEnv>, TypeError> {
    t.require(&Descriptor::plain(), Class::Dec)?;
    let mut cx = Infer::default();
    let delta = cx.dec(t.root(), &Vec::new())?;
    let pairs: Vec<_> = delta.iter().map(|(x, _)| x.clone()).collect();
    let tys: Vec<M> = delta.into_iter().map(|(_, m)| m).collect();
    // Finish over a tuple of the binding types so they default consistently.
    let carrier = tys.into_iter().rev().fold(M::Int, |acc, m| M::Prod(Box::new(m), Box::new(acc)));
    let (tree, warnings, mut ty) = cx.finish(t.root(), carrier);
    let mut env = Vec::new();
    for x in pairs {
        match ty {
            Ty::Prod(a, rest) => {
                env.push((x, *a));
                ty = *rest;
            }
            _ => unreachable!("carrier has one component per binding"),
        }
    }
    Ok(Inferred {
        tree,
        result: TypeEnv::from_pairs(env),
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum M {
    Int,
    Arrow(Box<M>, Box<M>),
    Prod(Box<M>, Box<M>),
    Meta(usize),
}

impl M {
    fn from_ty(t: &Ty) -> M {
        match t {
            Ty::Int => M::Int,
            Ty::Arrow(a, b) => M::Arrow(Box::new(M::from_ty(a)), Box::new(M::from_ty(b))),
            Ty::Prod(a, b) => M::Prod(Box::new(M::from_ty(a)), Box::new(M::from_ty(b))),
        }
    }
}

impl fmt::Display for M {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            M::Int => f.write_str("Int"),
            M::Arrow(a, b) => write!(f, "({a}) → {b}"),
            M::Prod(a, b) => write!(f, "({a}) × {b}"),
            M::Meta(i) => write!(f, "?t{i}"),
        }
    }
}

enum Deco {
    Arg(M),
    Env(Vec<(String, M)>),
}

type Env = Vec<(String, M)>;

#[derive(Default)]
struct Infer {
    subst: Vec<Option<M>>,
    /// Decorations of `App` and `Let` nodes in pre-order.
    decos: Vec<Deco>,
}

fn lookup<'e>(env: &'e Env, x: &str) -> Option<&'e M> {
    env.iter().find(|(y, _)| y == x).map(|(_, m)| m)
}

impl Infer {
    fn fresh(&mut self) -> M {
        self.subst.push(None);
        M::Meta(self.subst.len() - 1)
    }

    fn shallow(&self, m: &M) -> M {
        let mut m = m.clone();
        while let M::Meta(i) = m {
            match &self.subst[i] {
                Some(t) => m = t.clone(),
                None => break,
            }
        }
        m
    }

    fn zonk(&self, m: &M) -> M {
        match self.shallow(m) {
            M::Arrow(a, b) => M::Arrow(Box::new(self.zonk(&a)), Box::new(self.zonk(&b))),
            M::Prod(a, b) => M::Prod(Box::new(self.zonk(&a)), Box::new(self.zonk(&b))),
            other => other,
        }
    }

    fn occurs(&self, i: usize, m: &M) -> bool {
        match self.shallow(m) {
            M::Meta(j) => i == j,
            M::Arrow(a, b) | M::Prod(a, b) => self.occurs(i, &a) || self.occurs(i, &b),
            M::Int => false,
        }
    }

    /// Unifies `found` with `expected`; errors point at `at`.
    fn unify(&mut self, expected: &M, found: &M, at: &Node) -> Result<(), TypeError> {
        let (e, f) = (self.shallow(expected), self.shallow(found));
        match (&e, &f) {
            (M::Meta(i), M::Meta(j)) if i == j => Ok(()),
            (M::Meta(i), other) | (other, M::Meta(i)) => {
                if self.occurs(*i, other) {
                    return Err(TypeError {
                        kind: TypeErrorKind::Occurs {
                            meta: M::Meta(*i).to_string(),
                            ty: self.zonk(other).to_string(),
                        },
                        span: at.span,
                    });
                }
                self.subst[*i] = Some(other.clone());
                Ok(())
            }
            (M::Int, M::Int) => Ok(()),
            (M::Arrow(a1, b1), M::Arrow(a2, b2)) | (M::Prod(a1, b1), M::Prod(a2, b2)) => {
                self.unify(a1, a2, at)?;
                self.unify(b1, b2, at)
            }
            _ => Err(TypeError {
                kind: TypeErrorKind::Clash {
                    expected: self.zonk(&e).to_string(),
                    found: self.zonk(&f).to_string(),
                },
                span: at.span,
            }),
        }
    }

    fn exp(&mut self, n: &Node, env: &Env) -> Result<M, TypeError> {
        match n.ctor {
            Ctor::Lit => Ok(M::Int),
            Ctor::Var => lookup(env, n.name(0)).cloned().ok_or_else(|| TypeError {
                kind: TypeErrorKind::Unbound(n.name(0).to_owned()),
                span: n.span,
            }),
            Ctor::Ann => {
                let a = node_to_ty(n.child(1)).map(|t| M::from_ty(&t)).ok_or_else(|| TypeError {
                    kind: TypeErrorKind::InvalidInput("malformed type annotation".into()),
                    span: n.child(1).span,
                })?;
                let m = self.exp(n.child(0), env)?;
                self.unify(&a, &m, n.child(0))?;
                Ok(a)
            }
            Ctor::Abs => {
                let a = self.fresh();
                let mut inner = Vec::with_capacity(env.len() + 1);
                inner.push((n.name(0).to_owned(), a.clone()));
                inner.extend(env.iter().cloned());
                let b = self.exp(n.child(1), &inner)?;
                Ok(M::Arrow(Box::new(a), Box::new(b)))
            }
            Ctor::App => {
                let slot = self.decos.len();
                self.decos.push(Deco::Arg(M::Int));
                let l = self.exp(n.child(0), env)?;
                let a = self.exp(n.child(1), env)?;
                let c = self.fresh();
                // Report a non-function head at the head; an argument
                // mismatch at the argument.
                match self.shallow(&l) {
                    M::Arrow(p, r) => {
                        self.unify(&p, &a, n.child(1))?;
                        self.unify(&r, &c, n)?;
                    }
                    _ => self.unify(&M::Arrow(Box::new(a.clone()), Box::new(c.clone())), &l, n.child(0))?,
                }
                self.decos[slot] = Deco::Arg(a);
                Ok(c)
            }
            Ctor::Tup => {
                let a = self.exp(n.child(0), env)?;
                let b = self.exp(n.child(1), env)?;
                Ok(M::Prod(Box::new(a), Box::new(b)))
            }
            Ctor::Let => {
                let slot = self.decos.len();
                self.decos.push(Deco::Env(Vec::new()));
                let delta = self.dec(n.child(0), env)?;
                let inner: Env = delta.iter().cloned().chain(env.iter().cloned()).collect();
                self.decos[slot] = Deco::Env(delta);
                self.exp(n.child(1), &inner)
            }
            other => Err(TypeError {
                kind: TypeErrorKind::InvalidInput(format!("{other} is not an expression")),
                span: n.span,
            }),
        }
    }

    fn dec(&mut self, n: &Node, env: &Env) -> Result<Env, TypeError> {
        match n.ctor {
            Ctor::Val => {
                let m = self.exp(n.child(1), env)?;
                Ok(vec![(n.name(0).to_owned(), m)])
            }
            Ctor::Prj => {
                let l = self.exp(n.child(2), env)?;
                let (a, b) = (self.fresh(), self.fresh());
                self.unify(&M::Prod(Box::new(a.clone()), Box::new(b.clone())), &l, n.child(2))?;
                Ok(vec![(n.name(0).to_owned(), a), (n.name(1).to_owned(), b)])
            }
            other => Err(TypeError {
                kind: TypeErrorKind::InvalidInput(format!("{other} is not a declaration")),
                span: n.span,
            }),
        }
    }

    /// Defaults residual metavariables, then rebuilds `root` as a typed tree.
    fn finish(mut self, root: &Node, result: M) -> (Tree, Vec<String>, Ty) {
        let mut visible = std::collections::BTreeSet::new();
        let mut seen = |m: &M, this: &Infer| this.metas(&this.zonk(m), &mut visible);
        seen(&result, &self);
        for d in &self.decos {
            match d {
                Deco::Arg(m) => seen(m, &self),
                Deco::Env(bs) => bs.iter().for_each(|(_, m)| seen(m, &self)),
            }
        }
        let warnings = visible
            .iter()
            .map(|i| format!("ambiguous type ?t{i} defaulted to Int"))
            .collect();
        for slot in self.subst.iter_mut().filter(|s| s.is_none()) {
            *slot = Some(M::Int);
        }
        let ground = |m: &M| to_ty(&self.zonk(m));
        let decos: Vec<Payload> = self
            .decos
            .iter()
            .map(|d| match d {
                Deco::Arg(m) => Payload::Ty(ground(m)),
                Deco::Env(bs) => Payload::Env(TypeEnv::from_pairs(bs.iter().map(|(x, m)| (x.clone(), ground(m))))),
            })
            .collect();
        let mut next = decos.into_iter();
        let typed = decorate(root, &mut next);
        let tree = Tree::new(Descriptor::typed(), typed).expect("inference builds typed trees");
        (tree, warnings, ground(&result))
    }

    fn metas(&self, m: &M, out: &mut std::collections::BTreeSet<usize>) {
        match m {
            M::Meta(i) => {
                out.insert(*i);
            }
            M::Arrow(a, b) | M::Prod(a, b) => {
                self.metas(a, out);
                self.metas(b, out);
            }
            M::Int => {}
        }
    }
}

fn to_ty(m: &M) -> Ty {
    match m {
        M::Int | M::Meta(_) => Ty::Int,
        M::Arrow(a, b) => Ty::arrow(to_ty(a), to_ty(b)),
        M::Prod(a, b) => Ty::prod(to_ty(a), to_ty(b)),
    }
}

/// Pre-order rebuild that hands out decorations in the order inference
/// recorded them.
fn decorate(n: &Node, decos: &mut impl Iterator<Item = Payload>) -> Node {
    let ext = match n.ctor {
        Ctor::App | Ctor::Let => decos.next().expect("one decoration per App and Let"),
        _ => Payload::Unit,
    };
    let fields = n
        .fields
        .iter()
        .map(|f| match f {
            Field::Node(c) if c.class() != Class::Typ => Field::Node(decorate(c, decos)),
            other => other.clone(),
        })
        .collect();
    Node {
        ctor: n.ctor,
        ext,
        fields,
        span: n.span,
    }
}
