use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::ty::{Ty, TypeEnv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Typ,
    Exp,
    Dec,
}

impl Class {
    /// The slot label of the class's new-constructor carrier.
    pub fn type_label(self) -> &'static str {
        match self {
            Class::Typ => "TypX",
            Class::Exp => "ExpX",
            Class::Dec => "DecX",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ctor {
    Int,
    Arr,
    Prod,
    Lit,
    Var,
    Ann,
    Abs,
    App,
    Let,
    Tup,
    Val,
    Prj,
}

/// What a constructor field holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Node(Class),
    Name,
    Int,
}

impl Ctor {
    pub const ALL: [Ctor; 12] = [
        Ctor::Int,
        Ctor::Arr,
        Ctor::Prod,
        Ctor::Lit,
        Ctor::Var,
        Ctor::Ann,
        Ctor::Abs,
        Ctor::App,
        Ctor::Let,
        Ctor::Tup,
        Ctor::Val,
        Ctor::Prj,
    ];

    pub fn class(self) -> Class {
        match self {
            Ctor::Int | Ctor::Arr | Ctor::Prod => Class::Typ,
            Ctor::Val | Ctor::Prj => Class::Dec,
            _ => Class::Exp,
        }
    }

    /// Constructors of the base declarations, as opposed to ones that
    /// extensions add.
    pub fn is_base(self) -> bool {
        !matches!(self, Ctor::Prod | Ctor::Tup | Ctor::Prj)
    }

    /// The slot label: the base constructor's name, or the type label for
    /// new constructors.
    pub fn label(self) -> &'static str {
        match self {
            Ctor::Int => "IntX",
            Ctor::Arr => "ArrX",
            Ctor::Lit => "LitX",
            Ctor::Var => "VarX",
            Ctor::Ann => "AnnX",
            Ctor::Abs => "AbsX",
            Ctor::App => "AppX",
            Ctor::Let => "LetX",
            Ctor::Val => "ValX",
            Ctor::Prod | Ctor::Tup | Ctor::Prj => self.class().type_label(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ctor::Prod => "Prod",
            Ctor::Tup => "Tup",
            Ctor::Prj => "Prj",
            _ => self.label(),
        }
    }

    pub fn signature(self) -> &'static [FieldKind] {
        use FieldKind::*;
        match self {
            Ctor::Int => &[],
            Ctor::Arr | Ctor::Prod => &[Node(Class::Typ), Node(Class::Typ)],
            Ctor::Lit => &[Int],
            Ctor::Var => &[Name],
            Ctor::Ann => &[Node(Class::Exp), Node(Class::Typ)],
            Ctor::Abs => &[Name, Node(Class::Exp)],
            Ctor::App | Ctor::Tup => &[Node(Class::Exp), Node(Class::Exp)],
            Ctor::Let => &[Node(Class::Dec), Node(Class::Exp)],
            Ctor::Val => &[Name, Node(Class::Exp)],
            Ctor::Prj => &[Name, Name, Node(Class::Exp)],
        }
    }
}

impl fmt::Display for Ctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SrcSpan {
    pub begins: usize,
    pub ends: usize,
}

impl SrcSpan {
    pub fn new(begins: usize, ends: usize) -> Self {
        debug_assert!(begins <= ends);
        SrcSpan { begins, ends }
    }
}

/// The shape of the value an extension slot holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Unit,
    Ty,
    Env,
    Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    Unit,
    Ty(Ty),
    Env(TypeEnv),
    Span(SrcSpan),
}

impl Payload {
    pub fn shape(&self) -> Shape {
        match self {
            Payload::Unit => Shape::Unit,
            Payload::Ty(_) => Shape::Ty,
            Payload::Env(_) => Shape::Env,
            Payload::Span(_) => Shape::Span,
        }
    }
}

/// A runtime instantiation of the extension parameter: the payload shape of
/// each base constructor slot and the new constructors each type slot
/// admits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descriptor {
    pub name: String,
    pub slots: BTreeMap<&'static str, Shape>,
    pub new_constructors: BTreeMap<Class, Vec<Ctor>>,
}

impl Descriptor {
    /// Every base slot unit, with `Prod`, `Tup` and `Prj` as new
    /// constructors.
    pub fn plain() -> Arc<Descriptor> {
        static PLAIN: OnceLock<Arc<Descriptor>> = OnceLock::new();
        PLAIN.get_or_init(|| Arc::new(Descriptor::with_slots("plain", &[]))).clone()
    }

    /// As [`Descriptor::plain`], with `AppX` carrying the argument type and
    /// `LetX` the bindings its declaration produces.
    pub fn typed() -> Arc<Descriptor> {
        static TYPED: OnceLock<Arc<Descriptor>> = OnceLock::new();
        TYPED
            .get_or_init(|| Arc::new(Descriptor::with_slots("typed", &[("AppX", Shape::Ty), ("LetX", Shape::Env)])))
            .clone()
    }

    /// A plain-shaped descriptor with some base slots overridden.
    pub fn with_slots(name: &str, overrides: &[(&'static str, Shape)]) -> Descriptor {
        let mut slots: BTreeMap<&'static str, Shape> = Ctor::ALL
            .iter()
            .filter(|c| c.is_base())
            .map(|c| (c.label(), Shape::Unit))
            .collect();
        for (label, shape) in overrides {
            slots.insert(label, *shape);
        }
        let new_constructors = [
            (Class::Typ, vec![Ctor::Prod]),
            (Class::Exp, vec![Ctor::Tup]),
            (Class::Dec, vec![Ctor::Prj]),
        ]
        .into();
        Descriptor {
            name: name.to_owned(),
            slots,
            new_constructors,
        }
    }

    pub fn admits(&self, c: Ctor) -> bool {
        if c.is_base() {
            self.slots.contains_key(c.label())
        } else {
            self.new_constructors.get(&c.class()).is_some_and(|cs| cs.contains(&c))
        }
    }

    /// Payload shape a node built with `c` must carry.
    pub fn shape_of(&self, c: Ctor) -> Option<Shape> {
        if !self.admits(c) {
            None
        } else if c.is_base() {
            self.slots.get(c.label()).copied()
        } else {
            Some(Shape::Unit)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Node(Node),
    Name(String),
    Int(i64),
}

impl Field {
    pub fn kind(&self) -> FieldKind {
        match self {
            Field::Node(n) => FieldKind::Node(n.class()),
            Field::Name(_) => FieldKind::Name,
            Field::Int(_) => FieldKind::Int,
        }
    }
}

/// One tree node: constructor, extension payload and fields. The source
/// span is metadata and takes no part in equality.
#[derive(Clone, Debug, Eq)]
pub struct Node {
    pub ctor: Ctor,
    pub ext: Payload,
    pub fields: Vec<Field>,
    pub span: Option<SrcSpan>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.ctor == other.ctor && self.ext == other.ext && self.fields == other.fields
    }
}

impl std::hash::Hash for Node {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctor.hash(state);
        self.ext.hash(state);
        self.fields.hash(state);
    }
}

fn node(ctor: Ctor, fields: Vec<Field>) -> Node {
    Node {
        ctor,
        ext: Payload::Unit,
        fields,
        span: None,
    }
}

impl Node {
    pub fn int_ty() -> Node {
        node(Ctor::Int, vec![])
    }
    pub fn arr(a: Node, b: Node) -> Node {
        node(Ctor::Arr, vec![Field::Node(a), Field::Node(b)])
    }
    pub fn prod(a: Node, b: Node) -> Node {
        node(Ctor::Prod, vec![Field::Node(a), Field::Node(b)])
    }
    pub fn lit(i: i64) -> Node {
        node(Ctor::Lit, vec![Field::Int(i)])
    }
    pub fn var(x: &str) -> Node {
        node(Ctor::Var, vec![Field::Name(x.to_owned())])
    }
    pub fn ann(m: Node, a: Node) -> Node {
        node(Ctor::Ann, vec![Field::Node(m), Field::Node(a)])
    }
    pub fn abs(x: &str, n: Node) -> Node {
        node(Ctor::Abs, vec![Field::Name(x.to_owned()), Field::Node(n)])
    }
    pub fn app(l: Node, m: Node) -> Node {
        node(Ctor::App, vec![Field::Node(l), Field::Node(m)])
    }
    pub fn tup(m: Node, n: Node) -> Node {
        node(Ctor::Tup, vec![Field::Node(m), Field::Node(n)])
    }
    pub fn let_(d: Node, n: Node) -> Node {
        node(Ctor::Let, vec![Field::Node(d), Field::Node(n)])
    }
    pub fn val(x: &str, m: Node) -> Node {
        node(Ctor::Val, vec![Field::Name(x.to_owned()), Field::Node(m)])
    }
    pub fn prj(x: &str, y: &str, l: Node) -> Node {
        node(
            Ctor::Prj,
            vec![Field::Name(x.to_owned()), Field::Name(y.to_owned()), Field::Node(l)],
        )
    }

    pub fn with_ext(mut self, ext: Payload) -> Node {
        self.ext = ext;
        self
    }

    pub fn with_span(mut self, span: SrcSpan) -> Node {
        self.span = Some(span);
        self
    }

    pub fn class(&self) -> Class {
        self.ctor.class()
    }

    /// The `i`-th field as a node. Panics when the field is of another kind,
    /// which a validated tree rules out.
    pub fn child(&self, i: usize) -> &Node {
        match &self.fields[i] {
            Field::Node(n) => n,
            other => panic!("field {i} of {} is {:?}, not a node", self.ctor, other.kind()),
        }
    }

    pub fn name(&self, i: usize) -> &str {
        match &self.fields[i] {
            Field::Name(x) => x,
            other => panic!("field {i} of {} is {:?}, not a name", self.ctor, other.kind()),
        }
    }

    pub fn int(&self, i: usize) -> i64 {
        match &self.fields[i] {
            Field::Int(v) => *v,
            other => panic!("field {i} of {} is {:?}, not an integer", self.ctor, other.kind()),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self
            .fields
            .iter()
            .filter_map(|f| match f {
                Field::Node(n) => Some(n.depth()),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Rebuilds the tree bottom-up through `f`.
    pub fn map(&self, f: &mut impl FnMut(Node) -> Node) -> Node {
        let fields = self
            .fields
            .iter()
            .map(|fl| match fl {
                Field::Node(n) => Field::Node(n.map(f)),
                other => other.clone(),
            })
            .collect();
        f(Node {
            ctor: self.ctor,
            ext: self.ext.clone(),
            fields,
            span: self.span,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("{ctor} is not a constructor of the {descriptor} descriptor")]
    UnknownConstructor { ctor: Ctor, descriptor: String },
    #[error("{ctor} carries a {found:?} payload where {descriptor} expects {expected:?}")]
    PayloadShape {
        ctor: Ctor,
        descriptor: String,
        expected: Shape,
        found: Shape,
    },
    #[error("{ctor} has fields {found:?}, expected {expected:?}")]
    Fields {
        ctor: Ctor,
        expected: Vec<FieldKind>,
        found: Vec<FieldKind>,
    },
    #[error("expected a {expected:?} node, found {found}")]
    Class { expected: Class, found: Ctor },
    #[error("{0}")]
    WrongDescriptor(String),
}

/// A root node together with the descriptor it was validated against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    descriptor: Arc<Descriptor>,
    root: Node,
}

impl Tree {
    pub fn new(descriptor: Arc<Descriptor>, root: Node) -> Result<Tree, TreeError> {
        validate(&descriptor, &root)?;
        Ok(Tree { descriptor, root })
    }

    pub fn plain(root: Node) -> Result<Tree, TreeError> {
        Tree::new(Descriptor::plain(), root)
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn class(&self) -> Class {
        self.root.class()
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    pub(crate) fn require(&self, d: &Descriptor, class: Class) -> Result<(), TreeError> {
        if *self.descriptor != *d {
            return Err(TreeError::WrongDescriptor(format!(
                "expected a {} tree, got a {} tree",
                d.name, self.descriptor.name
            )));
        }
        if self.class() != class {
            return Err(TreeError::Class {
                expected: class,
                found: self.root.ctor,
            });
        }
        Ok(())
    }
}

fn validate(d: &Descriptor, n: &Node) -> Result<(), TreeError> {
    let shape = d.shape_of(n.ctor).ok_or_else(|| TreeError::UnknownConstructor {
        ctor: n.ctor,
        descriptor: d.name.clone(),
    })?;
    if n.ext.shape() != shape {
        return Err(TreeError::PayloadShape {
            ctor: n.ctor,
            descriptor: d.name.clone(),
            expected: shape,
            found: n.ext.shape(),
        });
    }
    let found: Vec<FieldKind> = n.fields.iter().map(Field::kind).collect();
    if found != n.ctor.signature() {
        return Err(TreeError::Fields {
            ctor: n.ctor,
            expected: n.ctor.signature().to_vec(),
            found,
        });
    }
    for f in &n.fields {
        if let Field::Node(c) = f {
            validate(d, c)?;
        }
    }
    Ok(())
}

/// Replaces every payload with unit, giving a plain tree of the same shape.
pub fn strip(t: &Tree) -> Tree {
    let root = t.root.map(&mut |n| n.with_ext(Payload::Unit));
    Tree {
        descriptor: Descriptor::plain(),
        root,
    }
}

pub fn ty_to_node(t: &Ty) -> Node {
    match t {
        Ty::Int => Node::int_ty(),
        Ty::Arrow(a, b) => Node::arr(ty_to_node(a), ty_to_node(b)),
        Ty::Prod(a, b) => Node::prod(ty_to_node(a), ty_to_node(b)),
    }
}

/// Reads a type node back as a [`Ty`]; `None` when `n` is not a well-formed
/// type node.
pub fn node_to_ty(n: &Node) -> Option<Ty> {
    let two = |n: &Node| -> Option<(Ty, Ty)> {
        match n.fields.as_slice() {
            [Field::Node(a), Field::Node(b)] => Some((node_to_ty(a)?, node_to_ty(b)?)),
            _ => None,
        }
    };
    match n.ctor {
        Ctor::Int if n.fields.is_empty() => Some(Ty::Int),
        Ctor::Arr => two(n).map(|(a, b)| Ty::arrow(a, b)),
        Ctor::Prod => two(n).map(|(a, b)| Ty::prod(a, b)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        let plain = Descriptor::plain();
        let typed = Descriptor::typed();
        assert_eq!(plain.shape_of(Ctor::App), Some(Shape::Unit));
        assert_eq!(typed.shape_of(Ctor::App), Some(Shape::Ty));
        assert_eq!(typed.shape_of(Ctor::Let), Some(Shape::Env));
        assert_eq!(typed.shape_of(Ctor::Tup), Some(Shape::Unit));
        assert_eq!(Ctor::Tup.label(), "ExpX");
    }

    #[test]
    fn validation() {
        let ok = Node::app(Node::abs("x", Node::var("x")), Node::lit(1));
        assert!(Tree::plain(ok.clone()).is_ok());
        assert!(matches!(Tree::new(Descriptor::typed(), ok), Err(TreeError::PayloadShape { .. })));

        let bad = Node {
            ctor: Ctor::Lit,
            ext: Payload::Unit,
            fields: vec![Field::Name("x".into())],
            span: None,
        };
        assert!(matches!(Tree::plain(bad), Err(TreeError::Fields { .. })));
        let misplaced = Node::app(Node::int_ty(), Node::lit(1));
        assert!(matches!(Tree::plain(misplaced), Err(TreeError::Fields { .. })));
    }

    #[test]
    fn descriptor_without_new_constructors() {
        let mut d = Descriptor::with_slots("base", &[]);
        d.new_constructors.clear();
        let d = Arc::new(d);
        assert!(Tree::new(d.clone(), Node::lit(1)).is_ok());
        assert!(matches!(
            Tree::new(d, Node::tup(Node::lit(1), Node::lit(2))),
            Err(TreeError::UnknownConstructor { .. })
        ));
    }

    #[test]
    fn spans_do_not_affect_equality() {
        assert_eq!(Node::lit(1).with_span(SrcSpan::new(0, 1)), Node::lit(1));
    }

    #[test]
    fn strip_and_types() {
        let t = Tree::new(
            Descriptor::typed(),
            Node::app(Node::abs("x", Node::var("x")), Node::lit(1)).with_ext(Payload::Ty(Ty::Int)),
        )
        .unwrap();
        let s = strip(&t);
        assert_eq!(s.root(), &Node::app(Node::abs("x", Node::var("x")), Node::lit(1)));
        assert_eq!(s.descriptor(), &*Descriptor::plain());

        let ty = Ty::arrow(Ty::prod(Ty::Int, Ty::Int), Ty::Int);
        assert_eq!(node_to_ty(&ty_to_node(&ty)), Some(ty));
        assert_eq!(node_to_ty(&Node::lit(3)), None);
    }
}
