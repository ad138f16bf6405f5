use std::fmt;

/// Types of the lambda language.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    Int,
    Arrow(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    pub fn depth(&self) -> usize {
        match self {
            Ty::Int => 1,
            Ty::Arrow(a, b) | Ty::Prod(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Same text as the tree printer: `Int`, `(a) → b`, `(a) × b`.
impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Int => f.write_str("Int"),
            Ty::Arrow(a, b) => write!(f, "({a}) → {b}"),
            Ty::Prod(a, b) => write!(f, "({a}) × {b}"),
        }
    }
}

/// An ordered association list; the first binding of a name wins.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypeEnv(Vec<(String, Ty)>);

impl TypeEnv {
    pub fn new() -> Self {
        TypeEnv(Vec::new())
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Ty)>) -> Self {
        TypeEnv(pairs.into_iter().map(|(x, t)| (x.into(), t)).collect())
    }

    pub fn lookup(&self, x: &str) -> Option<&Ty> {
        self.0.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    /// `(x, t) : self`
    pub fn extended(&self, x: &str, t: Ty) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push((x.to_owned(), t));
        v.extend(self.0.iter().cloned());
        TypeEnv(v)
    }

    /// `self ++ rest`
    pub fn concat(&self, rest: &TypeEnv) -> Self {
        TypeEnv(self.0.iter().chain(&rest.0).cloned().collect())
    }

    pub fn entries(&self) -> &[(String, Ty)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {t}")?;
        }
        f.write_str("]")
    }
}
