#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use xdt::growlang::{ty_to_node, Node, Ty};
use xdt::syntax::{ident, ConExtensionClause, ConstructorDecl, ExtensibleDataDecl, ExtensionAlt, ExtensionDecl, Program, TypeExpr};

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn example(name: &str) -> PathBuf {
    crate_dir().join("examples").join(name)
}

pub fn golden(name: &str) -> String {
    read(crate_dir().join("tests/golden").join(name))
}

pub fn read(path: impl Into<PathBuf>) -> String {
    let path = path.into();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn corpus(kind: &str) -> Vec<(String, String)> {
    let dir = crate_dir().join("tests/corpus").join(kind);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "gl"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), read(p)))
        .collect()
}

const VARS: [&str; 6] = ["x", "y", "z", "f", "g", "h1"];

pub fn gen_ty(rng: &mut ChaCha8Rng, depth: usize) -> Ty {
    if depth <= 1 || rng.gen_bool(0.4) {
        return Ty::Int;
    }
    let a = gen_ty(rng, depth - 1);
    let b = gen_ty(rng, depth - 1);
    if rng.gen_bool(0.5) {
        Ty::arrow(a, b)
    } else {
        Ty::prod(a, b)
    }
}

/// Any syntactically valid plain expression of at most `depth` levels.
pub fn gen_plain_exp(rng: &mut ChaCha8Rng, depth: usize) -> Node {
    let leaf = depth <= 1 || rng.gen_bool(0.25);
    if leaf {
        return if rng.gen_bool(0.5) {
            Node::lit(rng.gen_range(-20..100))
        } else {
            Node::var(VARS.choose(rng).unwrap())
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => Node::ann(gen_plain_exp(rng, d), ty_to_node(&gen_ty(rng, d))),
        1 => Node::abs(VARS.choose(rng).unwrap(), gen_plain_exp(rng, d)),
        2 => Node::app(gen_plain_exp(rng, d), gen_plain_exp(rng, d)),
        3 => Node::tup(gen_plain_exp(rng, d), gen_plain_exp(rng, d)),
        _ => Node::let_(gen_plain_dec(rng, d), gen_plain_exp(rng, d)),
    }
}

pub fn gen_plain_dec(rng: &mut ChaCha8Rng, depth: usize) -> Node {
    let d = depth.saturating_sub(1).max(1);
    if rng.gen_bool(0.5) {
        Node::val(VARS.choose(rng).unwrap(), gen_plain_exp(rng, d))
    } else {
        Node::prj(VARS.choose(rng).unwrap(), VARS.choose(rng).unwrap(), gen_plain_exp(rng, d))
    }
}

/// A plain expression of type `ty` under `env`, built type-directed so it is
/// well typed by construction.
pub fn gen_typed_exp(rng: &mut ChaCha8Rng, env: &[(String, Ty)], ty: &Ty, budget: usize) -> Node {
    let vars: Vec<&String> = env
        .iter()
        .enumerate()
        .filter(|(i, (x, t))| t == ty && !env[..*i].iter().any(|(y, _)| y == x))
        .map(|(_, (x, _))| x)
        .collect();
    if budget <= 1 {
        if let Some(x) = vars.choose(rng) {
            return Node::var(x);
        }
        return match ty {
            Ty::Int => Node::lit(rng.gen_range(-5..50)),
            Ty::Arrow(a, b) => abs_of(rng, env, a, b, 1),
            Ty::Prod(a, b) => Node::tup(gen_typed_exp(rng, env, a, 1), gen_typed_exp(rng, env, b, 1)),
        };
    }
    let b = budget - 1;
    match rng.gen_range(0..10) {
        0 | 1 if !vars.is_empty() => Node::var(vars.choose(rng).unwrap()),
        2 => {
            let a = gen_ty(rng, 2);
            let fun = Ty::arrow(a.clone(), ty.clone());
            Node::app(gen_typed_exp(rng, env, &fun, b), gen_typed_exp(rng, env, &a, b))
        }
        3 => Node::ann(gen_typed_exp(rng, env, ty, b), ty_to_node(ty)),
        4 => {
            let a = gen_ty(rng, 2);
            let x = *VARS.choose(rng).unwrap();
            let m = gen_typed_exp(rng, env, &a, b);
            let inner = push(env, &[(x, a)]);
            Node::let_(Node::val(x, m), gen_typed_exp(rng, &inner, ty, b))
        }
        5 => {
            let (a1, a2) = (gen_ty(rng, 2), gen_ty(rng, 2));
            let (x, y) = (*VARS.choose(rng).unwrap(), *VARS.choose(rng).unwrap());
            if x == y {
                return gen_typed_exp(rng, env, ty, budget);
            }
            let m = gen_typed_exp(rng, env, &Ty::prod(a1.clone(), a2.clone()), b);
            let inner = push(env, &[(x, a1), (y, a2)]);
            Node::let_(Node::prj(x, y, m), gen_typed_exp(rng, &inner, ty, b))
        }
        _ => match ty {
            Ty::Int => Node::lit(rng.gen_range(-5..50)),
            Ty::Arrow(a, r) => abs_of(rng, env, a, r, b),
            Ty::Prod(l, r) => Node::tup(gen_typed_exp(rng, env, l, b), gen_typed_exp(rng, env, r, b)),
        },
    }
}

fn abs_of(rng: &mut ChaCha8Rng, env: &[(String, Ty)], a: &Ty, r: &Ty, budget: usize) -> Node {
    let x = *VARS.choose(rng).unwrap();
    let inner = push(env, &[(x, a.clone())]);
    Node::abs(x, gen_typed_exp(rng, &inner, r, budget))
}

fn push(env: &[(String, Ty)], front: &[(&str, Ty)]) -> Vec<(String, Ty)> {
    front
        .iter()
        .map(|(x, t)| (x.to_string(), t.clone()))
        .chain(env.iter().cloned())
        .collect()
}

/// A random program in the declaration language. Names are unique; the
/// program need not validate.
pub fn gen_program(rng: &mut ChaCha8Rng) -> Program {
    let mut counter = 0usize;
    let mut fresh = |prefix: &str| {
        counter += 1;
        format!("{prefix}{counter}")
    };
    let n_bases = rng.gen_range(1..=3);
    let mut bases = Vec::new();
    for _ in 0..n_bases {
        let name = fresh("T");
        let params: Vec<String> = (0..rng.gen_range(0..=2)).map(|i| format!("a{i}")).collect();
        bases.push((name, params));
    }
    let mut extensibles = Vec::new();
    for (name, params) in &bases {
        let constructors = (0..rng.gen_range(1..=3))
            .map(|_| {
                let fields = (0..rng.gen_range(0..=3)).map(|_| gen_field(rng, &bases, params, false)).collect();
                ConstructorDecl::new(ident(&fresh("C")), fields)
            })
            .collect();
        extensibles.push(ExtensibleDataDecl {
            name: ident(name),
            params: params.iter().map(|p| ident(p)).collect(),
            constructors,
            extensible: rng.gen_bool(0.8),
        });
    }
    let mut extensions = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let base = extensibles.choose(rng).unwrap().clone();
        let params: Vec<String> = (0..rng.gen_range(0..=2)).map(|i| format!("b{i}")).collect();
        let mut alternatives = Vec::new();
        for c in &base.constructors {
            if rng.gen_bool(0.7) {
                let added = (0..rng.gen_range(0..=2)).map(|_| gen_field(rng, &bases, &params, true)).collect();
                alternatives.push(ExtensionAlt::Extend(ConExtensionClause {
                    new_name: ident(&fresh("E")),
                    base_constructor: c.name.clone(),
                    added_fields: added,
                }));
            }
        }
        if alternatives.is_empty() || rng.gen_bool(0.5) {
            let fields = (0..rng.gen_range(0..=2)).map(|_| gen_field(rng, &bases, &params, true)).collect();
            let at = rng.gen_range(0..=alternatives.len());
            alternatives.insert(at, ExtensionAlt::New(ConstructorDecl::new(ident(&fresh("N")), fields)));
        }
        let base_args = (0..base.params.len())
            .map(|_| match params.choose(rng) {
                Some(p) => ident(p),
                None => ident("z"),
            })
            .collect();
        extensions.push(ExtensionDecl {
            name: ident(&fresh("X")),
            params: params.iter().map(|p| ident(p)).collect(),
            base_name: base.name.clone(),
            base_args,
            alternatives,
            partial: rng.gen_bool(0.3),
        });
    }
    Program::new(extensibles, extensions)
}

fn gen_field(rng: &mut ChaCha8Rng, bases: &[(String, Vec<String>)], params: &[String], oplus: bool) -> TypeExpr {
    gen_type_expr(rng, bases, params, oplus, 2)
}

fn gen_type_expr(
    rng: &mut ChaCha8Rng,
    bases: &[(String, Vec<String>)],
    params: &[String],
    oplus: bool,
    depth: usize,
) -> TypeExpr {
    match rng.gen_range(0..5) {
        0 if !params.is_empty() => TypeExpr::var(params.choose(rng).unwrap()),
        1 => TypeExpr::nullary(["Integer", "Var", "Bool"].choose(rng).unwrap()),
        2 if oplus && depth > 0 => {
            let (name, ps) = bases.choose(rng).unwrap();
            let args = ps.iter().map(|_| gen_type_expr(rng, bases, params, false, depth - 1)).collect();
            TypeExpr::oplus(
                TypeExpr::con(ident(name), args),
                gen_type_expr(rng, bases, params, false, depth - 1),
            )
        }
        _ => {
            let (name, ps) = bases.choose(rng).unwrap();
            let args = ps
                .iter()
                .map(|_| {
                    if depth == 0 {
                        TypeExpr::nullary("Integer")
                    } else {
                        gen_type_expr(rng, bases, params, false, depth - 1)
                    }
                })
                .collect();
            TypeExpr::con(ident(name), args)
        }
    }
}
