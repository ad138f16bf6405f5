use super::tree::{node_to_ty, Class, Ctor, Descriptor, Node, Payload, Tree, TreeError};
use super::ty::{Ty, TypeEnv};

/// Checks a typed expression tree against `ty` under `env`.
pub fn chk_exp(t: &Tree, env: &TypeEnv, ty: &Ty) -> Result<bool, TreeError> {
    t.require(&Descriptor::typed(), Class::Exp)?;
    Ok(chk_e(t.root(), env, ty))
}

/// Checks that a typed declaration tree produces exactly `delta` under `env`.
pub fn chk_dec(t: &Tree, env: &TypeEnv, delta: &TypeEnv) -> Result<bool, TreeError> {
    t.require(&Descriptor::typed(), Class::Dec)?;
    Ok(chk_d(t.root(), env, delta))
}

pub(crate) fn chk_e(n: &Node, env: &TypeEnv, c: &Ty) -> bool {
    match (n.ctor, &n.ext, c) {
        (Ctor::Lit, _, Ty::Int) => true,
        (Ctor::Var, _, _) => env.lookup(n.name(0)).is_some_and(|a| a == c),
        (Ctor::Ann, _, _) => node_to_ty(n.child(1)).is_some_and(|a| a == *c) && chk_e(n.child(0), env, c),
        (Ctor::Abs, _, Ty::Arrow(a, b)) => chk_e(n.child(1), &env.extended(n.name(0), (**a).clone()), b),
        (Ctor::App, Payload::Ty(a), _) => {
            chk_e(n.child(0), env, &Ty::arrow(a.clone(), c.clone())) && chk_e(n.child(1), env, a)
        }
        (Ctor::Tup, _, Ty::Prod(a, b)) => chk_e(n.child(0), env, a) && chk_e(n.child(1), env, b),
        (Ctor::Let, Payload::Env(delta), _) => {
            chk_d(n.child(0), env, delta) && chk_e(n.child(1), &delta.concat(env), c)
        }
        _ => false,
    }
}

pub(crate) fn chk_d(n: &Node, env: &TypeEnv, delta: &TypeEnv) -> bool {
    match (n.ctor, delta.entries()) {
        (Ctor::Val, [(x1, a)]) => n.name(0) == x1 && chk_e(n.child(1), env, a),
        (Ctor::Prj, [(x1, a), (y1, b)]) => {
            n.name(0) == x1 && n.name(1) == y1 && chk_e(n.child(2), env, &Ty::prod(a.clone(), b.clone()))
        }
        _ => false,
    }
}
