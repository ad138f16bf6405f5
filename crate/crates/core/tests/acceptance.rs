//! End-to-end acceptance checks, one line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{corpus, example, gen_plain_exp, gen_program, gen_ty, gen_typed_exp, golden, read};
use xdt::emitter::{emit_dsl, emit_lowered, RenderConfig};
use xdt::encoder::{encode_program, rewrite_oplus, EncodeMode, EncodedProgram, LoweredExtension};
use xdt::growlang::{
    chk_dec, chk_exp, infer_exp, parse_exp, print_exp, strip, ty_to_node, Class, Ctor, Descriptor, Field, FieldKind,
    Node, Payload, PrintHandlers, Tree, Ty, TypeEnv,
};
use xdt::parser::{parse_fragment, parse_program, FragmentKind};
use xdt::validator::validate_program;
use xdt::Code;

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const PROPERTY_LIMIT: Duration = Duration::from_secs(30);
const ENUMERATION_LIMIT: Duration = Duration::from_secs(5);
const UNBOUNDED: Duration = Duration::from_secs(60);

const WELL_TYPED_TERMS: usize = 1000;
const MAX_TERM_DEPTH: usize = 6;
const PRINTED_TREES: usize = 1000;
const ECHOED_PROGRAMS: usize = 200;
const MIN_CHECKER_ROWS: usize = 20;
const MIN_ILL_TYPED: usize = 10;
const SEED: u64 = 0x5eed_2017;

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn()); 8] = [
        ("1 golden encodings of TypX", GOLDEN_LIMIT, golden_encodings),
        ("2 golden lowering of the decorated extensions", UNBOUNDED, golden_lowering),
        ("3 oplus rewrite rules", UNBOUNDED, oplus_rewrites),
        ("4 validator conformance", UNBOUNDED, validator_conformance),
        ("5 checker table", UNBOUNDED, checker_table),
        ("6 inference soundness", PROPERTY_LIMIT, inference_soundness),
        ("7 round trips", PROPERTY_LIMIT, round_trips),
        ("8 instantiation isomorphism", ENUMERATION_LIMIT, instantiation_isomorphism),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(()) if took <= limit => "PASS".to_owned(),
            Ok(()) => format!("FAIL (over the {} ms limit)", limit.as_millis()),
            Err(_) => "FAIL".to_owned(),
        };
        if verdict != "PASS" {
            failed += 1;
        }
        println!("criterion {name}: {verdict} in {} ms", took.as_millis());
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn xdt(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_xdt")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden_encodings() {
    let typx = example("typx.xdt");
    let typx = typx.to_str().unwrap();
    let compact = xdt(&["encode", typx]);
    assert_eq!(compact, golden("typx_compact.hs"));
    assert_eq!(
        compact,
        "data TypX xi\n  = IntX (xi \"IntX\")\n  | ArrX (xi \"ArrX\") (TypX xi) (TypX xi)\n  | TypX (xi \"TypX\")\n"
    );
    let naive = xdt(&["encode", "--mode", "naive", typx]);
    assert_eq!(naive, golden("typx_naive.hs"));
    assert!(naive.starts_with("data TypX xIntX xArrX xTypX\n"));
}

fn encoded(file: &str) -> EncodedProgram {
    let p = parse_program(&read(example(file))).unwrap();
    encode_program(&p, EncodeMode::Compact).unwrap()
}

fn lowered<'a>(e: &'a EncodedProgram, name: &str) -> &'a LoweredExtension {
    e.extensions.iter().find(|l| l.alias.name.as_str() == name).unwrap()
}

fn golden_lowering() {
    let cfg = RenderConfig::default();
    let typdot = encoded("typdot.xdt");
    let l = lowered(&typdot, "TypDot");
    assert!(l.declares_family);
    assert_eq!((l.instances.len(), l.synonyms.len()), (3, 3));
    assert_eq!(emit_lowered(l, &cfg), golden("typdot_lowered.hs"));
    let nullary: Vec<_> = l
        .instances
        .iter()
        .filter(|i| i.constructors.iter().all(|c| c.fields.is_empty()))
        .map(|i| i.label.as_str())
        .collect();
    assert_eq!(nullary, ["IntX", "ArrX"]);

    let lambda = encoded("lambda.xdt");
    let exp = lowered(&lambda, "ExpDot");
    assert!(exp.declares_family);
    assert_eq!((exp.instances.len(), exp.synonyms.len()), (7, 7));
    assert_eq!(emit_lowered(exp, &cfg), golden("expdot_lowered.hs"));
    let app = exp.synonyms.iter().find(|s| s.public_name.as_str() == "AppDot").unwrap();
    assert_eq!((app.ext_arg_count, app.ordinary_arg_count), (1, 2));
    let dec = lowered(&lambda, "DecDot");
    assert!(!dec.declares_family);
    assert_eq!((dec.instances.len(), dec.synonyms.len()), (2, 2));
    assert_eq!(emit_lowered(dec, &cfg), golden("decdot_lowered.hs"));
    let families: Vec<_> = lambda.extensions.iter().map(|l| l.family_name.as_str()).collect();
    assert_eq!(families, ["Ext_ExpDot"; 3]);
}

fn oplus_rewrites() {
    let table = [
        (FragmentKind::ConApp, "LitX 42 <+> (SrcSpan 0 2)", "LitX (SrcSpan 0 2) 42"),
        (FragmentKind::Type, "TypX <+> xi", "TypX xi"),
        (FragmentKind::Type, "ExpX Integer <+> (Ext a)", "ExpX (Ext a) Integer"),
        (FragmentKind::Pattern, "AppX l m <+> _", "AppX _ l m"),
        (FragmentKind::Pattern, "LetX d n <+> (Env g)", "LetX (Env g) d n"),
        (FragmentKind::ConApp, "AppX (VarX x) (LitX 1) <+> Int", "AppX Int (VarX x) (LitX 1)"),
    ];
    for (kind, input, expected) in table {
        let frag = parse_fragment(input, kind).unwrap_or_else(|e| panic!("{input}: {e:?}"));
        let out = rewrite_oplus(&frag);
        assert_eq!(out.kind, kind);
        assert_eq!(out.to_string(), expected, "{input}");
    }
}

fn validator_conformance() {
    for file in ["lambda.xdt", "ring.xdt", "typdot.xdt"] {
        let p = parse_program(&read(example(file))).unwrap();
        assert!(validate_program(&p).is_empty(), "{file}");
    }
    const TYPX: &str = "extensible data TypX = IntX | ArrX TypX TypX\n";
    const LIST: &str = "extensible data L a = Nil | Cons a (L a)\n";
    let cases = [
        (TYPX, "data D extends Nope = A", Code::E002),
        (LIST, "data M extends L b = N extends Nil by empty | C extends Cons by empty", Code::E003),
        (TYPX, "data D extends TypX = I extends IntX by empty | A extends ArrX by empty | Z extends ZapX by empty", Code::E004),
        (TYPX, "data D extends TypX = I extends IntX by empty | J extends IntX by Int | A extends ArrX by empty", Code::E005),
        (TYPX, "data D extends TypX = I extends IntX by empty | A extends ArrX by (Int <+> Int)", Code::E006),
        (LIST, "data M extends L = N extends Nil by empty | C extends Cons by empty", Code::E007),
        (TYPX, "data D extends TypX = I extends IntX by empty", Code::E008),
    ];
    for (base, ext, code) in cases {
        let p = parse_program(&format!("{base}{ext}")).unwrap();
        let codes: Vec<Code> = validate_program(&p).into_iter().map(|d| d.code).collect();
        assert_eq!(codes, [code], "{ext}");
    }
    let bad = parse_program(&read(example("bad_parammap.xdt"))).unwrap();
    let codes: Vec<Code> = validate_program(&bad).into_iter().map(|d| d.code).collect();
    assert_eq!(codes, [Code::E003]);
}

enum Row {
    Exp(Node, TypeEnv, Ty, bool),
    Dec(Node, TypeEnv, TypeEnv, bool),
}

fn env(pairs: &[(&str, Ty)]) -> TypeEnv {
    TypeEnv::from_pairs(pairs.iter().cloned())
}

fn checker_table() {
    let int = || Ty::Int;
    let ii = || Ty::arrow(Ty::Int, Ty::Int);
    let pii = || Ty::prod(Ty::Int, Ty::Int);
    let app = |a: Ty, l: Node, m: Node| Node::app(l, m).with_ext(Payload::Ty(a));
    let let_ = |delta: TypeEnv, d: Node, n: Node| Node::let_(d, n).with_ext(Payload::Env(delta));
    let empty = TypeEnv::new;
    let rows = vec![
        Row::Exp(Node::lit(3), empty(), int(), true),
        Row::Exp(Node::lit(3), empty(), ii(), false),
        Row::Exp(Node::var("x"), env(&[("x", int())]), int(), true),
        Row::Exp(Node::var("x"), env(&[("x", ii())]), int(), false),
        Row::Exp(Node::var("x"), empty(), int(), false),
        Row::Exp(Node::var("x"), env(&[("x", int()), ("x", ii())]), ii(), false),
        Row::Exp(Node::ann(Node::lit(1), Node::int_ty()), empty(), int(), true),
        Row::Exp(Node::ann(Node::lit(1), ty_to_node(&ii())), empty(), int(), false),
        Row::Exp(Node::ann(Node::abs("x", Node::lit(1)), ty_to_node(&ii())), empty(), ii(), true),
        Row::Exp(Node::abs("x", Node::var("x")), empty(), ii(), true),
        Row::Exp(Node::abs("x", Node::var("x")), empty(), int(), false),
        Row::Exp(Node::abs("x", Node::var("x")), empty(), Ty::arrow(Ty::Int, ii()), false),
        Row::Exp(Node::abs("x", Node::var("y")), env(&[("y", ii())]), Ty::arrow(Ty::Int, ii()), true),
        Row::Exp(app(int(), Node::abs("x", Node::var("x")), Node::lit(1)), empty(), int(), true),
        Row::Exp(app(ii(), Node::abs("x", Node::var("x")), Node::lit(1)), empty(), int(), false),
        Row::Exp(Node::lit(3), empty(), pii(), false),
        Row::Exp(Node::tup(Node::lit(1), Node::lit(2)), empty(), pii(), true),
        Row::Exp(Node::tup(Node::lit(1), Node::lit(2)), empty(), ii(), false),
        Row::Exp(Node::tup(Node::lit(1), Node::abs("x", Node::var("x"))), empty(), pii(), false),
        Row::Exp(
            let_(env(&[("y", int())]), Node::val("y", Node::lit(5)), Node::var("y")),
            empty(),
            int(),
            true,
        ),
        Row::Exp(
            let_(env(&[("y", ii())]), Node::val("y", Node::lit(5)), Node::var("y")),
            empty(),
            ii(),
            false,
        ),
        Row::Exp(Node::abs("x", Node::var("x")), empty(), pii(), false),
        Row::Exp(
            let_(
                env(&[("a", int()), ("b", ii())]),
                Node::prj("a", "b", Node::var("p")),
                Node::app(Node::var("b"), Node::var("a")).with_ext(Payload::Ty(int())),
            ),
            env(&[("p", Ty::prod(int(), ii()))]),
            int(),
            true,
        ),
        Row::Dec(Node::val("x", Node::lit(1)), empty(), env(&[("x", int())]), true),
        Row::Dec(Node::val("x", Node::lit(1)), empty(), env(&[("y", int())]), false),
        Row::Dec(Node::val("x", Node::lit(1)), empty(), empty(), false),
        Row::Dec(
            Node::val("x", Node::lit(1)),
            empty(),
            env(&[("x", int()), ("y", int())]),
            false,
        ),
        Row::Dec(
            Node::prj("a", "b", Node::tup(Node::lit(1), Node::lit(2))),
            empty(),
            env(&[("a", int()), ("b", int())]),
            true,
        ),
        Row::Dec(
            Node::prj("a", "b", Node::tup(Node::lit(1), Node::lit(2))),
            empty(),
            env(&[("b", int()), ("a", int())]),
            false,
        ),
        Row::Dec(
            Node::prj("a", "b", Node::var("q")),
            env(&[("q", ii())]),
            env(&[("a", int()), ("b", int())]),
            false,
        ),
        Row::Dec(
            Node::prj("a", "b", Node::tup(Node::lit(1), Node::lit(2))),
            empty(),
            env(&[("a", int())]),
            false,
        ),
    ];
    assert!(rows.len() >= MIN_CHECKER_ROWS);
    for (i, row) in rows.into_iter().enumerate() {
        let typed = |n: Node| Tree::new(Descriptor::typed(), n).unwrap();
        let (got, want) = match row {
            Row::Exp(n, g, c, want) => (chk_exp(&typed(n), &g, &c).unwrap(), want),
            Row::Dec(n, g, d, want) => (chk_dec(&typed(n), &g, &d).unwrap(), want),
        };
        assert_eq!(got, want, "row {i}");
    }
}

fn inference_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut accepted = 0;
    while accepted < WELL_TYPED_TERMS {
        let ty = gen_ty(&mut rng, 3);
        let node = gen_typed_exp(&mut rng, &[], &ty, 3);
        if node.depth() > MAX_TERM_DEPTH {
            continue;
        }
        let plain = Tree::plain(node).unwrap();
        let r = infer_exp(&plain).unwrap_or_else(|e| panic!("{}: {}", print_exp(plain.root(), &PrintHandlers::default()), e.message()));
        assert!(chk_exp(&r.tree, &TypeEnv::new(), &r.result).unwrap());
        assert_eq!(strip(&r.tree).root(), plain.root());
        accepted += 1;
    }
    let ill = corpus("ill_typed");
    assert!(ill.len() >= MIN_ILL_TYPED);
    for (name, text) in ill {
        let t = parse_exp(&text).unwrap_or_else(|e| panic!("{name}: {e:?}"));
        assert!(infer_exp(&t).is_err(), "{name}");
    }
}

fn round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let h = PrintHandlers::default();
    for _ in 0..PRINTED_TREES {
        let n = gen_plain_exp(&mut rng, 6);
        let text = print_exp(&n, &h);
        let back = parse_exp(&text).unwrap_or_else(|e| panic!("{text}: {e:?}"));
        assert_eq!(back.root(), &n, "{text}");
    }
    for _ in 0..ECHOED_PROGRAMS {
        let p = gen_program(&mut rng);
        let text = emit_dsl(&p);
        let back = parse_program(&text).unwrap_or_else(|e| panic!("{text}\n{e:?}"));
        assert_eq!(back, p, "{text}");
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Typ {
    Int,
    Arr(Box<Typ>, Box<Typ>),
    Prod(Box<Typ>, Box<Typ>),
}

fn adt_upto(depth: usize) -> Vec<Typ> {
    if depth == 0 {
        return vec![];
    }
    let smaller = adt_upto(depth - 1);
    let mut out = vec![Typ::Int];
    for a in &smaller {
        for b in &smaller {
            out.push(Typ::Arr(Box::new(a.clone()), Box::new(b.clone())));
            out.push(Typ::Prod(Box::new(a.clone()), Box::new(b.clone())));
        }
    }
    out
}

fn runtime_upto(d: &Arc<Descriptor>, class: Class, depth: usize) -> Vec<Node> {
    if depth == 0 {
        return vec![];
    }
    let smaller = runtime_upto(d, class, depth - 1);
    let mut out = vec![];
    for c in Ctor::ALL.into_iter().filter(|c| c.class() == class && d.admits(*c)) {
        let mut partial: Vec<Vec<Field>> = vec![vec![]];
        for kind in c.signature() {
            assert_eq!(*kind, FieldKind::Node(class));
            partial = partial
                .into_iter()
                .flat_map(|fs| {
                    smaller.iter().map(move |n| {
                        let mut fs = fs.clone();
                        fs.push(Field::Node(n.clone()));
                        fs
                    })
                })
                .collect();
        }
        for fields in partial {
            out.push(Node { ctor: c, ext: Payload::Unit, fields, span: None });
        }
    }
    out
}

fn to_adt(n: &Node) -> Typ {
    match n.ctor {
        Ctor::Int => Typ::Int,
        Ctor::Arr => Typ::Arr(Box::new(to_adt(n.child(0))), Box::new(to_adt(n.child(1)))),
        Ctor::Prod => Typ::Prod(Box::new(to_adt(n.child(0))), Box::new(to_adt(n.child(1)))),
        other => panic!("{other} is not a type constructor"),
    }
}

fn from_adt(t: &Typ) -> Node {
    match t {
        Typ::Int => Node::int_ty(),
        Typ::Arr(a, b) => Node::arr(from_adt(a), from_adt(b)),
        Typ::Prod(a, b) => Node::prod(from_adt(a), from_adt(b)),
    }
}

fn count_by_recurrence(depth: usize) -> usize {
    (0..depth).fold(0, |t, _| 1 + 2 * t * t)
}

fn instantiation_isomorphism() {
    let plain = Descriptor::plain();
    let runtime = runtime_upto(&plain, Class::Typ, 3);
    let adt = adt_upto(3);
    assert_eq!(count_by_recurrence(3), 19);
    assert_eq!(runtime.len(), count_by_recurrence(3));
    assert_eq!(adt.len(), runtime.len());
    for n in &runtime {
        assert!(Tree::plain(n.clone()).is_ok());
        let t = to_adt(n);
        assert!(adt.contains(&t));
        assert_eq!(&from_adt(&t), n);
    }
    for t in &adt {
        assert_eq!(&to_adt(&from_adt(t)), t);
    }
    let base_only = runtime.iter().filter(|n| !has_ctor(n, Ctor::Prod)).count();
    assert_eq!(base_only, (0..3).fold(0, |t, _| 1 + t * t));
}

fn has_ctor(n: &Node, c: Ctor) -> bool {
    n.ctor == c
        || n.fields.iter().any(|f| match f {
            Field::Node(m) => has_ctor(m, c),
            _ => false,
        })
}
