//! The `xdt` command line.
//!
//! Exit codes: 0 clean, 1 diagnostics with at least one error, 2 usage
//! errors. Artifacts go to stdout (or `-o`), diagnostics to stderr.

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::diagnostic::{has_errors, Diagnostic, Severity};
use crate::emitter::{emit_dsl, emit_program, Backend, RenderConfig};
use crate::encoder::{encode_program, EncodeMode};
use crate::growlang::{
    self, chk_exp, infer_exp, parse_exp, parse_ty, print_exp, render_decorated, Descriptor, Node, PrintHandlers,
    Tree,
};
use crate::parser::parse_program;
use crate::syntax::Program;
use crate::validator::validate_program;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "xdt", version, about = "Extensible data type declarations and their encoding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a `.xdt` file.
    Check {
        file: PathBuf,
        /// Treat every extension as `partial`.
        #[arg(long)]
        partial: bool,
    },
    /// Encode a `.xdt` file.
    Encode {
        #[arg(long, value_enum, default_value_t = ModeArg::Compact)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = BackendArg::Haskell)]
        backend: BackendArg,
        /// Treat every extension as `partial`.
        #[arg(long)]
        partial: bool,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the lambda-language pipeline on a `.gl` file.
    Demo {
        #[arg(value_enum)]
        action: DemoAction,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Compact,
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Haskell,
    DslEcho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoAction {
    /// Print the expression with the default printer.
    Print,
    /// Print the type-decorated tree and its type.
    Infer,
    /// Check against the type in a `-- expect: TYPE` header.
    Check,
}

/// Whether diagnostics carry ANSI colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Never,
    Always,
}

impl Color {
    /// `XDT_COLOR=never` disables colour; otherwise colour follows whether
    /// stderr is a terminal.
    pub fn from_env() -> Color {
        match std::env::var("XDT_COLOR").as_deref() {
            Ok("never") => Color::Never,
            _ if std::io::stderr().is_terminal() => Color::Always,
            _ => Color::Never,
        }
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: Color,
}

impl Io<'_> {
    fn diagnostic(&mut self, d: &Diagnostic) {
        let mut prefix = String::new();
        if let Some(loc) = &d.location {
            if let Some(file) = &loc.file {
                prefix.push_str(&format!("{file}:"));
            }
            prefix.push_str(&format!("{}:{}: ", loc.line, loc.column));
        }
        let (kind, ansi) = match d.severity {
            Severity::Error => ("error", "\x1b[1;31m"),
            Severity::Warning => ("warning", "\x1b[1;33m"),
        };
        let kind = match self.color {
            Color::Always => format!("{ansi}{kind}\x1b[0m"),
            Color::Never => kind.to_owned(),
        };
        let _ = writeln!(self.err, "{prefix}{kind}[{}]: {}", d.code, d.message);
    }

    fn message(&mut self, severity: Severity, text: &str) {
        let (kind, ansi) = match severity {
            Severity::Error => ("error", "\x1b[1;31m"),
            Severity::Warning => ("warning", "\x1b[1;33m"),
        };
        let _ = match self.color {
            Color::Always => writeln!(self.err, "{ansi}{kind}\x1b[0m: {text}"),
            Color::Never => writeln!(self.err, "{kind}: {text}"),
        };
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write, color: Color) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, err, color };
    match cli.command {
        Command::Check { file, partial } => check(&mut io, &file, partial),
        Command::Encode {
            mode,
            backend,
            partial,
            file,
            output,
        } => encode(&mut io, &file, mode, backend, partial, output.as_deref()),
        Command::Demo { action, file } => demo(&mut io, &file, action),
    }
}

fn read(io: &mut Io<'_>, path: &Path) -> Option<String> {
    match std::fs::read_to_string(path) {
        Ok(text) => Some(text),
        Err(e) => {
            io.message(Severity::Error, &format!("cannot read {}: {e}", path.display()));
            None
        }
    }
}

/// Parses and validates, reporting every diagnostic. `None` when errors
/// were found.
fn load(io: &mut Io<'_>, path: &Path, text: &str, partial: bool) -> Option<Program> {
    let name = path.display().to_string();
    let mut program = match parse_program(text) {
        Ok(p) => p,
        Err(diags) => {
            for d in diags {
                io.diagnostic(&d.locate(Some(&name), text));
            }
            return None;
        }
    };
    if partial {
        for e in &mut program.extensions {
            e.partial = true;
        }
    }
    let diags = validate_program(&program);
    for d in &diags {
        io.diagnostic(&d.clone().locate(Some(&name), text));
    }
    (!has_errors(&diags)).then_some(program)
}

fn check(io: &mut Io<'_>, path: &Path, partial: bool) -> i32 {
    let Some(text) = read(io, path) else { return EXIT_USAGE };
    match load(io, path, &text, partial) {
        Some(_) => EXIT_OK,
        None => EXIT_DIAGNOSTICS,
    }
}

fn encode(
    io: &mut Io<'_>,
    path: &Path,
    mode: ModeArg,
    backend: BackendArg,
    partial: bool,
    output: Option<&Path>,
) -> i32 {
    let Some(text) = read(io, path) else { return EXIT_USAGE };
    let Some(program) = load(io, path, &text, partial) else {
        return EXIT_DIAGNOSTICS;
    };
    let cfg = RenderConfig {
        backend: match backend {
            BackendArg::Haskell => Backend::Haskell,
            BackendArg::DslEcho => Backend::DslEcho,
        },
        ..RenderConfig::default()
    };
    let artifact = match cfg.backend {
        Backend::DslEcho => emit_dsl(&program),
        Backend::Haskell => {
            let mode = match mode {
                ModeArg::Compact => EncodeMode::Compact,
                ModeArg::Naive => EncodeMode::Naive,
            };
            if mode == EncodeMode::Naive && !program.extensions.is_empty() {
                io.message(
                    Severity::Warning,
                    &format!(
                        "naive mode encodes declarations only; {} extension(s) not lowered",
                        program.extensions.len()
                    ),
                );
            }
            match encode_program(&program, mode) {
                Ok(enc) => emit_program(&enc, &cfg),
                Err(diags) => {
                    for d in diags {
                        io.diagnostic(&d.locate(Some(&path.display().to_string()), &text));
                    }
                    return EXIT_DIAGNOSTICS;
                }
            }
        }
    };
    match output {
        Some(out) => {
            if let Err(e) = std::fs::write(out, artifact) {
                io.message(Severity::Error, &format!("cannot write {}: {e}", out.display()));
                return EXIT_DIAGNOSTICS;
            }
        }
        None => {
            let _ = io.out.write_all(artifact.as_bytes());
        }
    }
    EXIT_OK
}

/// The type in the first `-- expect: TYPE` comment line.
pub fn expected_type(text: &str) -> Option<&str> {
    text.lines()
        .filter_map(|l| l.trim_start().strip_prefix("--"))
        .find_map(|c| c.trim_start().strip_prefix("expect:"))
        .map(str::trim)
}

fn demo(io: &mut Io<'_>, path: &Path, action: DemoAction) -> i32 {
    let Some(text) = read(io, path) else { return EXIT_USAGE };
    let name = path.display().to_string();
    let tree = match parse_exp(&text) {
        Ok(t) => t,
        Err(diags) => {
            for d in diags {
                io.diagnostic(&d.locate(Some(&name), &text));
            }
            return EXIT_DIAGNOSTICS;
        }
    };
    let type_error = |io: &mut Io<'_>, e: growlang::TypeError| {
        io.message(Severity::Error, &format!("{name}:{}", e.render(&text)));
        EXIT_DIAGNOSTICS
    };
    match action {
        DemoAction::Print => {
            let _ = writeln!(io.out, "{}", print_exp(tree.root(), &PrintHandlers::default()));
            EXIT_OK
        }
        DemoAction::Infer => match infer_exp(&tree) {
            Ok(r) => {
                for w in &r.warnings {
                    io.message(Severity::Warning, w);
                }
                let _ = writeln!(io.out, "{}", render_decorated(r.tree.root()));
                let _ = writeln!(io.out, "type: {}", r.result);
                EXIT_OK
            }
            Err(e) => type_error(io, e),
        },
        DemoAction::Check => {
            let Some(goal_text) = expected_type(&text) else {
                io.message(Severity::Error, &format!("{name}: missing `-- expect: TYPE` header"));
                return EXIT_DIAGNOSTICS;
            };
            let goal_node = match parse_ty(goal_text) {
                Ok(t) => t.into_root(),
                Err(diags) => {
                    for d in diags {
                        io.message(Severity::Error, &format!("{name}: in expect header: {}", d.message));
                    }
                    return EXIT_DIAGNOSTICS;
                }
            };
            let goal = growlang::node_to_ty(&goal_node).expect("parse_ty yields type nodes");
            let seeded = Tree::plain(Node::ann(tree.into_root(), goal_node)).expect("annotation of plain trees");
            let inferred = match infer_exp(&seeded) {
                Ok(r) => r,
                Err(e) => return type_error(io, e),
            };
            for w in &inferred.warnings {
                io.message(Severity::Warning, w);
            }
            let body = Tree::new(Descriptor::typed(), inferred.tree.root().child(0).clone())
                .expect("subtrees of typed trees are typed");
            match chk_exp(&body, &growlang::TypeEnv::new(), &goal) {
                Ok(true) => {
                    let _ = writeln!(io.out, "ok: {goal}");
                    EXIT_OK
                }
                Ok(false) => {
                    io.message(Severity::Error, &format!("{name}: does not check against {goal}"));
                    EXIT_DIAGNOSTICS
                }
                Err(e) => {
                    io.message(Severity::Error, &e.to_string());
                    EXIT_DIAGNOSTICS
                }
            }
        }
    }
}
