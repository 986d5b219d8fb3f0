//! Poset file formats and the `posetdx` command-line driver.
//!
//! Text format:
//!
//! ```text
//! # comments start with '#'
//! elements: a b c
//! a < b
//! a < c
//! ```
//!
//! JSON format: `{"elements": ["a", "b"], "less_than": [["a", "b"]]}`.
//! Files ending in `.json` are read as JSON, everything else as text.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use crate::constructions::{
    ay_algebra, ay_poset, bipartite_flip, lex_sum, ordinal_sum, AlgebraPresentation, AyPoset, ConstructionError,
};
use crate::field::{primes_up_to, FieldTag};
use crate::fixtures;
use crate::homology::betti_tagged;
use crate::invariants::{default_fields, distinguish, invariant_report, Verdict};
use crate::linalg::LinalgError;
use crate::poset::{Poset, PosetError, PosetSpec};
use crate::sheaves::io::{parse_diagram, AnyDiagram};
use crate::sheaves::{
    ext_dims, hochschild_dims, sheaf_cohomology_tagged, standard_sheaf, SheafError, StandardKind,
};
use crate::with_field;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISTINGUISHED: i32 = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses the text format. Relations are closed under transitivity.
pub fn parse_poset(text: &str) -> Result<Poset, CliError> {
    let mut elements: Option<Vec<String>> = None;
    let mut relations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| CliError::Syntax {
            line: i + 1,
            message: message.to_string(),
        };
        if let Some(rest) = line.strip_prefix("elements:") {
            if elements.is_some() {
                return Err(syntax("second `elements:` line"));
            }
            elements = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some((a, b)) = line.split_once('<') {
            if elements.is_none() {
                return Err(syntax("relation before `elements:` line"));
            }
            let (a, b) = (a.trim(), b.trim());
            if a.is_empty() || b.is_empty() || a.contains(char::is_whitespace) || b.contains(['<', ' ', '\t']) {
                return Err(syntax("expected `A < B`"));
            }
            relations.push((a.to_string(), b.to_string()));
        } else {
            return Err(syntax("expected `elements:` or `A < B`"));
        }
    }
    let elements = elements.ok_or(CliError::Syntax {
        line: text.lines().count().max(1),
        message: "missing `elements:` line".to_string(),
    })?;
    Ok(Poset::from_relations(&elements, &relations)?)
}

pub fn parse_poset_json(text: &str) -> Result<Poset, CliError> {
    let spec: PosetSpec = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        line: e.line(),
        message: e.to_string(),
    })?;
    Ok(spec.to_poset()?)
}

/// Canonical text form: cover relations only, sorted by index pair.
pub fn serialize_poset(x: &Poset) -> String {
    let spec = PosetSpec::from_poset(x);
    let mut out = format!("elements: {}\n", spec.elements.join(" "));
    for (a, b) in &spec.less_than {
        out.push_str(&format!("{a} < {b}\n"));
    }
    out
}

pub fn serialize_poset_json(x: &Poset) -> String {
    serde_json::to_string_pretty(&PosetSpec::from_poset(x)).expect("poset spec serializes")
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_poset(path: &Path) -> Result<Poset, CliError> {
    let text = read(path)?;
    let parsed = if is_json(path) {
        parse_poset_json(&text)
    } else {
        parse_poset(&text)
    };
    parsed.map_err(|e| match e {
        CliError::Syntax { line, message } => CliError::Syntax {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn write_poset(x: &Poset, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        None => emit(stdout, &serialize_poset(x)),
        Some(path) => {
            let text = if is_json(path) {
                serialize_poset_json(x)
            } else {
                serialize_poset(x)
            };
            std::fs::write(path, text).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))
}

#[derive(Debug, Parser)]
#[command(name = "posetdx", version, about = "Derived-equivalence invariants of finite posets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct PrimeArgs {
    /// Comma-separated primes (default: all primes <= 50).
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
}

impl PrimeArgs {
    fn resolve(&self) -> Result<Vec<u64>, CliError> {
        let primes = self.primes.clone().unwrap_or_else(|| primes_up_to(50));
        for &p in &primes {
            FieldTag::Prime(p).validate()?;
        }
        Ok(primes)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every invariant of a poset.
    Info {
        file: PathBuf,
        #[command(flatten)]
        primes: PrimeArgs,
        #[arg(long)]
        json: bool,
    },
    /// Compare two posets; exits 10 when an invariant separates them.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        primes: PrimeArgs,
        #[arg(long)]
        json: bool,
    },
    /// Build a new poset.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Ext dimensions between two standard sheaves.
    Ext {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// `simple`, `projective`, `injective` or `constant`.
        #[arg(long, default_value = "simple")]
        kind: String,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        json: bool,
    },
    /// Ext dimensions between two diagrams given as JSON files.
    ExtDiagram {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cohomology of the constant sheaf, checked against the order complex.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        json: bool,
    },
    /// Hochschild cohomology dimensions of the incidence algebra.
    Hochschild {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a built-in fixture (e.g. `FIG1L`, `CHAIN(4)`) in text format.
    Fixture {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide isomorphism; exits 10 when the posets are not isomorphic.
    Iso {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    Opposite {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ordinal sum, first file at the bottom.
    OrdinalSum {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lexicographic sum over BASE, one component file per base element.
    LexSum {
        base: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        components: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes the sum over the opposite of a bipartite base.
    Flip {
        base: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        components: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The reordered poset for a closed subset, or the algebra when the
    /// compatibility condition fails.
    Ay {
        file: PathBuf,
        /// Comma-separated labels of a downward-closed subset.
        #[arg(long, value_delimiter = ',', required = true)]
        closed: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `argv` (including the program name), runs the command, and returns
/// the exit code. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn field_tag(s: &str) -> Result<FieldTag, CliError> {
    FieldTag::parse(s).map_err(|e| CliError::Usage(format!("--field: {e}")))
}

fn element(x: &Poset, label: &str) -> Result<usize, CliError> {
    x.index_of(label)
        .ok_or_else(|| CliError::Usage(format!("no element `{label}`")))
}

fn standard_kind(s: &str) -> Result<StandardKind, CliError> {
    Ok(match s {
        "simple" => StandardKind::Simple,
        "projective" => StandardKind::Projective,
        "injective" => StandardKind::Injective,
        "constant" => StandardKind::Constant,
        _ => return Err(CliError::Usage(format!("unknown sheaf kind `{s}`"))),
    })
}

fn render_dims(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn to_json(v: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Info { file, primes, json } => {
            let x = load_poset(&file)?;
            let primes = primes.resolve()?;
            let report = invariant_report(&x, &primes, &default_fields(&primes))?;
            let text = if json {
                to_json(&report.to_json())?
            } else {
                report.render_text()
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Compare {
            left,
            right,
            primes,
            json,
        } => {
            let (x, y) = (load_poset(&left)?, load_poset(&right)?);
            let verdict = distinguish(&x, &y, &primes.resolve()?)?;
            let text = if json {
                to_json(&verdict)?
            } else {
                match &verdict {
                    Verdict::Distinguished { invariant, left, right } => {
                        format!("distinguished by {invariant}\n  left:  {left}\n  right: {right}\n")
                    }
                    Verdict::NotDistinguished { checked } => {
                        format!("not distinguished ({} invariants agree)\n", checked.len())
                    }
                }
            };
            emit(out, &text)?;
            Ok(if verdict.is_distinguished() {
                EXIT_DISTINGUISHED
            } else {
                EXIT_OK
            })
        }
        Command::Construct { kind } => construct(kind, out),
        Command::Ext {
            file,
            from,
            to,
            kind,
            field,
            json,
        } => {
            let x = Arc::new(load_poset(&file)?);
            let (a, b) = (element(&x, &from)?, element(&x, &to)?);
            let kind = standard_kind(&kind)?;
            let tag = field_tag(&field)?;
            let dims = with_field!(tag, |f| {
                let s = standard_sheaf(&x, &f, kind, Some(a))?;
                let t = standard_sheaf(&x, &f, kind, Some(b))?;
                ext_dims(&s, &t)?
            });
            emit_dims(out, json, "ext", tag, &dims)
        }
        Command::ExtDiagram { source, target, json } => {
            let (f, g) = (parse_diagram(&read(&source)?)?, parse_diagram(&read(&target)?)?);
            let tag = f.tag();
            let dims = match (f, g) {
                (AnyDiagram::Rational(f), AnyDiagram::Rational(g)) => ext_dims(&f, &g)?,
                (AnyDiagram::Prime(f), AnyDiagram::Prime(g)) => ext_dims(&f, &g)?,
                (f, g) => {
                    return Err(SheafError::FieldMismatch {
                        left: f.tag(),
                        right: g.tag(),
                    }
                    .into())
                }
            };
            emit_dims(out, json, "ext", tag, &dims)
        }
        Command::Cohomology { file, field, json } => {
            let x = Arc::new(load_poset(&file)?);
            let tag = field_tag(&field)?;
            let sheaf = sheaf_cohomology_tagged(&x, tag)?;
            let simplicial = betti_tagged(&x, tag)?;
            if sheaf != simplicial {
                return Err(CliError::Internal(format!(
                    "sheaf cohomology {} differs from simplicial {}",
                    render_dims(&sheaf),
                    render_dims(&simplicial)
                )));
            }
            emit_dims(out, json, "cohomology", tag, &sheaf)
        }
        Command::Hochschild {
            file,
            max_degree,
            field,
            json,
        } => {
            let x = load_poset(&file)?;
            let tag = field_tag(&field)?;
            let dims = with_field!(tag, |f| hochschild_dims(&x, &f, max_degree)?);
            emit_dims(out, json, "hochschild", tag, &dims)
        }
        Command::Fixture { name, json } => {
            let x = fixtures::by_name(&name).ok_or_else(|| {
                CliError::Usage(format!("unknown fixture `{name}`; known: {}", fixtures::NAMED.join(", ")))
            })?;
            let text = if json {
                serialize_poset_json(&x) + "\n"
            } else {
                serialize_poset(&x)
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Iso { left, right, json } => {
            let (x, y) = (load_poset(&left)?, load_poset(&right)?);
            let iso = x.is_isomorphic(&y);
            let pairs: Option<Vec<(String, String)>> = iso.as_ref().map(|m| {
                m.iter()
                    .enumerate()
                    .map(|(i, &j)| (x.label(i).to_string(), y.label(j).to_string()))
                    .collect()
            });
            let text = if json {
                to_json(&json!({ "isomorphic": iso.is_some(), "mapping": pairs }))?
            } else {
                match &pairs {
                    None => "not isomorphic\n".to_string(),
                    Some(p) => {
                        let mut s = "isomorphic\n".to_string();
                        for (a, b) in p {
                            s.push_str(&format!("  {a} -> {b}\n"));
                        }
                        s
                    }
                }
            };
            emit(out, &text)?;
            Ok(if iso.is_some() {
                EXIT_OK
            } else {
                EXIT_DISTINGUISHED
            })
        }
    }
}

fn emit_dims(out: &mut dyn Write, json: bool, what: &str, tag: FieldTag, dims: &[usize]) -> Result<i32, CliError> {
    let text = if json {
        to_json(&json!({ "field": tag.to_string(), what: dims }))?
    } else {
        format!("{what} over {tag}: {}\n", render_dims(dims))
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn load_all(files: &[PathBuf]) -> Result<Vec<Poset>, CliError> {
    files.iter().map(|f| load_poset(f)).collect()
}

fn render_algebra(a: &AlgebraPresentation) -> String {
    let mut s = format!("algebra of dimension {}\nbasis: {}\n", a.dim(), a.labels.join(" "));
    for ((i, j), (k, sign)) in a.nonzero_products() {
        let sign = if sign < 0 { "-" } else { "" };
        s.push_str(&format!("  {} * {} = {sign}{}\n", a.labels[i], a.labels[j], a.labels[k]));
    }
    s
}

fn construct(kind: Construct, out: &mut dyn Write) -> Result<i32, CliError> {
    let (result, path) = match kind {
        Construct::Opposite { file, out } => (load_poset(&file)?.opposite(), out),
        Construct::Product { left, right, out } => (load_poset(&left)?.product(&load_poset(&right)?), out),
        Construct::OrdinalSum { files, out } => (ordinal_sum(&load_all(&files)?)?, out),
        Construct::LexSum { base, components, out } => (lex_sum(&load_poset(&base)?, &load_all(&components)?)?, out),
        Construct::Flip { base, components, out } => {
            let (_, flipped) = bipartite_flip(&load_poset(&base)?, &load_all(&components)?)?;
            (flipped, out)
        }
        Construct::Ay {
            file,
            closed,
            out: path,
            json,
        } => {
            let x = load_poset(&file)?;
            let closed: Vec<usize> = closed.iter().map(|l| element(&x, l)).collect::<Result<_, _>>()?;
            return match ay_poset(&x, &closed)? {
                AyPoset::Order(p) => {
                    write_poset(&p, path.as_deref(), out)?;
                    Ok(EXIT_OK)
                }
                AyPoset::Violation(v) => {
                    let algebra = ay_algebra(&x, &closed)?;
                    let text = if json {
                        let products: Vec<_> = algebra
                            .nonzero_products()
                            .map(|((i, j), (k, s))| json!([algebra.labels[i], algebra.labels[j], s, algebra.labels[k]]))
                            .collect();
                        to_json(&json!({
                            "condition_holds": false,
                            "violation": v.describe(&x),
                            "dimension": algebra.dim(),
                            "basis": algebra.labels,
                            "products": products,
                        }))?
                    } else {
                        format!("condition fails: {}\n{}", v.describe(&x), render_algebra(&algebra))
                    };
                    emit(out, &text)?;
                    Ok(EXIT_OK)
                }
            };
        }
    };
    write_poset(&result, path.as_deref(), out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain, diamond};
    use crate::poset::random_poset;
    use num_rational::Ratio;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let c = parse_poset("elements: a b\na < b\n").unwrap();
        assert!(c.is_isomorphic(&chain(2)).is_some());
        assert!(matches!(
            parse_poset("elements: a\nb < a"),
            Err(CliError::Poset(PosetError::UnknownLabel(_)))
        ));
        assert!(matches!(parse_poset("a < b"), Err(CliError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_poset("# c\nelements: a b\na <= b"),
            Err(CliError::Syntax { line: 3, .. })
        ));
        assert!(matches!(parse_poset("# only a comment"), Err(CliError::Syntax { .. })));
        let j = parse_poset_json(r#"{"elements": ["x", "y"], "less_than": [["x", "y"]]}"#).unwrap();
        assert!(j.lt(0, 1));
    }

    #[test]
    fn serialize_examples() {
        let c3 = serialize_poset(&chain(3));
        assert_eq!(c3, "elements: 0 1 2\n0 < 1\n1 < 2\n");
        assert_eq!(serialize_poset(&diamond()).lines().filter(|l| l.contains('<')).count(), 4);
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..=9, p in 0u64..=4, seed in any::<u64>()) {
            let x = random_poset(n, Ratio::new(p, 4), seed).unwrap();
            prop_assert_eq!(&parse_poset(&serialize_poset(&x)).unwrap(), &x);
            prop_assert_eq!(&parse_poset_json(&serialize_poset_json(&x)).unwrap(), &x);
        }
    }
}
