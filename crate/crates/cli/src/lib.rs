//! Command surface of the `urysohn` tool.
//!
//! Every command reads at most one JSON document (a space or a template),
//! computes with exact rationals, and writes one JSON document. Predicates
//! report a verdict alongside the document so the binary can turn negative
//! answers into exit code 1 under `--strict`.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use urysohn_core::completion::{check_consistency, path_completion, Consistency};
use urysohn_core::extension::ExtensionProblem;
use urysohn_core::independence::{d_max, d_min, divides_pair, gamma_interval, independent, Certificate, Interval};
use urysohn_core::indiscernibles::{is_n_cyclic, sopn_witness, tp2_array, validate_template};
use urysohn_core::oracle::{divides_oracle, extension_oracle, interval_oracle, unique_extension_oracle};
use urysohn_core::stationarity::{dstar_min, is_stationary, unique_extension_to};
use urysohn_core::{Dist, Error, Extension, FiniteMetricSpace};

pub mod document;

use document::{Roles, SpaceDocument, TemplateDocument};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse input document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Field { field: String, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Parser)]
#[command(
    name = "urysohn",
    version,
    about = "Exact verdicts on finite configurations of the Urysohn sphere",
    after_help = "Documents are JSON. A space is\n  \
                  {\"points\": [..], \"distances\": [[\"x\", \"y\", \"p/q\"], ..], \"roles\": {\"A\": [..], \"B\": [..], \"C\": [..], \"b_star\": \"..\"}}\n\
                  and a template is {\"k\": k, \"delta\": [[..]], \"eps\": [[..]]}.\n\n\
                  Exit codes: 0 computed, 1 negative verdict (with --strict), 2 input error."
)]
pub struct Cli {
    /// Read the input document from this file instead of stdin
    #[arg(long, global = true)]
    pub input: Option<std::path::PathBuf>,
    /// Write the output document to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Exit with status 1 when a predicate comes out negative
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Label lists override the matching `roles` entry of the input document.
#[derive(Debug, Clone, Default, Args)]
pub struct RoleArgs {
    /// Comma-separated labels for A
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<String>>,
    /// Comma-separated labels for B
    #[arg(long, value_delimiter = ',')]
    pub b: Option<Vec<String>>,
    /// Comma-separated labels for C
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<String>>,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// The pair b1,b2
    #[arg(long, value_delimiter = ',', required = true)]
    pub pair: Vec<String>,
    /// Comma-separated labels for C
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a total distance table as a metric (predicate)
    Check,
    /// Shortest-path completion of a partial table
    Complete,
    /// Does some metric extend the partial table? (predicate)
    Consistent,
    /// d_max(b1, b2 / C)
    Dmax(PairArgs),
    /// d_min(b1, b2 / C)
    Dmin(PairArgs),
    /// The interval Γ(b1, b2 / C) = [d_min, d_max]
    Gamma(PairArgs),
    /// Is A independent from B over C? With --pair, asks about a single a
    /// and the pair b1,b2. Negative when the type divides (predicate)
    Divides {
        #[command(flatten)]
        roles: RoleArgs,
        /// Pair mode: the pair b1,b2 (A must then be a single point)
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<String>>,
    },
    /// Nonforking extension of tp(A/B) to B plus b_star
    Extend {
        /// Extend only this point of A, placed at --gamma from b_star
        #[arg(long, requires = "gamma")]
        point: Option<String>,
        /// Distance from the copy of --point to b_star
        #[arg(long, requires = "point")]
        gamma: Option<String>,
    },
    /// Is the template n-cyclic? (predicate)
    Cyclic {
        #[arg(long)]
        n: usize,
    },
    /// Generate a witness structure
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Is every coordinate of A at distance 0 from C? (predicate)
    Stationary {
        #[command(flatten)]
        roles: RoleArgs,
    },
    /// Does tp(A/C) have a unique extension to B? (predicate)
    UniqueExt {
        #[command(flatten)]
        roles: RoleArgs,
    },
    /// Brute-force replays built on consistency testing alone
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// A template that is not n-cyclic but is (n+1)-cyclic
    Sopn {
        #[arg(long)]
        n: usize,
    },
    /// The TP_2 array: distance 1 within a row, 2/3 across rows
    Tp2 {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Does tp(a / C b1 b2) divide over C? (predicate, negative when it divides)
    Divides {
        #[arg(long)]
        a: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Grid points of Γ(b1, b2 / C) found by building indiscernible copies
    Interval {
        #[command(flatten)]
        pair: PairArgs,
        /// Grid denominator
        #[arg(long)]
        q: u32,
    },
    /// Grid points at which a copy of --point can sit from b_star
    Extension {
        #[arg(long)]
        point: String,
        /// Grid denominator
        #[arg(long)]
        q: u32,
    },
    /// Is the distance from a realization of tp(a/C) to b forced? (predicate)
    UniqueExt {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Comma-separated labels for C
        #[arg(long, value_delimiter = ',')]
        c: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    None,
    Space,
    Template,
}

impl Command {
    pub fn input_kind(&self) -> InputKind {
        match self {
            Command::Witness(_) => InputKind::None,
            Command::Cyclic { .. } => InputKind::Template,
            _ => InputKind::Space,
        }
    }
}

/// The document a command produced, plus its verdict when it is a
/// predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Value,
    pub verdict: Option<bool>,
}

impl Outcome {
    fn plain(document: impl Serialize) -> Result<Self, CliError> {
        Ok(Outcome { document: serde_json::to_value(document)?, verdict: None })
    }

    fn verdict(document: Value, verdict: bool) -> Result<Self, CliError> {
        Ok(Outcome { document, verdict: Some(verdict) })
    }

    /// Exit status: 1 only for a negative verdict under `strict`.
    pub fn exit_code(&self, strict: bool) -> i32 {
        match self.verdict {
            Some(false) if strict => 1,
            _ => 0,
        }
    }
}

/// Indented JSON with a trailing newline. Arrays of scalars (label lists,
/// distance triples, matrix rows) stay on one line.
pub fn render(value: &Value) -> String {
    let mut text = String::new();
    render_into(&mut text, value, 0);
    text.push('\n');
    text
}

fn render_into(out: &mut String, value: &Value, depth: usize) {
    let indent = |out: &mut String, depth: usize| out.extend(std::iter::repeat_n("  ", depth));
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            let inline: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&inline.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                indent(out, depth + 1);
                render_into(out, v, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&Value::from(k.as_str()).to_string());
                out.push_str(": ");
                render_into(out, v, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Runs `command` on the text of its input document (ignored when the
/// command takes none).
pub fn execute(command: &Command, input: &str) -> Result<Outcome, CliError> {
    match command {
        Command::Witness(w) => witness(w),
        Command::Cyclic { n } => {
            let t = TemplateDocument::parse(input)?.to_template()?;
            validate_template(&t)?;
            let v = is_n_cyclic(&t, *n)?;
            Outcome::verdict(json!({ "n": v.n, "cyclic": v.cyclic, "violating_cycle": v.violating_cycle }), v.cyclic)
        }
        _ => on_space(command, &SpaceDocument::parse(input)?),
    }
}

fn witness(w: &WitnessCommand) -> Result<Outcome, CliError> {
    match *w {
        WitnessCommand::Sopn { n } => Outcome::plain(TemplateDocument::from_template(&sopn_witness(n)?)),
        WitnessCommand::Tp2 { rows, cols } => Outcome::plain(SpaceDocument::from_space(&tp2_array(rows, cols)?, None)),
    }
}

fn on_space(command: &Command, doc: &SpaceDocument) -> Result<Outcome, CliError> {
    let roles = doc.roles();
    match command {
        Command::Check => {
            let echo = SpaceDocument::from_partial(&doc.to_partial()?, doc.roles.clone());
            match doc.to_space() {
                Ok(_) => Outcome::verdict(json!({ "input": echo, "valid": true, "violation": null }), true),
                Err(CliError::Core(Error::Triangle(v))) => {
                    let violation = json!({
                        "points": [v.x, v.y, v.z],
                        "direct": v.direct.to_string(),
                        "detour": v.detour.to_string(),
                    });
                    Outcome::verdict(json!({ "input": echo, "valid": false, "violation": violation }), false)
                }
                Err(e) => Err(e),
            }
        }
        Command::Complete => {
            let p = doc.to_partial()?;
            Outcome::plain(SpaceDocument::from_space(&path_completion(&p), doc.roles.clone()))
        }
        Command::Consistent => {
            let p = doc.to_partial()?;
            let echo = SpaceDocument::from_partial(&p, doc.roles.clone());
            match check_consistency(&p) {
                Consistency::Consistent(_) => {
                    Outcome::verdict(json!({ "input": echo, "consistent": true, "witness": null }), true)
                }
                Consistency::Inconsistent(w) => {
                    let witness = json!({
                        "points": w.points,
                        "direct": w.direct.to_string(),
                        "length": w.length.to_string(),
                    });
                    Outcome::verdict(json!({ "input": echo, "consistent": false, "witness": witness }), false)
                }
            }
        }
        Command::Dmax(args) | Command::Dmin(args) | Command::Gamma(args) => {
            let s = doc.to_space()?;
            let (b1, b2) = pair(&args.pair)?;
            let c = pick(&args.c, &roles.c);
            let cs = strs(&c);
            let mut out = json!({ "input": echo(&s, doc), "pair": [b1, b2], "C": c });
            match command {
                Command::Dmax(_) => out["d_max"] = d_max(&s, b1, b2, &cs)?.to_string().into(),
                Command::Dmin(_) => out["d_min"] = d_min(&s, b1, b2, &cs)?.to_string().into(),
                _ => out["gamma"] = interval(&gamma_interval(&s, b1, b2, &cs)?),
            }
            Outcome::plain(out)
        }
        Command::Divides { roles: args, pair: pair_arg } => {
            let s = doc.to_space()?;
            let (a, c) = (pick(&args.a, &roles.a), pick(&args.c, &roles.c));
            let b = match pair_arg {
                Some(p) => {
                    let (b1, b2) = pair(p)?;
                    vec![b1.to_string(), b2.to_string()]
                }
                None => pick(&args.b, &roles.b),
            };
            let (as_, bs, cs) = (strs(&a), strs(&b), strs(&c));
            let verdict = independent(&s, &as_, &bs, &cs)?;
            let divides = match (pair_arg, as_.as_slice()) {
                (Some(_), [x]) => divides_pair(&s, x, bs[0], bs[1], &cs)?,
                (Some(_), _) => return Err(CliError::Usage("pair mode needs exactly one point in A".into())),
                (None, _) => !verdict.is_independent(),
            };
            let out = json!({
                "input": echo(&s, doc),
                "A": a,
                "B": b,
                "C": c,
                "independent": !divides,
                "divides": divides,
                "certificate": verdict.certificate().map(certificate),
            });
            Outcome::verdict(out, !divides)
        }
        Command::Extend { point, gamma } => {
            let prob = problem(doc)?;
            let ext = match (point, gamma) {
                (Some(a), Some(g)) => prob.extend_one(a, &parse_dist("--gamma", g)?)?,
                _ => prob.extend_all()?,
            };
            Outcome::plain(extension(&prob, &ext))
        }
        Command::Stationary { roles: args } => {
            let s = doc.to_space()?;
            let (a, c) = (pick(&args.a, &roles.a), pick(&args.c, &roles.c));
            let stationary = is_stationary(&s, &strs(&a), &strs(&c))?;
            Outcome::verdict(json!({ "input": echo(&s, doc), "A": a, "C": c, "stationary": stationary }), stationary)
        }
        Command::UniqueExt { roles: args } => {
            let s = doc.to_space()?;
            let (a, b, c) = (pick(&args.a, &roles.a), pick(&args.b, &roles.b), pick(&args.c, &roles.c));
            let (as_, cs) = (strs(&a), strs(&c));
            let mut targets = strs(&b);
            for x in &cs {
                if !targets.contains(x) {
                    targets.push(x);
                }
            }
            let mut pairs = Vec::new();
            for x in &as_ {
                for y in &targets {
                    let (hi, lo) = (d_max(&s, x, y, &cs)?, dstar_min(&s, x, y, &cs)?);
                    pairs.push(json!({
                        "a": x,
                        "b": y,
                        "d_max": hi.to_string(),
                        "dstar_min": lo.to_string(),
                        "unique": hi == lo,
                    }));
                }
            }
            let unique = unique_extension_to(&s, &as_, &cs, &strs(&b))?;
            let out = json!({ "input": echo(&s, doc), "A": a, "B": b, "C": c, "unique": unique, "pairs": pairs });
            Outcome::verdict(out, unique)
        }
        Command::Oracle(o) => oracle(o, doc, &roles),
        Command::Witness(_) | Command::Cyclic { .. } => unreachable!("handled before parsing a space"),
    }
}

fn oracle(o: &OracleCommand, doc: &SpaceDocument, roles: &Roles) -> Result<Outcome, CliError> {
    match o {
        OracleCommand::Divides { a, pair: args } => {
            let s = doc.to_space()?;
            let (b1, b2) = pair(&args.pair)?;
            let c = pick(&args.c, &roles.c);
            let divides = divides_oracle(&s, a, b1, b2, &strs(&c))?;
            let out = json!({ "input": echo(&s, doc), "a": a, "pair": [b1, b2], "C": c, "divides": divides });
            Outcome::verdict(out, !divides)
        }
        OracleCommand::Interval { pair: args, q } => {
            let s = doc.to_space()?;
            let (b1, b2) = pair(&args.pair)?;
            let c = pick(&args.c, &roles.c);
            let grid = interval_oracle(&s, b1, b2, &strs(&c), *q)?;
            Outcome::plain(json!({ "input": echo(&s, doc), "pair": [b1, b2], "C": c, "q": q, "grid": dists(&grid) }))
        }
        OracleCommand::Extension { point, q } => {
            let prob = problem(doc)?;
            let grid = extension_oracle(&prob, point, *q)?;
            Outcome::plain(json!({
                "input": echo(prob.space(), doc),
                "point": point,
                "q": q,
                "grid": dists(&grid),
            }))
        }
        OracleCommand::UniqueExt { a, b, c } => {
            let s = doc.to_space()?;
            let c = pick(c, &roles.c);
            let unique = unique_extension_oracle(&s, a, b, &strs(&c))?;
            Outcome::verdict(json!({ "input": echo(&s, doc), "a": a, "b": b, "C": c, "unique": unique }), unique)
        }
    }
}

fn problem(doc: &SpaceDocument) -> Result<ExtensionProblem, CliError> {
    let s = doc.to_space()?;
    let roles = doc.roles();
    let b_star = roles
        .b_star
        .as_deref()
        .ok_or_else(|| CliError::Usage("roles.b_star is required for extension".into()))?;
    Ok(ExtensionProblem::new(s, &strs(&roles.a), &strs(&roles.b), &strs(&roles.c), b_star)?)
}

fn extension(prob: &ExtensionProblem, ext: &Extension) -> Value {
    let points: Vec<Value> = ext
        .points
        .iter()
        .map(|p| json!({ "source": p.source, "label": p.label, "gamma": p.gamma.to_string() }))
        .collect();
    json!({
        "space": SpaceDocument::from_space(&ext.space, None),
        "b_star": prob.b_star(),
        "points": points,
    })
}

fn certificate(c: &Certificate) -> Value {
    json!({
        "pair": [c.pair.0, c.pair.1],
        "equation": c.equation.as_str(),
        "lhs": c.lhs.to_string(),
        "rhs": c.rhs.to_string(),
    })
}

fn interval(i: &Interval) -> Value {
    match (i.lo(), i.hi()) {
        (Some(lo), Some(hi)) => json!({ "lo": lo.to_string(), "hi": hi.to_string() }),
        _ => Value::Null,
    }
}

fn echo(s: &FiniteMetricSpace, doc: &SpaceDocument) -> SpaceDocument {
    SpaceDocument::from_space(s, doc.roles.clone())
}

fn pair(labels: &[String]) -> Result<(&str, &str), CliError> {
    match labels {
        [b1, b2] => Ok((b1, b2)),
        _ => Err(CliError::Usage(format!("--pair takes exactly two labels, got {}", labels.len()))),
    }
}

/// The flag value when given, else the role from the document. Empty
/// entries are dropped so `--c ''` names the empty set.
fn pick(flag: &Option<Vec<String>>, role: &[String]) -> Vec<String> {
    flag.as_deref().unwrap_or(role).iter().filter(|s| !s.is_empty()).cloned().collect()
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn dists(v: &[Dist]) -> Vec<String> {
    v.iter().map(Dist::to_string).collect()
}

fn parse_dist(name: &str, text: &str) -> Result<Dist, CliError> {
    Dist::parse(text).map_err(|e| CliError::Field { field: name.into(), source: e.into() })
}
