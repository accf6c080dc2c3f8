//! The `arg`/`att`/`sub` fact format and the command-line front end.
//!
//! One fact per line with a trailing dot; `%` comments run to end of line.
//! Attack-only instances in the same fact style parse directly as frameworks
//! with an empty subargument relation.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::core::{core_extensions_bounded, decompose};
use crate::corpus::random_corpus;
use crate::explanation::{explain_bounded, explanation_loss_witness, principle_report_bounded};
use crate::framework::{ArgumentId, DungAf, Saf, ValidationError};
use crate::oracle::oracle_extensions;
use crate::projection::{
    find_collision, find_reach_witness, forget, reach_attack,
};
use crate::semantics::{
    extensions_bounded, ExtensionSet, SemanticsLabel, DEFAULT_ENUM_BOUND, MAX_ENUM_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fact {
    Arg(ArgumentId),
    Att(ArgumentId, ArgumentId),
    Sub(ArgumentId, ArgumentId),
}

/// A parsed fact file: the declarations in source order with their line
/// numbers. Validation happens separately in [`SafDocument::to_saf`].
#[derive(Debug, Clone)]
pub struct SafDocument {
    facts: Vec<(usize, Fact)>,
}

impl SafDocument {
    pub fn facts(&self) -> impl Iterator<Item = (usize, &Fact)> {
        self.facts.iter().map(|(line, fact)| (*line, fact))
    }

    pub fn to_saf(&self) -> Result<Saf, ValidationError> {
        let mut arguments = Vec::new();
        let mut attacks = Vec::new();
        let mut subargs = Vec::new();
        for (_, fact) in &self.facts {
            match fact {
                Fact::Arg(a) => arguments.push(a.clone()),
                Fact::Att(a, b) => attacks.push((a.clone(), b.clone())),
                Fact::Sub(a, b) => subargs.push((a.clone(), b.clone())),
            }
        }
        Saf::new(arguments, attacks, subargs)
    }

    /// Canonical rendering: validated facts sorted by kind then name.
    pub fn canonical(&self) -> Result<String, ValidationError> {
        Ok(self.to_saf()?.canonical_document())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown fact type `{0}`")]
    UnknownFactType(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected trailing input")]
    TrailingInput,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Cursor {
    line: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, text: &str) -> Cursor {
        Cursor {
            line,
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.pos + 1,
            kind,
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Expected(what)))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(ParseErrorKind::Expected("a name over [A-Za-z0-9_]")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

fn parse_line(line_no: usize, raw: &str) -> Result<Option<Fact>, ParseError> {
    let without_comment = match raw.find('%') {
        Some(i) => &raw[..i],
        None => raw,
    };
    let mut cur = Cursor::new(line_no, without_comment.trim_end_matches('\r'));
    cur.skip_ws();
    if cur.at_end() {
        return Ok(None);
    }
    let functor_col = cur.pos + 1;
    let functor = cur.ident()?;
    let arity = match functor.as_str() {
        "arg" => 1,
        "att" | "sub" => 2,
        _ => {
            return Err(ParseError {
                line: line_no,
                column: functor_col,
                kind: ParseErrorKind::UnknownFactType(functor),
            })
        }
    };
    cur.skip_ws();
    cur.expect('(', "`(`")?;
    cur.skip_ws();
    let first = ArgumentId::new(cur.ident()?).expect("scanner only accepts valid name chars");
    let fact = if arity == 1 {
        Fact::Arg(first)
    } else {
        cur.skip_ws();
        cur.expect(',', "`,`")?;
        cur.skip_ws();
        let second = ArgumentId::new(cur.ident()?).expect("scanner only accepts valid name chars");
        if functor == "att" {
            Fact::Att(first, second)
        } else {
            Fact::Sub(first, second)
        }
    };
    cur.skip_ws();
    cur.expect(')', "`)`")?;
    cur.skip_ws();
    cur.expect('.', "`.`")?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.err(ParseErrorKind::TrailingInput));
    }
    Ok(Some(fact))
}

/// Parses fact text into a document; one fact per line.
pub fn parse(text: &str) -> Result<SafDocument, ParseError> {
    let mut facts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if let Some(fact) = parse_line(idx + 1, raw)? {
            facts.push((idx + 1, fact));
        }
    }
    Ok(SafDocument { facts })
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn property(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

macro_rules! input_error_from {
    ($($ty:ty),*) => {
        $(impl From<$ty> for CliError {
            fn from(err: $ty) -> CliError {
                CliError::input(err.to_string())
            }
        })*
    };
}

input_error_from!(
    ParseError,
    ValidationError,
    crate::framework::UnknownArgument,
    crate::semantics::InstanceTooLarge,
    crate::explanation::ExplainError
);

#[derive(Parser)]
#[command(
    name = "saf",
    version,
    about = "Solver for argumentation frameworks with an explicit subargument relation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit one machine-readable JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Fast,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessKind {
    Collision,
    Reach,
    Explanation,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a framework file
    Validate { file: PathBuf },
    /// Compute extensions under one semantics
    Solve {
        file: PathBuf,
        #[arg(long)]
        semantics: SemanticsLabel,
        /// fast solver, exhaustive reference, or both with cross-checking
        #[arg(long, value_enum, default_value_t = Mode::Fast)]
        mode: Mode,
    },
    /// Print the attack-only projection as a fact document
    Project { file: PathBuf },
    /// Show the conflict-handling decomposition and lifted extensions
    Core {
        file: PathBuf,
        #[arg(long, default_value = "grounded")]
        semantics: SemanticsLabel,
    },
    /// Compare structural reach with attack reach for one argument
    Reach {
        file: PathBuf,
        #[arg(long)]
        arg: String,
    },
    /// Canonical minimal justification of an argument in an extension
    Explain {
        file: PathBuf,
        #[arg(long)]
        semantics: SemanticsLabel,
        /// Comma-separated extension members, e.g. "b1,b2,b3"
        #[arg(long)]
        extension: String,
        #[arg(long)]
        arg: String,
    },
    /// Search for frameworks witnessing what projection cannot express
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessKind,
        #[arg(long, default_value_t = 3)]
        max_args: usize,
    },
    /// Check structural principles over the file plus a random corpus
    Check {
        file: PathBuf,
        /// Run the principle compliance report (required)
        #[arg(long)]
        principles: bool,
        /// Number of random frameworks to add to the corpus
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Seed for the random corpus
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses CLI arguments from the process environment and runs the selected
/// command, returning the process exit code: 0 success, 1 usage error,
/// 2 validation or parse error, 3 property violation.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I>(args: I) -> i32
where
    I: IntoIterator,
    I::Item: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return 0;
            }
            eprint!("{err}");
            return 1;
        }
    };
    match execute(cli.command, cli.json) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}

fn enum_bound() -> Result<usize, CliError> {
    match std::env::var("SAF_ENUM_BOUND") {
        Err(_) => Ok(DEFAULT_ENUM_BOUND),
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|b| (1..=MAX_ENUM_BOUND).contains(b))
            .ok_or_else(|| {
                CliError::usage(format!(
                    "invalid SAF_ENUM_BOUND `{raw}`: expected an integer in 1..={MAX_ENUM_BOUND}"
                ))
            }),
    }
}

fn load(path: &PathBuf) -> Result<Saf, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::input(format!("cannot read {}: {err}", path.display())))?;
    Ok(parse(&text)?.to_saf()?)
}

fn render_set<'a, I: IntoIterator<Item = &'a ArgumentId>>(set: I) -> String {
    let names: Vec<&str> = set.into_iter().map(|a| a.as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn names_json<'a, I: IntoIterator<Item = &'a ArgumentId>>(set: I) -> Value {
    Value::Array(set.into_iter().map(|a| json!(a.as_str())).collect())
}

fn extensions_json(exts: &ExtensionSet) -> Value {
    Value::Array(exts.extensions().iter().map(names_json).collect())
}

fn pairs_json<'a, I: IntoIterator<Item = (&'a ArgumentId, &'a ArgumentId)>>(pairs: I) -> Value {
    Value::Array(
        pairs
            .into_iter()
            .map(|(a, b)| json!([a.as_str(), b.as_str()]))
            .collect(),
    )
}

fn saf_json(saf: &Saf) -> Value {
    json!({
        "arguments": names_json(saf.arguments()),
        "attacks": pairs_json(saf.attack_pairs()),
        "subargs": pairs_json(saf.subarg_pairs()),
    })
}

fn dung_json(af: &DungAf) -> Value {
    json!({
        "arguments": names_json(af.arguments()),
        "attacks": pairs_json(af.attack_pairs()),
    })
}

/// The single JSON object every command emits: fixed envelope fields plus
/// one payload field (`extensions`, `report`, or `witness`).
fn envelope(
    command: &str,
    input_digest: Option<String>,
    semantics: Option<SemanticsLabel>,
    payload_key: &str,
    payload: Value,
) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("command".to_string(), json!(command));
    map.insert(
        "input_digest".to_string(),
        input_digest.map_or(Value::Null, Value::String),
    );
    map.insert(
        "semantics".to_string(),
        semantics.map_or(Value::Null, |s| json!(s.as_str())),
    );
    map.insert(payload_key.to_string(), payload);
    map.insert("version".to_string(), json!(env!("CARGO_PKG_VERSION")));
    Value::Object(map)
}

fn emit(json_mode: bool, text: String, value: Value) {
    if json_mode {
        println!("{}", serde_json::to_string(&value).expect("JSON values serialize"));
    } else {
        println!("{text}");
    }
}

fn parse_extension_flag(raw: &str) -> Result<BTreeSet<ArgumentId>, CliError> {
    let mut set = BTreeSet::new();
    for token in raw.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        set.insert(ArgumentId::new(token)?);
    }
    Ok(set)
}

fn execute(command: Command, json_mode: bool) -> Result<(), CliError> {
    match command {
        Command::Validate { file } => {
            let saf = load(&file)?;
            let (args, atts, subs) = (
                saf.arg_count(),
                saf.attack_pairs().count(),
                saf.subarg_pairs().count(),
            );
            emit(
                json_mode,
                format!("valid: {args} arguments, {atts} attacks, {subs} subargument edges"),
                envelope(
                    "validate",
                    Some(saf.digest()),
                    None,
                    "report",
                    json!({"arguments": args, "attacks": atts, "subargs": subs, "valid": true}),
                ),
            );
            Ok(())
        }
        Command::Solve {
            file,
            semantics,
            mode,
        } => {
            let saf = load(&file)?;
            let bound = enum_bound()?;
            let exts = match mode {
                Mode::Fast => extensions_bounded(&saf, semantics, bound)?,
                Mode::Oracle => oracle_extensions(&saf, semantics)?,
                Mode::Both => {
                    let fast = extensions_bounded(&saf, semantics, bound)?;
                    let reference = oracle_extensions(&saf, semantics)?;
                    if !fast.same_extensions(&reference) {
                        let diff = fast
                            .first_difference(&reference)
                            .map(|d| render_set(&d))
                            .unwrap_or_default();
                        return Err(CliError::property(format!(
                            "fast and oracle modes disagree under {semantics}: {diff} \
                             is present on exactly one side"
                        )));
                    }
                    fast
                }
            };
            let mut text = format!("{} {} extension(s)", exts.len(), semantics);
            for ext in exts.extensions() {
                text.push('\n');
                text.push_str(&render_set(ext));
            }
            emit(
                json_mode,
                text,
                envelope(
                    "solve",
                    Some(saf.digest()),
                    Some(semantics),
                    "extensions",
                    extensions_json(&exts),
                ),
            );
            Ok(())
        }
        Command::Project { file } => {
            let saf = load(&file)?;
            let projected = forget(&saf);
            emit(
                json_mode,
                projected.canonical_document().trim_end().to_string(),
                envelope(
                    "project",
                    Some(saf.digest()),
                    None,
                    "report",
                    dung_json(&projected),
                ),
            );
            Ok(())
        }
        Command::Core { file, semantics } => {
            let saf = load(&file)?;
            let bound = enum_bound()?;
            let decomposition = decompose(&saf);
            let exts = core_extensions_bounded(&saf, semantics, bound)?;
            let core_attacks: Vec<String> = decomposition
                .core()
                .attack_pairs()
                .map(|(a, b)| format!("({a},{b})"))
                .collect();
            let mut text = format!(
                "conflict-handling: {}\nstatus-dependent: {}\ncore attacks: {}\n{} lifted {} extension(s)",
                render_set(decomposition.conflict_handling()),
                render_set(decomposition.status_dependent()),
                if core_attacks.is_empty() {
                    "(none)".to_string()
                } else {
                    core_attacks.join(" ")
                },
                exts.len(),
                semantics,
            );
            for ext in exts.extensions() {
                text.push('\n');
                text.push_str(&render_set(ext));
            }
            emit(
                json_mode,
                text,
                envelope(
                    "core",
                    Some(saf.digest()),
                    Some(semantics),
                    "report",
                    json!({
                        "conflict_handling": names_json(decomposition.conflict_handling()),
                        "status_dependent": names_json(decomposition.status_dependent()),
                        "core_attacks": pairs_json(decomposition.core().attack_pairs()),
                        "extensions": extensions_json(&exts),
                    }),
                ),
            );
            Ok(())
        }
        Command::Reach { file, arg } => {
            let saf = load(&file)?;
            let argument = ArgumentId::new(arg)?;
            let structural = saf.reach_structural(&argument)?;
            let attack = reach_attack(&forget(&saf), &argument)?;
            emit(
                json_mode,
                format!(
                    "structural: {}\nattack: {}",
                    render_set(&structural),
                    render_set(&attack)
                ),
                envelope(
                    "reach",
                    Some(saf.digest()),
                    None,
                    "report",
                    json!({
                        "argument": argument.as_str(),
                        "attack": names_json(&attack),
                        "structural": names_json(&structural),
                    }),
                ),
            );
            Ok(())
        }
        Command::Explain {
            file,
            semantics,
            extension,
            arg,
        } => {
            let saf = load(&file)?;
            let bound = enum_bound()?;
            let extension = parse_extension_flag(&extension)?;
            let argument = ArgumentId::new(arg)?;
            let justification = explain_bounded(&saf, semantics, &extension, &argument, bound)?;
            emit(
                json_mode,
                format!("witness: {}", render_set(&justification.witness)),
                envelope(
                    "explain",
                    Some(saf.digest()),
                    Some(semantics),
                    "report",
                    json!({
                        "extension": names_json(&justification.extension),
                        "minimal": justification.minimal,
                        "target": justification.target.as_str(),
                        "witness": names_json(&justification.witness),
                    }),
                ),
            );
            Ok(())
        }
        Command::Witness { kind, max_args } => {
            if max_args == 0 {
                return Err(CliError::usage("--max-args must be at least 1"));
            }
            let (text, payload) = match kind {
                WitnessKind::Collision => match find_collision(max_args) {
                    Some(witness) => (
                        format!(
                            "% f1\n{}% f2\n{}% projection\n{}",
                            witness.f1().canonical_document(),
                            witness.f2().canonical_document(),
                            witness.projected().canonical_document()
                        )
                        .trim_end()
                        .to_string(),
                        json!({
                            "kind": "collision",
                            "f1": saf_json(witness.f1()),
                            "f2": saf_json(witness.f2()),
                            "projection": dung_json(witness.projected()),
                        }),
                    ),
                    None => (
                        format!("no collision witness within {max_args} argument(s)"),
                        Value::Null,
                    ),
                },
                WitnessKind::Reach => match find_reach_witness(max_args) {
                    Some((saf, rows)) => {
                        let mut text = format!("% framework\n{}", saf.canonical_document());
                        for row in &rows {
                            text.push_str(&format!(
                                "% {}: structural {} attack {}\n",
                                row.argument,
                                render_set(&row.structural),
                                render_set(&row.attack)
                            ));
                        }
                        (
                            text.trim_end().to_string(),
                            json!({
                                "kind": "reach",
                                "framework": saf_json(&saf),
                                "divergences": rows.iter().map(|row| json!({
                                    "argument": row.argument.as_str(),
                                    "attack": names_json(&row.attack),
                                    "structural": names_json(&row.structural),
                                })).collect::<Vec<_>>(),
                            }),
                        )
                    }
                    None => (
                        format!("no reach witness within {max_args} argument(s)"),
                        Value::Null,
                    ),
                },
                WitnessKind::Explanation => {
                    let witness = explanation_loss_witness();
                    let x1 = explain_bounded(
                        witness.f1(),
                        SemanticsLabel::Complete,
                        witness.extension(),
                        witness.argument(),
                        MAX_ENUM_BOUND,
                    )
                    .expect("witness postconditions were re-verified");
                    let x2 = explain_bounded(
                        witness.f2(),
                        SemanticsLabel::Complete,
                        witness.extension(),
                        witness.argument(),
                        MAX_ENUM_BOUND,
                    )
                    .expect("witness postconditions were re-verified");
                    (
                        format!(
                            "% f1\n{}% f2\n{}% argument {} in extension {}\n% witness in f1: {}\n% witness in f2: {}",
                            witness.f1().canonical_document(),
                            witness.f2().canonical_document(),
                            witness.argument(),
                            render_set(witness.extension()),
                            render_set(&x1.witness),
                            render_set(&x2.witness),
                        ),
                        json!({
                            "kind": "explanation",
                            "f1": saf_json(witness.f1()),
                            "f2": saf_json(witness.f2()),
                            "argument": witness.argument().as_str(),
                            "extension": names_json(witness.extension()),
                            "witness_f1": names_json(&x1.witness),
                            "witness_f2": names_json(&x2.witness),
                        }),
                    )
                }
            };
            emit(
                json_mode,
                text,
                envelope("witness", None, None, "witness", payload),
            );
            Ok(())
        }
        Command::Check {
            file,
            principles,
            random,
            seed,
        } => {
            if !principles {
                return Err(CliError::usage("check requires --principles"));
            }
            let saf = load(&file)?;
            let digest = saf.digest();
            let bound = enum_bound()?;
            let mut corpus = vec![saf];
            corpus.extend(random_corpus(seed, random, 6));
            let report = principle_report_bounded(&corpus, bound)?;
            let mut text = format!("corpus: {} framework(s)", corpus.len());
            for outcome in &report.outcomes {
                text.push_str(&format!(
                    "\n{}: {} ({} check(s))",
                    outcome.principle,
                    if outcome.pass { "pass" } else { "FAIL" },
                    outcome.instances
                ));
                if let Some(counterexample) = &outcome.counterexample {
                    text.push_str(&format!("\n  counterexample: {counterexample}"));
                }
            }
            let payload = json!({
                "corpus": corpus.len(),
                "principles": report.outcomes.iter().map(|o| json!({
                    "counterexample": o.counterexample,
                    "instances": o.instances,
                    "note": o.note,
                    "pass": o.pass,
                    "principle": o.principle.as_str(),
                })).collect::<Vec<_>>(),
            });
            emit(
                json_mode,
                text,
                envelope("check", Some(digest), None, "report", payload),
            );
            if !report.all_pass() {
                return Err(CliError::property("principle violation detected"));
            }
            Ok(())
        }
    }
}
