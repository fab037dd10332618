//! Command-line front end. Everything here is a thin layer over the library
//! modules: parse arguments, load files, call one entry point, print.
//!
//! Exit codes are stable: 0 yes, 1 no, 2 usage or input error (including a
//! cross-check contradiction), 3 inconclusive, 4 resource limit.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::automata::{AutomatonFile, Dfa, StateSet, Verdict, Word};
use crate::corpus;
use crate::engine::{Mode, Problem, NODE_CAP};
use crate::ltlf::{parse_formula, print_formula, Formula};
use crate::oracle::{cross_check, CrossOutcome};
use crate::reductions::{
    careful_to_constrained, cnf_to_fvt, fai_to_constrained, pullback_witness, BundleFile,
    CarefulVariant, CnfFormula, FaiVariant, GeneratedInstance, GeneratedWitness, PullbackInfo,
    SourceWitness,
};
use crate::traversal::{agrees, ConstraintSpec, RelationKind, Variant};
use crate::travgraph::{solve_fvt, solve_lvt, DigraphFile, PathVerdict, TraversalInstance};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Parser)]
#[command(
    name = "traversync",
    about = "Synchronizing words under traversal constraints",
    version
)]
struct Invocation {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and print the shortest witness.
    #[command(visible_alias = "witness")]
    Check(CheckArgs),
    /// Print the relation membership table for a word, or for every word up
    /// to a length bound.
    Relations(RelationsArgs),
    /// Generate a decision-problem instance from a source problem.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Solve a first- or last-visit traversal instance.
    SolveTraversal(SolveTraversalArgs),
    /// Run the search engine and the enumeration oracle side by side.
    Oracle(OracleArgs),
    /// Print the built-in formula fixtures, one per line.
    Fixture,
}

/// Flags that name one automaton-backed instance, either as a bundle or
/// assembled from parts.
#[derive(Args)]
struct InstanceArgs {
    /// Instance bundle, as written by reduce.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Problem id: cs, cw, mc-paths, mc-paths-sync, mc-sets, mc-sets-sync.
    #[arg(long)]
    problem: Option<String>,
    /// Automaton file.
    #[arg(long, value_name = "FILE")]
    dfa: Option<PathBuf>,
    /// Relation id for constrained problems, e.g. lt-ll-sets.
    #[arg(long)]
    relation: Option<String>,
    /// Constraint pairs as JSON state-name pairs, e.g. [["p","q"]].
    #[arg(long)]
    pairs: Option<String>,
    /// Formula text for model checking.
    #[arg(long)]
    formula: Option<String>,
    /// Pair reading: literal or vacuous.
    #[arg(long, default_value = "literal")]
    variant: String,
    /// Trace mode: paths or sets.
    #[arg(long)]
    mode: Option<String>,
    /// Require the word to synchronize.
    #[arg(long)]
    sync: bool,
    /// Drop the synchronization requirement.
    #[arg(long = "no-sync")]
    no_sync: bool,
    /// Comma-separated start states.
    #[arg(long)]
    subset: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Search node cap.
    #[arg(long)]
    cap: Option<usize>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RelationsArgs {
    /// Automaton file.
    #[arg(long, value_name = "FILE")]
    dfa: PathBuf,
    /// Pairs as JSON state-name pairs.
    #[arg(long)]
    pairs: String,
    /// One word to tabulate; letters may be space-separated.
    #[arg(long)]
    word: Option<String>,
    /// Tabulate every word up to this length instead.
    #[arg(long = "max-len", default_value_t = 3)]
    max_len: usize,
    /// Pair reading: literal or vacuous.
    #[arg(long, default_value = "literal")]
    variant: String,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// From a partial automaton file; variants orz, ore, cw-ore.
    Careful(ReduceArgs),
    /// From a JSON array of acceptor files; variants orzp, ordp, cw-orzp,
    /// mc-F-fixture, mc-G-fixture.
    Fai(ReduceArgs),
    /// From a DIMACS CNF file.
    Cnf(ReduceArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// Gadget variant; ignored for cnf.
    #[arg(long)]
    variant: Option<String>,
    /// Source file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Bundle destination; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveTraversalArgs {
    /// fvt (first visits) or lvt (last visits).
    kind: String,
    /// Instance bundle or bare digraph file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Enumeration bound.
    #[arg(long = "max-len", default_value_t = 8)]
    max_len: usize,
    /// Cross-check this many random instances instead of one given one.
    #[arg(long)]
    random: Option<usize>,
    /// Seed for the random corpus.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// States per random automaton.
    #[arg(long, default_value_t = 4)]
    states: usize,
    /// Letters per random automaton.
    #[arg(long, default_value_t = 2)]
    letters: usize,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct ReportFile {
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<StatsFile>,
}

#[derive(Serialize)]
struct StatsFile {
    explored: usize,
}

/// Parses and dispatches one invocation; never panics on bad input.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let invocation = match Invocation::try_parse_from(argv) {
        Ok(invocation) => invocation,
        Err(e) => {
            let rendered = e.render();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{rendered}");
                return EXIT_YES;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_ERROR;
        }
    };
    match dispatch(invocation.command, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    match command {
        Command::Check(args) => run_check(args, out),
        Command::Relations(args) => run_relations(args, out),
        Command::Reduce(command) => run_reduce(command, out),
        Command::SolveTraversal(args) => run_solve_traversal(args, out),
        Command::Oracle(args) => run_oracle(args, out),
        Command::Fixture => run_fixture(out),
    }
}

fn fail(e: impl Display) -> String {
    e.to_string()
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_pairs(text: &str, dfa: &Dfa) -> Result<Vec<(usize, usize)>, String> {
    let named: Vec<(String, String)> =
        serde_json::from_str(text).map_err(|e| format!("pairs must be JSON name pairs: {e}"))?;
    named
        .iter()
        .map(|(p, q)| Ok((dfa.state_index(p).map_err(fail)?, dfa.state_index(q).map_err(fail)?)))
        .collect()
}

fn parse_subset(text: &str, dfa: &Dfa) -> Result<StateSet, String> {
    let mut states = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        states.push(dfa.state_index(name).map_err(fail)?);
    }
    if states.is_empty() {
        return Err("the start subset must name at least one state".into());
    }
    Ok(StateSet::from_states(dfa.n_states(), states))
}

fn load_instance(args: &InstanceArgs) -> Result<(Dfa, Problem, Option<StateSet>), String> {
    let (dfa, mut problem) = if let Some(path) = &args.input {
        let bundle = BundleFile::from_json(&read_file(path)?).map_err(fail)?;
        match bundle.instance().map_err(fail)? {
            GeneratedInstance::Automaton { dfa, problem } => (dfa, problem),
            GeneratedInstance::Traversal(_) => {
                return Err("this bundle holds a traversal instance; use solve-traversal".into())
            }
        }
    } else {
        let path = args
            .dfa
            .as_ref()
            .ok_or("an instance needs --in or --dfa")?;
        let dfa = AutomatonFile::from_json(&read_file(path)?)
            .map_err(fail)?
            .to_dfa()
            .map_err(fail)?;
        let problem = assemble_problem(args, &dfa)?;
        (dfa, problem)
    };
    apply_sync_flags(args, &mut problem)?;
    let subset = match &args.subset {
        Some(text) => Some(parse_subset(text, &dfa)?),
        None => None,
    };
    Ok((dfa, problem, subset))
}

fn assemble_problem(args: &InstanceArgs, dfa: &Dfa) -> Result<Problem, String> {
    match args.problem.as_deref() {
        Some("cs") => assemble_constrained(args, dfa, true),
        Some("cw") => assemble_constrained(args, dfa, false),
        Some(id) if id.starts_with("mc-") => {
            let (mode, sync) = match &id[3..] {
                "paths" => (Mode::Paths, false),
                "paths-sync" => (Mode::Paths, true),
                "sets" => (Mode::Sets, false),
                "sets-sync" => (Mode::Sets, true),
                other => return Err(format!("unknown model-checking mode '{other}'")),
            };
            assemble_model_check(args, mode, sync)
        }
        Some(other) => Err(format!("unknown problem id '{other}'")),
        None => {
            if args.formula.is_some() {
                assemble_model_check(args, Mode::Paths, false)
            } else if args.relation.is_some() {
                assemble_constrained(args, dfa, true)
            } else {
                Err("specify --problem, --relation, or --formula".into())
            }
        }
    }
}

fn assemble_constrained(args: &InstanceArgs, dfa: &Dfa, sync: bool) -> Result<Problem, String> {
    let relation = args
        .relation
        .as_deref()
        .ok_or("constrained problems need --relation")?;
    let kind = RelationKind::parse(relation).map_err(fail)?;
    let pairs_text = args
        .pairs
        .as_deref()
        .ok_or("constrained problems need --pairs")?;
    let pairs = parse_pairs(pairs_text, dfa)?;
    let variant = Variant::parse(&args.variant).map_err(fail)?;
    let spec = ConstraintSpec::new(kind, pairs, variant, dfa.states()).map_err(fail)?;
    Ok(Problem::Constrained { spec, sync })
}

fn assemble_model_check(args: &InstanceArgs, mode: Mode, sync: bool) -> Result<Problem, String> {
    let text = args
        .formula
        .as_deref()
        .ok_or("model checking needs --formula")?;
    let formula = parse_formula(text).map_err(fail)?;
    let mode = match args.mode.as_deref() {
        None => mode,
        Some("paths") => Mode::Paths,
        Some("sets") => Mode::Sets,
        Some(other) => return Err(format!("unknown mode '{other}'")),
    };
    Ok(Problem::ModelCheck {
        formula,
        mode,
        sync,
    })
}

fn apply_sync_flags(args: &InstanceArgs, problem: &mut Problem) -> Result<(), String> {
    if args.sync && args.no_sync {
        return Err("--sync and --no-sync exclude each other".into());
    }
    if !args.sync && !args.no_sync {
        return Ok(());
    }
    let target = args.sync;
    match problem {
        Problem::ModelCheck { sync, .. } | Problem::Constrained { sync, .. } => *sync = target,
    }
    Ok(())
}

fn verdict_id(verdict: &Verdict) -> &'static str {
    match verdict {
        Verdict::Yes(_) => "yes",
        Verdict::No => "no",
        Verdict::Inconclusive(_) => "inconclusive",
        Verdict::ResourceLimit => "limit",
    }
}

fn verdict_exit(verdict: &Verdict) -> i32 {
    match verdict {
        Verdict::Yes(_) => EXIT_YES,
        Verdict::No => EXIT_NO,
        Verdict::Inconclusive(_) => EXIT_INCONCLUSIVE,
        Verdict::ResourceLimit => EXIT_LIMIT,
    }
}

fn witness_letters(w: &Word, alphabet: &[String]) -> Vec<String> {
    w.letters().iter().map(|&a| alphabet[a].clone()).collect()
}

fn print_report(
    out: &mut dyn Write,
    json: bool,
    verdict: &Verdict,
    alphabet: &[String],
    explored: Option<usize>,
) -> Result<(), String> {
    if json {
        let report = ReportFile {
            verdict: verdict_id(verdict).to_string(),
            witness: verdict.witness().map(|w| witness_letters(w, alphabet)),
            assignment: None,
            stats: explored.map(|explored| StatsFile { explored }),
        };
        writeln!(out, "{}", serde_json::to_string(&report).map_err(fail)?).map_err(fail)?;
    } else {
        writeln!(out, "{}", verdict_id(verdict)).map_err(fail)?;
        if let Some(w) = verdict.witness() {
            writeln!(out, "{}", w.render(alphabet)).map_err(fail)?;
        }
    }
    Ok(())
}

fn run_check(args: CheckArgs, out: &mut dyn Write) -> Result<i32, String> {
    let (dfa, problem, subset) = load_instance(&args.instance)?;
    let cap = args.cap.unwrap_or(NODE_CAP);
    let (verdict, stats) = problem
        .solve_report(&dfa, subset.as_ref(), cap)
        .map_err(fail)?;
    print_report(out, args.json, &verdict, dfa.alphabet(), Some(stats.explored))?;
    Ok(verdict_exit(&verdict))
}

fn run_relations(args: RelationsArgs, out: &mut dyn Write) -> Result<i32, String> {
    let dfa = AutomatonFile::from_json(&read_file(&args.dfa)?)
        .map_err(fail)?
        .to_dfa()
        .map_err(fail)?;
    let pairs = parse_pairs(&args.pairs, &dfa)?;
    let variant = Variant::parse(&args.variant).map_err(fail)?;
    let words: Vec<Word> = match &args.word {
        Some(text) => vec![Word::parse(text, dfa.alphabet()).map_err(fail)?],
        None => words_up_to(dfa.n_letters(), args.max_len),
    };

    let width = words
        .iter()
        .map(|w| rendered(w, &dfa).len())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut header = format!("{:width$}", "word");
    for kind in RelationKind::ALL {
        header.push_str("  ");
        header.push_str(kind.id());
    }
    writeln!(out, "{header}").map_err(fail)?;
    for w in &words {
        let mut line = format!("{:width$}", rendered(w, &dfa));
        for kind in RelationKind::ALL {
            let spec = ConstraintSpec::new(kind, pairs.clone(), variant, dfa.states())
                .map_err(fail)?;
            let mark = if agrees(&spec, &dfa, w).map_err(fail)? {
                '+'
            } else {
                '-'
            };
            line.push_str(&format!("  {mark:^width$}", width = kind.id().len()));
        }
        writeln!(out, "{}", line.trim_end()).map_err(fail)?;
    }
    Ok(EXIT_YES)
}

fn rendered(w: &Word, dfa: &Dfa) -> String {
    if w.is_empty() {
        "eps".to_string()
    } else {
        w.render(dfa.alphabet())
    }
}

fn words_up_to(n_letters: usize, max_len: usize) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next_level = Vec::new();
        for w in &level {
            for a in 0..n_letters {
                let mut longer = w.clone();
                longer.push(a);
                words.push(Word(longer.clone()));
                next_level.push(longer);
            }
        }
        level = next_level;
    }
    words
}

fn run_reduce(command: ReduceCommand, out: &mut dyn Write) -> Result<i32, String> {
    let (output, args) = match command {
        ReduceCommand::Careful(args) => {
            let variant =
                CarefulVariant::parse(args.variant.as_deref().unwrap_or("orz")).map_err(fail)?;
            let source = AutomatonFile::from_json(&read_file(&args.input)?)
                .map_err(fail)?
                .to_partial()
                .map_err(fail)?;
            (careful_to_constrained(&source, variant).map_err(fail)?, args)
        }
        ReduceCommand::Fai(args) => {
            let variant =
                FaiVariant::parse(args.variant.as_deref().unwrap_or("orzp")).map_err(fail)?;
            let files: Vec<AutomatonFile> = serde_json::from_str(&read_file(&args.input)?)
                .map_err(|e| format!("expected a JSON array of acceptor files: {e}"))?;
            let sources = files
                .iter()
                .map(AutomatonFile::to_acceptor)
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            (fai_to_constrained(&sources, variant).map_err(fail)?, args)
        }
        ReduceCommand::Cnf(args) => {
            let cnf = CnfFormula::parse_dimacs(&read_file(&args.input)?).map_err(fail)?;
            (cnf_to_fvt(&cnf).map_err(fail)?, args)
        }
    };
    let text = BundleFile::from_output(&output).to_json();
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => writeln!(out, "{text}").map_err(fail)?,
    }
    Ok(EXIT_YES)
}

fn run_solve_traversal(args: SolveTraversalArgs, out: &mut dyn Write) -> Result<i32, String> {
    let text = read_file(&args.input)?;
    let (instance, pullback) = load_traversal(&text)?;
    let verdict = match args.kind.as_str() {
        "fvt" => solve_fvt(&instance),
        "lvt" => solve_lvt(&instance),
        other => return Err(format!("unknown traversal kind '{other}'; use fvt or lvt")),
    };

    let assignment = match (&verdict, &pullback, args.kind.as_str()) {
        (PathVerdict::Yes(path), Some(output), "fvt")
            if matches!(output.pullback, PullbackInfo::Assignment { .. }) =>
        {
            let SourceWitness::Assignment(values) =
                pullback_witness(output, &GeneratedWitness::Path(path.clone()))
                    .map_err(fail)?
            else {
                unreachable!("assignment pullbacks produce assignments")
            };
            Some(values)
        }
        _ => None,
    };

    let names = |path: &[usize]| -> Vec<String> {
        path.iter()
            .map(|&v| instance.g.vertex_name(v).to_string())
            .collect()
    };
    if args.json {
        let (verdict_name, witness) = match &verdict {
            PathVerdict::Yes(path) => ("yes", Some(names(path))),
            PathVerdict::No => ("no", None),
            PathVerdict::ResourceLimit => ("limit", None),
        };
        let report = ReportFile {
            verdict: verdict_name.to_string(),
            witness,
            assignment: assignment.clone(),
            stats: None,
        };
        writeln!(out, "{}", serde_json::to_string(&report).map_err(fail)?).map_err(fail)?;
    } else {
        match &verdict {
            PathVerdict::Yes(path) => {
                writeln!(out, "yes").map_err(fail)?;
                writeln!(out, "{}", names(path).join(" ")).map_err(fail)?;
            }
            PathVerdict::No => writeln!(out, "no").map_err(fail)?,
            PathVerdict::ResourceLimit => writeln!(out, "limit").map_err(fail)?,
        }
        if let Some(values) = &assignment {
            let line = values
                .iter()
                .enumerate()
                .map(|(i, &b)| format!("x{}={}", i + 1, u8::from(b)))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{line}").map_err(fail)?;
        }
    }
    Ok(match verdict {
        PathVerdict::Yes(_) => EXIT_YES,
        PathVerdict::No => EXIT_NO,
        PathVerdict::ResourceLimit => EXIT_LIMIT,
    })
}

fn load_traversal(
    text: &str,
) -> Result<(TraversalInstance, Option<crate::reductions::ReductionOutput>), String> {
    if let Ok(bundle) = BundleFile::from_json(text) {
        if bundle.digraph.is_some() {
            let GeneratedInstance::Traversal(instance) = bundle.instance().map_err(fail)? else {
                return Err("the bundle's problem id does not match its digraph".into());
            };
            return Ok((instance, bundle.output().map_err(fail)?));
        }
    }
    let file: DigraphFile =
        serde_json::from_str(text).map_err(|e| format!("expected a digraph file: {e}"))?;
    Ok((file.to_instance().map_err(fail)?, None))
}

fn run_oracle(args: OracleArgs, out: &mut dyn Write) -> Result<i32, String> {
    if let Some(count) = args.random {
        return run_oracle_corpus(&args, count, out);
    }
    let (dfa, problem, subset) = load_instance(&args.instance)?;
    let report = cross_check(&problem, &dfa, subset.as_ref(), args.max_len).map_err(fail)?;
    print_report(out, args.json, &report.engine, dfa.alphabet(), None)?;
    match &report.outcome {
        CrossOutcome::Agree => {
            writeln!(out, "oracle: agree").map_err(fail)?;
            Ok(verdict_exit(&report.engine))
        }
        CrossOutcome::Inconclusive => {
            writeln!(out, "oracle: inconclusive").map_err(fail)?;
            Ok(EXIT_INCONCLUSIVE)
        }
        CrossOutcome::Failure(message) => {
            writeln!(out, "oracle: failure: {message}").map_err(fail)?;
            Ok(EXIT_ERROR)
        }
    }
}

/// One random constrained instance per draw, cycling through both targets
/// and all five relations.
fn run_oracle_corpus(args: &OracleArgs, count: usize, out: &mut dyn Write) -> Result<i32, String> {
    let mut rng = corpus::rng(args.seed);
    let mut agree = 0usize;
    let mut inconclusive = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for i in 0..count {
        let dfa = corpus::random_dfa(&mut rng, args.states.max(2), args.letters.max(1));
        let pairs = corpus::random_pairs(&mut rng, dfa.n_states(), 2);
        let kind = RelationKind::ALL[i % RelationKind::ALL.len()];
        let sync = (i / RelationKind::ALL.len()) % 2 == 0;
        let spec = ConstraintSpec::new(kind, pairs, Variant::Literal, dfa.states())
            .map_err(fail)?;
        let problem = Problem::Constrained { spec, sync };
        let report = cross_check(&problem, &dfa, None, args.max_len).map_err(fail)?;
        match report.outcome {
            CrossOutcome::Agree => agree += 1,
            CrossOutcome::Inconclusive => inconclusive += 1,
            CrossOutcome::Failure(message) => {
                failures.push(format!("instance {i}: {message}"))
            }
        }
    }
    writeln!(
        out,
        "checked {count} instances: {agree} agree, {inconclusive} inconclusive, {} failures",
        failures.len()
    )
    .map_err(fail)?;
    for failure in &failures {
        writeln!(out, "{failure}").map_err(fail)?;
    }
    if !failures.is_empty() {
        Ok(EXIT_ERROR)
    } else if inconclusive > 0 {
        Ok(EXIT_INCONCLUSIVE)
    } else {
        Ok(EXIT_YES)
    }
}

fn run_fixture(out: &mut dyn Write) -> Result<i32, String> {
    let response = |from: &str, to: &str| {
        Formula::globally(Formula::implies(
            Formula::atom(from),
            Formula::finally(Formula::atom(to)),
        ))
    };
    let fixtures = [
        response("q1", "q2"),
        Formula::and(response("q1", "q2"), response("q3", "q4")),
        Formula::and(
            Formula::finally(Formula::atom("f")),
            Formula::implies(
                Formula::and(
                    Formula::not(Formula::atom("n")),
                    Formula::not(Formula::atom("f")),
                ),
                Formula::finally(Formula::atom("y")),
            ),
        ),
        Formula::implies(
            Formula::not(Formula::atom("n")),
            Formula::globally(Formula::not(Formula::atom("n"))),
        ),
    ];
    for f in &fixtures {
        writeln!(out, "{}", print_formula(f)).map_err(fail)?;
    }
    Ok(EXIT_YES)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_lines(args: &[&str]) -> (i32, String) {
        let argv: Vec<String> = std::iter::once("traversync")
            .chain(args.iter().copied())
            .map(String::from)
            .collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn fixture_lines_parse_back() {
        let (code, text) = run_lines(&["fixture"]);
        assert_eq!(code, EXIT_YES);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        for line in lines {
            parse_formula(line).unwrap();
        }
    }

    #[test]
    fn unknown_flags_exit_with_a_usage_error() {
        let (code, _) = run_lines(&["check", "--nonsense"]);
        assert_eq!(code, EXIT_ERROR);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, text) = run_lines(&["--help"]);
        assert_eq!(code, EXIT_YES);
        assert!(text.contains("solve-traversal"));
    }
}
