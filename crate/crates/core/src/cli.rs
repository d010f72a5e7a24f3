//! The command-line driver, kept free of process concerns so it can be
//! exercised directly: [`run`] returns the exit status and both streams.

use std::fmt::Write;
use std::path::PathBuf;

use crate::compiler::{compile_with_warnings, CompileError, Compilation};
use crate::cpnet::{describe_row, CpNet, Outcome};
use crate::dot;
use crate::export::{self, MessageError};
use crate::norm_lang::{
    format_norm, format_norm_set, parse_condition, parse_literal, parse_literal_list, parse_norms_with_warnings,
    Condition, NormSet, ParseError, ParseWarning,
};
use crate::preorder::{BuildOptions, MergeMode, PreferenceGraph};
use crate::reasoner::{
    check_norms, consistency_of, ctd_pairs, dominance, permission_status, DominanceVerdict, PermissionStatus,
    ReasonerError,
};

pub const EXIT_OK: i32 = 0;
/// The query was answered and the answer is negative: inconsistent net,
/// unsatisfied norm, conflicting norms.
pub const EXIT_FAILURE: i32 = 1;
/// The input could not be processed.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Parse,
    Compile,
    Graph,
    Dominance { first: String, second: String },
    Consistent,
    /// `<literal>` or `<literal> IF <condition>`.
    Permission { query: String },
    Ctd,
    Check,
    Optima,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Parse => "parse",
            Command::Compile => "compile",
            Command::Graph => "graph",
            Command::Dominance { .. } => "dominance",
            Command::Consistent => "consistent",
            Command::Permission { .. } => "permission",
            Command::Ctd => "ctd",
            Command::Check => "check",
            Command::Optima => "optima",
        }
    }

    fn supports_dot(&self) -> bool {
        matches!(self, Command::Compile | Command::Graph)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub command: Command,
    pub cap: usize,
    pub format: OutputFormat,
    pub merge: MergeMode,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, command: Command) -> Self {
        RunConfig {
            input: input.into(),
            command,
            cap: crate::preorder::DEFAULT_CAP,
            format: OutputFormat::Text,
            merge: MergeMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Reads the input file and runs the command on it.
pub fn run(config: &RunConfig) -> RunOutput {
    match std::fs::read_to_string(&config.input) {
        Ok(src) => run_source(config, &src),
        Err(e) => {
            let msg = format!("{}: {e}", config.input.display());
            fail(config, EXIT_INPUT, "io", msg, None)
        }
    }
}

struct Failure {
    status: i32,
    kind: &'static str,
    message: String,
    position: Option<(usize, usize)>,
    /// Replaces the generic error document in structured mode.
    document: Option<String>,
}

impl Failure {
    fn input(kind: &'static str, message: impl Into<String>) -> Self {
        Failure { status: EXIT_INPUT, kind, message: message.into(), position: None, document: None }
    }

    fn parse(context: &str, e: ParseError) -> Self {
        Failure {
            status: EXIT_INPUT,
            kind: "parse",
            message: format!("{context}: {e}"),
            position: Some((e.line, e.column)),
            document: None,
        }
    }
}

fn fail(config: &RunConfig, status: i32, kind: &'static str, message: String, pos: Option<(usize, usize)>) -> RunOutput {
    let mut out = RunOutput { status, ..Default::default() };
    if config.format == OutputFormat::Structured {
        out.stdout = export::error_json(
            config.command.name(),
            MessageError { kind, message: message.clone(), line: pos.map(|p| p.0), column: pos.map(|p| p.1) },
        );
    }
    out.stderr = format!("error: {message}\n");
    out
}

/// Runs the command on norm-file text already in memory. `config.input` is
/// used only in messages.
pub fn run_source(config: &RunConfig, src: &str) -> RunOutput {
    match execute(config, src) {
        Ok(out) => out,
        Err(f) => {
            let mut out = fail(config, f.status, f.kind, f.message, f.position);
            if let (Some(doc), OutputFormat::Structured) = (f.document, config.format) {
                out.stdout = doc;
            }
            out
        }
    }
}

fn execute(config: &RunConfig, src: &str) -> Result<RunOutput, Failure> {
    if config.cap < 1 {
        return Err(Failure::input("usage", "the variable cap must be at least 1"));
    }
    if config.format == OutputFormat::Dot && !config.command.supports_dot() {
        return Err(Failure::input(
            "usage",
            format!("`{}` has no DOT output; use `compile` or `graph`", config.command.name()),
        ));
    }
    let (norms, warnings) =
        parse_norms_with_warnings(src).map_err(|e| Failure::parse(&config.input.display().to_string(), e))?;
    let mut stderr = String::new();
    for w in &warnings {
        let _ = writeln!(stderr, "warning: {}: {w}", config.input.display());
    }
    let mut out = match &config.command {
        Command::Parse => cmd_parse(config, &norms, &warnings),
        Command::Compile => cmd_compile(config, &norms),
        Command::Graph => cmd_graph(config, &norms),
        Command::Dominance { first, second } => cmd_dominance(config, &norms, first, second),
        Command::Consistent => cmd_consistent(config, &norms),
        Command::Permission { query } => cmd_permission(config, &norms, query),
        Command::Ctd => Ok(cmd_ctd(config, &norms)),
        Command::Check => cmd_check(config, &norms),
        Command::Optima => cmd_optima(config, &norms),
    }?;
    stderr.push_str(&out.stderr);
    out.stderr = stderr;
    Ok(out)
}

fn ok(stdout: String) -> RunOutput {
    RunOutput { status: EXIT_OK, stdout, stderr: String::new() }
}

fn compile_for(config: &RunConfig, norms: &NormSet) -> Result<Compilation, Failure> {
    compile_with_warnings(norms).map_err(|e| compile_failure(config, e))
}

fn compile_failure(config: &RunConfig, e: CompileError) -> Failure {
    match e {
        CompileError::Conflicts(conflicts) => {
            let mut message = format!("{} norms conflict:", config.input.display());
            for c in &conflicts {
                let _ = write!(message, "\n  {c}");
            }
            Failure {
                status: EXIT_FAILURE,
                kind: "conflict",
                message,
                position: None,
                document: Some(export::error_json(
                    config.command.name(),
                    serde_json::json!({
                        "kind": "conflict",
                        "conflicts": export::conflict_docs(&conflicts),
                    }),
                )),
            }
        }
        other => Failure::input("compile", other.to_string()),
    }
}

fn reasoner_failure(config: &RunConfig, e: ReasonerError) -> Failure {
    match e {
        ReasonerError::Compile(c) => compile_failure(config, c),
        ReasonerError::Preorder(p) => Failure::input("cap", p.to_string()),
        ReasonerError::Outcome(o) => Failure::input("outcome", o.to_string()),
        other => Failure::input("query", other.to_string()),
    }
}

fn build_graph(config: &RunConfig, net: &CpNet) -> Result<PreferenceGraph, Failure> {
    PreferenceGraph::build_with(net, BuildOptions::with_cap(config.cap)).map_err(|e| Failure::input("cap", e.to_string()))
}

fn warning_lines(warnings: &[crate::compiler::CompileWarning]) -> String {
    warnings.iter().map(|w| format!("warning: {w}\n")).collect()
}

fn cmd_parse(config: &RunConfig, norms: &NormSet, warnings: &[ParseWarning]) -> Result<RunOutput, Failure> {
    Ok(match config.format {
        OutputFormat::Structured => ok(export::to_json("parse", export::parse_doc(norms, warnings))),
        _ => ok(format_norm_set(norms)),
    })
}

fn cmd_compile(config: &RunConfig, norms: &NormSet) -> Result<RunOutput, Failure> {
    let Compilation { net, warnings } = compile_for(config, norms)?;
    let mut out = match config.format {
        OutputFormat::Structured => ok(export::to_json("compile", export::net_doc(&net, &warnings))),
        OutputFormat::Dot => ok(dot::dependency_graph(&net)),
        OutputFormat::Text => ok(describe_net(&net)),
    };
    out.stderr = warning_lines(&warnings);
    Ok(out)
}

fn describe_net(net: &CpNet) -> String {
    let names = net.variables();
    let mut s = String::new();
    let _ = writeln!(s, "variables: {}", names.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    let edges: Vec<String> = net.edges().into_iter().map(|(p, c)| format!("{} -> {}", names[p], names[c])).collect();
    let _ = writeln!(s, "edges: {}", if edges.is_empty() { "none".to_string() } else { edges.join(", ") });
    for (v, name) in names.iter().enumerate() {
        if net.is_unregulated(v) {
            let _ = writeln!(s, "{name}: no preferences");
            continue;
        }
        let _ = writeln!(s, "{name}:");
        for row in net.rows(v) {
            let order = describe_row(name, row.kind).unwrap_or_else(|| "unregulated".to_string());
            let _ = writeln!(s, "  {}: {order}", row.context);
        }
    }
    let _ = writeln!(s, "acyclic: {}", net.is_acyclic_dependency());
    s
}

fn cmd_graph(config: &RunConfig, norms: &NormSet) -> Result<RunOutput, Failure> {
    let Compilation { net, warnings } = compile_for(config, norms)?;
    let graph = build_graph(config, &net)?;
    let mut out = match config.format {
        OutputFormat::Structured => ok(export::to_json("graph", export::graph_doc(&graph, config.merge))),
        OutputFormat::Dot => ok(dot::induced_graph(&graph, config.merge)),
        OutputFormat::Text => {
            let merged = graph.merged(config.merge);
            let optimal = graph.optimal_outcomes();
            let mut s = String::new();
            let comps = graph.weakly_connected_components();
            let _ = writeln!(s, "{} outcomes, {} components, {} nodes", graph.outcome_count(), comps.len(), merged.nodes.len());
            for (i, members) in merged.nodes.iter().enumerate() {
                let label: Vec<String> = members.iter().map(|&o| format!("[{}]", net.format_outcome(o))).collect();
                let mark = if members.iter().any(|o| optimal.contains(o)) { " (optimal)" } else { "" };
                let _ = writeln!(s, "n{i}: {}{mark}", label.join(" "));
            }
            for e in &merged.edges {
                let rel = if e.indifferent { "~" } else { ">" };
                let _ = writeln!(s, "n{} {rel} n{}", e.better, e.worse);
            }
            ok(s)
        }
    };
    out.stderr = warning_lines(&warnings);
    Ok(out)
}

fn parse_outcome(net: &CpNet, text: &str) -> Result<Outcome, Failure> {
    let lits = parse_literal_list(text).map_err(|e| Failure::parse(&format!("outcome `{text}`"), e))?;
    net.outcome_from_literals(&lits).map_err(|e| Failure::input("outcome", format!("outcome `{text}`: {e}")))
}

fn verdict_name(v: DominanceVerdict) -> &'static str {
    match v {
        DominanceVerdict::Dominates => "dominates",
        DominanceVerdict::Dominated => "dominated",
        DominanceVerdict::Indifferent => "indifferent",
        DominanceVerdict::Incomparable => "incomparable",
        DominanceVerdict::Equal => "equal",
    }
}

fn cmd_dominance(config: &RunConfig, norms: &NormSet, first: &str, second: &str) -> Result<RunOutput, Failure> {
    let Compilation { net, .. } = compile_for(config, norms)?;
    if net.len() > config.cap {
        return Err(Failure::input(
            "cap",
            crate::preorder::PreorderError::CapExceeded { variables: net.len(), cap: config.cap }.to_string(),
        ));
    }
    let o = parse_outcome(&net, first)?;
    let u = parse_outcome(&net, second)?;
    let r = dominance(&net, o, u).map_err(|e| reasoner_failure(config, e))?;
    Ok(match config.format {
        OutputFormat::Structured => ok(export::to_json("dominance", export::dominance_doc(&net, o, u, &r))),
        _ => {
            let mut s = format!("{}\n", verdict_name(r.verdict));
            if let Some(w) = &r.witness {
                for step in w {
                    let _ = writeln!(s, "  {}", net.format_outcome(*step));
                }
            }
            ok(s)
        }
    })
}

fn cmd_consistent(config: &RunConfig, norms: &NormSet) -> Result<RunOutput, Failure> {
    let Compilation { net, .. } = compile_for(config, norms)?;
    let graph = build_graph(config, &net)?;
    let report = consistency_of(&graph);
    let status = if report.consistent { EXIT_OK } else { EXIT_FAILURE };
    let stdout = match config.format {
        OutputFormat::Structured => export::to_json("consistent", export::consistency_doc(&net, &report)),
        _ => {
            let mut s = String::from(if report.consistent { "consistent\n" } else { "inconsistent\n" });
            if let Some(cycle) = &report.witness_cycle {
                let mut steps: Vec<String> = cycle.iter().map(|&o| format!("[{}]", net.format_outcome(o))).collect();
                steps.push(steps[0].clone());
                let _ = writeln!(s, "  {}", steps.join(" -> "));
            }
            s
        }
    };
    Ok(RunOutput { status, stdout, stderr: String::new() })
}

/// Splits `<literal> IF <condition>` on a standalone `IF`.
fn split_query(query: &str) -> (&str, Option<&str>) {
    let mut offset = 0;
    for word in query.split_inclusive(char::is_whitespace) {
        if word.trim() == "IF" {
            return (&query[..offset], Some(&query[offset + word.len()..]));
        }
        offset += word.len();
    }
    (query, None)
}

fn status_name(s: PermissionStatus) -> &'static str {
    match s {
        PermissionStatus::Obligatory => "obligatory",
        PermissionStatus::Forbidden => "forbidden",
        PermissionStatus::StronglyPermittedBilateral => "strongly permitted (bilateral)",
        PermissionStatus::WeaklyPermitted => "weakly permitted",
    }
}

fn cmd_permission(config: &RunConfig, norms: &NormSet, query: &str) -> Result<RunOutput, Failure> {
    let (lit_text, ctx_text) = split_query(query);
    let literal = parse_literal(lit_text.trim()).map_err(|e| Failure::parse(&format!("query `{query}`"), e))?;
    let context = match ctx_text {
        Some(c) => parse_condition(c.trim()).map_err(|e| Failure::parse(&format!("query `{query}`"), e))?,
        None => Condition::top(),
    };
    let Compilation { net, .. } = compile_for(config, norms)?;
    let report = permission_status(&net, &literal, &context).map_err(|e| reasoner_failure(config, e))?;
    Ok(match config.format {
        OutputFormat::Structured => ok(export::to_json("permission", export::permission_doc(&report))),
        _ => {
            let mut s = String::new();
            match report.uniform() {
                Some(st) => {
                    let _ = writeln!(s, "{}", status_name(st));
                }
                None => {
                    let _ = writeln!(s, "depends on context");
                    for (c, st) in &report.breakdown {
                        let _ = writeln!(s, "  {c}: {}", status_name(*st));
                    }
                }
            }
            ok(s)
        }
    })
}

fn cmd_ctd(config: &RunConfig, norms: &NormSet) -> RunOutput {
    let pairs = ctd_pairs(norms);
    match config.format {
        OutputFormat::Structured => ok(export::to_json("ctd", export::ctd_docs(&pairs))),
        _ => {
            let mut s = String::new();
            if pairs.is_empty() {
                s.push_str("no contrary-to-duty pairs\n");
            }
            for p in &pairs {
                let _ = writeln!(
                    s,
                    "#{} {} -> #{} {} (violation: {})",
                    p.primary_index,
                    format_norm(&p.primary),
                    p.secondary_index,
                    format_norm(&p.secondary),
                    p.violation
                );
            }
            ok(s)
        }
    }
}

fn cmd_check(config: &RunConfig, norms: &NormSet) -> Result<RunOutput, Failure> {
    let run = check_norms(norms, BuildOptions::with_cap(config.cap)).map_err(|e| reasoner_failure(config, e))?;
    let status = if run.all_satisfied() { EXIT_OK } else { EXIT_FAILURE };
    let net = run.graph.net();
    let stdout = match config.format {
        OutputFormat::Structured => export::to_json("check", export::check_doc(&run)),
        _ => {
            let mut s = String::new();
            for (i, r) in run.reports.iter().enumerate() {
                let verdict = if r.satisfied { "satisfied" } else { "VIOLATED" };
                let _ = write!(s, "#{i} {}: {verdict}", format_norm(&r.norm));
                if let Some(c) = r.counterexample {
                    let _ = write!(
                        s,
                        " (complying [{}] is not above violating [{}])",
                        net.format_outcome(c.complying),
                        net.format_outcome(c.violating)
                    );
                }
                s.push('\n');
            }
            s.push_str(if run.all_satisfied() { "all norms satisfied\n" } else { "some norms are not satisfied\n" });
            s
        }
    };
    Ok(RunOutput { status, stdout, stderr: String::new() })
}

fn cmd_optima(config: &RunConfig, norms: &NormSet) -> Result<RunOutput, Failure> {
    let Compilation { net, .. } = compile_for(config, norms)?;
    let graph = build_graph(config, &net)?;
    Ok(match config.format {
        OutputFormat::Structured => ok(export::to_json("optima", export::optima_doc(&graph))),
        _ => ok(graph.optimal_outcomes().iter().map(|&o| format!("{}\n", net.format_outcome(o))).collect()),
    })
}
