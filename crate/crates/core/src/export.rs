//! Structured (JSON) documents for every query result.
//!
//! Every document is wrapped in an envelope
//! `{"schema": "normnet.v1", "command": <name>, "result": {...}}` or, on
//! failure, `{"schema": ..., "command": ..., "error": {...}}`. Outcomes and
//! literals are written in the norm-file grammar (`d`, `not d`, and
//! comma-separated outcomes in variable order). Field order is fixed, so
//! identical inputs give byte-identical output.

use serde::Serialize;

use crate::compiler::{CompileWarning, ConflictReport};
use crate::cpnet::{CpNet, CptRowKind, Outcome};
use crate::norm_lang::{format_norm, Condition, Literal, NormKind, NormSet, ParseWarning};
use crate::preorder::{MergeMode, PreferenceGraph};
use crate::reasoner::{ConsistencyReport, CtdPair, DominanceResult, PermissionReport, PermissionStatus, SatisfactionRun};

pub const SCHEMA: &str = "normnet.v1";

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    pub result: T,
}

#[derive(Serialize)]
pub struct ErrorEnvelope<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    pub error: T,
}

pub fn to_json<T: Serialize>(command: &str, result: T) -> String {
    let env = Envelope { schema: SCHEMA, command, result };
    serde_json::to_string_pretty(&env).expect("documents serialise") + "\n"
}

pub fn error_json<T: Serialize>(command: &str, error: T) -> String {
    let env = ErrorEnvelope { schema: SCHEMA, command, error };
    serde_json::to_string_pretty(&env).expect("documents serialise") + "\n"
}

#[derive(Serialize)]
pub struct MessageError {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

fn lits(c: &Condition) -> Vec<String> {
    c.literals().iter().map(Literal::to_string).collect()
}

fn outcomes(net: &CpNet, os: &[Outcome]) -> Vec<String> {
    os.iter().map(|&o| net.format_outcome(o)).collect()
}

#[derive(Serialize)]
pub struct NormDoc {
    pub index: usize,
    pub kind: NormKind,
    pub consequent: String,
    pub condition: Vec<String>,
    pub text: String,
}

#[derive(Serialize)]
pub struct ParseDoc {
    pub atoms: Vec<String>,
    pub norms: Vec<NormDoc>,
    pub warnings: Vec<String>,
}

pub fn parse_doc(set: &NormSet, warnings: &[ParseWarning]) -> ParseDoc {
    ParseDoc {
        atoms: set.atoms().iter().map(ToString::to_string).collect(),
        norms: set
            .norms()
            .iter()
            .enumerate()
            .map(|(index, n)| NormDoc {
                index,
                kind: n.kind,
                consequent: n.consequent.to_string(),
                condition: lits(&n.condition),
                text: format_norm(n),
            })
            .collect(),
        warnings: warnings.iter().map(ToString::to_string).collect(),
    }
}

#[derive(Serialize)]
pub struct RowDoc {
    pub context: Vec<String>,
    /// `strict`, `indifferent` or `absent`.
    pub kind: &'static str,
    /// The preferred literal for strict rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preferred: Option<String>,
    pub provenance: Vec<usize>,
}

#[derive(Serialize)]
pub struct VariableDoc {
    pub name: String,
    pub parents: Vec<String>,
    pub rows: Vec<RowDoc>,
}

#[derive(Serialize)]
pub struct EdgeDoc {
    pub parent: String,
    pub child: String,
}

#[derive(Serialize)]
pub struct NetDoc {
    pub variables: Vec<VariableDoc>,
    pub edges: Vec<EdgeDoc>,
    pub acyclic: bool,
    pub warnings: Vec<String>,
}

pub fn net_doc(net: &CpNet, warnings: &[CompileWarning]) -> NetDoc {
    let names = net.variables();
    NetDoc {
        variables: (0..net.len())
            .map(|v| VariableDoc {
                name: names[v].to_string(),
                parents: net.parents(v).iter().map(|&p| names[p].to_string()).collect(),
                rows: net
                    .rows(v)
                    .iter()
                    .map(|r| {
                        let (kind, preferred) = match r.kind {
                            CptRowKind::Strict { preferred } => {
                                ("strict", Some(Literal::new(names[v].clone(), preferred).to_string()))
                            }
                            CptRowKind::Indifferent => ("indifferent", None),
                            CptRowKind::Absent => ("absent", None),
                        };
                        RowDoc { context: lits(&r.context), kind, preferred, provenance: r.provenance.clone() }
                    })
                    .collect(),
            })
            .collect(),
        edges: net
            .edges()
            .into_iter()
            .map(|(p, c)| EdgeDoc { parent: names[p].to_string(), child: names[c].to_string() })
            .collect(),
        acyclic: net.is_acyclic_dependency(),
        warnings: warnings.iter().map(ToString::to_string).collect(),
    }
}

#[derive(Serialize)]
pub struct ConflictDoc {
    pub variable: String,
    pub context: Vec<String>,
    pub norms: Vec<usize>,
    pub nature: crate::compiler::ConflictNature,
}

pub fn conflict_docs(conflicts: &[ConflictReport]) -> Vec<ConflictDoc> {
    conflicts
        .iter()
        .map(|c| ConflictDoc {
            variable: c.variable.to_string(),
            context: lits(&c.context),
            norms: c.norms.clone(),
            nature: c.nature,
        })
        .collect()
}

#[derive(Serialize)]
pub struct NodeDoc {
    pub id: usize,
    pub outcomes: Vec<String>,
    pub optimal: bool,
}

#[derive(Serialize)]
pub struct GraphEdgeDoc {
    pub better: usize,
    pub worse: usize,
    pub indifferent: bool,
}

#[derive(Serialize)]
pub struct GraphDoc {
    pub variables: Vec<String>,
    pub outcome_count: usize,
    pub merge: &'static str,
    pub components: Vec<Vec<String>>,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<GraphEdgeDoc>,
}

pub fn merge_name(mode: MergeMode) -> &'static str {
    match mode {
        MergeMode::Raw => "raw",
        MergeMode::UniformlyIndifferentVariables => "variables",
        MergeMode::IndifferenceClasses => "classes",
    }
}

pub fn graph_doc(graph: &PreferenceGraph, mode: MergeMode) -> GraphDoc {
    let net = graph.net();
    let merged = graph.merged(mode);
    let optimal = graph.optimal_outcomes();
    GraphDoc {
        variables: net.variables().iter().map(ToString::to_string).collect(),
        outcome_count: graph.outcome_count(),
        merge: merge_name(mode),
        components: graph.weakly_connected_components().iter().map(|c| outcomes(net, c)).collect(),
        nodes: merged
            .nodes
            .iter()
            .enumerate()
            .map(|(id, members)| NodeDoc {
                id,
                outcomes: outcomes(net, members),
                optimal: members.iter().any(|o| optimal.contains(o)),
            })
            .collect(),
        edges: merged
            .edges
            .iter()
            .map(|e| GraphEdgeDoc { better: e.better, worse: e.worse, indifferent: e.indifferent })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct DominanceDoc {
    pub first: String,
    pub second: String,
    pub verdict: crate::reasoner::DominanceVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

pub fn dominance_doc(net: &CpNet, o: Outcome, u: Outcome, r: &DominanceResult) -> DominanceDoc {
    DominanceDoc {
        first: net.format_outcome(o),
        second: net.format_outcome(u),
        verdict: r.verdict,
        witness: r.witness.as_ref().map(|w| outcomes(net, w)),
    }
}

#[derive(Serialize)]
pub struct ConsistencyDoc {
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_cycle: Option<Vec<String>>,
}

pub fn consistency_doc(net: &CpNet, r: &ConsistencyReport) -> ConsistencyDoc {
    ConsistencyDoc { consistent: r.consistent, witness_cycle: r.witness_cycle.as_ref().map(|c| outcomes(net, c)) }
}

#[derive(Serialize)]
pub struct PermissionRowDoc {
    pub context: Vec<String>,
    pub status: PermissionStatus,
}

#[derive(Serialize)]
pub struct PermissionDoc {
    pub literal: String,
    pub context: Vec<String>,
    /// The shared status, or `null` when contexts disagree.
    pub status: Option<PermissionStatus>,
    pub breakdown: Vec<PermissionRowDoc>,
}

pub fn permission_doc(r: &PermissionReport) -> PermissionDoc {
    PermissionDoc {
        literal: r.literal.to_string(),
        context: lits(&r.context),
        status: r.uniform(),
        breakdown: r.breakdown.iter().map(|(c, s)| PermissionRowDoc { context: lits(c), status: *s }).collect(),
    }
}

#[derive(Serialize)]
pub struct CtdDoc {
    pub primary: usize,
    pub secondary: usize,
    pub primary_norm: String,
    pub secondary_norm: String,
    pub violation: String,
}

pub fn ctd_docs(pairs: &[CtdPair]) -> Vec<CtdDoc> {
    pairs
        .iter()
        .map(|p| CtdDoc {
            primary: p.primary_index,
            secondary: p.secondary_index,
            primary_norm: format_norm(&p.primary),
            secondary_norm: format_norm(&p.secondary),
            violation: p.violation.to_string(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct CounterexampleDoc {
    pub complying: String,
    pub violating: String,
}

#[derive(Serialize)]
pub struct SatisfactionDoc {
    pub index: usize,
    pub norm: String,
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleDoc>,
}

#[derive(Serialize)]
pub struct CheckDoc {
    pub all_satisfied: bool,
    pub results: Vec<SatisfactionDoc>,
}

pub fn check_doc(run: &SatisfactionRun) -> CheckDoc {
    let net = run.graph.net();
    CheckDoc {
        all_satisfied: run.all_satisfied(),
        results: run
            .reports
            .iter()
            .enumerate()
            .map(|(index, r)| SatisfactionDoc {
                index,
                norm: format_norm(&r.norm),
                satisfied: r.satisfied,
                counterexample: r.counterexample.map(|c| CounterexampleDoc {
                    complying: net.format_outcome(c.complying),
                    violating: net.format_outcome(c.violating),
                }),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct OptimaDoc {
    pub outcomes: Vec<String>,
}

pub fn optima_doc(graph: &PreferenceGraph) -> OptimaDoc {
    OptimaDoc { outcomes: outcomes(graph.net(), &graph.optimal_outcomes()) }
}
