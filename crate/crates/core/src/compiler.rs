//! Lowering of norm sets into prescriptive CP-nets.
//!
//! Every atom becomes a binary variable. An obligation or liberty whose
//! consequent is over `X` makes every atom of its condition a parent of `X`.
//! Conditions may mention only some of `X`'s parents, so each norm is expanded
//! to every total parent context that extends its condition: obligations give
//! `Strict` rows preferring the consequent, liberties give `Indifferent` rows,
//! and uncovered contexts stay `Absent`. Unilateral permissions contribute
//! nothing to the net.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cpnet::{context_condition, CompiledRow, CpNet, CptRowKind, NetError, MAX_PARENTS, MAX_VARIABLES};
use crate::norm_lang::{Atom, Condition, NormKind, NormSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictNature {
    OppositeStrictOrders,
    StrictVersusIndifferent,
}

/// Two or more norms demanding incompatible rows for one total context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictReport {
    pub variable: Atom,
    pub context: Condition,
    /// Indices of every norm constraining this context.
    pub norms: Vec<usize>,
    pub nature: ConflictNature,
}

impl fmt::Display for ConflictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.nature {
            ConflictNature::OppositeStrictOrders => "opposite strict orders",
            ConflictNature::StrictVersusIndifferent => "strict order versus indifference",
        };
        let norms: Vec<String> = self.norms.iter().map(|i| format!("#{i}")).collect();
        write!(f, "{what} on `{}` given {} (norms {})", self.variable, self.context, norms.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("{} conflicting context(s)", .0.len())]
    Conflicts(Vec<ConflictReport>),
    #[error("{0} atoms exceed the limit of {MAX_VARIABLES}")]
    TooManyVariables(usize),
    #[error("variable `{variable}` would have {count} parents, the limit is {MAX_PARENTS}")]
    TooManyParents { variable: Atom, count: usize },
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompileWarning {
    /// A permission with some context where neither an obligation nor a
    /// liberty backs it.
    UnimpliedPermission { norm: usize },
    /// A permission whose consequent is forbidden in some context it covers.
    ContradictedPermission { norm: usize, rows: Vec<Condition> },
}

impl fmt::Display for CompileWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompileWarning::UnimpliedPermission { norm } => {
                write!(f, "norm #{norm}: unilateral permission is not implied by any obligation or liberty")
            }
            CompileWarning::ContradictedPermission { norm, rows } => {
                let ctx: Vec<String> = rows.iter().map(Condition::to_string).collect();
                write!(f, "norm #{norm}: permission contradicts an obligation given {}", ctx.join("; "))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Compilation {
    pub net: CpNet,
    pub warnings: Vec<CompileWarning>,
}

pub fn compile(norms: &NormSet) -> Result<CpNet, CompileError> {
    compile_with_warnings(norms).map(|c| c.net)
}

pub fn compile_with_warnings(norms: &NormSet) -> Result<Compilation, CompileError> {
    let n = norms.atoms().len();
    if n > MAX_VARIABLES {
        return Err(CompileError::TooManyVariables(n));
    }
    let mut parents = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    let mut conflicts = Vec::new();
    for var in 0..n {
        let ps = parent_indices(norms, var);
        if ps.len() > MAX_PARENTS {
            return Err(CompileError::TooManyParents { variable: norms.atoms()[var].clone(), count: ps.len() });
        }
        let (r, c) = expand_variable(norms, var, &ps);
        rows.push(r);
        conflicts.extend(c);
        parents.push(ps);
    }
    if !conflicts.is_empty() {
        return Err(CompileError::Conflicts(conflicts));
    }
    let net = CpNet::from_rows(norms.atoms().to_vec(), parents, rows)?;
    let warnings = permission_warnings(norms, &net);
    Ok(Compilation { net, warnings })
}

/// Every clashing (variable, total context) pair, each listed once. Empty iff
/// [`compile`] would not report conflicts.
pub fn detect_conflicts(norms: &NormSet) -> Vec<ConflictReport> {
    let mut out = Vec::new();
    for var in 0..norms.atoms().len() {
        let ps = parent_indices(norms, var);
        if ps.len() > MAX_PARENTS {
            continue;
        }
        out.extend(expand_variable(norms, var, &ps).1);
    }
    out
}

/// Rows of `variable` over all total contexts of its parents (the union of
/// condition atoms of the obligations and liberties targeting it).
pub fn expand_contexts(norms: &NormSet, variable: &Atom) -> Result<Vec<CompiledRow>, Vec<ConflictReport>> {
    let Some(var) = norms.atom_index(variable) else {
        return Ok(Vec::new());
    };
    let ps = parent_indices(norms, var);
    let (rows, conflicts) = expand_variable(norms, var, &ps);
    if conflicts.is_empty() {
        Ok(rows)
    } else {
        Err(conflicts)
    }
}

fn shapes_net(kind: NormKind) -> bool {
    matches!(kind, NormKind::Obligation | NormKind::Liberty)
}

/// Parent variable indices of `var`, in atom order.
fn parent_indices(norms: &NormSet, var: usize) -> Vec<usize> {
    let target = &norms.atoms()[var];
    let mut ps: Vec<usize> = norms
        .norms()
        .iter()
        .filter(|n| shapes_net(n.kind) && &n.consequent.atom == target)
        .flat_map(|n| n.condition.atoms())
        .map(|a| norms.atom_index(a).expect("norm atoms are registered"))
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

fn expand_variable(norms: &NormSet, var: usize, parents: &[usize]) -> (Vec<CompiledRow>, Vec<ConflictReport>) {
    let atoms = norms.atoms();
    let target = &atoms[var];
    let relevant: Vec<(usize, CptRowKind, &Condition)> = norms
        .norms()
        .iter()
        .enumerate()
        .filter(|(_, n)| shapes_net(n.kind) && &n.consequent.atom == target)
        .map(|(i, n)| {
            let kind = match n.kind {
                NormKind::Obligation => CptRowKind::Strict { preferred: n.consequent.positive },
                _ => CptRowKind::Indifferent,
            };
            (i, kind, &n.condition)
        })
        .collect();

    let mut rows = Vec::with_capacity(1 << parents.len());
    let mut conflicts = Vec::new();
    for index in 0..1usize << parents.len() {
        let context = context_condition(atoms, parents, index);
        let covering: Vec<&(usize, CptRowKind, &Condition)> =
            relevant.iter().filter(|(_, _, cond)| context.is_consistent_with(cond)).collect();
        let provenance: Vec<usize> = covering.iter().map(|(i, _, _)| *i).collect();
        let kind = match covering.first() {
            None => CptRowKind::Absent,
            Some((_, first, _)) if covering.iter().all(|(_, k, _)| k == first) => *first,
            Some(_) => {
                let has = |p| covering.iter().any(|(_, k, _)| *k == CptRowKind::Strict { preferred: p });
                let nature = if has(true) && has(false) {
                    ConflictNature::OppositeStrictOrders
                } else {
                    ConflictNature::StrictVersusIndifferent
                };
                conflicts.push(ConflictReport {
                    variable: target.clone(),
                    context: context.clone(),
                    norms: provenance.clone(),
                    nature,
                });
                CptRowKind::Absent
            }
        };
        let provenance = if kind == CptRowKind::Absent { Vec::new() } else { provenance };
        rows.push(CompiledRow { variable: target.clone(), context, kind, provenance });
    }
    (rows, conflicts)
}

fn permission_warnings(norms: &NormSet, net: &CpNet) -> Vec<CompileWarning> {
    let mut out = Vec::new();
    for (i, norm) in norms.norms().iter().enumerate() {
        if norm.kind != NormKind::Permission {
            continue;
        }
        let var = net.index_of(&norm.consequent.atom).expect("atom is a variable");
        let mut unbacked = false;
        let mut contradicted = Vec::new();
        for row in net.rows(var).iter().filter(|r| r.context.is_consistent_with(&norm.condition)) {
            match row.kind {
                CptRowKind::Strict { preferred } if preferred != norm.consequent.positive => {
                    contradicted.push(row.context.clone())
                }
                CptRowKind::Absent => unbacked = true,
                _ => {}
            }
        }
        if !contradicted.is_empty() {
            out.push(CompileWarning::ContradictedPermission { norm: i, rows: contradicted });
        } else if unbacked {
            out.push(CompileWarning::UnimpliedPermission { norm: i });
        }
    }
    out
}
