//! Deontic queries: dominance, consistency, norm satisfaction, permission
//! status and contrary-to-duty detection.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::compiler::{compile, CompileError};
use crate::cpnet::{CpNet, CptRowKind, FlipVerdict, Outcome, OutcomeError};
use crate::norm_lang::{Atom, Condition, Literal, Norm, NormKind, NormSet};
use crate::preorder::{up_neighbours, BuildOptions, Comparison, PreferenceGraph, PreorderError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error(transparent)]
    Outcome(#[from] OutcomeError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Preorder(#[from] PreorderError),
    #[error("unknown atom `{0}`")]
    UnknownAtom(Atom),
    #[error("context mentions `{atom}`, which is not a parent of `{variable}`")]
    NotAParent { atom: Atom, variable: Atom },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    /// The first outcome is strictly preferred to the second.
    Dominates,
    Dominated,
    Indifferent,
    Incomparable,
    Equal,
}

impl From<Comparison> for DominanceVerdict {
    fn from(c: Comparison) -> Self {
        match c {
            Comparison::Equal => DominanceVerdict::Equal,
            Comparison::Worse => DominanceVerdict::Dominated,
            Comparison::Better => DominanceVerdict::Dominates,
            Comparison::Indifferent => DominanceVerdict::Indifferent,
            Comparison::Incomparable => DominanceVerdict::Incomparable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceResult {
    pub verdict: DominanceVerdict,
    /// For strict verdicts: a flip sequence from the better outcome down to
    /// the worse one. Every step is worsening or indifferent, at least one is
    /// worsening.
    pub witness: Option<Vec<Outcome>>,
}

/// BFS predecessor map; dense for nets small enough to index every outcome.
enum Predecessors {
    Dense(Vec<u64>),
    Sparse(HashMap<u64, u64>),
}

impl Predecessors {
    const UNSEEN: u64 = u64::MAX;

    fn new(n: usize) -> Self {
        if n <= 20 {
            Predecessors::Dense(vec![Self::UNSEEN; 1 << n])
        } else {
            Predecessors::Sparse(HashMap::new())
        }
    }

    fn get(&self, o: Outcome) -> Option<u64> {
        match self {
            Predecessors::Dense(v) => Some(v[o.index()]).filter(|&p| p != Self::UNSEEN),
            Predecessors::Sparse(m) => m.get(&o.bits()).copied(),
        }
    }

    fn insert(&mut self, o: Outcome, prev: Outcome) {
        match self {
            Predecessors::Dense(v) => v[o.index()] = prev.bits(),
            Predecessors::Sparse(m) => {
                m.insert(o.bits(), prev.bits());
            }
        }
    }
}

/// Shortest sequence of improving-or-indifferent flips from `from` to `to`.
fn improving_path(net: &CpNet, from: Outcome, to: Outcome) -> Option<Vec<Outcome>> {
    if from == to {
        return Some(vec![from]);
    }
    let n = net.len();
    let mut prev = Predecessors::new(n);
    prev.insert(from, from);
    let mut queue = VecDeque::from([from]);
    while let Some(o) = queue.pop_front() {
        for u in up_neighbours(net, o) {
            if prev.get(u).is_some() {
                continue;
            }
            prev.insert(u, o);
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = Outcome::new(prev.get(cur).expect("visited"), n);
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(u);
        }
    }
    None
}

/// Decides the relation between `o` and `u` by searching flip sequences in
/// the net directly, without materialising the preorder.
pub fn dominance(net: &CpNet, o: Outcome, u: Outcome) -> Result<DominanceResult, ReasonerError> {
    for x in [o, u] {
        if x.len() != net.len() {
            return Err(OutcomeError::WrongLength { expected: net.len(), found: x.len() }.into());
        }
    }
    if o == u {
        return Ok(DominanceResult { verdict: DominanceVerdict::Equal, witness: None });
    }
    let up = improving_path(net, o, u);
    let down = improving_path(net, u, o);
    Ok(match (up, down) {
        (Some(_), Some(_)) => DominanceResult { verdict: DominanceVerdict::Indifferent, witness: None },
        (Some(mut path), None) => {
            path.reverse();
            DominanceResult { verdict: DominanceVerdict::Dominated, witness: Some(path) }
        }
        (None, Some(mut path)) => {
            path.reverse();
            DominanceResult { verdict: DominanceVerdict::Dominates, witness: Some(path) }
        }
        (None, None) => DominanceResult { verdict: DominanceVerdict::Incomparable, witness: None },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// A closed walk of improving-or-indifferent flips that contains a strict
    /// improvement: each outcome flips to the next and the last back to the
    /// first. Strict-only loops are preferred when one exists.
    pub witness_cycle: Option<Vec<Outcome>>,
}

pub fn consistent(net: &CpNet, options: BuildOptions) -> Result<ConsistencyReport, ReasonerError> {
    let graph = PreferenceGraph::build_with(net, options)?;
    Ok(consistency_of(&graph))
}

pub fn consistency_of(graph: &PreferenceGraph) -> ConsistencyReport {
    let collapsed = graph.strict_flips_in_cycles();
    if collapsed.is_empty() {
        return ConsistencyReport { consistent: true, witness_cycle: None };
    }
    let net = graph.net();
    let strict_up = |o: Outcome| net.flips_where(o, |v| v == FlipVerdict::Worse);
    let via_strict = collapsed.iter().find_map(|&(worse, better)| {
        bfs(better, worse, &strict_up).map(|path| (worse, path))
    });
    let (worse, path) = via_strict.unwrap_or_else(|| {
        let (worse, better) = collapsed[0];
        let path = improving_path(net, better, worse).expect("better reaches worse in the closure");
        (worse, path)
    });
    // path runs better .. worse; the cycle is worse -> better -> ... -> (back to worse).
    let mut cycle = vec![worse];
    cycle.extend(path.into_iter().take_while(|&x| x != worse));
    ConsistencyReport { consistent: false, witness_cycle: Some(cycle) }
}

fn bfs(from: Outcome, to: Outcome, next: &dyn Fn(Outcome) -> Vec<Outcome>) -> Option<Vec<Outcome>> {
    let mut prev = std::collections::HashMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, from);
    while let Some(o) = queue.pop_front() {
        if o == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for u in next(o) {
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(u) {
                e.insert(o);
                queue.push_back(u);
            }
        }
    }
    None
}

/// A preorder over the outcomes of some atoms.
pub trait PreferenceModel {
    fn atoms(&self) -> &[Atom];
    /// `worse ⪯ better`.
    fn weakly_prefers(&self, worse: Outcome, better: Outcome) -> bool;

    fn strictly_prefers(&self, worse: Outcome, better: Outcome) -> bool {
        self.weakly_prefers(worse, better) && !self.weakly_prefers(better, worse)
    }
}

impl PreferenceModel for PreferenceGraph {
    fn atoms(&self) -> &[Atom] {
        self.net().variables()
    }

    fn weakly_prefers(&self, worse: Outcome, better: Outcome) -> bool {
        self.leq(worse, better)
    }
}

/// A preorder given by generating pairs, closed reflexively and transitively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitPreorder {
    atoms: Vec<Atom>,
    leq: Vec<Vec<bool>>,
}

impl ExplicitPreorder {
    /// Each `(worse, better)` pair asserts `worse ⪯ better`.
    pub fn from_pairs(atoms: Vec<Atom>, pairs: &[(Outcome, Outcome)]) -> Result<Self, OutcomeError> {
        let n = atoms.len();
        let size = 1usize << n;
        let mut leq = vec![vec![false; size]; size];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(w, b) in pairs {
            for x in [w, b] {
                if x.len() != n {
                    return Err(OutcomeError::WrongLength { expected: n, found: x.len() });
                }
            }
            leq[w.index()][b.index()] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if leq[i][k] {
                    for j in 0..size {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(ExplicitPreorder { atoms, leq })
    }
}

impl PreferenceModel for ExplicitPreorder {
    fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn weakly_prefers(&self, worse: Outcome, better: Outcome) -> bool {
        self.leq[worse.index()][better.index()]
    }
}

/// A ceteris-paribus pair that violates a norm: `violating` satisfies the
/// negated consequent, `complying` the consequent, and they differ only there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counterexample {
    pub complying: Outcome,
    pub violating: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatisfactionReport {
    pub norm: Norm,
    pub satisfied: bool,
    pub counterexample: Option<Counterexample>,
}

/// Checks one norm against a model. For every pair of outcomes satisfying
/// the condition and differing only in the consequent's variable, with `u`
/// making the consequent true and `v` false:
///
/// * obligation: `v ≺ u`;
/// * permission: not `u ≺ v`;
/// * liberty: neither `u ≺ v` nor `v ≺ u`.
pub fn check_norm<M: PreferenceModel + ?Sized>(model: &M, norm: &Norm) -> Result<SatisfactionReport, ReasonerError> {
    let atoms = model.atoms();
    let index = |a: &Atom| atoms.iter().position(|x| x == a).ok_or_else(|| ReasonerError::UnknownAtom(a.clone()));
    let var = index(&norm.consequent.atom)?;
    let cond: Vec<(usize, bool)> =
        norm.condition.literals().iter().map(|l| index(&l.atom).map(|i| (i, l.positive))).collect::<Result<_, _>>()?;
    let n = atoms.len();
    for bits in 0..1u64 << n {
        let u = Outcome::new(bits, n);
        if u.value(var) != norm.consequent.positive || !cond.iter().all(|&(i, p)| u.value(i) == p) {
            continue;
        }
        let v = u.flipped(var);
        let ok = match norm.kind {
            NormKind::Obligation => model.strictly_prefers(v, u),
            NormKind::Permission => !model.strictly_prefers(u, v),
            NormKind::Liberty => !model.strictly_prefers(u, v) && !model.strictly_prefers(v, u),
        };
        if !ok {
            return Ok(SatisfactionReport {
                norm: norm.clone(),
                satisfied: false,
                counterexample: Some(Counterexample { complying: u, violating: v }),
            });
        }
    }
    Ok(SatisfactionReport { norm: norm.clone(), satisfied: true, counterexample: None })
}

#[derive(Debug, Clone)]
pub struct SatisfactionRun {
    pub graph: PreferenceGraph,
    pub reports: Vec<SatisfactionReport>,
}

impl SatisfactionRun {
    pub fn all_satisfied(&self) -> bool {
        self.reports.iter().all(|r| r.satisfied)
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &SatisfactionReport)> {
        self.reports.iter().enumerate().filter(|(_, r)| !r.satisfied)
    }
}

/// Compiles the norms, builds the induced preorder and checks every norm
/// against it.
pub fn check_norms(norms: &NormSet, options: BuildOptions) -> Result<SatisfactionRun, ReasonerError> {
    let net = compile(norms)?;
    let graph = PreferenceGraph::build_with(&net, options)?;
    let reports = norms.norms().iter().map(|n| check_norm(&graph, n)).collect::<Result<_, _>>()?;
    Ok(SatisfactionRun { graph, reports })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PermissionStatus {
    Obligatory,
    Forbidden,
    /// Explicitly permitted both ways (an indifferent row).
    StronglyPermittedBilateral,
    /// Unregulated (no row).
    WeaklyPermitted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermissionReport {
    pub literal: Literal,
    pub context: Condition,
    /// Status per total parent context extending `context`.
    pub breakdown: Vec<(Condition, PermissionStatus)>,
}

impl PermissionReport {
    /// The status when every context agrees.
    pub fn uniform(&self) -> Option<PermissionStatus> {
        let first = self.breakdown.first()?.1;
        self.breakdown.iter().all(|(_, s)| *s == first).then_some(first)
    }
}

pub fn permission_status(net: &CpNet, literal: &Literal, context: &Condition) -> Result<PermissionReport, ReasonerError> {
    let var = net.index_of(&literal.atom).ok_or_else(|| ReasonerError::UnknownAtom(literal.atom.clone()))?;
    let parents = net.parents(var);
    for atom in context.atoms() {
        let idx = net.index_of(atom).ok_or_else(|| ReasonerError::UnknownAtom(atom.clone()))?;
        if !parents.contains(&idx) {
            return Err(ReasonerError::NotAParent { atom: atom.clone(), variable: literal.atom.clone() });
        }
    }
    let breakdown = net
        .rows(var)
        .iter()
        .filter(|row| row.context.is_consistent_with(context))
        .map(|row| {
            let status = match row.kind {
                CptRowKind::Strict { preferred } if preferred == literal.positive => PermissionStatus::Obligatory,
                CptRowKind::Strict { .. } => PermissionStatus::Forbidden,
                CptRowKind::Indifferent => PermissionStatus::StronglyPermittedBilateral,
                CptRowKind::Absent => PermissionStatus::WeaklyPermitted,
            };
            (row.context.clone(), status)
        })
        .collect();
    Ok(PermissionReport { literal: literal.clone(), context: context.clone(), breakdown })
}

/// An obligation triggered by violating another one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CtdPair {
    pub primary_index: usize,
    pub secondary_index: usize,
    pub primary: Norm,
    pub secondary: Norm,
    /// The negation of the primary's consequent, found in the secondary's condition.
    pub violation: Literal,
}

/// All ordered pairs of obligations `(primary, secondary)` where the
/// secondary's condition contains the negated consequent of the primary and
/// both conditions are jointly satisfiable.
pub fn ctd_pairs(norms: &NormSet) -> Vec<CtdPair> {
    let obligations: Vec<(usize, &Norm)> =
        norms.norms().iter().enumerate().filter(|(_, n)| n.kind == NormKind::Obligation).collect();
    let mut out = Vec::new();
    for &(i, primary) in &obligations {
        let violation = primary.consequent.negate();
        for &(j, secondary) in &obligations {
            if i != j
                && secondary.condition.contains(&violation)
                && primary.condition.is_consistent_with(&secondary.condition)
            {
                out.push(CtdPair {
                    primary_index: i,
                    secondary_index: j,
                    primary: primary.clone(),
                    secondary: secondary.clone(),
                    violation: violation.clone(),
                });
            }
        }
    }
    out
}
