//! CP-nets with indifference over binary variables, and the single-flip
//! ceteris-paribus comparison they induce.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::norm_lang::{Atom, Condition, Literal};

/// Upper bound on the number of variables; outcomes are packed into a `u64`.
pub const MAX_VARIABLES: usize = 64;
/// Upper bound on the parents of a single variable (CPTs are dense).
pub const MAX_PARENTS: usize = 20;

/// The order a CPT row imposes on a variable's two values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CptRowKind {
    /// `preferred` is the better value (`true` for `x`, `false` for `not x`).
    Strict { preferred: bool },
    Indifferent,
    /// No statement: flips of this variable in this context are incomparable.
    Absent,
}

/// One CPT row: the order over `variable` given a total parent assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompiledRow {
    pub variable: Atom,
    /// Assigns every parent exactly once, in parent order.
    pub context: Condition,
    #[serde(flatten)]
    pub kind: CptRowKind,
    /// Indices of the norms that produced this row. Empty for `Absent` rows
    /// and for hand-built nets.
    pub provenance: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("variable `{0}` is listed twice")]
    DuplicateVariable(Atom),
    #[error("{0} variables exceed the limit of {MAX_VARIABLES}")]
    TooManyVariables(usize),
    #[error("variable `{variable}` has {count} parents, the limit is {MAX_PARENTS}")]
    TooManyParents { variable: Atom, count: usize },
    #[error("variable `{0}` lists itself as a parent")]
    SelfLoop(Atom),
    #[error("variable `{0}` lists a parent twice")]
    DuplicateEdge(Atom),
    #[error("parents of `{0}` must be listed in ascending variable order")]
    UnsortedParents(Atom),
    #[error("parent index {index} of `{variable}` is out of range")]
    UnknownParent { variable: Atom, index: usize },
    #[error("variable `{variable}` needs {expected} rows, got {found}")]
    RowCount { variable: Atom, expected: usize, found: usize },
    #[error("row {row} of `{variable}` has a context that does not match its parents")]
    ContextMismatch { variable: Atom, row: usize },
    #[error("expected one table per variable: {expected} variables, {found} tables")]
    TableCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OutcomeError {
    #[error("outcome has {found} variables, the net has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("unknown variable `{0}`")]
    UnknownAtom(Atom),
    #[error("variable `{0}` is assigned twice")]
    AssignedTwice(Atom),
    #[error("variable `{0}` is not assigned")]
    Unassigned(Atom),
}

/// A total assignment to the net's variables. Bit `i` is set iff variable `i`
/// takes its positive value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Outcome {
    bits: u64,
    len: u8,
}

impl Outcome {
    /// # Panics
    /// If `len > 64` or `bits` has bits set at or above `len`.
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= MAX_VARIABLES, "outcome length {len} too large");
        assert!(len == 64 || bits >> len == 0, "bits beyond outcome length");
        Outcome { bits, len: len as u8 }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Position of this outcome in the enumeration `0..2^len`.
    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn value(self, var: usize) -> bool {
        self.bits >> var & 1 == 1
    }

    pub fn with_value(self, var: usize, value: bool) -> Self {
        let bits = if value { self.bits | 1 << var } else { self.bits & !(1 << var) };
        Outcome { bits, len: self.len }
    }

    pub fn flipped(self, var: usize) -> Self {
        Outcome { bits: self.bits ^ 1 << var, len: self.len }
    }

    pub fn hamming(self, other: Outcome) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

/// Result of comparing two outcomes that differ in a single variable, from
/// the point of view of the first outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipVerdict {
    /// The first outcome is strictly preferred.
    Better,
    Worse,
    Indifferent,
    Incomparable,
}

impl FlipVerdict {
    pub fn reversed(self) -> Self {
        match self {
            FlipVerdict::Better => FlipVerdict::Worse,
            FlipVerdict::Worse => FlipVerdict::Better,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CpNet {
    variables: Vec<Atom>,
    parents: Vec<Vec<usize>>,
    cpt: Vec<Vec<CompiledRow>>,
}

impl CpNet {
    /// Builds a net from explicit rows. `parents[v]` must be sorted ascending
    /// and `rows[v][i]` must describe the context whose bit `j` is the value of
    /// `parents[v][j]`.
    pub fn from_rows(
        variables: Vec<Atom>,
        parents: Vec<Vec<usize>>,
        rows: Vec<Vec<CompiledRow>>,
    ) -> Result<Self, NetError> {
        let n = variables.len();
        if n > MAX_VARIABLES {
            return Err(NetError::TooManyVariables(n));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(NetError::DuplicateVariable(v.clone()));
            }
        }
        if parents.len() != n || rows.len() != n {
            return Err(NetError::TableCount { expected: n, found: parents.len().min(rows.len()) });
        }
        for (v, ps) in parents.iter().enumerate() {
            let name = &variables[v];
            if ps.len() > MAX_PARENTS {
                return Err(NetError::TooManyParents { variable: name.clone(), count: ps.len() });
            }
            for (j, &p) in ps.iter().enumerate() {
                if p >= n {
                    return Err(NetError::UnknownParent { variable: name.clone(), index: p });
                }
                if p == v {
                    return Err(NetError::SelfLoop(name.clone()));
                }
                if ps[..j].contains(&p) {
                    return Err(NetError::DuplicateEdge(name.clone()));
                }
            }
            if ps.windows(2).any(|w| w[0] > w[1]) {
                return Err(NetError::UnsortedParents(name.clone()));
            }
            let expected = 1usize << ps.len();
            if rows[v].len() != expected {
                return Err(NetError::RowCount { variable: name.clone(), expected, found: rows[v].len() });
            }
            for (i, row) in rows[v].iter().enumerate() {
                let want = context_condition(&variables, ps, i);
                if row.variable != *name || row.context != want {
                    return Err(NetError::ContextMismatch { variable: name.clone(), row: i });
                }
            }
        }
        Ok(CpNet { variables, parents, cpt: rows })
    }

    /// Convenience constructor from row kinds only; contexts are generated.
    pub fn from_tables(variables: Vec<Atom>, tables: Vec<(Vec<usize>, Vec<CptRowKind>)>) -> Result<Self, NetError> {
        if tables.len() != variables.len() {
            return Err(NetError::TableCount { expected: variables.len(), found: tables.len() });
        }
        let mut parents = Vec::with_capacity(tables.len());
        let mut rows = Vec::with_capacity(tables.len());
        for (v, (mut ps, kinds)) in tables.into_iter().enumerate() {
            let malformed =
                ps.iter().enumerate().any(|(j, &p)| p >= variables.len() || ps[..j].contains(&p));
            if malformed {
                // Let `from_rows` report the precise problem.
                rows.push(Vec::new());
                parents.push(ps);
                continue;
            }
            // Reorder rows if the caller listed parents out of order.
            let mut order: Vec<usize> = (0..ps.len()).collect();
            order.sort_by_key(|&j| ps[j]);
            let sorted: Vec<usize> = order.iter().map(|&j| ps[j]).collect();
            if sorted != ps && kinds.len() == 1 << ps.len() {
                let kinds_sorted: Vec<CptRowKind> = (0..kinds.len())
                    .map(|i| {
                        let mut orig = 0usize;
                        for (new_j, &old_j) in order.iter().enumerate() {
                            if i >> new_j & 1 == 1 {
                                orig |= 1 << old_j;
                            }
                        }
                        kinds[orig]
                    })
                    .collect();
                ps = sorted;
                rows.push(make_rows(&variables, v, &ps, kinds_sorted));
            } else {
                rows.push(make_rows(&variables, v, &ps, kinds));
            }
            parents.push(ps);
        }
        CpNet::from_rows(variables, parents, rows)
    }

    pub fn variables(&self) -> &[Atom] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.variables.iter().position(|a| a == atom)
    }

    pub fn parents(&self, var: usize) -> &[usize] {
        &self.parents[var]
    }

    pub fn rows(&self, var: usize) -> &[CompiledRow] {
        &self.cpt[var]
    }

    /// Dependency edges `(parent, child)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .parents
            .iter()
            .enumerate()
            .flat_map(|(child, ps)| ps.iter().map(move |&p| (p, child)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn has_children(&self, var: usize) -> bool {
        self.parents.iter().any(|ps| ps.contains(&var))
    }

    /// True iff every row of `var` is `Indifferent`.
    pub fn is_uniformly_indifferent(&self, var: usize) -> bool {
        self.cpt[var].iter().all(|r| r.kind == CptRowKind::Indifferent)
    }

    /// True iff `var` has no row other than `Absent`.
    pub fn is_unregulated(&self, var: usize) -> bool {
        self.cpt[var].iter().all(|r| r.kind == CptRowKind::Absent)
    }

    /// Number of outcomes, `2^n`. Only meaningful for small nets.
    pub fn outcome_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> {
        let n = self.len();
        (0..1u64 << n).map(move |b| Outcome::new(b, n))
    }

    pub fn context_index(&self, var: usize, o: Outcome) -> usize {
        self.parents[var]
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &p)| acc | (o.value(p) as usize) << j)
    }

    pub fn row_for(&self, var: usize, o: Outcome) -> &CompiledRow {
        &self.cpt[var][self.context_index(var, o)]
    }

    fn check(&self, o: Outcome) -> Result<(), OutcomeError> {
        if o.len() != self.len() {
            Err(OutcomeError::WrongLength { expected: self.len(), found: o.len() })
        } else {
            Ok(())
        }
    }

    /// Builds an outcome from literals; every variable must be assigned once.
    pub fn outcome_from_literals(&self, lits: &[Literal]) -> Result<Outcome, OutcomeError> {
        let mut bits = 0u64;
        let mut seen = 0u64;
        for lit in lits {
            let i = self.index_of(&lit.atom).ok_or_else(|| OutcomeError::UnknownAtom(lit.atom.clone()))?;
            if seen >> i & 1 == 1 {
                return Err(OutcomeError::AssignedTwice(lit.atom.clone()));
            }
            seen |= 1 << i;
            if lit.positive {
                bits |= 1 << i;
            }
        }
        if let Some(missing) = (0..self.len()).find(|&i| seen >> i & 1 == 0) {
            return Err(OutcomeError::Unassigned(self.variables[missing].clone()));
        }
        Ok(Outcome::new(bits, self.len()))
    }

    pub fn outcome_literals(&self, o: Outcome) -> Vec<Literal> {
        self.variables.iter().enumerate().map(|(i, a)| Literal::new(a.clone(), o.value(i))).collect()
    }

    /// Comma-separated literals in variable order, e.g. `c, not d, f`.
    pub fn format_outcome(&self, o: Outcome) -> String {
        self.outcome_literals(o).iter().map(Literal::to_string).collect::<Vec<_>>().join(", ")
    }

    /// Compares two outcomes that differ in exactly one variable by that
    /// variable's row under their shared parent context. Returns `None` when
    /// the outcomes are not a single flip apart.
    pub fn flip_compare(&self, o: Outcome, u: Outcome) -> Result<Option<FlipVerdict>, OutcomeError> {
        self.check(o)?;
        self.check(u)?;
        if o.hamming(u) != 1 {
            return Ok(None);
        }
        let var = (o.bits ^ u.bits).trailing_zeros() as usize;
        Ok(Some(self.flip_verdict(o, var)))
    }

    /// Verdict for `o` against `o` with `var` flipped.
    pub fn flip_verdict(&self, o: Outcome, var: usize) -> FlipVerdict {
        match self.row_for(var, o).kind {
            CptRowKind::Strict { preferred } => {
                if o.value(var) == preferred {
                    FlipVerdict::Better
                } else {
                    FlipVerdict::Worse
                }
            }
            CptRowKind::Indifferent => FlipVerdict::Indifferent,
            CptRowKind::Absent => FlipVerdict::Incomparable,
        }
    }

    /// All single flips from `o` to a strictly less preferred outcome.
    pub fn worsening_flips(&self, o: Outcome) -> Result<Vec<Outcome>, OutcomeError> {
        self.check(o)?;
        Ok(self.flips_where(o, |v| v == FlipVerdict::Better))
    }

    /// All single flips from `o` to a strictly more preferred outcome.
    pub fn improving_flips(&self, o: Outcome) -> Result<Vec<Outcome>, OutcomeError> {
        self.check(o)?;
        Ok(self.flips_where(o, |v| v == FlipVerdict::Worse))
    }

    pub(crate) fn flips_where(&self, o: Outcome, keep: impl Fn(FlipVerdict) -> bool) -> Vec<Outcome> {
        (0..self.len()).filter(|&v| keep(self.flip_verdict(o, v))).map(|v| o.flipped(v)).collect()
    }

    /// True iff the dependency digraph has no directed cycle.
    pub fn is_acyclic_dependency(&self) -> bool {
        // Kahn's algorithm on child -> parent counts.
        let n = self.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut children = vec![Vec::new(); n];
        for (c, ps) in self.parents.iter().enumerate() {
            for &p in ps {
                children[p].push(c);
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    stack.push(c);
                }
            }
        }
        seen == n
    }
}

pub(crate) fn context_condition(variables: &[Atom], parents: &[usize], index: usize) -> Condition {
    Condition::new(
        parents
            .iter()
            .enumerate()
            .map(|(j, &p)| Literal::new(variables[p].clone(), index >> j & 1 == 1)),
    )
    .expect("distinct parents give a consistent context")
}

fn make_rows(variables: &[Atom], var: usize, parents: &[usize], kinds: Vec<CptRowKind>) -> Vec<CompiledRow> {
    kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| CompiledRow {
            variable: variables[var].clone(),
            context: context_condition(variables, parents, i),
            kind,
            provenance: Vec::new(),
        })
        .collect()
}

impl fmt::Display for CpNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, name) in self.variables.iter().enumerate() {
            let parents: Vec<&str> = self.parents[v].iter().map(|&p| self.variables[p].as_str()).collect();
            if parents.is_empty() {
                writeln!(f, "{name}")?;
            } else {
                writeln!(f, "{name} <- {}", parents.join(", "))?;
            }
            if self.is_unregulated(v) {
                writeln!(f, "  (no preferences)")?;
                continue;
            }
            for row in &self.cpt[v] {
                let Some(order) = describe_row(name, row.kind) else { continue };
                if row.context.is_top() {
                    writeln!(f, "  {order}")?;
                } else {
                    writeln!(f, "  {}: {order}", row.context)?;
                }
            }
        }
        Ok(())
    }
}

/// `x > not x`, `x ~ not x`, or `None` for absent rows.
pub fn describe_row(name: &Atom, kind: CptRowKind) -> Option<String> {
    match kind {
        CptRowKind::Strict { preferred: true } => Some(format!("{name} > not {name}")),
        CptRowKind::Strict { preferred: false } => Some(format!("not {name} > {name}")),
        CptRowKind::Indifferent => Some(format!("{name} ~ not {name}")),
        CptRowKind::Absent => None,
    }
}
