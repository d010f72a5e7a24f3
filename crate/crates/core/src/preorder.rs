//! The preorder a CP-net induces over all `2^n` outcomes.
//!
//! Single flips are compared with [`CpNet::flip_compare`]; a strict flip
//! contributes the worse-to-better direction of `⪯`, an indifferent flip both
//! directions, and an incomparable flip nothing. The closure is the
//! reflexive-transitive closure of those flips, stored as one bitset row per
//! outcome (`row(o)` holds every `u` with `o ⪯ u`).

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cpnet::{CpNet, FlipVerdict, Outcome};

/// Default cap on the number of variables a graph may be built for.
pub const DEFAULT_CAP: usize = 14;
/// Above this many variables `Auto` switches from the matrix closure to
/// per-outcome search.
pub const MATRIX_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureStrategy {
    #[default]
    Auto,
    /// Warshall-style closure over the full bit matrix.
    Matrix,
    /// Graph search from every outcome, in parallel.
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub cap: usize,
    pub strategy: ClosureStrategy,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { cap: DEFAULT_CAP, strategy: ClosureStrategy::Auto }
    }
}

impl BuildOptions {
    pub fn with_cap(cap: usize) -> Self {
        BuildOptions { cap, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreorderError {
    #[error("{variables} variables exceed the cap of {cap} (raise it with --cap)")]
    CapExceeded { variables: usize, cap: usize },
}

/// A Hamming-distance-1 pair, `from` being the outcome with the flipped
/// variable unset. `verdict` is `flip_compare(from, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlipEdge {
    #[serde(skip)]
    pub from: Outcome,
    #[serde(skip)]
    pub to: Outcome,
    pub variable: usize,
    pub verdict: FlipVerdict,
}

/// Relation between two outcomes under the closure, read from the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    /// First strictly worse than second (`o ≺ u`).
    Worse,
    /// First strictly better (`u ≺ o`).
    Better,
    Indifferent,
    Incomparable,
}

impl Comparison {
    pub fn reversed(self) -> Self {
        match self {
            Comparison::Worse => Comparison::Better,
            Comparison::Better => Comparison::Worse,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IncomparabilityKind {
    /// Incomparable and in different weakly connected components.
    StronglyIncomparable,
    /// Incomparable within one weakly connected component.
    WeaklyIncomparable,
    /// Strictly ordered one way or the other.
    Comparable,
    /// Equal or indifferent.
    Equivalent,
}

/// How outcomes are grouped into nodes for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MergeMode {
    /// One node per outcome.
    Raw,
    /// Outcomes that differ only in variables indifferent under every parent
    /// context share a node.
    #[default]
    UniformlyIndifferentVariables,
    /// One node per `≈` class of the closure.
    IndifferenceClasses,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedEdge {
    /// For indifferent edges `better` and `worse` are just the two endpoints.
    pub better: usize,
    pub worse: usize,
    pub indifferent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedGraph {
    /// Members of each node, sorted. Nodes are ordered by their first member.
    pub nodes: Vec<Vec<Outcome>>,
    pub edges: Vec<MergedEdge>,
}

impl MergedGraph {
    pub fn node_of(&self, o: Outcome) -> Option<usize> {
        self.nodes.iter().position(|members| members.contains(&o))
    }

    pub fn has_edge(&self, better: usize, worse: usize, indifferent: bool) -> bool {
        self.edges.iter().any(|e| {
            e.indifferent == indifferent
                && ((e.better == better && e.worse == worse) || (indifferent && e.better == worse && e.worse == better))
        })
    }
}

#[derive(Debug, Clone)]
struct BitMatrix {
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    fn new(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        BitMatrix { words, data: vec![0; words * size] }
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    fn set(&mut self, row: usize, col: usize) {
        self.data[row * self.words + col / 64] |= 1 << (col % 64);
    }

    fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.words..(row + 1) * self.words]
    }
}

fn iter_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(w * 64 + b)
        })
    })
}

/// Outcomes reachable from `o` in one `⪯`-step (strictly better or indifferent).
pub(crate) fn up_neighbours(net: &CpNet, o: Outcome) -> impl Iterator<Item = Outcome> + '_ {
    (0..net.len())
        .filter(move |&v| matches!(net.flip_verdict(o, v), FlipVerdict::Worse | FlipVerdict::Indifferent))
        .map(move |v| o.flipped(v))
}

#[derive(Debug, Clone)]
pub struct PreferenceGraph {
    net: CpNet,
    edges: Vec<FlipEdge>,
    closure: BitMatrix,
    component: Vec<usize>,
}

impl PreferenceGraph {
    pub fn build(net: &CpNet) -> Result<Self, PreorderError> {
        Self::build_with(net, BuildOptions::default())
    }

    pub fn build_with(net: &CpNet, options: BuildOptions) -> Result<Self, PreorderError> {
        let n = net.len();
        if n > options.cap {
            return Err(PreorderError::CapExceeded { variables: n, cap: options.cap });
        }
        let size = 1usize << n;
        let mut edges = Vec::with_capacity(n * size / 2);
        for bits in 0..size as u64 {
            let from = Outcome::new(bits, n);
            for v in (0..n).filter(|&v| !from.value(v)) {
                edges.push(FlipEdge { from, to: from.flipped(v), variable: v, verdict: net.flip_verdict(from, v) });
            }
        }
        let strategy = match options.strategy {
            ClosureStrategy::Auto if n <= MATRIX_LIMIT => ClosureStrategy::Matrix,
            ClosureStrategy::Auto => ClosureStrategy::Search,
            s => s,
        };
        let closure = match strategy {
            ClosureStrategy::Matrix => matrix_closure(net, size),
            _ => search_closure(net, size),
        };
        let component = components_of(size, &edges);
        Ok(PreferenceGraph { net: net.clone(), edges, closure, component })
    }

    pub fn net(&self) -> &CpNet {
        &self.net
    }

    pub fn len(&self) -> usize {
        self.net.len()
    }

    pub fn is_empty(&self) -> bool {
        self.net.is_empty()
    }

    pub fn outcome_count(&self) -> usize {
        self.component.len()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> {
        self.net.outcomes()
    }

    pub fn flip_edges(&self) -> &[FlipEdge] {
        &self.edges
    }

    fn check(&self, o: Outcome) {
        assert_eq!(o.len(), self.len(), "outcome does not belong to this graph");
    }

    /// `o ⪯ u`: `u` is at least as good as `o`.
    pub fn leq(&self, o: Outcome, u: Outcome) -> bool {
        self.check(o);
        self.check(u);
        self.closure.get(o.index(), u.index())
    }

    /// Every `u` with `o ⪯ u`.
    pub fn at_least_as_good(&self, o: Outcome) -> impl Iterator<Item = Outcome> + '_ {
        self.check(o);
        let n = self.len();
        iter_bits(self.closure.row(o.index())).map(move |i| Outcome::new(i as u64, n))
    }

    pub fn compare(&self, o: Outcome, u: Outcome) -> Comparison {
        if o == u {
            self.check(o);
            return Comparison::Equal;
        }
        match (self.leq(o, u), self.leq(u, o)) {
            (true, true) => Comparison::Indifferent,
            (true, false) => Comparison::Worse,
            (false, true) => Comparison::Better,
            (false, false) => Comparison::Incomparable,
        }
    }

    pub fn component_of(&self, o: Outcome) -> usize {
        self.check(o);
        self.component[o.index()]
    }

    /// Weakly connected components of the flip graph (incomparable flips
    /// contribute no edge). Ordered by smallest member.
    pub fn weakly_connected_components(&self) -> Vec<Vec<Outcome>> {
        group_by_key(self.outcomes(), |o| self.component[o.index()])
    }

    pub fn classify_incomparability(&self, o: Outcome, u: Outcome) -> IncomparabilityKind {
        match self.compare(o, u) {
            Comparison::Equal | Comparison::Indifferent => IncomparabilityKind::Equivalent,
            Comparison::Worse | Comparison::Better => IncomparabilityKind::Comparable,
            Comparison::Incomparable if self.component_of(o) != self.component_of(u) => {
                IncomparabilityKind::StronglyIncomparable
            }
            Comparison::Incomparable => IncomparabilityKind::WeaklyIncomparable,
        }
    }

    /// Outcomes with no strictly better outcome.
    pub fn optimal_outcomes(&self) -> Vec<Outcome> {
        self.outcomes()
            .filter(|&o| self.at_least_as_good(o).all(|u| self.closure.get(u.index(), o.index())))
            .collect()
    }

    /// Strict flips `(worse, better)` whose endpoints are also `better ⪯ worse`,
    /// i.e. strict preferences swallowed by a cycle. Empty iff the net is
    /// consistent.
    pub fn strict_flips_in_cycles(&self) -> Vec<(Outcome, Outcome)> {
        self.edges
            .iter()
            .filter_map(|e| match e.verdict {
                FlipVerdict::Worse => Some((e.from, e.to)),
                FlipVerdict::Better => Some((e.to, e.from)),
                _ => None,
            })
            .filter(|&(worse, better)| self.closure.get(better.index(), worse.index()))
            .collect()
    }

    /// `≈` classes, ordered by smallest member.
    pub fn indifference_classes(&self) -> Vec<Vec<Outcome>> {
        let reps: Vec<usize> = self
            .outcomes()
            .map(|o| {
                self.at_least_as_good(o)
                    .find(|u| self.closure.get(u.index(), o.index()))
                    .map_or(o.index(), Outcome::index)
            })
            .collect();
        group_by_key(self.outcomes(), |o| reps[o.index()])
    }

    pub fn merged(&self, mode: MergeMode) -> MergedGraph {
        let key: Vec<usize> = match mode {
            MergeMode::Raw => (0..self.outcome_count()).collect(),
            MergeMode::UniformlyIndifferentVariables => {
                let mask = (0..self.len())
                    .filter(|&v| self.net.is_uniformly_indifferent(v))
                    .fold(0u64, |m, v| m | 1 << v);
                self.outcomes().map(|o| (o.bits() & !mask) as usize).collect()
            }
            MergeMode::IndifferenceClasses => {
                let mut key = vec![0; self.outcome_count()];
                for (i, class) in self.indifference_classes().iter().enumerate() {
                    for o in class {
                        key[o.index()] = i;
                    }
                }
                key
            }
        };
        let nodes = group_by_key(self.outcomes(), |o| key[o.index()]);
        let mut node_of = vec![0; self.outcome_count()];
        for (i, members) in nodes.iter().enumerate() {
            for o in members {
                node_of[o.index()] = i;
            }
        }
        let mut edges = BTreeSet::new();
        for e in &self.edges {
            let (a, b) = (node_of[e.from.index()], node_of[e.to.index()]);
            if a == b {
                continue;
            }
            match e.verdict {
                FlipVerdict::Better => edges.insert((a, b, false)),
                FlipVerdict::Worse => edges.insert((b, a, false)),
                FlipVerdict::Indifferent => edges.insert((a.min(b), a.max(b), true)),
                FlipVerdict::Incomparable => false,
            };
        }
        MergedGraph {
            nodes,
            edges: edges.into_iter().map(|(better, worse, indifferent)| MergedEdge { better, worse, indifferent }).collect(),
        }
    }
}

/// Groups outcomes by key, groups ordered by first appearance.
fn group_by_key(outcomes: impl Iterator<Item = Outcome>, key: impl Fn(Outcome) -> usize) -> Vec<Vec<Outcome>> {
    let mut slot: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut groups: Vec<Vec<Outcome>> = Vec::new();
    for o in outcomes {
        let k = key(o);
        let idx = *slot.entry(k).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[idx].push(o);
    }
    groups
}

fn matrix_closure(net: &CpNet, size: usize) -> BitMatrix {
    let n = net.len();
    let mut m = BitMatrix::new(size);
    for i in 0..size {
        let o = Outcome::new(i as u64, n);
        m.set(i, i);
        for u in up_neighbours(net, o) {
            m.set(i, u.index());
        }
    }
    let words = m.words;
    let mut pivot = vec![0u64; words];
    for k in 0..size {
        pivot.copy_from_slice(m.row(k));
        for i in 0..size {
            if m.get(i, k) {
                for (dst, src) in m.data[i * words..(i + 1) * words].iter_mut().zip(&pivot) {
                    *dst |= *src;
                }
            }
        }
    }
    m
}

fn search_closure(net: &CpNet, size: usize) -> BitMatrix {
    let n = net.len();
    let mut m = BitMatrix::new(size);
    let words = m.words;
    m.data.par_chunks_mut(words).enumerate().for_each(|(i, row)| {
        let start = Outcome::new(i as u64, n);
        row[i / 64] |= 1 << (i % 64);
        let mut stack = vec![start];
        while let Some(o) = stack.pop() {
            for u in up_neighbours(net, o) {
                let (w, b) = (u.index() / 64, u.index() % 64);
                if row[w] >> b & 1 == 0 {
                    row[w] |= 1 << b;
                    stack.push(u);
                }
            }
        }
    });
    m
}

fn components_of(size: usize, edges: &[FlipEdge]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges.iter().filter(|e| e.verdict != FlipVerdict::Incomparable) {
        let (a, b) = (find(&mut parent, e.from.index()), find(&mut parent, e.to.index()));
        if a != b {
            // Keep the smaller index as root so labels are canonical.
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    (0..size).map(|i| find(&mut parent, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpnet::tests::{atoms, ctd_net};
    use crate::cpnet::CptRowKind::{self, *};

    fn out(net: &CpNet, text: &str) -> Outcome {
        net.outcome_from_literals(&crate::norm_lang::parse_literal_list(text).unwrap()).unwrap()
    }

    fn absent_net(n: usize) -> CpNet {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        CpNet::from_tables(atoms(&names), (0..n).map(|_| (vec![], vec![Absent])).collect()).unwrap()
    }

    #[test]
    fn ctd_total_order() {
        let net = ctd_net();
        let g = PreferenceGraph::build(&net).unwrap();
        let chain = ["phi, not psi", "phi, psi", "not phi, psi", "not phi, not psi"].map(|t| out(&net, t));
        for i in 0..4 {
            for j in 0..4 {
                let want = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => Comparison::Equal,
                    std::cmp::Ordering::Less => Comparison::Better,
                    std::cmp::Ordering::Greater => Comparison::Worse,
                };
                assert_eq!(g.compare(chain[i], chain[j]), want, "{i} vs {j}");
            }
        }
        assert_eq!(g.weakly_connected_components().len(), 1);
        assert_eq!(g.optimal_outcomes(), vec![chain[0]]);
        assert!(g.strict_flips_in_cycles().is_empty());
    }

    #[test]
    fn all_absent_graph_is_identity() {
        let net = absent_net(2);
        let g = PreferenceGraph::build(&net).unwrap();
        assert_eq!(g.flip_edges().len(), 4);
        assert!(g.flip_edges().iter().all(|e| e.verdict == FlipVerdict::Incomparable));
        for o in g.outcomes() {
            for u in g.outcomes() {
                assert_eq!(g.leq(o, u), o == u);
            }
        }
        assert_eq!(g.optimal_outcomes().len(), 4);
        let g3 = PreferenceGraph::build(&absent_net(3)).unwrap();
        assert_eq!(g3.weakly_connected_components().len(), 8);
    }

    #[test]
    fn weak_incomparability() {
        // Independent a > not a and b > not b: a,not b and not a,b are unordered
        // but connected through the top and bottom outcomes.
        let net = CpNet::from_tables(
            atoms(&["a", "b"]),
            vec![(vec![], vec![Strict { preferred: true }]), (vec![], vec![Strict { preferred: true }])],
        )
        .unwrap();
        let g = PreferenceGraph::build(&net).unwrap();
        let x = out(&net, "a, not b");
        let y = out(&net, "not a, b");
        assert_eq!(g.compare(x, y), Comparison::Incomparable);
        assert_eq!(g.classify_incomparability(x, y), IncomparabilityKind::WeaklyIncomparable);
        assert_eq!(g.classify_incomparability(x, x), IncomparabilityKind::Equivalent);
        assert_eq!(g.classify_incomparability(x, out(&net, "a, b")), IncomparabilityKind::Comparable);
    }

    #[test]
    fn strong_incomparability_across_components() {
        let net = CpNet::from_tables(
            atoms(&["a", "b"]),
            vec![(vec![], vec![Strict { preferred: true }]), (vec![], vec![Absent])],
        )
        .unwrap();
        let g = PreferenceGraph::build(&net).unwrap();
        assert_eq!(g.weakly_connected_components().len(), 2);
        assert_eq!(
            g.classify_incomparability(out(&net, "a, b"), out(&net, "a, not b")),
            IncomparabilityKind::StronglyIncomparable
        );
    }

    #[test]
    fn cap_is_enforced() {
        let err = PreferenceGraph::build_with(&absent_net(3), BuildOptions::with_cap(2)).unwrap_err();
        assert_eq!(err, PreorderError::CapExceeded { variables: 3, cap: 2 });
    }

    #[test]
    fn cyclic_net_has_strict_flips_in_cycles() {
        // a | b: not a > a, not b: a > not a;  b | a: b > not b, not a: not b > b
        let s = |p| Strict { preferred: p };
        let net = CpNet::from_tables(
            atoms(&["a", "b"]),
            vec![(vec![1], vec![s(true), s(false)]), (vec![0], vec![s(false), s(true)])],
        )
        .unwrap();
        let g = PreferenceGraph::build(&net).unwrap();
        assert_eq!(g.strict_flips_in_cycles().len(), 4);
        assert_eq!(g.indifference_classes().len(), 1);
    }

    #[test]
    fn merge_modes() {
        let net = CpNet::from_tables(
            atoms(&["a", "b"]),
            vec![(vec![], vec![Indifferent]), (vec![], vec![Strict { preferred: true }])],
        )
        .unwrap();
        let g = PreferenceGraph::build(&net).unwrap();
        let m = g.merged(MergeMode::UniformlyIndifferentVariables);
        assert_eq!(m.nodes.len(), 2);
        assert_eq!(m.edges, vec![MergedEdge { better: 1, worse: 0, indifferent: false }]);
        let raw = g.merged(MergeMode::Raw);
        assert_eq!(raw.nodes.len(), 4);
        assert_eq!(raw.edges.iter().filter(|e| e.indifferent).count(), 2);
        assert_eq!(g.merged(MergeMode::IndifferenceClasses).nodes.len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_net() -> impl Strategy<Value = CpNet> {
            (1usize..=7).prop_flat_map(|n| {
                proptest::collection::vec((proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(0u8..4, 8)), n)
                    .prop_map(move |raw| {
                        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
                        let names: Vec<&str> = names.iter().map(String::as_str).collect();
                        let tables = raw
                            .into_iter()
                            .enumerate()
                            .map(|(v, (mask, kinds))| {
                                let ps: Vec<usize> = (0..n).filter(|&p| p != v && mask[p]).take(3).collect();
                                let rows: Vec<CptRowKind> = (0..1 << ps.len())
                                    .map(|i| match kinds[i] {
                                        0 => Strict { preferred: true },
                                        1 => Strict { preferred: false },
                                        2 => Indifferent,
                                        _ => Absent,
                                    })
                                    .collect();
                                (ps, rows)
                            })
                            .collect();
                        CpNet::from_tables(atoms(&names), tables).unwrap()
                    })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn closure_is_a_preorder(net in arb_net()) {
                let g = PreferenceGraph::build(&net).unwrap();
                let outs: Vec<Outcome> = g.outcomes().collect();
                for &a in &outs {
                    prop_assert!(g.leq(a, a));
                    for &b in &outs {
                        if !g.leq(a, b) { continue; }
                        for &c in &outs {
                            if g.leq(b, c) { prop_assert!(g.leq(a, c)); }
                        }
                    }
                }
            }

            #[test]
            fn strategies_agree(net in arb_net()) {
                let a = PreferenceGraph::build_with(&net, BuildOptions { cap: 14, strategy: ClosureStrategy::Matrix }).unwrap();
                let b = PreferenceGraph::build_with(&net, BuildOptions { cap: 14, strategy: ClosureStrategy::Search }).unwrap();
                for o in a.outcomes() {
                    for u in a.outcomes() {
                        prop_assert_eq!(a.leq(o, u), b.leq(o, u));
                    }
                }
            }

            #[test]
            fn edges_are_single_flips(net in arb_net()) {
                let g = PreferenceGraph::build(&net).unwrap();
                prop_assert_eq!(g.flip_edges().len(), net.len() << (net.len() - 1));
                for e in g.flip_edges() {
                    prop_assert_eq!(e.from.hamming(e.to), 1);
                    prop_assert_eq!(Some(e.verdict), net.flip_compare(e.from, e.to).unwrap());
                }
            }

            #[test]
            fn incomparability_matches_components(net in arb_net()) {
                let g = PreferenceGraph::build(&net).unwrap();
                for o in g.outcomes() {
                    for u in g.outcomes() {
                        let kind = g.classify_incomparability(o, u);
                        let same = g.component_of(o) == g.component_of(u);
                        match kind {
                            IncomparabilityKind::StronglyIncomparable => prop_assert!(!same),
                            IncomparabilityKind::WeaklyIncomparable => {
                                prop_assert!(same);
                                prop_assert_eq!(g.compare(o, u), Comparison::Incomparable);
                            }
                            _ => prop_assert!(same),
                        }
                    }
                }
            }

            #[test]
            fn indifference_is_equivalence_within_components(net in arb_net()) {
                let g = PreferenceGraph::build(&net).unwrap();
                let ind = |a, b| a == b || g.compare(a, b) == Comparison::Indifferent;
                for a in g.outcomes() {
                    for b in g.outcomes().filter(|&b| ind(a, b)) {
                        prop_assert!(ind(b, a));
                        prop_assert_eq!(g.component_of(a), g.component_of(b));
                        for c in g.outcomes().filter(|&c| ind(b, c)) {
                            prop_assert!(ind(a, c));
                        }
                    }
                }
            }

            #[test]
            fn consistency_iff_no_strict_self_preference(net in arb_net()) {
                // Strict part of the closure is irreflexive by construction; the
                // observable failure is a strict flip whose endpoints collapse.
                let g = PreferenceGraph::build(&net).unwrap();
                let collapsed = g.strict_flips_in_cycles();
                for (w, b) in &collapsed {
                    prop_assert_eq!(g.compare(*w, *b), Comparison::Indifferent);
                }
                let any_strict_collapsed = g.flip_edges().iter().any(|e| {
                    matches!(e.verdict, FlipVerdict::Better | FlipVerdict::Worse)
                        && g.compare(e.from, e.to) == Comparison::Indifferent
                });
                prop_assert_eq!(collapsed.is_empty(), !any_strict_collapsed);
            }
        }
    }
}
