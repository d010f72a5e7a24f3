//! Reference implementations used to cross-check the library. They share no
//! code with it beyond the net's public tables: the flip relation is rebuilt
//! by matching row contexts literally, and the closure is Floyd–Warshall over
//! a dense boolean matrix.

#![allow(dead_code)]

use normnet::cpnet::CptRowKind;
use normnet::norm_lang::{Atom, Norm, NormKind};
use normnet::{CpNet, DominanceVerdict, Outcome};
use rand::seq::SliceRandom;
use rand::Rng;

/// The row of `var` whose context `o` satisfies, found by linear search.
pub fn matching_row(net: &CpNet, var: usize, o: u64) -> CptRowKind {
    let names = net.variables();
    let holds = |atom: &Atom, positive: bool| {
        let i = names.iter().position(|a| a == atom).expect("context atom is a variable");
        (o >> i & 1 == 1) == positive
    };
    let rows: Vec<_> = net
        .rows(var)
        .iter()
        .filter(|r| r.context.literals().iter().all(|l| holds(&l.atom, l.positive)))
        .collect();
    assert_eq!(rows.len(), 1, "exactly one row applies to every outcome");
    rows[0].kind
}

pub struct Oracle {
    pub n: usize,
    /// `leq[o][u]` iff `o ⪯ u`.
    pub leq: Vec<Vec<bool>>,
    /// `(worse, better)` for every strict single flip.
    pub strict: Vec<(usize, usize)>,
}

impl Oracle {
    pub fn new(net: &CpNet) -> Self {
        let n = net.len();
        let size = 1usize << n;
        let mut leq = vec![vec![false; size]; size];
        let mut strict = Vec::new();
        for (o, row) in leq.iter_mut().enumerate() {
            row[o] = true;
        }
        for lo in 0..size {
            for var in 0..n {
                if lo >> var & 1 == 1 {
                    continue;
                }
                let hi = lo | 1 << var;
                // Both endpoints share the parent values, so either works.
                match matching_row(net, var, lo as u64) {
                    CptRowKind::Strict { preferred: true } => {
                        leq[lo][hi] = true;
                        strict.push((lo, hi));
                    }
                    CptRowKind::Strict { preferred: false } => {
                        leq[hi][lo] = true;
                        strict.push((hi, lo));
                    }
                    CptRowKind::Indifferent => {
                        leq[lo][hi] = true;
                        leq[hi][lo] = true;
                    }
                    CptRowKind::Absent => {}
                }
            }
        }
        for k in 0..size {
            for i in 0..size {
                if !leq[i][k] {
                    continue;
                }
                for j in 0..size {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Oracle { n, leq, strict }
    }

    pub fn strictly_below(&self, o: usize, u: usize) -> bool {
        self.leq[o][u] && !self.leq[u][o]
    }

    pub fn verdict(&self, o: usize, u: usize) -> DominanceVerdict {
        match (o == u, self.leq[o][u], self.leq[u][o]) {
            (true, _, _) => DominanceVerdict::Equal,
            (false, true, true) => DominanceVerdict::Indifferent,
            (false, false, true) => DominanceVerdict::Dominates,
            (false, true, false) => DominanceVerdict::Dominated,
            (false, false, false) => DominanceVerdict::Incomparable,
        }
    }

    /// Some outcome strictly below itself.
    pub fn inconsistent(&self) -> bool {
        self.strict.iter().any(|&(w, b)| self.leq[b][w])
    }

    pub fn maximal(&self) -> Vec<usize> {
        let size = 1usize << self.n;
        (0..size).filter(|&o| (0..size).all(|u| !self.strictly_below(o, u))).collect()
    }

    /// Satisfaction of one norm, written out from the definition.
    pub fn satisfies(&self, atoms: &[Atom], norm: &Norm) -> bool {
        let idx = |a: &Atom| atoms.iter().position(|x| x == a).unwrap();
        let var = idx(&norm.consequent.atom);
        for u in 0..1usize << self.n {
            let u_true = (u >> var & 1 == 1) == norm.consequent.positive;
            let cond = norm.condition.literals().iter().all(|l| (u >> idx(&l.atom) & 1 == 1) == l.positive);
            if !u_true || !cond {
                continue;
            }
            let v = u ^ 1 << var;
            let ok = match norm.kind {
                NormKind::Obligation => self.strictly_below(v, u),
                NormKind::Permission => !self.strictly_below(u, v),
                NormKind::Liberty => !self.strictly_below(u, v) && !self.strictly_below(v, u),
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

pub fn names(n: usize) -> Vec<Atom> {
    (0..n).map(|i| Atom::new(format!("x{i}")).unwrap()).collect()
}

pub fn random_kind<R: Rng>(rng: &mut R, indifference: bool) -> CptRowKind {
    let roll = rng.gen_range(0..if indifference { 4 } else { 3 });
    match roll {
        0 => CptRowKind::Strict { preferred: true },
        1 => CptRowKind::Strict { preferred: false },
        2 => CptRowKind::Absent,
        _ => CptRowKind::Indifferent,
    }
}

/// A random net with up to `max_parents` parents per variable; cycles allowed.
pub fn random_net<R: Rng>(rng: &mut R, n: usize, max_parents: usize) -> CpNet {
    let tables = (0..n)
        .map(|v| {
            let mut others: Vec<usize> = (0..n).filter(|&p| p != v).collect();
            others.shuffle(rng);
            let k = rng.gen_range(0..=max_parents.min(others.len()));
            let mut ps: Vec<usize> = others[..k].to_vec();
            ps.sort_unstable();
            let kinds = (0..1usize << k).map(|_| random_kind(rng, true)).collect();
            (ps, kinds)
        })
        .collect();
    CpNet::from_tables(names(n), tables).unwrap()
}

/// A random net whose dependency graph follows a random topological order.
/// `indifferent(v, has_children)` decides whether rows of `v` may be
/// indifferent.
pub fn random_acyclic_net<R: Rng>(
    rng: &mut R,
    n: usize,
    max_parents: usize,
    indifferent: impl Fn(bool) -> bool,
) -> CpNet {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (pos, &v) in order.iter().enumerate() {
        let mut earlier = order[..pos].to_vec();
        earlier.shuffle(rng);
        let k = rng.gen_range(0..=max_parents.min(earlier.len()));
        let mut ps = earlier[..k].to_vec();
        ps.sort_unstable();
        parents[v] = ps;
    }
    let has_children: Vec<bool> = (0..n).map(|v| parents.iter().any(|ps| ps.contains(&v))).collect();
    let tables = (0..n)
        .map(|v| {
            let allow = indifferent(has_children[v]);
            let kinds = (0..1usize << parents[v].len()).map(|_| random_kind(rng, allow)).collect();
            (parents[v].clone(), kinds)
        })
        .collect();
    CpNet::from_tables(names(n), tables).unwrap()
}

pub fn outcome(net: &CpNet, bits: usize) -> Outcome {
    Outcome::new(bits as u64, net.len())
}
