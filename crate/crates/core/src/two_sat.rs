//! Implication-graph 2-SAT over the five bijunctive clause shapes, with
//! recovery of a contradiction cycle for the deletion branch-and-bound.

use crate::scc::tarjan_scc;

/// The five allowed 2-clause shapes over flat boolean variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `1 -> x`: x must be true.
    ForceTrue(usize),
    /// `x -> 0`: x must be false.
    ForceFalse(usize),
    /// `x -> y`.
    Imp(usize, usize),
    /// `x | y`.
    Or(usize, usize),
    /// `!x | !y`.
    Nand(usize, usize),
}

impl Clause {
    /// Implication arcs over literal nodes (`2v` positive, `2v+1` negative).
    pub fn arcs(self) -> [(usize, usize); 2] {
        let pos = |v: usize| 2 * v;
        let neg = |v: usize| 2 * v + 1;
        match self {
            Clause::ForceTrue(x) => [(neg(x), pos(x)), (neg(x), pos(x))],
            Clause::ForceFalse(x) => [(pos(x), neg(x)), (pos(x), neg(x))],
            Clause::Imp(x, y) => [(pos(x), pos(y)), (neg(y), neg(x))],
            Clause::Or(x, y) => [(neg(x), pos(y)), (neg(y), pos(x))],
            Clause::Nand(x, y) => [(pos(x), neg(y)), (pos(y), neg(x))],
        }
    }

    pub fn vars(self) -> [usize; 2] {
        match self {
            Clause::ForceTrue(x) | Clause::ForceFalse(x) => [x, x],
            Clause::Imp(x, y) | Clause::Or(x, y) | Clause::Nand(x, y) => [x, y],
        }
    }

    /// Evaluates the clause under a full assignment.
    pub fn satisfied(self, a: &[bool]) -> bool {
        match self {
            Clause::ForceTrue(x) => a[x],
            Clause::ForceFalse(x) => !a[x],
            Clause::Imp(x, y) => !a[x] || a[y],
            Clause::Or(x, y) => a[x] || a[y],
            Clause::Nand(x, y) => !(a[x] && a[y]),
        }
    }
}

pub enum TwoSatOutcome {
    Satisfiable(Vec<bool>),
    /// Arcs of one implication cycle `x => !x => x`, as literal-node pairs.
    Contradiction(Vec<(usize, usize)>),
}

/// Decides a conjunction of 2-clauses on `n_vars` variables. On success the
/// witness satisfies every clause; on failure one contradiction cycle is
/// returned for candidate extraction.
pub fn solve(n_vars: usize, clauses: &[Clause]) -> TwoSatOutcome {
    let n_nodes = 2 * n_vars;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
    for c in clauses {
        let [a, b] = c.arcs();
        adj[a.0].push(a.1);
        if b != a {
            adj[b.0].push(b.1);
        }
    }
    let (_, comp) = tarjan_scc(n_nodes, &adj);
    for v in 0..n_vars {
        if comp[2 * v] == comp[2 * v + 1] {
            let forward = bfs_path(&adj, 2 * v, 2 * v + 1);
            let backward = bfs_path(&adj, 2 * v + 1, 2 * v);
            let mut arcs = forward;
            arcs.extend(backward);
            return TwoSatOutcome::Contradiction(arcs);
        }
    }
    // Tarjan numbers components in completion order, so a component's id is
    // smaller than that of every component reaching it; setting x true when
    // its positive literal sits in the smaller component respects all arcs.
    let assignment = (0..n_vars).map(|v| comp[2 * v] < comp[2 * v + 1]).collect();
    TwoSatOutcome::Satisfiable(assignment)
}

/// Convenience wrapper returning just the witness.
pub fn two_sat_satisfiable(n_vars: usize, clauses: &[Clause]) -> Option<Vec<bool>> {
    match solve(n_vars, clauses) {
        TwoSatOutcome::Satisfiable(a) => Some(a),
        TwoSatOutcome::Contradiction(_) => None,
    }
}

fn bfs_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<(usize, usize)> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    prev[from] = from;
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in &adj[u] {
            if prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    assert_ne!(prev[to], usize::MAX, "contradiction path must exist");
    let mut arcs = Vec::new();
    let mut cur = to;
    while cur != from {
        arcs.push((prev[cur], cur));
        cur = prev[cur];
    }
    arcs.reverse();
    arcs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_or_clause_satisfiable() {
        let witness = two_sat_satisfiable(2, &[Clause::Or(0, 1)]).unwrap();
        assert!(witness[0] || witness[1]);
    }

    #[test]
    fn forced_both_ways_unsatisfiable() {
        assert!(two_sat_satisfiable(1, &[Clause::ForceTrue(0), Clause::ForceFalse(0)]).is_none());
    }

    #[test]
    fn contradiction_cycle_covers_conflicting_clauses() {
        match solve(1, &[Clause::ForceTrue(0), Clause::ForceFalse(0)]) {
            TwoSatOutcome::Contradiction(arcs) => {
                assert!(arcs.contains(&(1, 0)) && arcs.contains(&(0, 1)));
            }
            _ => panic!("expected contradiction"),
        }
    }

    #[test]
    fn agrees_with_truth_tables_on_random_clause_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(0..=6);
            let clauses: Vec<Clause> = (0..m)
                .map(|_| {
                    let x = rng.gen_range(0..n);
                    let y = rng.gen_range(0..n);
                    match rng.gen_range(0..5) {
                        0 => Clause::ForceTrue(x),
                        1 => Clause::ForceFalse(x),
                        2 => Clause::Imp(x, y),
                        3 => Clause::Or(x, y),
                        _ => Clause::Nand(x, y),
                    }
                })
                .collect();
            let brute = (0u32..1 << n).any(|bits| {
                let a: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
                clauses.iter().all(|c| c.satisfied(&a))
            });
            match solve(n, &clauses) {
                TwoSatOutcome::Satisfiable(witness) => {
                    assert!(brute, "solver found witness where none exists: {clauses:?}");
                    assert!(clauses.iter().all(|c| c.satisfied(&witness)), "{clauses:?}");
                }
                TwoSatOutcome::Contradiction(_) => {
                    assert!(!brute, "solver missed a witness: {clauses:?}");
                }
            }
        }
    }
}
