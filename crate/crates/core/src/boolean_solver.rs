//! Exact deletion optimization over Boolean constraints built from
//! 2-clauses.
//!
//! Branch and bound: feasibility of the crisp plus undeleted soft clauses is
//! a 2-SAT check; on a contradiction the solver extracts one implication
//! cycle, collects the soft constraints that own an arc of the cycle not
//! also owned by something undeletable, and branches on deleting each (with
//! the usual blocking scheme so no deletion set is visited twice). Nodes are
//! bounded by the remaining budgets and the best solution so far. If the
//! node budget runs out the solver falls back to plain subset enumeration,
//! which is always exact.

use crate::booleanize::BooleanInstance;
use crate::two_sat::{solve as two_sat, Clause, TwoSatOutcome};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanSolution {
    /// Indices into `bi.constraints` of the deleted soft constraints.
    pub deleted: Vec<usize>,
    pub cost: u32,
    pub weight: u64,
    pub assignment: Vec<bool>,
}

impl BooleanSolution {
    fn source_key(&self, bi: &BooleanInstance) -> (u32, u64, Vec<usize>) {
        let mut sources: Vec<usize> =
            self.deleted.iter().map(|&i| bi.constraints[i].source.unwrap_or(usize::MAX)).collect();
        sources.sort_unstable();
        (self.cost, self.weight, sources)
    }
}

const NODE_LIMIT: usize = 200_000;

struct Search<'a> {
    bi: &'a BooleanInstance,
    /// Arc -> indices of constraints owning a clause that contributes it.
    owners: HashMap<(usize, usize), Vec<usize>>,
    deleted: Vec<bool>,
    blocked: Vec<bool>,
    best: Option<BooleanSolution>,
    best_key: Option<(u32, u64, Vec<usize>)>,
    /// Absolute (cost, weight) offset of the surrounding branch plus an
    /// optional absolute cap; nodes that cannot lex-beat the cap are cut.
    offset: (u32, u64),
    cap: Option<(u32, u64)>,
    nodes: usize,
    exhausted: bool,
}

impl<'a> Search<'a> {
    fn active_clauses(&self) -> Vec<Clause> {
        let mut clauses = Vec::new();
        for (i, bc) in self.bi.constraints.iter().enumerate() {
            if bc.is_soft() && self.deleted[i] {
                continue;
            }
            clauses.extend_from_slice(&bc.clauses);
        }
        clauses
    }

    fn above_cap(&self, cost: u32, weight: u64) -> bool {
        // The external cap is absolute (offset included); the incumbent is
        // in search-local coordinates.
        let abs = (self.offset.0 + cost, self.offset.1 + weight);
        if let Some(cap) = self.cap {
            if abs > cap {
                return true;
            }
        }
        if let Some((bc, bw, _)) = &self.best_key {
            if (cost, weight) > (*bc, *bw) {
                return true;
            }
        }
        false
    }

    fn offer(&mut self, cost: u32, weight: u64, assignment: Vec<bool>) {
        let deleted: Vec<usize> =
            (0..self.deleted.len()).filter(|&i| self.deleted[i]).collect();
        let candidate = BooleanSolution { deleted, cost, weight, assignment };
        let key = candidate.source_key(self.bi);
        if self.best_key.as_ref().is_none_or(|best| key < *best) {
            self.best_key = Some(key);
            self.best = Some(candidate);
        }
    }

    fn explore(&mut self, cost: u32, weight: u64) {
        if self.exhausted || self.above_cap(cost, weight) {
            return;
        }
        self.nodes += 1;
        if self.nodes > NODE_LIMIT {
            self.exhausted = true;
            return;
        }
        match two_sat(self.bi.table.total(), &self.active_clauses()) {
            TwoSatOutcome::Satisfiable(assignment) => {
                self.offer(cost, weight, assignment);
            }
            TwoSatOutcome::Contradiction(cycle) => {
                if cost >= self.bi.k {
                    return; // no deletions left
                }
                let mut candidates: Vec<usize> = Vec::new();
                for arc in cycle {
                    let Some(owners) = self.owners.get(&arc) else { continue };
                    let active: Vec<usize> = owners
                        .iter()
                        .copied()
                        .filter(|&i| !self.bi.constraints[i].is_soft() || !self.deleted[i])
                        .collect();
                    if active.iter().any(|&i| !self.bi.constraints[i].is_soft()) {
                        continue; // arc survives every deletion
                    }
                    for i in active {
                        if !candidates.contains(&i) {
                            candidates.push(i);
                        }
                    }
                }
                candidates.sort_unstable();
                candidates.retain(|&i| !self.blocked[i]);
                let mut newly_blocked = Vec::new();
                for &cand in &candidates {
                    let extra = self.bi.constraints[cand].weight;
                    let feasible = cost < self.bi.k
                        && self.bi.w.is_none_or(|w| weight + extra <= w);
                    if feasible {
                        self.deleted[cand] = true;
                        self.explore(cost + 1, weight + extra);
                        self.deleted[cand] = false;
                        if self.exhausted {
                            for &b in &newly_blocked {
                                self.blocked[b] = false;
                            }
                            return;
                        }
                    }
                    self.blocked[cand] = true;
                    newly_blocked.push(cand);
                }
                for &b in &newly_blocked {
                    self.blocked[b] = false;
                }
            }
        }
    }
}

type ScoredSolution = (BooleanSolution, (u32, u64, Vec<usize>));

/// Exhaustive fallback: every subset of soft constraints within the budgets,
/// by increasing size.
struct SubsetSearch<'a> {
    bi: &'a BooleanInstance,
    softs: Vec<usize>,
    offset: (u32, u64),
    cap: Option<(u32, u64)>,
    deleted: Vec<bool>,
    best: Option<ScoredSolution>,
}

impl<'a> SubsetSearch<'a> {
    fn recurse(&mut self, from: usize, remaining: usize, cost: u32, weight: u64) {
        if self.bi.w.is_some_and(|w| weight > w) {
            return;
        }
        let abs = (self.offset.0 + cost, self.offset.1 + weight);
        if self.cap.is_some_and(|c| abs > c) {
            return;
        }
        if self.best.as_ref().is_some_and(|(_, key)| (cost, weight) > (key.0, key.1)) {
            return;
        }
        let mut clauses = Vec::new();
        for (i, bc) in self.bi.constraints.iter().enumerate() {
            if bc.is_soft() && self.deleted[i] {
                continue;
            }
            clauses.extend_from_slice(&bc.clauses);
        }
        if let TwoSatOutcome::Satisfiable(assignment) = two_sat(self.bi.table.total(), &clauses) {
            let ids: Vec<usize> = (0..self.deleted.len()).filter(|&i| self.deleted[i]).collect();
            let candidate = BooleanSolution { deleted: ids, cost, weight, assignment };
            let key = candidate.source_key(self.bi);
            if self.best.as_ref().is_none_or(|(_, k)| key < *k) {
                self.best = Some((candidate, key));
            }
        }
        if remaining == 0 {
            return;
        }
        for pos in from..self.softs.len() {
            let id = self.softs[pos];
            self.deleted[id] = true;
            let extra = self.bi.constraints[id].weight;
            self.recurse(pos + 1, remaining - 1, cost + 1, weight + extra);
            self.deleted[id] = false;
        }
    }
}

fn solve_by_subsets(
    bi: &BooleanInstance,
    offset: (u32, u64),
    cap: Option<(u32, u64)>,
) -> Option<BooleanSolution> {
    let softs = bi.soft_indices();
    let max_size = (bi.k as usize).min(softs.len());
    let mut search = SubsetSearch {
        bi,
        softs,
        offset,
        cap,
        deleted: vec![false; bi.constraints.len()],
        best: None,
    };
    search.recurse(0, max_size, 0, 0);
    search.best.map(|(sol, _)| sol)
}

/// Minimum (cost, weight, source-ids) deletion set of soft constraints such
/// that the remaining clauses are simultaneously satisfiable, subject to the
/// instance budgets. `offset` shifts the cost/weight seen by `cap`, which
/// cuts anything lexicographically worse than an already-known solution.
pub fn solve_boolean_mincsp_bounded(
    bi: &BooleanInstance,
    offset: (u32, u64),
    cap: Option<(u32, u64)>,
) -> Option<BooleanSolution> {
    let owners = {
        let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, bc) in bi.constraints.iter().enumerate() {
            for c in &bc.clauses {
                for arc in c.arcs() {
                    let entry = m.entry(arc).or_default();
                    if entry.last() != Some(&i) {
                        entry.push(i);
                    }
                }
            }
        }
        m
    };
    let mut search = Search {
        bi,
        owners,
        deleted: vec![false; bi.constraints.len()],
        blocked: vec![false; bi.constraints.len()],
        best: None,
        best_key: None,
        offset,
        cap,
        nodes: 0,
        exhausted: false,
    };
    search.explore(0, 0);
    if search.exhausted {
        return solve_by_subsets(bi, offset, cap);
    }
    search.best
}

pub fn solve_boolean_mincsp(bi: &BooleanInstance) -> Option<BooleanSolution> {
    solve_boolean_mincsp_bounded(bi, (0, 0), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::booleanize::{BooleanConstraint, BooleanInstance, VarTable};
    use crate::model::Softness;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constraint(clauses: Vec<Clause>, softness: Softness, weight: u64, source: usize) -> BooleanConstraint {
        let mut scope = Vec::new();
        for c in &clauses {
            for v in c.vars() {
                if !scope.contains(&v) {
                    scope.push(v);
                }
            }
        }
        BooleanConstraint { scope, clauses, softness, weight, source: Some(source) }
    }

    fn instance(n_vars: usize, constraints: Vec<BooleanConstraint>, k: u32, w: Option<u64>) -> BooleanInstance {
        // A flat table: treat every variable as a position variable of a
        // 0-anchor encoding laid out manually.
        BooleanInstance { table: VarTable { n_vars, ell: 0 }, constraints, k, w }
    }

    #[test]
    fn satisfiable_crisp_needs_no_deletion() {
        let bi = instance(
            2,
            vec![constraint(vec![Clause::Imp(0, 1)], Softness::Crisp, 1, 0)],
            2,
            None,
        );
        let sol = solve_boolean_mincsp(&bi).unwrap();
        assert_eq!(sol.cost, 0);
        assert!(sol.deleted.is_empty());
    }

    #[test]
    fn conflicting_units_tie_break_by_source() {
        let bi = instance(
            1,
            vec![
                constraint(vec![Clause::ForceTrue(0)], Softness::Soft, 1, 0),
                constraint(vec![Clause::ForceFalse(0)], Softness::Soft, 1, 1),
            ],
            1,
            None,
        );
        let sol = solve_boolean_mincsp(&bi).unwrap();
        assert_eq!(sol.deleted, vec![0]);
        assert_eq!((sol.cost, sol.weight), (1, 1));
    }

    #[test]
    fn crisp_contradiction_is_infeasible() {
        let bi = instance(
            1,
            vec![
                constraint(vec![Clause::ForceTrue(0)], Softness::Crisp, 1, 0),
                constraint(vec![Clause::ForceFalse(0)], Softness::Crisp, 1, 1),
            ],
            5,
            None,
        );
        assert!(solve_boolean_mincsp(&bi).is_none());
    }

    #[test]
    fn prefers_lower_cost_over_lower_weight() {
        // Deleting the single heavy constraint (cost 1, weight 5) beats
        // deleting the two light conflicting ones (cost 2, weight 2).
        let bi = instance(
            1,
            vec![
                constraint(vec![Clause::ForceTrue(0)], Softness::Soft, 5, 0),
                constraint(vec![Clause::ForceFalse(0)], Softness::Soft, 1, 1),
                constraint(vec![Clause::ForceFalse(0)], Softness::Soft, 1, 2),
            ],
            2,
            None,
        );
        let sol = solve_boolean_mincsp(&bi).unwrap();
        assert_eq!((sol.cost, sol.weight), (1, 5));
        assert_eq!(sol.deleted, vec![0]);
    }

    #[test]
    fn weight_budget_forces_detour() {
        let bi = instance(
            1,
            vec![
                constraint(vec![Clause::ForceTrue(0)], Softness::Soft, 5, 0),
                constraint(vec![Clause::ForceFalse(0)], Softness::Soft, 1, 1),
                constraint(vec![Clause::ForceFalse(0)], Softness::Soft, 1, 2),
            ],
            2,
            Some(4),
        );
        let sol = solve_boolean_mincsp(&bi).unwrap();
        assert_eq!((sol.cost, sol.weight), (2, 2));
        assert_eq!(sol.deleted, vec![1, 2]);
    }

    #[test]
    fn offset_does_not_distort_incumbent_pruning() {
        // With a branch offset, the incumbent comparison must stay in
        // search-local coordinates: the heavier fix is found first (lower
        // index), and the lighter equal-cost fix must still be explored.
        let bi = instance(
            1,
            vec![
                constraint(vec![Clause::ForceTrue(0)], Softness::Soft, 2, 0),
                constraint(vec![Clause::ForceFalse(0)], Softness::Soft, 1, 1),
            ],
            1,
            None,
        );
        let sol = solve_boolean_mincsp_bounded(&bi, (1, 1), None).unwrap();
        assert_eq!(sol.deleted, vec![1]);
        assert_eq!((sol.cost, sol.weight), (1, 1));
    }

    #[test]
    fn random_instances_match_subset_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in 0..100 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=7);
            let k = rng.gen_range(0..=3);
            let w = if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(1..=8)) };
            let constraints: Vec<BooleanConstraint> = (0..m)
                .map(|i| {
                    let n_clauses = rng.gen_range(1..=3);
                    let clauses: Vec<Clause> = (0..n_clauses)
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
                    let softness =
                        if rng.gen_bool(0.8) { Softness::Soft } else { Softness::Crisp };
                    let weight = if softness.is_soft() { rng.gen_range(1..=4) } else { 1 };
                    constraint(clauses, softness, weight, i)
                })
                .collect();
            let bi = instance(n, constraints, k, w);
            let fast = solve_boolean_mincsp(&bi);
            let slow = solve_by_subsets(&bi, (0, 0), None);
            match (&fast, &slow) {
                (None, None) => {}
                (Some(f), Some(s)) => {
                    assert_eq!(
                        (f.cost, f.weight, &f.deleted),
                        (s.cost, s.weight, &s.deleted),
                        "case {case} diverged"
                    );
                    for bc in bi.constraints.iter().enumerate().filter_map(|(i, bc)| {
                        (!bc.is_soft() || !f.deleted.contains(&i)).then_some(bc)
                    }) {
                        assert!(bc.clauses.iter().all(|c| c.satisfied(&f.assignment)));
                    }
                }
                _ => panic!("case {case}: feasibility disagreement {fast:?} vs {slow:?}"),
            }
        }
    }
}
