//! Assumption-free brute-force solvers used as ground truth by every other
//! module. Guards are hard errors rather than silent truncation: an oracle
//! must never return a wrong answer.

use crate::gadgets::CliqueInstance;
use crate::model::{evaluate, Assignment, Instance, Solution};
use crate::reductions::{GraphProblemInstance, GraphProblemKind};
use crate::scc::tarjan_scc;
use crate::weak_orders::for_each_weak_order;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("oracle guard exceeded: {what}")]
pub struct GuardError {
    pub what: String,
}

fn guard(cond: bool, what: impl Into<String>) -> Result<(), GuardError> {
    if cond {
        Ok(())
    } else {
        Err(GuardError { what: what.into() })
    }
}

pub const MAX_ORACLE_VARS: usize = 9;

/// Exhaustive weak-order search. Returns the (cost, weight, deleted-ids)
/// lexicographically minimal exact violation set within both budgets,
/// with a witness assignment, or `None` if no assignment fits the budgets.
pub fn brute_force_mincsp(
    inst: &Instance,
) -> Result<Option<(Solution, Assignment)>, GuardError> {
    guard(
        inst.num_vars() <= MAX_ORACLE_VARS,
        format!("{} variables, limit {MAX_ORACLE_VARS}", inst.num_vars()),
    )?;
    let mut best: Option<(Solution, Assignment)> = None;
    for_each_weak_order(inst.num_vars(), |ranks| {
        let a = Assignment::new(ranks.to_vec());
        let report = evaluate(inst, &a).expect("total assignment");
        if report.crisp_violation || report.cost > inst.k {
            return;
        }
        if let Some(w) = inst.w {
            if report.weight > w {
                return;
            }
        }
        let candidate = Solution {
            deleted: report.violated,
            cost: report.cost,
            weight: report.weight,
        };
        let better = match &best {
            None => true,
            Some((cur, _)) => candidate.key() < cur.key(),
        };
        if better {
            best = Some((candidate, a));
        }
    })
    .map_err(|e| GuardError { what: e.to_string() })?;
    Ok(best)
}

fn is_feasible(g: &GraphProblemInstance, deleted: &[bool]) -> bool {
    let n = g.vertices.len();
    match g.kind {
        GraphProblemKind::EdgeMulticut => {
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for (i, e) in g.edges.iter().enumerate() {
                if !deleted[i] {
                    let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
            for (j, r) in g.requests.iter().enumerate() {
                if deleted[g.edges.len() + j] {
                    continue;
                }
                if r.s == r.t || find(&mut parent, r.s) == find(&mut parent, r.t) {
                    return false;
                }
            }
            true
        }
        _ => {
            let mut adj = vec![Vec::new(); n];
            let mut self_arc = false;
            for (i, e) in g.edges.iter().enumerate() {
                if !deleted[i] {
                    if e.from == e.to {
                        self_arc = true;
                    }
                    adj[e.from].push(e.to);
                }
            }
            let (n_comps, comp) = tarjan_scc(n, &adj);
            let mut comp_size = vec![0usize; n_comps];
            for v in 0..n {
                comp_size[comp[v]] += 1;
            }
            match g.kind {
                GraphProblemKind::Dfas => {
                    !self_arc && comp_size.iter().all(|&s| s <= 1)
                }
                GraphProblemKind::SubsetDfas => g.edges.iter().enumerate().all(|(i, e)| {
                    deleted[i] || !e.special || (e.from != e.to && comp[e.from] != comp[e.to])
                }),
                GraphProblemKind::Dsmc => g.requests.iter().enumerate().all(|(j, r)| {
                    deleted[g.edges.len() + j] || (r.s != r.t && comp[r.s] != comp[r.t])
                }),
                GraphProblemKind::EdgeMulticut => unreachable!(),
            }
        }
    }
}

/// Visits all `size`-subsets of `pool` in lexicographic order; stops early
/// when the callback returns `true`.
fn for_each_combination<F: FnMut(&[usize]) -> bool>(pool: &[usize], size: usize, mut f: F) -> bool {
    let n = pool.len();
    if size > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut chosen = vec![0usize; size];
    loop {
        for (slot, &i) in idx.iter().enumerate() {
            chosen[slot] = pool[i];
        }
        if f(&chosen) {
            return true;
        }
        // advance the combination indices
        let mut pos = size;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            if idx[pos] != pos + n - size {
                break;
            }
            if pos == 0 {
                return false;
            }
        }
        idx[pos] += 1;
        for j in pos + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSolution {
    /// Deleted object ids (edges first, then requests), sorted.
    pub deleted: Vec<usize>,
    pub cost: u32,
    pub weight: u64,
}

pub const MAX_GRAPH_DELETABLES: usize = 26;
pub const MAX_GRAPH_BUDGET: u32 = 13;

/// Lexicographically minimal (cost, weight, ids) feasible deletion set over
/// all subsets of deletable objects within both budgets.
pub fn brute_force_graph_optimum(
    g: &GraphProblemInstance,
) -> Result<Option<GraphSolution>, GuardError> {
    let pool = g.deletable_ids();
    guard(
        pool.len() <= MAX_GRAPH_DELETABLES,
        format!("{} deletable objects, limit {MAX_GRAPH_DELETABLES}", pool.len()),
    )?;
    let mut deleted = vec![false; g.num_objects()];
    let mut best: Option<GraphSolution> = None;
    let max_size = (g.k as usize).min(pool.len());
    for size in 0..=max_size {
        if let Some(b) = &best {
            if (b.cost as usize) < size {
                break;
            }
        }
        for_each_combination(&pool, size, |subset| {
            let weight: u64 = subset.iter().map(|&i| g.object_weight(i)).sum();
            if let Some(w) = g.w {
                if weight > w {
                    return false;
                }
            }
            if let Some(b) = &best {
                let key = (size as u32, weight, subset);
                if (b.cost, b.weight, b.deleted.as_slice()) <= key {
                    return false;
                }
            }
            for &i in subset {
                deleted[i] = true;
            }
            let ok = is_feasible(g, &deleted);
            for &i in subset {
                deleted[i] = false;
            }
            if ok {
                best = Some(GraphSolution {
                    deleted: subset.to_vec(),
                    cost: size as u32,
                    weight,
                });
            }
            false
        });
    }
    Ok(best)
}

/// Flat-array search state for the exhaustive symmetric-multicut loop: the
/// graph in CSR form with each arc labeled by its deletable slot, plus
/// reusable Tarjan scratch. The subset loop runs millions of component
/// computations, so nothing here allocates per subset.
struct DsmcScratch {
    n: usize,
    row_start: Vec<u32>,
    arc_head: Vec<u32>,
    /// Slot of the arc in the deletable pool plus one; 0 marks crisp arcs.
    arc_slot: Vec<u32>,
    /// (s, t, slot + 1) per request, slot 0 for crisp requests.
    requests: Vec<(u32, u32, u32)>,
    index: Vec<u32>,
    low: Vec<u32>,
    comp: Vec<u32>,
    on_stack: Vec<bool>,
    stack: Vec<u32>,
    call: Vec<(u32, u32)>,
}

const UNSET: u32 = u32::MAX;

impl DsmcScratch {
    fn new(g: &GraphProblemInstance, pool: &[usize]) -> Self {
        let n = g.vertices.len();
        let slot_of = |object: usize| -> u32 {
            match pool.binary_search(&object) {
                Ok(s) => s as u32 + 1,
                Err(_) => 0,
            }
        };
        let mut degree = vec![0u32; n];
        for e in &g.edges {
            degree[e.from] += 1;
        }
        let mut row_start = vec![0u32; n + 1];
        for v in 0..n {
            row_start[v + 1] = row_start[v] + degree[v];
        }
        let mut cursor = row_start.clone();
        let mut arc_head = vec![0u32; g.edges.len()];
        let mut arc_slot = vec![0u32; g.edges.len()];
        for (i, e) in g.edges.iter().enumerate() {
            let at = cursor[e.from] as usize;
            cursor[e.from] += 1;
            arc_head[at] = e.to as u32;
            arc_slot[at] = slot_of(i);
        }
        let requests = g
            .requests
            .iter()
            .enumerate()
            .map(|(j, r)| (r.s as u32, r.t as u32, slot_of(g.edges.len() + j)))
            .collect();
        DsmcScratch {
            n,
            row_start,
            arc_head,
            arc_slot,
            requests,
            index: vec![UNSET; n],
            low: vec![0; n],
            comp: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::with_capacity(n),
            call: Vec::with_capacity(n),
        }
    }

    /// True iff every request surviving `deleted_mask` has its endpoints in
    /// distinct strongly connected components once the masked arcs are gone.
    fn feasible(&mut self, deleted_mask: u32) -> bool {
        let arc_gone =
            |slot: u32| slot != 0 && deleted_mask & (1u32 << (slot - 1)) != 0;
        self.index.fill(UNSET);
        self.stack.clear();
        self.call.clear();
        let mut next_index = 0u32;
        let mut n_comps = 0u32;
        for root in 0..self.n as u32 {
            if self.index[root as usize] != UNSET {
                continue;
            }
            self.call.push((root, self.row_start[root as usize]));
            while let Some(&mut (v, ref mut cursor)) = self.call.last_mut() {
                let vu = v as usize;
                if *cursor == self.row_start[vu] {
                    self.index[vu] = next_index;
                    self.low[vu] = next_index;
                    next_index += 1;
                    self.stack.push(v);
                    self.on_stack[vu] = true;
                }
                if *cursor < self.row_start[vu + 1] {
                    let at = *cursor as usize;
                    *cursor += 1;
                    if arc_gone(self.arc_slot[at]) {
                        continue;
                    }
                    let w = self.arc_head[at];
                    let wu = w as usize;
                    if self.index[wu] == UNSET {
                        self.call.push((w, self.row_start[wu]));
                    } else if self.on_stack[wu] {
                        self.low[vu] = self.low[vu].min(self.index[wu]);
                    }
                } else {
                    if self.low[vu] == self.index[vu] {
                        loop {
                            let w = self.stack.pop().unwrap();
                            self.on_stack[w as usize] = false;
                            self.comp[w as usize] = n_comps;
                            if w == v {
                                break;
                            }
                        }
                        n_comps += 1;
                    }
                    self.call.pop();
                    if let Some(&(parent, _)) = self.call.last() {
                        self.low[parent as usize] =
                            self.low[parent as usize].min(self.low[vu]);
                    }
                }
            }
        }
        self.requests.iter().all(|&(s, t, slot)| {
            arc_gone(slot) || (s != t && self.comp[s as usize] != self.comp[t as usize])
        })
    }
}

/// Minimum-cardinality directed-symmetric-multicut search: subsets of
/// deletable objects by increasing size, first feasible subset wins.
pub fn brute_force_dsmc(g: &GraphProblemInstance) -> Result<Option<Vec<usize>>, GuardError> {
    let pool = g.deletable_ids();
    guard(
        pool.len() <= MAX_GRAPH_DELETABLES,
        format!("{} deletable objects, limit {MAX_GRAPH_DELETABLES}", pool.len()),
    )?;
    guard(g.k <= MAX_GRAPH_BUDGET, format!("budget {}, limit {MAX_GRAPH_BUDGET}", g.k))?;
    let mut scratch = DsmcScratch::new(g, &pool);
    let slots: Vec<usize> = (0..pool.len()).collect();
    let mut found: Option<Vec<usize>> = None;
    for size in 0..=(g.k as usize).min(pool.len()) {
        for_each_combination(&slots, size, |subset| {
            let mut mask = 0u32;
            for &s in subset {
                mask |= 1 << s;
            }
            if scratch.feasible(mask) {
                found = Some(subset.iter().map(|&s| pool[s]).collect());
                return true;
            }
            false
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

pub const MAX_CLIQUE_SELECTIONS: u64 = 1_000_000;

/// Enumerates one vertex per part and returns the first pairwise-adjacent
/// selection (global vertex ids), or `None`.
pub fn brute_force_multicolored_clique(
    g: &CliqueInstance,
) -> Result<Option<Vec<usize>>, GuardError> {
    let k = g.parts.len();
    let n = g.part_size();
    let mut selections: u64 = 1;
    for _ in 0..k {
        selections = selections.saturating_mul(n as u64);
        guard(
            selections <= MAX_CLIQUE_SELECTIONS,
            format!("n^k exceeds {MAX_CLIQUE_SELECTIONS}"),
        )?;
    }
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    if n == 0 {
        return Ok(None);
    }
    let mut pick = vec![0usize; k];
    loop {
        let chosen: Vec<usize> = (0..k).map(|i| g.parts[i][pick[i]]).collect();
        let mut ok = true;
        'pairs: for i in 0..k {
            for j in i + 1..k {
                if !g.adjacent(chosen[i], chosen[j]) {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            return Ok(Some(chosen));
        }
        // odometer advance
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < n {
                break;
            }
            pick[pos] = 0;
            if pos == 0 {
                return Ok(None);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;
    use crate::model::verify_solution;
    use crate::reductions::to_dsmc;

    #[test]
    fn two_cycle_costs_one() {
        let inst = parse_instance("k 1\nlt x y soft\nlt y x soft\n").unwrap();
        let (sol, a) = brute_force_mincsp(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, 1);
        verify_solution(&inst, &sol, &a).unwrap();
    }

    #[test]
    fn equality_triangle_costs_one() {
        // 3 variables have 13 weak orders; the best breaks a single constraint.
        let inst = parse_instance("k 1\neq x y soft\neq y z soft\nneq x z soft\n").unwrap();
        let (sol, _) = brute_force_mincsp(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, 1);
    }

    #[test]
    fn crisp_strict_self_loop_infeasible() {
        let inst = parse_instance("k 3\nlt x x crisp\n").unwrap();
        assert!(brute_force_mincsp(&inst).unwrap().is_none());
    }

    #[test]
    fn guard_rejects_ten_variables() {
        let mut text = String::from("k 0\n");
        for i in 0..9 {
            text.push_str(&format!("lt v{} v{} soft\n", i, i + 1));
        }
        let inst = parse_instance(&text).unwrap();
        assert!(brute_force_mincsp(&inst).is_err());
    }

    #[test]
    fn tie_break_prefers_lower_ids() {
        // Either constraint alone is an optimal deletion; ids break the tie.
        let inst = parse_instance("k 1\nlt x y soft\nlt y x soft\n").unwrap();
        let (sol, _) = brute_force_mincsp(&inst).unwrap().unwrap();
        assert_eq!(sol.deleted, vec![0]);
    }

    #[test]
    fn weight_budget_changes_choice() {
        // Cheapest break by weight is the second constraint once W forbids
        // the heavy one.
        let inst = parse_instance("k 1\nw 2\nlt x y soft 5\nlt y x soft 2\n").unwrap();
        let (sol, _) = brute_force_mincsp(&inst).unwrap().unwrap();
        assert_eq!(sol.deleted, vec![1]);
        assert_eq!(sol.weight, 2);
    }

    #[test]
    fn renaming_invariance() {
        let a = parse_instance("k 1\nlt x y soft\neq y z soft\n").unwrap();
        let b = parse_instance("k 1\nlt p q soft\neq q r soft\n").unwrap();
        let ra = brute_force_mincsp(&a).unwrap().map(|(s, _)| (s.cost, s.weight, s.deleted));
        let rb = brute_force_mincsp(&b).unwrap().map(|(s, _)| (s.cost, s.weight, s.deleted));
        assert_eq!(ra, rb);
    }

    #[test]
    fn dsmc_two_cycle_single_deletion() {
        let inst = parse_instance("k 1\nleq x y soft\nleq y x soft\nneq x y crisp\n").unwrap();
        let (g, _) = to_dsmc(&inst).unwrap();
        let sol = brute_force_dsmc(&g).unwrap().unwrap();
        assert_eq!(sol.len(), 1);
    }

    #[test]
    fn dsmc_crisp_cycle_infeasible() {
        let inst = parse_instance("k 5\nleq x y crisp\nleq y x crisp\nneq x y crisp\n").unwrap();
        let (g, _) = to_dsmc(&inst).unwrap();
        assert!(brute_force_dsmc(&g).unwrap().is_none());
    }

    #[test]
    fn clique_simple_cases() {
        let g = CliqueInstance::parse("k 2\npart 1 a b\npart 2 c d\nedge a c\n").unwrap();
        assert_eq!(brute_force_multicolored_clique(&g).unwrap(), Some(vec![0, 2]));
        let g2 = CliqueInstance::parse("k 2\npart 1 a b\npart 2 c d\n").unwrap();
        assert_eq!(brute_force_multicolored_clique(&g2).unwrap(), None);
    }

    #[test]
    fn clique_complete_tripartite() {
        let mut text = String::from("k 3\npart 1 a1 a2\npart 2 b1 b2\npart 3 c1 c2\n");
        for a in ["a1", "a2"] {
            for b in ["b1", "b2"] {
                text.push_str(&format!("edge {a} {b}\n"));
            }
        }
        for a in ["a1", "a2"] {
            for c in ["c1", "c2"] {
                text.push_str(&format!("edge {a} {c}\n"));
            }
        }
        for b in ["b1", "b2"] {
            for c in ["c1", "c2"] {
                text.push_str(&format!("edge {b} {c}\n"));
            }
        }
        let g = CliqueInstance::parse(&text).unwrap();
        assert!(brute_force_multicolored_clique(&g).unwrap().is_some());
    }

    #[test]
    fn dsmc_cost_agrees_with_mincsp_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for case in 0..300 {
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(1..=8);
            let k = rng.gen_range(0..=3);
            let mut text = format!("k {k}\n");
            for _ in 0..m {
                let rel = if rng.gen_bool(0.6) { "leq" } else { "neq" };
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                text.push_str(&format!("{rel} v{x} v{y} soft\n"));
            }
            let inst = parse_instance(&text).unwrap();
            let (g, _) = to_dsmc(&inst).unwrap();
            let csp_cost = brute_force_mincsp(&inst).unwrap().map(|(s, _)| s.cost);
            let cut_cost = brute_force_dsmc(&g).unwrap().map(|x| x.len() as u32);
            assert_eq!(csp_cost, cut_cost, "case {case} diverged on:\n{text}");
        }
    }

    #[test]
    fn combination_enumeration_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(&[0, 1, 2, 3], 2, |c| {
            seen.push(c.to_vec());
            false
        });
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }
}
