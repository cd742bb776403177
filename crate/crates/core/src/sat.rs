//! Polynomial-time satisfiability for `csp(<,<=,=,!=)` and the zero-cost
//! solvers for the polynomial fragments.
//!
//! Satisfiability reduces to strong connectivity: equalities contribute arcs
//! both ways, `<=` and `<` one arc each; the instance is unsatisfiable
//! exactly when some `<` or `!=` constraint has both endpoints in one
//! strongly connected component (self-loops included).

use crate::model::{
    evaluate, Assignment, Instance, Relation, Solution,
};
use crate::reductions::{BackMap, ScopeError};
use crate::scc::{condensation_ranks, tarjan_scc};
use std::collections::BTreeSet;

/// Decides satisfiability with every constraint treated as mandatory
/// (budgets and softness ignored). On success returns a witness ranking the
/// condensation in deterministic topological order; the witness violates no
/// constraint.
pub fn check_satisfiable(inst: &Instance) -> Option<Assignment> {
    let n = inst.num_vars();
    let mut adj = vec![Vec::new(); n];
    for c in &inst.constraints {
        match c.rel {
            Relation::Eq => {
                adj[c.x].push(c.y);
                adj[c.y].push(c.x);
            }
            Relation::Leq | Relation::Lt => adj[c.x].push(c.y),
            Relation::Neq => {}
        }
    }
    let (n_comps, comp) = tarjan_scc(n, &adj);
    for c in &inst.constraints {
        match c.rel {
            Relation::Lt | Relation::Neq
                if (c.x == c.y || comp[c.x] == comp[c.y]) => {
                    return None;
                }
            _ => {}
        }
    }
    let ranks = condensation_ranks(n, &adj, n_comps, &comp);
    let a = Assignment::new((0..n).map(|v| ranks[comp[v]]).collect());
    debug_assert!(evaluate(inst, &a).unwrap().violated.is_empty());
    Some(a)
}

/// Zero-cost solver for the polynomial fragments: subsets of `{eq, leq}` get
/// the constant assignment, `{neq}` gets an injective one. Disequality
/// self-loops are forced into the solution; returns `None` when that exceeds
/// the budgets (or a crisp self-loop makes the instance infeasible).
pub fn trivial_solve(inst: &Instance) -> Result<Option<(Solution, Assignment)>, ScopeError> {
    let rels = inst.relations_used();
    let eq_leq = rels.iter().all(|r| matches!(r, Relation::Eq | Relation::Leq));
    let neq_only = rels.iter().all(|r| matches!(r, Relation::Neq));
    if !eq_leq && !neq_only {
        let (id, c) = inst
            .constraints
            .iter()
            .enumerate()
            .find(|(_, c)| !matches!(c.rel, Relation::Neq))
            .expect("some non-neq constraint exists");
        return Err(ScopeError::OutOfScope { id, rel: c.rel });
    }
    if eq_leq {
        let a = Assignment::new(vec![0; inst.num_vars()]);
        debug_assert!(evaluate(inst, &a).unwrap().violated.is_empty());
        return Ok(Some((Solution::empty(), a)));
    }
    // Disequalities: distinct ranks satisfy everything except self-loops.
    let mut forced = Vec::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        if c.is_self_loop() {
            if !c.is_soft() {
                return Ok(None);
            }
            forced.push(id);
        }
    }
    let sol = Solution::new(forced, inst);
    if sol.cost > inst.k {
        return Ok(None);
    }
    if let Some(w) = inst.w {
        if sol.weight > w {
            return Ok(None);
        }
    }
    let a = Assignment::new((0..inst.num_vars() as u64).collect());
    Ok(Some((sol, a)))
}

/// For `{lt, neq}` instances: removes every non-self-loop disequality (once
/// the strict constraints hold, an infinitesimal perturbation separates any
/// remaining ties, so those disequalities never need deleting). Self-loop
/// disequalities are returned in `forced` and must be deleted by the caller.
/// Returns the reduced instance, the map from its constraint ids back to the
/// input ids, and the forced set.
pub fn drop_disequalities(
    inst: &Instance,
) -> Result<(Instance, BackMap, BTreeSet<usize>), ScopeError> {
    for (id, c) in inst.constraints.iter().enumerate() {
        if !matches!(c.rel, Relation::Lt | Relation::Neq) {
            return Err(ScopeError::OutOfScope { id, rel: c.rel });
        }
    }
    let mut kept = Vec::new();
    let mut map = Vec::new();
    let mut forced = BTreeSet::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        match c.rel {
            Relation::Neq => {
                if c.is_self_loop() {
                    forced.insert(id);
                }
            }
            _ => {
                kept.push(c.clone());
                map.push(id);
            }
        }
    }
    let out = Instance::new(inst.variables.clone(), kept, inst.k, inst.w);
    Ok((out, BackMap { map }, forced))
}

/// Refines an assignment into an injective one preserving every strict
/// inequality of the original ranks (ties broken by variable id).
pub fn refine_injective(a: &Assignment) -> Assignment {
    let mut order: Vec<usize> = (0..a.ranks.len()).collect();
    order.sort_by_key(|&v| (a.ranks[v], v));
    let mut ranks = vec![0u64; a.ranks.len()];
    for (pos, &v) in order.iter().enumerate() {
        ranks[v] = pos as u64;
    }
    Assignment::new(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;
    use crate::oracle::brute_force_mincsp;
    use crate::weak_orders::for_each_weak_order;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent satisfiability decision: try every weak order.
    fn sat_by_weak_orders(inst: &Instance) -> bool {
        let mut sat = false;
        for_each_weak_order(inst.num_vars(), |ranks| {
            if sat {
                return;
            }
            let report = evaluate(inst, &Assignment::new(ranks.to_vec())).unwrap();
            if report.violated.is_empty() {
                sat = true;
            }
        })
        .unwrap();
        sat
    }

    #[test]
    fn chain_is_satisfiable_with_increasing_ranks() {
        let inst = parse_instance("k 0\nlt x y crisp\nlt y z crisp\n").unwrap();
        let a = check_satisfiable(&inst).unwrap();
        assert_eq!(a.ranks, vec![0, 1, 2]);
    }

    #[test]
    fn strongly_connected_disequality_unsat() {
        let inst = parse_instance("k 0\nleq x y crisp\nleq y x crisp\nneq x y crisp\n").unwrap();
        assert!(check_satisfiable(&inst).is_none());
    }

    #[test]
    fn strict_self_loop_unsat() {
        let inst = parse_instance("k 0\nlt x x crisp\n").unwrap();
        assert!(check_satisfiable(&inst).is_none());
    }

    #[test]
    fn random_instances_agree_with_weak_order_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rels = [Relation::Lt, Relation::Leq, Relation::Eq, Relation::Neq];
        for _ in 0..400 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(0..=6);
            let mut text = String::from("k 0\n");
            for _ in 0..m {
                let r = rels[rng.gen_range(0..4)];
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                text.push_str(&format!("{} v{} v{} crisp\n", r.token(), x, y));
            }
            let inst = parse_instance(&text).unwrap();
            assert_eq!(
                check_satisfiable(&inst).is_some(),
                sat_by_weak_orders(&inst),
                "disagreement on:\n{text}"
            );
        }
    }

    #[test]
    fn trivial_solve_constant_assignment() {
        let inst = parse_instance("k 0\nleq x y soft\neq y z soft\n").unwrap();
        let (sol, a) = trivial_solve(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, 0);
        assert!(a.ranks.iter().all(|&r| r == 0));
    }

    #[test]
    fn trivial_solve_injective_assignment() {
        let inst = parse_instance("k 0\nneq x y soft\nneq y z soft\n").unwrap();
        let (sol, a) = trivial_solve(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, 0);
        assert_eq!(a.ranks, vec![0, 1, 2]);
    }

    #[test]
    fn trivial_solve_forces_self_loop_deletion() {
        let inst = parse_instance("k 1\nneq x x soft\n").unwrap();
        let (sol, _) = trivial_solve(&inst).unwrap().unwrap();
        assert_eq!(sol.deleted, vec![0]);
        assert_eq!(sol.cost, 1);

        let tight = parse_instance("k 0\nneq x x soft\n").unwrap();
        assert!(trivial_solve(&tight).unwrap().is_none());
    }

    #[test]
    fn trivial_solve_rejects_mixed_language() {
        let inst = parse_instance("k 0\nlt x y soft\n").unwrap();
        assert!(trivial_solve(&inst).is_err());
    }

    #[test]
    fn drop_disequalities_examples() {
        let inst = parse_instance("k 1\nlt x y soft\nneq x y soft\n").unwrap();
        let (out, _, forced) = drop_disequalities(&inst).unwrap();
        assert!(forced.is_empty());
        assert_eq!(out.constraints.len(), 1);
        let before = brute_force_mincsp(&inst).unwrap().unwrap().0;
        let after = brute_force_mincsp(&out).unwrap().unwrap().0;
        assert_eq!((before.cost, after.cost), (0, 0));

        let cyc = parse_instance("k 1\nlt x y soft\nlt y x soft\nneq x y soft\n").unwrap();
        let (out, _, _) = drop_disequalities(&cyc).unwrap();
        assert_eq!(brute_force_mincsp(&cyc).unwrap().unwrap().0.cost, 1);
        assert_eq!(brute_force_mincsp(&out).unwrap().unwrap().0.cost, 1);

        let loop_inst = parse_instance("k 1\nneq x x soft\n").unwrap();
        let (out, _, forced) = drop_disequalities(&loop_inst).unwrap();
        assert!(out.constraints.is_empty());
        assert_eq!(forced.into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn drop_disequalities_preserves_optimum_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..=6);
            let m = rng.gen_range(1..=7);
            let k = rng.gen_range(0..=3);
            let mut text = format!("k {k}\n");
            for _ in 0..m {
                let r = if rng.gen_bool(0.5) { "lt" } else { "neq" };
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                let wt = rng.gen_range(1..=3);
                text.push_str(&format!("{r} v{x} v{y} soft {wt}\n"));
            }
            let inst = parse_instance(&text).unwrap();
            let (out, _, forced) = drop_disequalities(&inst).unwrap();
            let forced_weight: u64 =
                forced.iter().map(|&i| inst.constraints[i].weight).sum();
            let before = brute_force_mincsp(&inst).unwrap();
            // Solve the reduced instance under the budgets left after the
            // forced deletions.
            let mut reduced = out.clone();
            if (forced.len() as u32) > inst.k {
                assert!(before.is_none(), "forced deletions exceed k on:\n{text}");
                continue;
            }
            reduced.k = inst.k - forced.len() as u32;
            reduced.w = inst.w.map(|w| w.saturating_sub(forced_weight));
            let after = brute_force_mincsp(&reduced).unwrap();
            match (before, after) {
                (None, None) => {}
                (Some((b, _)), Some((a, _))) => {
                    assert_eq!(b.cost, a.cost + forced.len() as u32, "cost drift on:\n{text}");
                    assert_eq!(b.weight, a.weight + forced_weight, "weight drift on:\n{text}");
                }
                (b, a) => panic!(
                    "feasibility drift on:\n{text}\nbefore={:?} after={:?}",
                    b.map(|x| x.0),
                    a.map(|x| x.0)
                ),
            }
        }
    }

    #[test]
    fn refine_injective_preserves_strict_order() {
        let a = Assignment::new(vec![3, 0, 0, 2]);
        let r = refine_injective(&a);
        assert!(r.ranks[1] < r.ranks[2], "ties break by variable id");
        assert!(r.ranks[2] < r.ranks[3] && r.ranks[3] < r.ranks[0]);
        let mut sorted = r.ranks.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }
}
