//! Exact solver for weighted deletion over `{lt,eq,neq}` instances.
//!
//! Iterative compression: soft constraints are added in id order while an
//! optimal solution of the processed prefix is maintained. When the current
//! solution stops working, the failed prefix is compressed: for every way of
//! splitting the carried set into outright deletions and kept constraints,
//! and every weak order on the kept constraints' variables, equal variables
//! are identified, the kept constraints are removed, and the remainder is
//! encoded as a Boolean instance whose exact optimum is lifted back to a
//! rank assignment.

use crate::boolean_solver::solve_boolean_mincsp_bounded;
use crate::booleanize::{booleanize, BooleanInstance, CompressedInstance};
use crate::model::{Assignment, Constraint, Instance, Relation, Softness, Solution};
use crate::reductions::ScopeError;
use crate::sat::check_satisfiable;
use crate::weak_orders::for_each_weak_order;
use rayon::prelude::*;
use std::sync::Mutex;

/// An exact rational value, kept in reduced form with a positive
/// denominator. Used for human-readable witness output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalValue {
    num: i64,
    den: i64,
}

impl RationalValue {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den).max(1);
        RationalValue { num: num / g, den: den / g }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }
}

impl std::fmt::Display for RationalValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl PartialOrd for RationalValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Scope(#[from] ScopeError),
    #[error(
        "compression carry spans {vars} variables; weak-order enumeration is limited to {limit}"
    )]
    CarryGuard { vars: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Explore compression branches in parallel. The result is identical to
    /// the sequential mode; branches share only a best-so-far bound.
    pub parallel: bool,
}


#[derive(Debug, Default, Clone, Copy)]
pub struct PipelineStats {
    pub compress_calls: usize,
}

/// A lifted Boolean solution: deletion set over the base constraint ids, a
/// rank witness, and the exact rational values realizing it.
#[derive(Debug, Clone)]
pub struct LiftedWitness {
    pub solution: Solution,
    pub assignment: Assignment,
    pub rationals: Vec<RationalValue>,
}

/// Reconstructs a rank assignment from a satisfying Boolean assignment.
///
/// Variables coinciding with anchor `i` take value `i`; every other variable
/// takes `floor + fractional`, where `floor` is the highest anchor known to
/// be below it and the fractional part comes from a satisfying assignment of
/// the non-anchor sub-instance, rescaled into (0,1) by rank `r` of `R`
/// becoming `(r+1)/(R+1)`.
pub fn lift_solution(
    bi: &BooleanInstance,
    assignment: &[bool],
    deleted: &[usize],
    ci: &CompressedInstance,
) -> LiftedWitness {
    let t = bi.table;
    let ell = t.ell;
    let n = ci.base.num_vars();

    let gamma = check_satisfiable(&ci.outside_instance())
        .expect("non-anchor sub-instance is satisfiable by construction");
    let big_r = gamma.ranks.iter().copied().max().map_or(1, |m| m + 1) as i64;

    let mut keys: Vec<(u64, u64)> = Vec::with_capacity(n);
    let mut rationals: Vec<RationalValue> = Vec::with_capacity(n);
    for v in 0..n {
        let coincide = (1..=ell).find(|&i| assignment[t.coincidence(v, i)]);
        match coincide {
            Some(i) => {
                keys.push((2 * i as u64, 0));
                rationals.push(RationalValue::new(i as i64, 1));
            }
            None => {
                let floor = (1..=ell).rev().find(|&i| assignment[t.position(v, 2 * i)]).unwrap_or(0);
                let r = gamma.ranks[v];
                keys.push((2 * floor as u64 + 1, r + 1));
                rationals.push(RationalValue::new(
                    floor as i64 * (big_r + 1) + r as i64 + 1,
                    big_r + 1,
                ));
            }
        }
    }
    let mut distinct: Vec<(u64, u64)> = keys.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let ranks: Vec<u64> =
        keys.iter().map(|k| distinct.binary_search(k).unwrap() as u64).collect();
    let assignment_out = Assignment::new(ranks);

    let mut sources: Vec<usize> =
        deleted.iter().map(|&i| bi.constraints[i].source.expect("soft carries source")).collect();
    sources.sort_unstable();
    sources.dedup();
    let solution = Solution::new(sources, &ci.base);

    // Runtime checks: the witness agrees with the anchor order and breaks
    // only deleted constraints.
    for (idx, &u) in ci.anchors.iter().enumerate() {
        assert!(
            assignment[t.coincidence(u, idx + 1)],
            "anchor {u} lost its own coincidence variable"
        );
        if idx > 0 {
            assert!(
                assignment_out.ranks[ci.anchors[idx - 1]] < assignment_out.ranks[u],
                "anchor order not reproduced by the lifted witness"
            );
        }
    }
    let report = crate::model::evaluate(&ci.base, &assignment_out).expect("total witness");
    for &id in &report.violated {
        assert!(
            solution.deleted.binary_search(&id).is_ok(),
            "lifted witness breaks undeleted constraint {id}"
        );
    }

    LiftedWitness { solution, assignment: assignment_out, rationals }
}

fn sub_instance(inst: &Instance, ids: &[usize]) -> Instance {
    Instance::new(
        inst.variables.clone(),
        ids.iter().map(|&i| inst.constraints[i].clone()).collect(),
        inst.k,
        inst.w,
    )
}

#[derive(Debug, Clone)]
struct Candidate {
    deleted: Vec<usize>,
    cost: u32,
    weight: u64,
    witness: Assignment,
}

impl Candidate {
    fn key(&self) -> (u32, u64, &[usize]) {
        (self.cost, self.weight, &self.deleted)
    }
}

/// Best-so-far (cost, weight) shared between branches.
struct Bound(Mutex<Option<(u32, u64)>>);

impl Bound {
    fn new(seed: Option<(u32, u64)>) -> Self {
        Bound(Mutex::new(seed))
    }

    fn get(&self) -> Option<(u32, u64)> {
        *self.0.lock().unwrap()
    }

    /// True when nothing with this (cost, weight) floor can beat or tie the
    /// current best.
    fn cuts(&self, cost: u32, weight: u64) -> bool {
        self.get().is_some_and(|b| (cost, weight) > b)
    }

    fn relax(&self, cost: u32, weight: u64) {
        let mut guard = self.0.lock().unwrap();
        if guard.is_none_or(|b| (cost, weight) < b) {
            *guard = Some((cost, weight));
        }
    }
}

/// One compression branch: delete `dropped` outright, enforce a weak order
/// on the variables of the kept carried constraints.
fn explore_branch(
    inst: &Instance,
    active: &[usize],
    x_in: &[usize],
    dropped: &[usize],
    bound: &Bound,
) -> Option<Candidate> {
    let w_budget = inst.w;
    let dropped_cost = dropped.len() as u32;
    let dropped_weight: u64 = dropped.iter().map(|&i| inst.constraints[i].weight).sum();
    if dropped_cost > inst.k || w_budget.is_some_and(|w| dropped_weight > w) {
        return None;
    }
    if bound.cuts(dropped_cost, dropped_weight) {
        return None;
    }
    let kept: Vec<usize> = x_in.iter().copied().filter(|i| !dropped.contains(i)).collect();
    let residual_src: Vec<usize> =
        active.iter().copied().filter(|i| !x_in.contains(i)).collect();

    if kept.is_empty() {
        // Dropping the whole carried set leaves a satisfiable residual.
        let witness = check_satisfiable(&sub_instance(inst, &residual_src))
            .expect("residual of a solution is satisfiable");
        bound.relax(dropped_cost, dropped_weight);
        return Some(Candidate {
            deleted: dropped.to_vec(),
            cost: dropped_cost,
            weight: dropped_weight,
            witness,
        });
    }

    let mut kept_vars: Vec<usize> = kept
        .iter()
        .flat_map(|&i| [inst.constraints[i].x, inst.constraints[i].y])
        .collect();
    kept_vars.sort_unstable();
    kept_vars.dedup();
    let mut var_pos = vec![usize::MAX; inst.num_vars()];
    for (p, &v) in kept_vars.iter().enumerate() {
        var_pos[v] = p;
    }
    let kept_shape: Vec<(usize, usize, Relation)> = kept
        .iter()
        .map(|&i| {
            let c = &inst.constraints[i];
            (var_pos[c.x], var_pos[c.y], c.rel)
        })
        .collect();

    let mut best: Option<Candidate> = None;
    for_each_weak_order(kept_vars.len(), |sigma| {
        // The order must satisfy every kept carried constraint.
        for &(x, y, rel) in &kept_shape {
            let ok = match rel {
                Relation::Lt => sigma[x] < sigma[y],
                Relation::Leq => sigma[x] <= sigma[y],
                Relation::Eq => sigma[x] == sigma[y],
                Relation::Neq => sigma[x] != sigma[y],
            };
            if !ok {
                return;
            }
        }

        // Identify equal-ranked variables: each class keeps its smallest id.
        let n_classes = sigma.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut class_rep = vec![usize::MAX; n_classes];
        for (p, &v) in kept_vars.iter().enumerate() {
            let c = sigma[p] as usize;
            class_rep[c] = class_rep[c].min(v);
        }
        let mut rep: Vec<usize> = (0..inst.num_vars()).collect();
        for (p, &v) in kept_vars.iter().enumerate() {
            rep[v] = class_rep[sigma[p] as usize];
        }

        // Merge the residual; identification can spawn self-loops.
        let mut forced: Vec<usize> = Vec::new();
        let mut base_constraints: Vec<(usize, Constraint)> = Vec::new();
        for &cid in &residual_src {
            let c = &inst.constraints[cid];
            let (mx, my) = (rep[c.x], rep[c.y]);
            if mx == my {
                match c.rel {
                    Relation::Eq | Relation::Leq => continue, // tautology
                    Relation::Lt | Relation::Neq => {
                        if c.is_soft() {
                            forced.push(cid);
                            continue;
                        }
                        return; // crisp self-loop: branch dead
                    }
                }
            }
            base_constraints.push((cid, Constraint { x: mx, y: my, ..c.clone() }));
        }
        let forced_weight: u64 = forced.iter().map(|&i| inst.constraints[i].weight).sum();
        let base_cost = dropped_cost + forced.len() as u32;
        let base_weight = dropped_weight + forced_weight;
        if base_cost > inst.k || w_budget.is_some_and(|w| base_weight > w) {
            return;
        }
        if bound.cuts(base_cost, base_weight) {
            return;
        }

        // Merged variable space: representatives only.
        let merged_vars: Vec<usize> = (0..inst.num_vars()).filter(|&v| rep[v] == v).collect();
        let mut merged_pos = vec![usize::MAX; inst.num_vars()];
        for (p, &v) in merged_vars.iter().enumerate() {
            merged_pos[v] = p;
        }
        let anchors: Vec<usize> = class_rep.iter().map(|&v| merged_pos[v]).collect();

        let orig_ids: Vec<usize> = base_constraints.iter().map(|&(cid, _)| cid).collect();
        let constraints: Vec<Constraint> = base_constraints
            .iter()
            .map(|(_, c)| Constraint { x: merged_pos[c.x], y: merged_pos[c.y], ..c.clone() })
            .collect();

        // Cheap cut: the crisp part plus the anchor chain must be satisfiable.
        {
            let mut probe: Vec<Constraint> =
                constraints.iter().filter(|c| !c.is_soft()).cloned().collect();
            for pair in anchors.windows(2) {
                probe.push(Constraint::crisp(pair[0], pair[1], Relation::Lt));
            }
            let probe_inst = Instance::new(
                merged_vars.iter().map(|&v| inst.variables[v].clone()).collect(),
                probe,
                0,
                None,
            );
            if check_satisfiable(&probe_inst).is_none() {
                return;
            }
        }

        let base = Instance::new(
            merged_vars.iter().map(|&v| inst.variables[v].clone()).collect(),
            constraints,
            inst.k - base_cost,
            w_budget.map(|w| w - base_weight),
        );
        let ci = CompressedInstance::new(base, anchors)
            .expect("branch residual forms a valid compressed instance");
        let bi = booleanize(&ci);
        let Some(bool_sol) =
            solve_boolean_mincsp_bounded(&bi, (base_cost, base_weight), bound.get())
        else {
            return;
        };
        let lifted = lift_solution(&bi, &bool_sol.assignment, &bool_sol.deleted, &ci);

        // Assemble the candidate in original ids and variables.
        let mut deleted: Vec<usize> = dropped.to_vec();
        deleted.extend_from_slice(&forced);
        deleted.extend(lifted.solution.deleted.iter().map(|&p| orig_ids[p]));
        deleted.sort_unstable();
        let cost = base_cost + lifted.solution.cost;
        let weight = base_weight + lifted.solution.weight;
        let ranks: Vec<u64> = (0..inst.num_vars())
            .map(|v| lifted.assignment.ranks[merged_pos[rep[v]]])
            .collect();
        let witness = Assignment::new(ranks);

        // Runtime postcondition over the active prefix.
        for &cid in active {
            let c = &inst.constraints[cid];
            let (rx, ry) = (witness.ranks[c.x], witness.ranks[c.y]);
            let broken = match c.rel {
                Relation::Lt => !(rx < ry),
                Relation::Leq => rx > ry,
                Relation::Eq => rx != ry,
                Relation::Neq => rx == ry,
            };
            assert!(
                !broken || deleted.binary_search(&cid).is_ok(),
                "compression witness breaks undeleted constraint {cid}"
            );
        }

        let candidate = Candidate { deleted, cost, weight, witness };
        if best.as_ref().is_none_or(|b| candidate.key() < b.key()) {
            bound.relax(candidate.cost, candidate.weight);
            best = Some(candidate);
        }
    })
    .expect("carried variable set is within the enumeration guard");
    best
}

fn compress_step_impl(
    inst: &Instance,
    active: &[usize],
    x_in: &[usize],
    opts: &SolveOptions,
) -> Result<Option<Candidate>, PipelineError> {
    debug_assert!(x_in.iter().all(|&i| inst.constraints[i].is_soft()));
    debug_assert!(x_in.windows(2).all(|p| p[0] < p[1]));
    let carry_vars: std::collections::BTreeSet<usize> = x_in
        .iter()
        .flat_map(|&i| [inst.constraints[i].x, inst.constraints[i].y])
        .collect();
    if carry_vars.len() > crate::weak_orders::MAX_ELEMENTS {
        return Err(PipelineError::CarryGuard {
            vars: carry_vars.len(),
            limit: crate::weak_orders::MAX_ELEMENTS,
        });
    }

    // Guessed outright-deletion subsets, smallest first.
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << x_in.len())
        .map(|mask| {
            x_in.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &id)| id)
                .collect()
        })
        .collect();
    subsets.sort_by_key(|s| (s.len(), s.clone()));

    // The whole carried set is itself a solution; within budgets it seeds
    // the bound (its branch reproduces the actual candidate).
    let x_in_weight: u64 = x_in.iter().map(|&i| inst.constraints[i].weight).sum();
    let seed = (x_in.len() as u32 <= inst.k
        && inst.w.is_none_or(|w| x_in_weight <= w))
    .then_some((x_in.len() as u32, x_in_weight));
    let bound = Bound::new(seed);

    let candidates: Vec<Option<Candidate>> = if opts.parallel {
        subsets.par_iter().map(|y| explore_branch(inst, active, x_in, y, &bound)).collect()
    } else {
        subsets.iter().map(|y| explore_branch(inst, active, x_in, y, &bound)).collect()
    };
    Ok(candidates
        .into_iter()
        .flatten()
        .min_by(|a, b| a.key().cmp(&b.key()).then(std::cmp::Ordering::Equal)))
}

/// Re-optimizes after the carried solution `x_in` stopped fitting: returns
/// the minimum (cost, weight, ids) deletion set of the instance together
/// with a witness, or `None` when nothing fits the budgets. Requires that
/// removing `x_in` makes the instance satisfiable.
pub fn compress_step(
    inst: &Instance,
    x_in: &[usize],
    opts: &SolveOptions,
) -> Result<Option<(Solution, Assignment)>, PipelineError> {
    let active: Vec<usize> = (0..inst.constraints.len()).collect();
    let mut sorted = x_in.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(compress_step_impl(inst, &active, &sorted, opts)?
        .map(|c| (Solution::new(c.deleted, inst), c.witness)))
}

/// Iterative-compression driver; see [`solve`].
pub fn compression_driver(
    inst: &Instance,
    opts: &SolveOptions,
) -> Result<(Option<(Solution, Assignment)>, PipelineStats), PipelineError> {
    for (id, c) in inst.constraints.iter().enumerate() {
        if !matches!(c.rel, Relation::Lt | Relation::Eq | Relation::Neq) {
            return Err(ScopeError::OutOfScope { id, rel: c.rel }.into());
        }
    }
    let inst = inst.normalize();
    let mut stats = PipelineStats::default();

    let mut active: Vec<usize> = (0..inst.constraints.len())
        .filter(|&i| inst.constraints[i].softness == Softness::Crisp)
        .collect();
    if check_satisfiable(&sub_instance(&inst, &active)).is_none() {
        return Ok((None, stats));
    }
    let soft_ids: Vec<usize> =
        (0..inst.constraints.len()).filter(|&i| inst.constraints[i].is_soft()).collect();

    let mut solution: Vec<usize> = Vec::new();
    for &next in &soft_ids {
        active.push(next);
        let residual: Vec<usize> =
            active.iter().copied().filter(|i| !solution.contains(i)).collect();
        if check_satisfiable(&sub_instance(&inst, &residual)).is_some() {
            continue;
        }
        let mut x_in = solution.clone();
        x_in.push(next);
        x_in.sort_unstable();
        stats.compress_calls += 1;
        match compress_step_impl(&inst, &active, &x_in, opts)? {
            Some(candidate) => solution = candidate.deleted,
            None => return Ok((None, stats)),
        }
    }

    let residual: Vec<usize> =
        (0..inst.constraints.len()).filter(|i| !solution.contains(i)).collect();
    let witness = check_satisfiable(&sub_instance(&inst, &residual))
        .expect("maintained set is a solution");
    let sol = Solution::new(solution, &inst);
    debug_assert!(crate::model::verify_solution(&inst, &sol, &witness).is_ok());
    Ok((Some((sol, witness)), stats))
}

/// Minimum (cost, then weight, then deleted ids) solution of a `{lt,eq,neq}`
/// instance within its budgets, with a witness breaking only deleted
/// constraints. `None` when no solution fits (including a crisp-infeasible
/// core).
pub fn solve(inst: &Instance) -> Result<Option<(Solution, Assignment)>, PipelineError> {
    solve_with_options(inst, &SolveOptions::default())
}

pub fn solve_with_options(
    inst: &Instance,
    opts: &SolveOptions,
) -> Result<Option<(Solution, Assignment)>, PipelineError> {
    compression_driver(inst, opts).map(|(result, _)| result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;
    use crate::model::verify_solution;
    use crate::oracle::brute_force_mincsp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_cycle_needs_one_deletion() {
        let inst = parse_instance("k 1\nlt x y soft\nlt y x soft\n").unwrap();
        let (sol, witness) = solve(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, 1);
        verify_solution(&inst, &sol, &witness).unwrap();
    }

    #[test]
    fn equality_chain_against_crisp_disequality() {
        let inst = parse_instance("k 1\neq a b soft\neq b c soft\nneq a c crisp\n").unwrap();
        let (sol, witness) = solve(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, 1);
        verify_solution(&inst, &sol, &witness).unwrap();
    }

    #[test]
    fn crisp_core_contradiction_returns_none() {
        let inst = parse_instance("k 4\nneq x y crisp\neq x y crisp\n").unwrap();
        assert!(solve(&inst).unwrap().is_none());
    }

    #[test]
    fn satisfiable_instance_skips_compression() {
        let inst = parse_instance("k 2\nlt a b soft\nlt b c soft\neq d e soft\n").unwrap();
        let (result, stats) = compression_driver(&inst, &SolveOptions::default()).unwrap();
        let (sol, _) = result.unwrap();
        assert_eq!(sol.cost, 0);
        assert_eq!(stats.compress_calls, 0);
    }

    #[test]
    fn double_two_cycle_costs_two() {
        let inst =
            parse_instance("k 2\nlt x y soft\nlt y x soft\nlt y z soft\nlt z y soft\n").unwrap();
        let (sol, _) = solve(&inst).unwrap().unwrap();
        assert_eq!(sol.cost, 2);
    }

    #[test]
    fn budget_below_optimum_returns_none() {
        let inst =
            parse_instance("k 1\nlt x y soft\nlt y x soft\nlt y z soft\nlt z y soft\n").unwrap();
        assert!(solve(&inst).unwrap().is_none());
    }

    #[test]
    fn rejects_leq_constraints() {
        let inst = parse_instance("k 1\nleq x y soft\n").unwrap();
        assert!(solve(&inst).is_err());
    }

    #[test]
    fn weighted_identification_finds_light_solution() {
        // Keeping the equality forces the strict chain into a self-loop, so
        // the optimum deletes one cheap chain link rather than the equality.
        let inst =
            parse_instance("k 1\nw 10\nlt x z soft 1\nlt z y soft 1\neq x y soft 5\n").unwrap();
        let (sol, witness) = solve(&inst).unwrap().unwrap();
        assert_eq!((sol.cost, sol.weight), (1, 1));
        verify_solution(&inst, &sol, &witness).unwrap();
    }

    #[test]
    fn duplicate_equalities_keep_distinct_ids() {
        let inst = parse_instance(
            "k 1\nlt x z soft\nlt z y soft\neq x y soft\neq x y soft\n",
        )
        .unwrap();
        let oracle = brute_force_mincsp(&inst).unwrap().unwrap().0;
        let (sol, _) = solve(&inst).unwrap().unwrap();
        assert_eq!((sol.cost, sol.weight), (oracle.cost, oracle.weight));
        assert_eq!(sol.cost, 1);
    }

    #[test]
    fn compress_step_recovers_optimum_directly() {
        let inst = parse_instance("k 2\nlt x y soft\nlt y x soft\nlt y z soft\nlt z y soft\n")
            .unwrap();
        // x_in = a valid solution: constraints 0 and 2.
        let (sol, witness) =
            compress_step(&inst, &[0, 2], &SolveOptions::default()).unwrap().unwrap();
        assert_eq!(sol.cost, 2);
        verify_solution(&inst, &sol, &witness).unwrap();
    }

    #[test]
    fn equal_cost_lighter_fix_survives_branch_offsets() {
        // Dropping constraint 5 carries a (1,1) offset into the Boolean
        // step, where deleting constraint 3 (weight 1) must win over
        // deleting constraint 0 (weight 2).
        let inst = parse_instance(
            "k 3\neq v4 v3 soft 2\nneq v4 v0 soft 1\nneq v4 v2 soft 3\nlt v1 v4 soft 1\n\
             lt v2 v1 soft 3\nlt v1 v2 soft 1\nlt v3 v1 soft 4\nlt v0 v4 crisp\n",
        )
        .unwrap();
        let (sol, witness) = solve(&inst).unwrap().unwrap();
        assert_eq!((sol.cost, sol.weight), (2, 2));
        assert_eq!(sol.deleted, vec![3, 5]);
        verify_solution(&inst, &sol, &witness).unwrap();
    }

    #[test]
    fn carry_spanning_too_many_variables_errors() {
        let mut text = String::from("k 7\n");
        for i in 0..7 {
            text.push_str(&format!("lt a{i} b{i} soft\n"));
        }
        let inst = parse_instance(&text).unwrap();
        let x_in: Vec<usize> = (0..7).collect();
        assert!(matches!(
            compress_step(&inst, &x_in, &SolveOptions::default()),
            Err(PipelineError::CarryGuard { vars: 14, .. })
        ));
    }

    #[test]
    fn compress_step_finds_forced_deletion_in_the_drop_branch() {
        // The carried constraint must go; only the branch dropping all of
        // x_in survives.
        let inst = parse_instance("k 1\nlt x y soft\nlt y x crisp\n").unwrap();
        let (sol, witness) =
            compress_step(&inst, &[0], &SolveOptions::default()).unwrap().unwrap();
        assert_eq!(sol.deleted, vec![0]);
        verify_solution(&inst, &sol, &witness).unwrap();
    }

    #[test]
    fn compress_step_matches_oracle_with_full_soft_carry() {
        // Feed compress_step the whole soft set as the carried solution and
        // compare against exhaustive search.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 60 {
            let n = rng.gen_range(2..=5);
            let soft = rng.gen_range(1..=5);
            let crisp = rng.gen_range(0..=2);
            let k = rng.gen_range(0..=3);
            let mut text = format!("k {k}\n");
            let rels = [Relation::Lt, Relation::Eq, Relation::Neq];
            for i in 0..soft + crisp {
                let rel = rels[rng.gen_range(0..3)];
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                let softness = if i < soft { "soft" } else { "crisp" };
                let w = rng.gen_range(1..=3);
                text.push_str(&format!("{} v{x} v{y} {softness} {w}\n", rel.token()));
            }
            let inst = parse_instance(&text).unwrap();
            let x_in: Vec<usize> = (0..soft).collect();
            // compress_step requires removing x_in to leave a satisfiable
            // instance: here that is the crisp part.
            let crisp_ids: Vec<usize> = (soft..soft + crisp).collect();
            if check_satisfiable(&sub_instance(&inst, &crisp_ids)).is_none() {
                continue;
            }
            checked += 1;
            let got = compress_step(&inst, &x_in, &SolveOptions::default()).unwrap();
            let want = brute_force_mincsp(&inst).unwrap();
            match (&want, &got) {
                (None, None) => {}
                (Some((w, _)), Some((g, witness))) => {
                    assert_eq!((w.cost, w.weight), (g.cost, g.weight), "on:\n{text}");
                    verify_solution(&inst, g, witness).unwrap();
                }
                _ => panic!("feasibility mismatch on:\n{text}"),
            }
        }
    }

    fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
        let n = rng.gen_range(2..=6);
        let soft = rng.gen_range(1..=10);
        let crisp = rng.gen_range(0..=3);
        let k = rng.gen_range(0..=3);
        let mut text = format!("k {k}\n");
        if rng.gen_bool(0.5) {
            text.push_str(&format!("w {}\n", rng.gen_range(1..=12)));
        }
        let rels = [Relation::Lt, Relation::Eq, Relation::Neq];
        let push_constraint = |text: &mut String, softness: &str, rng: &mut ChaCha8Rng| {
            let rel = rels[rng.gen_range(0..3)];
            let x = rng.gen_range(0..n);
            let y = rng.gen_range(0..n);
            let weight = rng.gen_range(1..=4);
            text.push_str(&format!("{} v{x} v{y} {softness} {weight}\n", rel.token()));
        };
        for _ in 0..soft {
            push_constraint(&mut text, "soft", rng);
        }
        for _ in 0..crisp {
            push_constraint(&mut text, "crisp", rng);
        }
        parse_instance(&text).unwrap()
    }

    #[test]
    fn matches_oracle_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for case in 0..120 {
            let inst = random_instance(&mut rng);
            let expected = brute_force_mincsp(&inst).unwrap();
            let got = solve(&inst).unwrap();
            match (&expected, &got) {
                (None, None) => {}
                (Some((want, _)), Some((have, witness))) => {
                    assert_eq!(
                        (want.cost, want.weight),
                        (have.cost, have.weight),
                        "case {case} diverged on:\n{}",
                        crate::format::serialize_instance(&inst)
                    );
                    verify_solution(&inst.normalize(), have, witness).unwrap();
                }
                _ => panic!(
                    "case {case}: feasibility disagreement on:\n{}",
                    crate::format::serialize_instance(&inst)
                ),
            }
        }
    }

    #[test]
    fn parallel_mode_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..40 {
            let inst = random_instance(&mut rng);
            let serial = solve_with_options(&inst, &SolveOptions { parallel: false }).unwrap();
            let parallel = solve_with_options(&inst, &SolveOptions { parallel: true }).unwrap();
            match (serial, parallel) {
                (None, None) => {}
                (Some((a, _)), Some((b, _))) => {
                    assert_eq!((a.cost, a.weight, a.deleted), (b.cost, b.weight, b.deleted));
                }
                _ => panic!("parallel feasibility mismatch"),
            }
        }
    }

    #[test]
    fn lift_produces_exact_rationals() {
        // One anchor, one free variable pinned above it.
        let base = parse_instance("k 0\nlt u v crisp\n").unwrap();
        let ci = CompressedInstance::new(base, vec![0]).unwrap();
        let bi = booleanize(&ci);
        let sol = crate::boolean_solver::solve_boolean_mincsp(&bi).unwrap();
        let lifted = lift_solution(&bi, &sol.assignment, &sol.deleted, &ci);
        assert!(lifted.rationals[0] < lifted.rationals[1]);
        assert_eq!(lifted.rationals[0], RationalValue::new(1, 1));
    }

    #[test]
    fn lift_places_coinciding_variable_at_the_anchor() {
        // An equality with the anchor forces the coincidence variable, and
        // the lift puts both at the same value.
        let base = parse_instance("k 0\neq v u crisp\n").unwrap();
        let u = 1;
        let ci = CompressedInstance::new(base, vec![u]).unwrap();
        let bi = booleanize(&ci);
        let sol = crate::boolean_solver::solve_boolean_mincsp(&bi).unwrap();
        assert!(sol.assignment[bi.table.coincidence(0, 1)]);
        let lifted = lift_solution(&bi, &sol.assignment, &sol.deleted, &ci);
        assert_eq!(lifted.assignment.ranks[0], lifted.assignment.ranks[u]);
        assert_eq!(lifted.rationals[0], RationalValue::new(1, 1));
    }

    #[test]
    fn lift_places_unanchored_variable_below_the_first_anchor() {
        // v < u forces every position variable of v beyond the first to
        // zero; the lifted value is the fractional part alone, in (0,1).
        let base = parse_instance("k 0\nlt v u crisp\n").unwrap();
        let u = 1;
        let ci = CompressedInstance::new(base, vec![u]).unwrap();
        let bi = booleanize(&ci);
        let sol = crate::boolean_solver::solve_boolean_mincsp(&bi).unwrap();
        let lifted = lift_solution(&bi, &sol.assignment, &sol.deleted, &ci);
        assert!(lifted.assignment.ranks[0] < lifted.assignment.ranks[u]);
        assert!(lifted.rationals[0] > RationalValue::new(0, 1));
        assert!(lifted.rationals[0] < RationalValue::new(1, 1));
    }
}
