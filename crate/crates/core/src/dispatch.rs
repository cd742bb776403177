//! Solve routing across engines, following the tractability classifier:
//! polynomial fragments get the direct zero-cost solvers, `{lt,neq}` drops
//! its disequalities and runs the compression pipeline, `{lt,eq,neq}` runs
//! the pipeline natively, `{lt,leq,eq}` is rewritten to `{lt,leq}` and
//! handed to the exhaustive engine, and anything containing `{leq,neq}` is
//! exhaustive-only with a hardness notice.

use crate::model::{
    classify_language, Assignment, Instance, LanguageClass, Relation, Solution,
};
use crate::oracle::{brute_force_mincsp, GuardError};
use crate::pipeline::{self, PipelineError, SolveOptions};
use crate::reductions::{pull_back, rewrite_eq_as_leq};
use crate::sat::{check_satisfiable, drop_disequalities, refine_injective, trivial_solve};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Auto,
    Pipeline,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineUsed {
    Trivial,
    Pipeline,
    Oracle,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Yes(Solution, Assignment),
    No,
    CrispUnsat,
}

#[derive(Debug, Clone)]
pub struct DispatchReport {
    pub verdict: Verdict,
    pub engine: EngineUsed,
    pub class: LanguageClass,
    pub notices: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum DispatchError {
    #[error("{0}")]
    Guard(#[from] GuardError),
    #[error("engine cannot handle this instance: {0}")]
    UnsupportedEngine(String),
}

fn pipeline_err(e: PipelineError) -> DispatchError {
    match e {
        // Relations are checked before routing to the pipeline.
        PipelineError::Scope(s) => DispatchError::UnsupportedEngine(s.to_string()),
        PipelineError::CarryGuard { .. } => {
            DispatchError::Guard(GuardError { what: e.to_string() })
        }
    }
}

fn crisp_core_unsat(inst: &Instance) -> bool {
    let crisp: Vec<_> =
        inst.constraints.iter().filter(|c| !c.is_soft()).cloned().collect();
    let core = Instance::new(inst.variables.clone(), crisp, 0, None);
    check_satisfiable(&core).is_none()
}

fn finish(inst: &Instance, result: Option<(Solution, Assignment)>, engine: EngineUsed, class: LanguageClass, notices: Vec<String>) -> DispatchReport {
    let verdict = match result {
        Some((sol, a)) => Verdict::Yes(sol, a),
        None => {
            if crisp_core_unsat(inst) {
                Verdict::CrispUnsat
            } else {
                Verdict::No
            }
        }
    };
    DispatchReport { verdict, engine, class, notices }
}

/// Runs the `{lt,neq}` route: forced self-loop deletions, then the pipeline
/// on the `{lt}` remainder, then an injective refinement of the witness so
/// the dropped disequalities hold.
fn solve_lt_neq(
    inst: &Instance,
    opts: &SolveOptions,
) -> Result<Option<(Solution, Assignment)>, DispatchError> {
    let (reduced, back, forced) =
        drop_disequalities(inst).expect("relations checked by the router");
    if forced.iter().any(|&i| !inst.constraints[i].is_soft()) {
        return Ok(None); // crisp strict self-loop: nothing to delete
    }
    let forced_cost = forced.len() as u32;
    let forced_weight: u64 = forced.iter().map(|&i| inst.constraints[i].weight).sum();
    if forced_cost > inst.k || inst.w.is_some_and(|w| forced_weight > w) {
        return Ok(None);
    }
    let mut lt_inst = reduced;
    lt_inst.k = inst.k - forced_cost;
    lt_inst.w = inst.w.map(|w| w - forced_weight);
    let Some((sol, witness)) =
        pipeline::solve_with_options(&lt_inst, opts).map_err(pipeline_err)?
    else {
        return Ok(None);
    };
    // Map ids back and refine the witness so remaining disequalities hold.
    let mut deleted: Vec<usize> = sol.deleted.iter().map(|&i| back.map[i]).collect();
    deleted.extend(forced.iter().copied());
    let witness = refine_injective(&witness);
    Ok(Some((Solution::new(deleted, inst), witness)))
}

fn oracle_route(inst: &Instance) -> Result<Option<(Solution, Assignment)>, DispatchError> {
    Ok(brute_force_mincsp(inst)?)
}

/// `{lt,leq,eq}` route: equalities become `<=` pairs, the rewritten instance
/// is solved exhaustively, and the solution is pulled back through the twin
/// map.
fn rewrite_oracle_route(
    inst: &Instance,
) -> Result<Option<(Solution, Assignment)>, DispatchError> {
    let (rewritten, back) = rewrite_eq_as_leq(inst);
    let Some((sol, witness)) = brute_force_mincsp(&rewritten)? else {
        return Ok(None);
    };
    let pulled = pull_back(inst, &back, &sol.deleted, &witness)
        .expect("optimal rewritten solution pulls back");
    Ok(Some((pulled, witness)))
}

pub fn dispatch_solve(
    inst: &Instance,
    engine: Engine,
    opts: &SolveOptions,
) -> Result<DispatchReport, DispatchError> {
    let inst = inst.normalize();
    let rels = inst.relations_used();
    let class = classify_language(&rels);
    let has = |r: Relation| rels.contains(&r);

    match engine {
        Engine::Pipeline => {
            if has(Relation::Leq) {
                return Err(DispatchError::UnsupportedEngine(
                    "the compression pipeline handles only {lt,eq,neq}".into(),
                ));
            }
            let result = if has(Relation::Lt) && has(Relation::Neq) && !has(Relation::Eq) {
                solve_lt_neq(&inst, opts)?
            } else {
                pipeline::solve_with_options(&inst, opts).map_err(pipeline_err)?
            };
            return Ok(finish(&inst, result, EngineUsed::Pipeline, class, Vec::new()));
        }
        Engine::Oracle => {
            let result = oracle_route(&inst)?;
            return Ok(finish(&inst, result, EngineUsed::Oracle, class, Vec::new()));
        }
        Engine::Auto => {}
    }

    if class == LanguageClass::PolyTime {
        let result = trivial_solve(&inst).expect("polynomial fragment");
        return Ok(finish(&inst, result, EngineUsed::Trivial, class, Vec::new()));
    }
    if rels.iter().all(|r| matches!(r, Relation::Lt | Relation::Neq)) {
        let result = solve_lt_neq(&inst, opts)?;
        return Ok(finish(&inst, result, EngineUsed::Pipeline, class, Vec::new()));
    }
    if rels.iter().all(|r| matches!(r, Relation::Lt | Relation::Eq | Relation::Neq)) {
        let result = pipeline::solve_with_options(&inst, opts).map_err(pipeline_err)?;
        return Ok(finish(&inst, result, EngineUsed::Pipeline, class, Vec::new()));
    }
    if rels.iter().all(|r| matches!(r, Relation::Lt | Relation::Leq | Relation::Eq)) {
        let result = rewrite_oracle_route(&inst)?;
        let notices = vec!["exact, non-FPT engine (rewritten to {lt,leq})".to_string()];
        return Ok(finish(&inst, result, EngineUsed::Oracle, class, notices));
    }
    // Both leq and neq present: W[1]-hard fragment, exhaustive search only.
    let result = oracle_route(&inst)?;
    let notices = vec![
        "this fragment is W[1]-hard; falling back to exhaustive search".to_string(),
    ];
    Ok(finish(&inst, result, EngineUsed::Oracle, class, notices))
}
