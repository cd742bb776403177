//! Seeded verification suites comparing every solver against its
//! independent ground truth. These back both the `bench` command and the
//! acceptance test suite.

use crate::booleanize::{booleanize, CompressedInstance};
use crate::format::serialize_instance;
use crate::gadgets::{
    build_dsmc_from_clique, clique_to_cut, cut_to_clique, verify_dsmc_solution, CliqueInstance,
};
use crate::gen::{gen_random_instance, GenParams};
use crate::model::{evaluate, verify_solution, Instance, Relation};
use crate::oracle::{
    brute_force_dsmc, brute_force_graph_optimum, brute_force_mincsp,
    brute_force_multicolored_clique,
};
use crate::pipeline;
use crate::reductions::{
    pull_back, rewrite_eq_as_leq, rewrite_lt_as_leq_neq, to_dfas, to_dsmc, to_edge_multicut,
    to_subset_dfas, BackMap, GraphProblemInstance,
};
use crate::sat::check_satisfiable;
use crate::two_sat::{two_sat_satisfiable, Clause};
use crate::weak_orders::for_each_weak_order;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    PipelineVsOracle,
    BooleanVsSubsets,
    ReductionsRoundtrip,
    GadgetK2N2,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 4] = [
        SuiteKind::PipelineVsOracle,
        SuiteKind::BooleanVsSubsets,
        SuiteKind::ReductionsRoundtrip,
        SuiteKind::GadgetK2N2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::PipelineVsOracle => "pipeline-vs-oracle",
            SuiteKind::BooleanVsSubsets => "boolean-vs-subsets",
            SuiteKind::ReductionsRoundtrip => "reductions-roundtrip",
            SuiteKind::GadgetK2N2 => "gadget-k2n2",
        }
    }

    pub fn from_name(name: &str) -> Option<SuiteKind> {
        SuiteKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn default_count(self) -> usize {
        match self {
            SuiteKind::PipelineVsOracle => 500,
            SuiteKind::BooleanVsSubsets => 200,
            SuiteKind::ReductionsRoundtrip => 300,
            SuiteKind::GadgetK2N2 => 16,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub cases: Vec<CaseResult>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

fn case(name: String, result: Result<String, String>) -> CaseResult {
    match result {
        Ok(detail) => CaseResult { name, pass: true, detail },
        Err(detail) => CaseResult { name, pass: false, detail },
    }
}

fn run_cases<F>(names: Vec<String>, parallel: bool, f: F) -> Vec<CaseResult>
where
    F: Fn(usize) -> Result<String, String> + Sync,
{
    if parallel {
        names
            .into_par_iter()
            .enumerate()
            .map(|(i, name)| case(name, f(i)))
            .collect()
    } else {
        names.into_iter().enumerate().map(|(i, name)| case(name, f(i))).collect()
    }
}

pub fn run_suite(kind: SuiteKind, seed: u64, count: usize, parallel: bool) -> SuiteReport {
    let start = Instant::now();
    let cases = match kind {
        SuiteKind::PipelineVsOracle => pipeline_vs_oracle(seed, count, parallel),
        SuiteKind::BooleanVsSubsets => boolean_vs_subsets(seed, count, parallel),
        SuiteKind::ReductionsRoundtrip => reductions_roundtrip(seed, count, parallel),
        SuiteKind::GadgetK2N2 => gadget_k2n2(parallel),
    };
    SuiteReport { suite: kind.name(), cases, elapsed: start.elapsed() }
}

fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// Random instance in the shape the pipeline suite exercises: up to 6
/// variables, up to 10 soft and 3 crisp constraints over `{lt,eq,neq}`,
/// k <= 3, weight budget absent or random.
fn random_pipeline_instance(rng: &mut ChaCha8Rng) -> Instance {
    let params = GenParams {
        seed: rng.gen(),
        n_vars: rng.gen_range(2..=6),
        n_constraints: 0,
        relations: vec![Relation::Lt, Relation::Eq, Relation::Neq],
        crisp_prob: 0.0,
        max_weight: 4,
        k: rng.gen_range(0..=3),
        w: if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(1..=12)) },
        allow_self_loops: false,
    };
    let soft = rng.gen_range(1..=10);
    let crisp = rng.gen_range(0..=3);
    let mut inst = gen_random_instance(&GenParams {
        n_constraints: soft,
        ..params.clone()
    });
    let crisp_part = gen_random_instance(&GenParams {
        seed: rng.gen(),
        n_constraints: crisp,
        crisp_prob: 1.0,
        ..params
    });
    inst.constraints.extend(crisp_part.constraints);
    inst
}

fn pipeline_vs_oracle(seed: u64, count: usize, parallel: bool) -> Vec<CaseResult> {
    let names = (0..count).map(|i| format!("pipeline-vs-oracle #{i}")).collect();
    run_cases(names, parallel, |i| {
        let mut rng = case_rng(seed, i);
        let inst = random_pipeline_instance(&mut rng);
        let expected =
            brute_force_mincsp(&inst).map_err(|e| e.to_string())?.map(|(s, _)| (s.cost, s.weight));
        let got = pipeline::solve(&inst).map_err(|e| e.to_string())?;
        match (expected, &got) {
            (None, None) => Ok("both infeasible".into()),
            (Some(want), Some((sol, witness))) => {
                if (sol.cost, sol.weight) != want {
                    return Err(format!(
                        "optimum mismatch: oracle {:?}, pipeline {:?} on\n{}",
                        want,
                        (sol.cost, sol.weight),
                        serialize_instance(&inst)
                    ));
                }
                verify_solution(&inst.normalize(), sol, witness)
                    .map_err(|e| format!("witness rejected: {e}"))?;
                Ok(format!("cost {} weight {}", sol.cost, sol.weight))
            }
            (want, got) => Err(format!(
                "feasibility mismatch: oracle {:?}, pipeline {:?} on\n{}",
                want,
                got.as_ref().map(|(s, _)| (s.cost, s.weight)),
                serialize_instance(&inst)
            )),
        }
    })
}

/// Random compressed instance: up to 4 base variables, up to 2 anchors,
/// k <= 2. Rejection-samples until the non-anchor part is satisfiable.
fn random_compressed(rng: &mut ChaCha8Rng) -> CompressedInstance {
    loop {
        let n = rng.gen_range(1..=4);
        let ell = rng.gen_range(0..=2.min(n));
        let inst = gen_random_instance(&GenParams {
            seed: rng.gen(),
            n_vars: n,
            n_constraints: if n == 1 { 0 } else { rng.gen_range(0..=6) },
            relations: vec![Relation::Lt, Relation::Eq, Relation::Neq],
            crisp_prob: 0.2,
            max_weight: 3,
            k: rng.gen_range(0..=2),
            w: if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(1..=8)) },
            allow_self_loops: false,
        });
        // anchors: a random subset in a random order
        let mut vars: Vec<usize> = (0..n).collect();
        for i in (1..vars.len()).rev() {
            vars.swap(i, rng.gen_range(0..=i));
        }
        vars.truncate(ell);
        if let Ok(ci) = CompressedInstance::new(inst, vars) {
            return ci;
        }
    }
}

/// All (cost, weight) pairs achievable by weak orders agreeing with the
/// anchor order and breaking no crisp constraint.
fn compressed_feasible_pairs(ci: &CompressedInstance) -> Vec<(u32, u64)> {
    let mut pairs = Vec::new();
    for_each_weak_order(ci.base.num_vars(), |ranks| {
        for pair in ci.anchors.windows(2) {
            if ranks[pair[0]] >= ranks[pair[1]] {
                return;
            }
        }
        let report =
            evaluate(&ci.base, &crate::model::Assignment::new(ranks.to_vec())).unwrap();
        if !report.crisp_violation {
            pairs.push((report.cost, report.weight));
        }
    })
    .expect("small instance");
    pairs
}

/// All (cost, weight) pairs achievable on the Boolean side by deleting at
/// most `max_cost` soft constraints and satisfying the rest.
fn boolean_feasible_pairs(ci: &CompressedInstance, max_cost: usize) -> Vec<(u32, u64)> {
    let bi = booleanize(ci);
    let softs = bi.soft_indices();
    let crisp_clauses: Vec<Clause> = bi
        .constraints
        .iter()
        .filter(|c| !c.is_soft())
        .flat_map(|c| c.clauses.iter().copied())
        .collect();
    let mut pairs = Vec::new();
    let max_cost = max_cost.min(softs.len());
    for mask in 0u32..1 << softs.len() {
        let size = mask.count_ones() as usize;
        if size > max_cost {
            continue;
        }
        let mut clauses = crisp_clauses.clone();
        let mut weight = 0u64;
        for (pos, &idx) in softs.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                weight += bi.constraints[idx].weight;
            } else {
                clauses.extend_from_slice(&bi.constraints[idx].clauses);
            }
        }
        if two_sat_satisfiable(bi.table.total(), &clauses).is_some() {
            pairs.push((size as u32, weight));
        }
    }
    pairs
}

fn boolean_vs_subsets(seed: u64, count: usize, parallel: bool) -> Vec<CaseResult> {
    let names = (0..count).map(|i| format!("boolean-vs-subsets #{i}")).collect();
    run_cases(names, parallel, |i| {
        let mut rng = case_rng(seed, i);
        let ci = random_compressed(&mut rng);
        let k = ci.base.k;
        let compressed = compressed_feasible_pairs(&ci);
        let boolean = boolean_feasible_pairs(&ci, k as usize);
        let total_weight: u64 =
            ci.base.constraints.iter().filter(|c| c.is_soft()).map(|c| c.weight).sum();
        let feasible = |pairs: &[(u32, u64)], kb: u32, wb: Option<u64>| {
            pairs.iter().any(|&(c, w)| c <= kb && wb.is_none_or(|wb| w <= wb))
        };
        for kb in 0..=k {
            for wb in (0..=total_weight).map(Some).chain([None]) {
                let lhs = feasible(&compressed, kb, wb);
                let rhs = feasible(&boolean, kb, wb);
                if lhs != rhs {
                    return Err(format!(
                        "grid mismatch at k'={kb} w'={wb:?}: order-side {lhs}, boolean-side \
                         {rhs} on\n{}anchors {:?}",
                        serialize_instance(&ci.base),
                        ci.anchors
                    ));
                }
            }
        }
        let min_of = |pairs: &[(u32, u64)]| {
            pairs
                .iter()
                .filter(|&&(c, w)| c <= k && ci.base.w.is_none_or(|wb| w <= wb))
                .min()
                .copied()
        };
        if min_of(&compressed) != min_of(&boolean) {
            return Err(format!(
                "minimum mismatch: order-side {:?}, boolean-side {:?}",
                min_of(&compressed),
                min_of(&boolean)
            ));
        }
        Ok(format!("{} grid points agree", (k as u64 + 1) * (total_weight + 2)))
    })
}

#[derive(Clone, Copy)]
enum Encoding {
    RewriteEq,
    RewriteLt,
    Dfas,
    Multicut,
    SubsetDfas,
    Dsmc,
}

impl Encoding {
    const ALL: [Encoding; 6] = [
        Encoding::RewriteEq,
        Encoding::RewriteLt,
        Encoding::Dfas,
        Encoding::Multicut,
        Encoding::SubsetDfas,
        Encoding::Dsmc,
    ];

    fn name(self) -> &'static str {
        match self {
            Encoding::RewriteEq => "eq-rewrite",
            Encoding::RewriteLt => "lt-rewrite",
            Encoding::Dfas => "dfas",
            Encoding::Multicut => "multicut",
            Encoding::SubsetDfas => "subset-dfas",
            Encoding::Dsmc => "dsmc",
        }
    }

    fn relations(self) -> Vec<Relation> {
        match self {
            Encoding::RewriteEq | Encoding::RewriteLt => Relation::ALL.to_vec(),
            Encoding::Dfas => vec![Relation::Lt],
            Encoding::Multicut => vec![Relation::Eq, Relation::Neq],
            Encoding::SubsetDfas => vec![Relation::Lt, Relation::Leq],
            Encoding::Dsmc => vec![Relation::Leq, Relation::Neq],
        }
    }
}

fn check_rewrite(
    inst: &Instance,
    out: &Instance,
    back: &BackMap,
) -> Result<String, String> {
    let before = brute_force_mincsp(inst).map_err(|e| e.to_string())?;
    let after = brute_force_mincsp(out).map_err(|e| e.to_string())?;
    match (&before, &after) {
        (None, None) => Ok("both infeasible".into()),
        (Some((b, _)), Some((a, witness))) => {
            if (b.cost, b.weight) != (a.cost, a.weight) {
                return Err(format!(
                    "optimum drift {:?} -> {:?} on\n{}",
                    (b.cost, b.weight),
                    (a.cost, a.weight),
                    serialize_instance(inst)
                ));
            }
            let pulled = pull_back(inst, back, &a.deleted, witness)?;
            if (pulled.cost, pulled.weight) != (b.cost, b.weight) {
                return Err(format!(
                    "pulled solution has {:?}, expected {:?}",
                    (pulled.cost, pulled.weight),
                    (b.cost, b.weight)
                ));
            }
            Ok(format!("cost {} weight {}", b.cost, b.weight))
        }
        _ => Err(format!("feasibility drift on\n{}", serialize_instance(inst))),
    }
}

fn check_graph_encoding(
    inst: &Instance,
    graph: &GraphProblemInstance,
    back: &BackMap,
) -> Result<String, String> {
    let csp = brute_force_mincsp(inst).map_err(|e| e.to_string())?;
    let cut = brute_force_graph_optimum(graph).map_err(|e| e.to_string())?;
    match (&csp, &cut) {
        (None, None) => Ok("both infeasible".into()),
        (Some((b, _)), Some(g)) => {
            if (b.cost, b.weight) != (g.cost, g.weight) {
                return Err(format!(
                    "optimum drift: instance {:?}, graph {:?} on\n{}",
                    (b.cost, b.weight),
                    (g.cost, g.weight),
                    serialize_instance(inst)
                ));
            }
            // Pull the graph solution back and re-verify by evaluation.
            let pulled = back.pull(&g.deleted);
            let residual: Vec<_> = inst
                .constraints
                .iter()
                .enumerate()
                .filter(|(id, _)| pulled.binary_search(id).is_err())
                .map(|(_, c)| c.clone())
                .collect();
            let residual_inst =
                Instance::new(inst.variables.clone(), residual, inst.k, inst.w);
            let witness = check_satisfiable(&residual_inst)
                .ok_or_else(|| "pulled solution leaves unsatisfiable residual".to_string())?;
            let report = evaluate(inst, &witness).map_err(|e| e.to_string())?;
            if report.crisp_violation {
                return Err("pulled witness breaks a crisp constraint".into());
            }
            for id in &report.violated {
                if pulled.binary_search(id).is_err() {
                    return Err(format!("pulled witness breaks unselected constraint {id}"));
                }
            }
            Ok(format!("cost {} weight {}", b.cost, b.weight))
        }
        _ => Err(format!(
            "feasibility drift: instance {:?}, graph {:?} on\n{}",
            csp.as_ref().map(|(s, _)| (s.cost, s.weight)),
            cut.as_ref().map(|g| (g.cost, g.weight)),
            serialize_instance(inst)
        )),
    }
}

fn reductions_roundtrip(seed: u64, count: usize, parallel: bool) -> Vec<CaseResult> {
    let names = Encoding::ALL
        .iter()
        .flat_map(|e| (0..count).map(move |i| format!("{} #{i}", e.name())))
        .collect();
    run_cases(names, parallel, |flat| {
        let encoding = Encoding::ALL[flat / count];
        let i = flat % count;
        let mut rng = case_rng(seed.wrapping_add((flat / count) as u64), i);
        let inst = gen_random_instance(&GenParams {
            seed: rng.gen(),
            n_vars: rng.gen_range(2..=6),
            n_constraints: rng.gen_range(1..=8),
            relations: encoding.relations(),
            crisp_prob: 0.2,
            max_weight: 4,
            k: rng.gen_range(0..=3),
            w: if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(1..=12)) },
            allow_self_loops: false,
        });
        match encoding {
            Encoding::RewriteEq => {
                let (out, back) = rewrite_eq_as_leq(&inst);
                check_rewrite(&inst, &out, &back)
            }
            Encoding::RewriteLt => {
                let (out, back) = rewrite_lt_as_leq_neq(&inst);
                check_rewrite(&inst, &out, &back)
            }
            Encoding::Dfas => {
                let (g, back) = to_dfas(&inst).map_err(|e| e.to_string())?;
                check_graph_encoding(&inst, &g, &back)
            }
            Encoding::Multicut => {
                let (g, back) = to_edge_multicut(&inst).map_err(|e| e.to_string())?;
                check_graph_encoding(&inst, &g, &back)
            }
            Encoding::SubsetDfas => {
                let (g, back) = to_subset_dfas(&inst).map_err(|e| e.to_string())?;
                check_graph_encoding(&inst, &g, &back)
            }
            Encoding::Dsmc => {
                let (g, back) = to_dsmc(&inst).map_err(|e| e.to_string())?;
                check_graph_encoding(&inst, &g, &back)?;
                // Inverse encoding preserves the constraint multiset.
                let (inverse, _) = crate::reductions::dsmc_to_mincsp(&g);
                let key = |i: &Instance| {
                    let mut v: Vec<_> = i
                        .constraints
                        .iter()
                        .map(|c| (c.x, c.y, c.rel, c.softness, c.weight))
                        .collect();
                    v.sort();
                    v
                };
                if key(&inst) != key(&inverse) {
                    return Err("inverse encoding changed the constraint multiset".into());
                }
                Ok("optimum preserved; inverse round-trip exact".into())
            }
        }
    })
}

/// The 16 cross-edge patterns on two parts of two vertices each: clique
/// existence must coincide with cuttability at budget 12, searched
/// assumption-free.
fn gadget_k2n2(parallel: bool) -> Vec<CaseResult> {
    let names = (0..16u32).map(|mask| format!("gadget-k2n2 pattern {mask:04b}")).collect();
    run_cases(names, parallel, |mask| {
        let mask = mask as u32;
        let mut text = String::from("k 2\npart 1 a1 a2\npart 2 b1 b2\n");
        let pairs = [("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")];
        for (bit, (u, v)) in pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                text.push_str(&format!("edge {u} {v}\n"));
            }
        }
        let clique_inst = CliqueInstance::parse(&text).map_err(|e| e.to_string())?;
        let clique = brute_force_multicolored_clique(&clique_inst).map_err(|e| e.to_string())?;
        let (dsmc, map) = build_dsmc_from_clique(&clique_inst).map_err(|e| e.to_string())?;
        let cut = brute_force_dsmc(&dsmc).map_err(|e| e.to_string())?;
        match (&clique, &cut) {
            (Some(z), Some(x)) => {
                if x.len() != 12 {
                    return Err(format!("minimum cut has {} arcs, expected 12", x.len()));
                }
                let forward = clique_to_cut(&map, z).map_err(|e| e.to_string())?;
                if !verify_dsmc_solution(&dsmc, &forward) {
                    return Err("canonical cut of the clique fails verification".into());
                }
                let pulled = cut_to_clique(&map, x, &clique_inst)
                    .ok_or("exhaustive solution is not evenly spaced")?;
                for a in 0..pulled.len() {
                    for b in a + 1..pulled.len() {
                        if !clique_inst.adjacent(pulled[a], pulled[b]) {
                            return Err("cut maps to a non-adjacent pair".into());
                        }
                    }
                }
                Ok("clique and 12-arc cut both exist and map to each other".into())
            }
            (None, None) => Ok("no clique and no cut within budget".into()),
            (c, x) => Err(format!(
                "equivalence broken: clique={} cut={}",
                c.is_some(),
                x.is_some()
            )),
        }
    })
}
