//! Command-line frontend for the point-algebra deletion solvers.
//!
//! Exit codes: 0 = yes/pass, 1 = no, 2 = usage or format error,
//! 3 = oracle guard exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use pa_mincsp::booleanize::{booleanize, serialize_boolean, CompressedInstance};
use pa_mincsp::dispatch::{dispatch_solve, DispatchError, Engine, Verdict};
use pa_mincsp::format::{parse_instance, serialize_instance};
use pa_mincsp::gadgets::{
    build_dsmc_from_clique, clique_to_cut, verify_dsmc_solution, CliqueInstance,
};
use pa_mincsp::gen::{gen_random_instance, GenParams};
use pa_mincsp::model::{classify_language, Assignment, Instance, Relation, Solution};
use pa_mincsp::oracle::{
    brute_force_dsmc, brute_force_graph_optimum, brute_force_mincsp,
    brute_force_multicolored_clique, GuardError, MAX_GRAPH_BUDGET, MAX_GRAPH_DELETABLES,
};
use pa_mincsp::pipeline::SolveOptions;
use pa_mincsp::reductions::{
    parse_graph, serialize_graph, to_dfas, to_dsmc, to_edge_multicut, to_subset_dfas,
    GraphProblemKind,
};
use pa_mincsp::sat::check_satisfiable;
use pa_mincsp::suites::{run_suite, SuiteKind};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "pa-mincsp", version, about = "Exact minimum-cost solvers for point-algebra constraints")]
struct Cli {
    /// Single-threaded, fixed-order execution.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Pipeline,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Dfas,
    Multicut,
    #[value(name = "subset-dfas")]
    SubsetDfas,
    Dsmc,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability with every constraint treated as mandatory.
    Sat { file: PathBuf },
    /// Solve the deletion problem within the instance budgets.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        /// Also print exact rational values for the witness.
        #[arg(long)]
        rational: bool,
    },
    /// Print the tractability class of the relations used.
    Classify { file: PathBuf },
    /// Encode the instance as a graph problem.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: TargetArg,
    },
    /// Dump the Boolean encoding of the instance.
    Booleanize {
        file: PathBuf,
        /// Anchor variables in increasing value order, comma-separated.
        #[arg(long, value_delimiter = ',')]
        u: Vec<String>,
    },
    /// Exhaustive ground-truth search (instance, graph or clique file).
    Oracle { file: PathBuf },
    /// Clique-to-cut gadget tooling.
    Gadget {
        #[command(subcommand)]
        action: GadgetCmd,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        vars: usize,
        #[arg(long, default_value_t = 6)]
        constraints: usize,
        /// Comma-separated subset of lt,leq,eq,neq.
        #[arg(long, value_delimiter = ',', default_value = "lt,leq,eq,neq")]
        relations: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        crisp_prob: f64,
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Weight budget (integer or `inf`).
        #[arg(long, default_value = "inf")]
        w: String,
        #[arg(long)]
        self_loops: bool,
    },
    /// Run a verification suite.
    Bench {
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cases per suite (per encoding for reductions-roundtrip).
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Emit the cut instance for a clique file, plus a side map file.
    Build {
        file: PathBuf,
        /// Map file path (default: `<file>.map`).
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Check the clique/cut equivalence (forward-only beyond oracle guards).
    Verify { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.deterministic {
        if let Some(n) = std::env::var("PA_MINCSP_THREAD_LIMIT")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
        {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    ExitCode::from(run(cli))
}

fn fail(code: u8, message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    code
}

fn read(path: &PathBuf) -> Result<String, u8> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &PathBuf) -> Result<Instance, u8> {
    let text = read(path)?;
    parse_instance(&text).map_err(|e| fail(EXIT_USAGE, e))
}

fn print_witness(inst: &Instance, sol: &Solution, witness: &Assignment, rational: bool) {
    println!("YES cost={} weight={}", sol.cost, sol.weight);
    for id in &sol.deleted {
        println!("delete {id}");
    }
    for (v, name) in inst.variables.iter().enumerate() {
        println!("assign {name} {}", witness.ranks[v]);
    }
    if rational {
        for (v, name) in inst.variables.iter().enumerate() {
            println!("value {name} {}/1", witness.ranks[v]);
        }
    }
}

fn run(cli: Cli) -> u8 {
    let opts = SolveOptions { parallel: !cli.deterministic };
    match cli.command {
        Command::Sat { file } => {
            let inst = match load_instance(&file) {
                Ok(i) => i,
                Err(code) => return code,
            };
            match check_satisfiable(&inst) {
                Some(witness) => {
                    print_witness(&inst, &Solution::empty(), &witness, false);
                    EXIT_YES
                }
                None => {
                    println!("NO");
                    EXIT_NO
                }
            }
        }
        Command::Solve { file, engine, rational } => {
            let inst = match load_instance(&file) {
                Ok(i) => i,
                Err(code) => return code,
            };
            let engine = match engine {
                EngineArg::Auto => Engine::Auto,
                EngineArg::Pipeline => Engine::Pipeline,
                EngineArg::Oracle => Engine::Oracle,
            };
            match dispatch_solve(&inst, engine, &opts) {
                Ok(report) => {
                    for notice in &report.notices {
                        eprintln!("notice: {notice}");
                    }
                    match report.verdict {
                        Verdict::Yes(sol, witness) => {
                            print_witness(&inst, &sol, &witness, rational);
                            EXIT_YES
                        }
                        Verdict::No => {
                            println!("NO");
                            EXIT_NO
                        }
                        Verdict::CrispUnsat => {
                            println!("UNSAT-CRISP");
                            EXIT_NO
                        }
                    }
                }
                Err(DispatchError::Guard(e)) => fail(EXIT_GUARD, e),
                Err(e) => fail(EXIT_USAGE, e),
            }
        }
        Command::Classify { file } => {
            let inst = match load_instance(&file) {
                Ok(i) => i,
                Err(code) => return code,
            };
            let rels = inst.relations_used();
            println!("{}", classify_language(&rels));
            let names: Vec<&str> = rels.iter().map(|r| r.token()).collect();
            println!("relations {}", names.join(","));
            EXIT_YES
        }
        Command::Reduce { file, to } => {
            let inst = match load_instance(&file) {
                Ok(i) => i,
                Err(code) => return code,
            };
            let encoded = match to {
                TargetArg::Dfas => to_dfas(&inst),
                TargetArg::Multicut => to_edge_multicut(&inst),
                TargetArg::SubsetDfas => to_subset_dfas(&inst),
                TargetArg::Dsmc => to_dsmc(&inst),
            };
            match encoded {
                Ok((graph, back)) => {
                    print!("{}", serialize_graph(&graph));
                    for (out_id, in_id) in back.map.iter().enumerate() {
                        println!("# backmap {out_id} {in_id}");
                    }
                    EXIT_YES
                }
                Err(e) => fail(EXIT_USAGE, e),
            }
        }
        Command::Booleanize { file, u } => {
            let inst = match load_instance(&file) {
                Ok(i) => i,
                Err(code) => return code,
            };
            let mut anchors = Vec::new();
            for name in &u {
                match inst.var_index(name) {
                    Some(v) => anchors.push(v),
                    None => return fail(EXIT_USAGE, format!("unknown variable `{name}`")),
                }
            }
            let names = inst.variables.clone();
            match CompressedInstance::new(inst, anchors) {
                Ok(ci) => {
                    print!("{}", serialize_boolean(&booleanize(&ci), &names));
                    EXIT_YES
                }
                Err(e) => fail(EXIT_USAGE, e),
            }
        }
        Command::Oracle { file } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            run_oracle(&text)
        }
        Command::Gadget { action } => run_gadget(action),
        Command::Gen {
            seed,
            vars,
            constraints,
            relations,
            crisp_prob,
            max_weight,
            k,
            w,
            self_loops,
        } => {
            let mut rels = Vec::new();
            for token in &relations {
                match Relation::from_token(token) {
                    Some(r) => rels.push(r),
                    None => return fail(EXIT_USAGE, format!("unknown relation `{token}`")),
                }
            }
            let w = if w == "inf" {
                None
            } else {
                match w.parse::<u64>() {
                    Ok(v) => Some(v),
                    Err(_) => return fail(EXIT_USAGE, "bad weight budget"),
                }
            };
            if vars == 0 {
                return fail(EXIT_USAGE, "need at least one variable");
            }
            if vars == 1 && constraints > 0 && !self_loops {
                return fail(EXIT_USAGE, "one variable admits only self-loop constraints");
            }
            let params = GenParams {
                seed,
                n_vars: vars,
                n_constraints: constraints,
                relations: rels,
                crisp_prob,
                max_weight,
                k,
                w,
                allow_self_loops: self_loops,
            };
            print!("{}", serialize_instance(&gen_random_instance(&params)));
            EXIT_YES
        }
        Command::Bench { suite, seed, count } => {
            let Some(kind) = SuiteKind::from_name(&suite) else {
                let names: Vec<&str> = SuiteKind::ALL.iter().map(|k| k.name()).collect();
                return fail(
                    EXIT_USAGE,
                    format!("unknown suite `{suite}`; expected one of {}", names.join(", ")),
                );
            };
            let count = count.unwrap_or_else(|| kind.default_count());
            let report = run_suite(kind, seed, count, !cli.deterministic);
            for case in &report.cases {
                if case.pass {
                    println!("{}: pass", case.name);
                } else {
                    println!("{}: FAIL ({})", case.name, case.detail);
                }
            }
            println!(
                "suite {}: {}/{} passed in {:.2}s",
                report.suite,
                report.passed(),
                report.cases.len(),
                report.elapsed.as_secs_f64()
            );
            if report.all_pass() {
                EXIT_YES
            } else {
                EXIT_NO
            }
        }
    }
}

fn guard_exit(e: GuardError) -> u8 {
    fail(EXIT_GUARD, e)
}

/// Picks the oracle by file shape: `part` lines mean a clique instance,
/// `arc`/`edge`/`pair` lines a graph problem, anything else the constraint
/// format.
fn run_oracle(text: &str) -> u8 {
    let mut keywords = std::collections::BTreeSet::new();
    for line in text.lines() {
        if let Some(word) = line.split_whitespace().next() {
            keywords.insert(word.to_string());
        }
    }
    if keywords.contains("part") {
        let clique = match CliqueInstance::parse(text) {
            Ok(c) => c,
            Err(e) => return fail(EXIT_USAGE, e),
        };
        return match brute_force_multicolored_clique(&clique) {
            Ok(Some(z)) => {
                println!("YES");
                for v in z {
                    println!("select {}", clique.vertices[v]);
                }
                EXIT_YES
            }
            Ok(None) => {
                println!("NO");
                EXIT_NO
            }
            Err(e) => guard_exit(e),
        };
    }
    if keywords.contains("arc") || keywords.contains("edge") || keywords.contains("pair") {
        let kind = if keywords.contains("edge") {
            GraphProblemKind::EdgeMulticut
        } else if text.contains(" special") {
            GraphProblemKind::SubsetDfas
        } else if keywords.contains("pair") {
            GraphProblemKind::Dsmc
        } else {
            GraphProblemKind::Dfas
        };
        let graph = match parse_graph(kind, text) {
            Ok(g) => g,
            Err(e) => return fail(EXIT_USAGE, e),
        };
        if kind == GraphProblemKind::Dsmc {
            return match brute_force_dsmc(&graph) {
                Ok(Some(ids)) => {
                    let weight: u64 = ids.iter().map(|&i| graph.object_weight(i)).sum();
                    println!("YES cost={} weight={weight}", ids.len());
                    for id in ids {
                        println!("delete {id}");
                    }
                    EXIT_YES
                }
                Ok(None) => {
                    println!("NO");
                    EXIT_NO
                }
                Err(e) => guard_exit(e),
            };
        }
        return match brute_force_graph_optimum(&graph) {
            Ok(Some(sol)) => {
                println!("YES cost={} weight={}", sol.cost, sol.weight);
                for id in sol.deleted {
                    println!("delete {id}");
                }
                EXIT_YES
            }
            Ok(None) => {
                println!("NO");
                EXIT_NO
            }
            Err(e) => guard_exit(e),
        };
    }
    let inst = match parse_instance(text) {
        Ok(i) => i,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    match brute_force_mincsp(&inst) {
        Ok(Some((sol, witness))) => {
            print_witness(&inst, &sol, &witness, false);
            EXIT_YES
        }
        Ok(None) => {
            let crisp_core = Instance::new(
                inst.variables.clone(),
                inst.constraints.iter().filter(|c| !c.is_soft()).cloned().collect(),
                0,
                None,
            );
            println!(
                "{}",
                if check_satisfiable(&crisp_core).is_none() { "UNSAT-CRISP" } else { "NO" }
            );
            EXIT_NO
        }
        Err(e) => guard_exit(e),
    }
}

fn run_gadget(action: GadgetCmd) -> u8 {
    match action {
        GadgetCmd::Build { file, map } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let clique = match CliqueInstance::parse(&text) {
                Ok(c) => c,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let (dsmc, gm) = match build_dsmc_from_clique(&clique) {
                Ok(x) => x,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let map_path = map.unwrap_or_else(|| {
                let mut p = file.clone().into_os_string();
                p.push(".map");
                PathBuf::from(p)
            });
            if let Err(e) = std::fs::write(&map_path, gm.to_text(&dsmc)) {
                return fail(EXIT_USAGE, format!("cannot write {}: {e}", map_path.display()));
            }
            eprintln!("map written to {}", map_path.display());
            print!("{}", serialize_graph(&dsmc));
            EXIT_YES
        }
        GadgetCmd::Verify { file } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let clique_inst = match CliqueInstance::parse(&text) {
                Ok(c) => c,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let (dsmc, gm) = match build_dsmc_from_clique(&clique_inst) {
                Ok(x) => x,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            let clique = match brute_force_multicolored_clique(&clique_inst) {
                Ok(c) => c,
                Err(e) => return guard_exit(e),
            };
            println!("clique: {}", if clique.is_some() { "YES" } else { "NO" });
            let within_guards = dsmc.deletable_ids().len() <= MAX_GRAPH_DELETABLES
                && dsmc.k <= MAX_GRAPH_BUDGET;
            if within_guards {
                let cut = match brute_force_dsmc(&dsmc) {
                    Ok(c) => c,
                    Err(e) => return guard_exit(e),
                };
                println!("cut (budget {}): {}", dsmc.k, if cut.is_some() { "YES" } else { "NO" });
                if clique.is_some() == cut.is_some() {
                    println!("verdict: EQUIVALENT");
                    EXIT_YES
                } else {
                    println!("verdict: MISMATCH");
                    EXIT_NO
                }
            } else {
                eprintln!("notice: cut search beyond oracle guards; forward check only");
                match clique {
                    Some(z) => {
                        let cut = match clique_to_cut(&gm, &z) {
                            Ok(c) => c,
                            Err(e) => return fail(EXIT_USAGE, e),
                        };
                        if verify_dsmc_solution(&dsmc, &cut) {
                            println!("forward: clique maps to a valid cut of {} arcs", cut.len());
                            EXIT_YES
                        } else {
                            println!("forward: canonical cut FAILED verification");
                            EXIT_NO
                        }
                    }
                    None => {
                        println!("forward: no clique to map");
                        EXIT_YES
                    }
                }
            }
        }
    }
}
