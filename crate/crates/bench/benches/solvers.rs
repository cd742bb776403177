//! Benchmarks across the solver surfaces: the compression pipeline, the
//! exhaustive oracle, satisfiability, and gadget construction.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pa_mincsp::gadgets::{build_dsmc_from_clique, CliqueInstance};
use pa_mincsp::gen::{gen_random_instance, GenParams};
use pa_mincsp::model::Relation;
use pa_mincsp::oracle::brute_force_mincsp;
use pa_mincsp::pipeline::solve;
use pa_mincsp::sat::check_satisfiable;

fn pipeline_instances() -> Vec<pa_mincsp::model::Instance> {
    (0..8)
        .map(|seed| {
            gen_random_instance(&GenParams {
                seed,
                n_vars: 6,
                n_constraints: 10,
                relations: vec![Relation::Lt, Relation::Eq, Relation::Neq],
                crisp_prob: 0.1,
                max_weight: 4,
                k: 3,
                w: None,
                allow_self_loops: false,
            })
        })
        .collect()
}

fn bench_pipeline(c: &mut Criterion) {
    let instances = pipeline_instances();
    c.bench_function("pipeline_solve_6v10c", |b| {
        b.iter(|| {
            for inst in &instances {
                black_box(solve(black_box(inst)).unwrap());
            }
        })
    });
}

fn bench_oracle(c: &mut Criterion) {
    let instances = pipeline_instances();
    c.bench_function("oracle_6v10c", |b| {
        b.iter(|| {
            for inst in &instances {
                black_box(brute_force_mincsp(black_box(inst)).unwrap());
            }
        })
    });
}

fn bench_satisfiability(c: &mut Criterion) {
    let inst = gen_random_instance(&GenParams {
        seed: 7,
        n_vars: 200,
        n_constraints: 600,
        relations: Relation::ALL.to_vec(),
        crisp_prob: 1.0,
        max_weight: 1,
        k: 0,
        w: None,
        allow_self_loops: false,
    });
    c.bench_function("check_satisfiable_200v600c", |b| {
        b.iter(|| black_box(check_satisfiable(black_box(&inst))))
    });
}

fn bench_gadget_build(c: &mut Criterion) {
    let mut text = String::from("k 3\n");
    for i in 1..=3 {
        let names: Vec<String> = (1..=4).map(|a| format!("p{i}v{a}")).collect();
        text.push_str(&format!("part {i} {}\n", names.join(" ")));
    }
    let clique = CliqueInstance::parse(&text).unwrap();
    c.bench_function("gadget_build_k3_n4", |b| {
        b.iter(|| black_box(build_dsmc_from_clique(black_box(&clique)).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_pipeline,
    bench_oracle,
    bench_satisfiability,
    bench_gadget_build
);
criterion_main!(benches);
