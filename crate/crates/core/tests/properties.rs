//! Format and evaluation properties.

use pa_mincsp::format::{parse_instance, serialize_instance};
use pa_mincsp::gen::{gen_random_instance, GenParams};
use pa_mincsp::model::{evaluate, Assignment, Constraint, Instance, Relation, Softness};
use proptest::prelude::*;

fn relation_strategy() -> impl Strategy<Value = Relation> {
    prop_oneof![
        Just(Relation::Lt),
        Just(Relation::Leq),
        Just(Relation::Eq),
        Just(Relation::Neq),
    ]
}

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (2usize..=6, 0usize..=12, 0u32..=5, proptest::option::of(1u64..=30)).prop_flat_map(
        |(n_vars, n_constraints, k, w)| {
            let constraint = (
                0..n_vars,
                0..n_vars,
                relation_strategy(),
                any::<bool>(),
                1u64..=9,
            )
                .prop_map(|(x, y, rel, soft, weight)| Constraint {
                    x,
                    y,
                    rel,
                    softness: if soft { Softness::Soft } else { Softness::Crisp },
                    weight: if soft { weight } else { 1 },
                });
            proptest::collection::vec(constraint, n_constraints).prop_map(move |cs| {
                let variables = (0..n_vars).map(|i| format!("x_{i}")).collect();
                Instance::new(variables, cs, k, w)
            })
        },
    )
}

proptest! {
    // The format declares variables implicitly, so serialization can only
    // express variables that occur in a constraint: the round-trip is the
    // identity on parsed instances, and parsing a serialized instance
    // preserves everything except unconstrained variables.
    #[test]
    fn parse_serialize_round_trip(inst in instance_strategy()) {
        let canonical = parse_instance(&serialize_instance(&inst)).unwrap();
        prop_assert_eq!(&parse_instance(&serialize_instance(&canonical)).unwrap(), &canonical);
        prop_assert_eq!(canonical.constraints.len(), inst.constraints.len());
        prop_assert_eq!((canonical.k, canonical.w), (inst.k, inst.w));
        for (a, b) in canonical.constraints.iter().zip(&inst.constraints) {
            prop_assert_eq!(&canonical.variables[a.x], &inst.variables[b.x]);
            prop_assert_eq!(&canonical.variables[a.y], &inst.variables[b.y]);
            prop_assert_eq!((a.rel, a.softness, a.weight), (b.rel, b.softness, b.weight));
        }
    }

    #[test]
    fn evaluation_depends_only_on_the_weak_order(
        inst in instance_strategy(),
        ranks in proptest::collection::vec(0u64..5, 6),
        offsets in proptest::collection::vec(1u64..4, 6),
    ) {
        let ranks: Vec<u64> = ranks.into_iter().take(inst.num_vars()).collect();
        prop_assume!(ranks.len() == inst.num_vars());
        // Any order-preserving injection of the rank values: remap value v
        // to the prefix sum of offsets up to v.
        let mut remap = vec![0u64; 6];
        let mut acc = 0;
        for (v, slot) in remap.iter_mut().enumerate() {
            acc += offsets[v];
            *slot = acc;
        }
        let mapped: Vec<u64> = ranks.iter().map(|&r| remap[r as usize]).collect();
        let lhs = evaluate(&inst, &Assignment::new(ranks)).unwrap();
        let rhs = evaluate(&inst, &Assignment::new(mapped)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn seeded_corpus_round_trips() {
    for seed in 0..60 {
        let inst = gen_random_instance(&GenParams {
            seed,
            n_vars: 2 + (seed as usize % 5),
            n_constraints: 1 + (seed as usize * 7) % 14,
            relations: Relation::ALL.to_vec(),
            crisp_prob: 0.3,
            max_weight: 9,
            k: (seed % 5) as u32,
            w: if seed % 2 == 0 { None } else { Some(5 + seed) },
            allow_self_loops: seed % 3 == 0,
        });
        // Round-trip identity on the file: parse it, serialize again, and
        // both the text and the structure must be stable.
        let file = serialize_instance(&inst);
        let parsed = parse_instance(&file).unwrap();
        assert_eq!(serialize_instance(&parsed), file, "seed {seed}");
        assert_eq!(parse_instance(&serialize_instance(&parsed)).unwrap(), parsed, "seed {seed}");
    }
}
