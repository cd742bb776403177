//! Seeded random instance generation.

use crate::model::{Constraint, Instance, Relation, Softness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct GenParams {
    pub seed: u64,
    pub n_vars: usize,
    pub n_constraints: usize,
    pub relations: Vec<Relation>,
    pub crisp_prob: f64,
    pub max_weight: u64,
    pub k: u32,
    pub w: Option<u64>,
    pub allow_self_loops: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            n_vars: 4,
            n_constraints: 6,
            relations: Relation::ALL.to_vec(),
            crisp_prob: 0.0,
            max_weight: 1,
            k: 2,
            w: None,
            allow_self_loops: false,
        }
    }
}

/// Deterministic for a fixed parameter set: endpoints uniform (self-loops
/// excluded unless requested), relation uniform over the given set.
pub fn gen_random_instance(params: &GenParams) -> Instance {
    assert!(params.n_vars >= 1, "need at least one variable");
    assert!(!params.relations.is_empty(), "need at least one relation");
    assert!(
        params.n_vars >= 2 || params.allow_self_loops || params.n_constraints == 0,
        "cannot avoid self-loops with a single variable"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let variables: Vec<String> = (0..params.n_vars).map(|i| format!("v{i}")).collect();
    let mut constraints = Vec::with_capacity(params.n_constraints);
    for _ in 0..params.n_constraints {
        let rel = params.relations[rng.gen_range(0..params.relations.len())];
        let x = rng.gen_range(0..params.n_vars);
        let y = loop {
            let y = rng.gen_range(0..params.n_vars);
            if params.allow_self_loops || y != x {
                break y;
            }
        };
        let softness =
            if rng.gen_bool(params.crisp_prob) { Softness::Crisp } else { Softness::Soft };
        let weight = if softness.is_soft() {
            rng.gen_range(1..=params.max_weight.max(1))
        } else {
            1
        };
        constraints.push(Constraint { x, y, rel, softness, weight });
    }
    Instance::new(variables, constraints, params.k, params.w)
}
