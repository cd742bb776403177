//! Exact solvers for minimum-cost deletion problems over the point algebra
//! `{<, <=, =, !=}` on the rationals, plus the machinery around them:
//!
//! * instance model, text format, evaluation and a tractability classifier;
//! * polynomial-time satisfiability with reproducible witnesses;
//! * cost-preserving encodings to and from directed feedback arc set,
//!   subset feedback arc set, edge multicut and directed symmetric multicut;
//! * an iterative-compression solver for `{<, =, !=}` that reduces each
//!   compression step to an exact Boolean deletion problem over 2-clauses;
//! * assumption-free brute-force oracles used as ground truth everywhere;
//! * a compiler from multicolored clique to directed symmetric multicut
//!   with verifiers for both solution directions.

pub mod boolean_solver;
pub mod booleanize;
pub mod dispatch;
pub mod format;
pub mod gadgets;
pub mod gen;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod reductions;
pub mod sat;
pub mod scc;
pub mod suites;
pub mod two_sat;
pub mod weak_orders;

pub use format::{parse_instance, serialize_instance, ParseError};
pub use model::{
    classify_language, evaluate, Assignment, Constraint, Instance, LanguageClass, Relation,
    Softness, Solution, ViolationReport,
};
pub use pipeline::{solve, SolveOptions};
