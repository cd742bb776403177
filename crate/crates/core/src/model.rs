//! Core data model: point-algebra relations, constraints, instances,
//! assignments and the tractability classifier.

use std::collections::BTreeSet;
use std::fmt;

/// One of the four point-algebra relation symbols over the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Lt,
    Leq,
    Eq,
    Neq,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::Lt, Relation::Leq, Relation::Eq, Relation::Neq];

    pub fn token(self) -> &'static str {
        match self {
            Relation::Lt => "lt",
            Relation::Leq => "leq",
            Relation::Eq => "eq",
            Relation::Neq => "neq",
        }
    }

    pub fn from_token(token: &str) -> Option<Relation> {
        match token {
            "lt" => Some(Relation::Lt),
            "leq" => Some(Relation::Leq),
            "eq" => Some(Relation::Eq),
            "neq" => Some(Relation::Neq),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Whether a constraint may be bought out of the instance (soft) or must
/// hold in every feasible assignment (crisp).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Softness {
    Soft,
    Crisp,
}

impl Softness {
    pub fn is_soft(self) -> bool {
        matches!(self, Softness::Soft)
    }

    pub fn token(self) -> &'static str {
        match self {
            Softness::Soft => "soft",
            Softness::Crisp => "crisp",
        }
    }
}

/// Index of a variable within an instance's variable table.
pub type VarId = usize;

/// A binary point-algebra constraint `x rel y`.
///
/// The constraint id is its position in [`Instance::constraints`].
/// Weight is meaningful only for soft constraints; crisp constraints are
/// normalized to weight 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub x: VarId,
    pub y: VarId,
    pub rel: Relation,
    pub softness: Softness,
    pub weight: u64,
}

impl Constraint {
    pub fn soft(x: VarId, y: VarId, rel: Relation, weight: u64) -> Self {
        debug_assert!(weight >= 1);
        Constraint { x, y, rel, softness: Softness::Soft, weight }
    }

    pub fn crisp(x: VarId, y: VarId, rel: Relation) -> Self {
        Constraint { x, y, rel, softness: Softness::Crisp, weight: 1 }
    }

    pub fn is_soft(&self) -> bool {
        self.softness.is_soft()
    }

    pub fn is_self_loop(&self) -> bool {
        self.x == self.y
    }
}

/// A minimum-cost CSP instance over the point algebra: variables, binary
/// constraints, a deletion budget `k` and an optional weight budget `w`
/// (`None` means unbounded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub k: u32,
    pub w: Option<u64>,
}

impl Instance {
    pub fn new(variables: Vec<String>, constraints: Vec<Constraint>, k: u32, w: Option<u64>) -> Self {
        let inst = Instance { variables, constraints, k, w };
        for c in &inst.constraints {
            debug_assert!(c.x < inst.variables.len() && c.y < inst.variables.len());
        }
        inst
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    /// The set of relation symbols actually appearing in the instance.
    pub fn relations_used(&self) -> BTreeSet<Relation> {
        self.constraints.iter().map(|c| c.rel).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v == name)
    }

    /// Caps each soft weight at the weight budget: a soft constraint heavier
    /// than `w` can never be deleted, so it becomes crisp. Idempotent.
    pub fn normalize(&self) -> Instance {
        let mut out = self.clone();
        if let Some(w) = out.w {
            for c in &mut out.constraints {
                if c.is_soft() && c.weight > w {
                    c.softness = Softness::Crisp;
                    c.weight = 1;
                }
            }
        }
        out
    }
}

/// A total assignment of integer ranks to the instance variables. Ranks
/// stand in for rational values: only the induced weak order matters for
/// the four relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub ranks: Vec<u64>,
}

impl Assignment {
    pub fn new(ranks: Vec<u64>) -> Self {
        Assignment { ranks }
    }

    pub fn rank(&self, v: VarId) -> u64 {
        self.ranks[v]
    }
}

/// Result of evaluating an assignment against an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationReport {
    /// Ids of violated constraints, in id order.
    pub violated: Vec<usize>,
    /// Number of violated soft constraints.
    pub cost: u32,
    /// Total weight of violated soft constraints.
    pub weight: u64,
    /// True iff some violated constraint is crisp.
    pub crisp_violation: bool,
}

/// A deletion set together with its cost (cardinality) and weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Deleted constraint ids, sorted ascending.
    pub deleted: Vec<usize>,
    pub cost: u32,
    pub weight: u64,
}

impl Solution {
    pub fn new(mut deleted: Vec<usize>, inst: &Instance) -> Self {
        deleted.sort_unstable();
        deleted.dedup();
        let cost = deleted.len() as u32;
        let weight = deleted.iter().map(|&i| inst.constraints[i].weight).sum();
        Solution { deleted, cost, weight }
    }

    pub fn empty() -> Self {
        Solution { deleted: Vec::new(), cost: 0, weight: 0 }
    }

    /// Lexicographic comparison key: cost, then weight, then deleted ids.
    pub fn key(&self) -> (u32, u64, &[usize]) {
        (self.cost, self.weight, &self.deleted)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("assignment covers {got} variables, instance has {want}")]
    NotTotal { got: usize, want: usize },
}

/// Checks which constraints an assignment breaks.
///
/// A constraint `x rel y` is violated exactly when the rank pattern
/// contradicts the relation: `lt` unless rank(x) < rank(y), `leq` when
/// rank(x) > rank(y), `eq` when the ranks differ, `neq` when they are equal.
pub fn evaluate(inst: &Instance, a: &Assignment) -> Result<ViolationReport, EvalError> {
    if a.ranks.len() != inst.num_vars() {
        return Err(EvalError::NotTotal { got: a.ranks.len(), want: inst.num_vars() });
    }
    let mut violated = Vec::new();
    let mut cost = 0u32;
    let mut weight = 0u64;
    let mut crisp_violation = false;
    for (id, c) in inst.constraints.iter().enumerate() {
        let (rx, ry) = (a.ranks[c.x], a.ranks[c.y]);
        let broken = match c.rel {
            Relation::Lt => !(rx < ry),
            Relation::Leq => rx > ry,
            Relation::Eq => rx != ry,
            Relation::Neq => rx == ry,
        };
        if broken {
            violated.push(id);
            if c.is_soft() {
                cost += 1;
                weight += c.weight;
            } else {
                crisp_violation = true;
            }
        }
    }
    Ok(ViolationReport { violated, cost, weight, crisp_violation })
}

/// Checks that `(sol, a)` is a valid solution of `inst` within its budgets:
/// all deleted constraints are soft, the witness breaks only deleted
/// constraints, and the recorded cost and weight are consistent.
pub fn verify_solution(inst: &Instance, sol: &Solution, a: &Assignment) -> Result<(), String> {
    for &id in &sol.deleted {
        if id >= inst.constraints.len() {
            return Err(format!("deleted id {id} out of range"));
        }
        if !inst.constraints[id].is_soft() {
            return Err(format!("deleted constraint {id} is crisp"));
        }
    }
    let report = evaluate(inst, a).map_err(|e| e.to_string())?;
    for &id in &report.violated {
        if sol.deleted.binary_search(&id).is_err() {
            return Err(format!("witness breaks undeleted constraint {id}"));
        }
    }
    if sol.cost != sol.deleted.len() as u32 {
        return Err("cost does not match deletion count".into());
    }
    let weight: u64 = sol.deleted.iter().map(|&i| inst.constraints[i].weight).sum();
    if sol.weight != weight {
        return Err("weight does not match deleted constraints".into());
    }
    if sol.cost > inst.k {
        return Err(format!("cost {} exceeds budget {}", sol.cost, inst.k));
    }
    if let Some(w) = inst.w {
        if sol.weight > w {
            return Err(format!("weight {} exceeds budget {w}", sol.weight));
        }
    }
    Ok(())
}

/// Parameterized-complexity class of a point-algebra fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LanguageClass {
    PolyTime,
    Fpt,
    W1Hard,
}

impl fmt::Display for LanguageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LanguageClass::PolyTime => "PolyTime",
            LanguageClass::Fpt => "FPT",
            LanguageClass::W1Hard => "W1Hard",
        })
    }
}

/// Classifies a relation set: polynomial when every instance is satisfiable
/// at zero cost (subsets of `{eq, leq}`, or `{neq}` alone), W[1]-hard as soon
/// as both `leq` and `neq` are present, fixed-parameter tractable otherwise.
pub fn classify_language(rels: &BTreeSet<Relation>) -> LanguageClass {
    let poly = rels.iter().all(|r| matches!(r, Relation::Eq | Relation::Leq))
        || rels.iter().all(|r| matches!(r, Relation::Neq));
    if poly {
        LanguageClass::PolyTime
    } else if rels.contains(&Relation::Leq) && rels.contains(&Relation::Neq) {
        LanguageClass::W1Hard
    } else {
        LanguageClass::Fpt
    }
}
