//! Encoding of compressed instances into Boolean constraints built from
//! 2-clauses.
//!
//! A compressed instance is a `{lt,eq,neq}` instance together with an
//! ordered list of *anchor* variables whose relative order is fixed. For
//! every variable `v` the encoding introduces:
//!
//! * coincidence variables `c(v,i)`, `i = 1..ell` — whether `v` takes
//!   exactly the value of anchor `i`;
//! * position variables `p(v,j)`, `j = 1..2*ell+1` — a monotone threshold
//!   vector: `p(v,2i)` means `v >= anchor i`, `p(v,2i+1)` means
//!   `v > anchor i`, and `p(v,1)` is vacuously true.
//!
//! Crisp single-clause constraints pin the anchors and the shape of the
//! vectors; every source constraint becomes one soft Boolean constraint
//! whose clause set mirrors its relation, with the per-variable shape
//! clauses repeated inside.

use crate::model::{Instance, Relation, Softness};
use crate::sat::check_satisfiable;
use crate::two_sat::Clause;

/// A compressed instance: the base must use only `{lt,eq,neq}`, the anchors
/// are distinct base variables listed in strictly increasing value order,
/// and the sub-instance on non-anchor pairs must be satisfiable (the
/// lifting step draws its fractional values from a witness of that part).
#[derive(Debug, Clone)]
pub struct CompressedInstance {
    pub base: Instance,
    pub anchors: Vec<usize>,
}

impl CompressedInstance {
    pub fn new(base: Instance, anchors: Vec<usize>) -> Result<Self, String> {
        let mut seen = std::collections::BTreeSet::new();
        for &u in &anchors {
            if u >= base.num_vars() {
                return Err(format!("anchor {u} out of range"));
            }
            if !seen.insert(u) {
                return Err(format!("anchor {u} listed twice"));
            }
        }
        for (id, c) in base.constraints.iter().enumerate() {
            if !matches!(c.rel, Relation::Lt | Relation::Eq | Relation::Neq) {
                return Err(format!("constraint {id} uses `{}`", c.rel));
            }
        }
        let ci = CompressedInstance { base, anchors };
        if check_satisfiable(&ci.outside_instance()).is_none() {
            return Err("non-anchor part of the base is unsatisfiable".into());
        }
        Ok(ci)
    }

    pub fn ell(&self) -> usize {
        self.anchors.len()
    }

    /// The sub-instance of constraints with both endpoints outside the
    /// anchor set (same variable table).
    pub fn outside_instance(&self) -> Instance {
        let constraints = self
            .base
            .constraints
            .iter()
            .filter(|c| !self.anchors.contains(&c.x) && !self.anchors.contains(&c.y))
            .cloned()
            .collect();
        Instance::new(self.base.variables.clone(), constraints, self.base.k, self.base.w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolVarKind {
    Coincidence,
    Position,
}

impl BoolVarKind {
    pub fn token(self) -> &'static str {
        match self {
            BoolVarKind::Coincidence => "c",
            BoolVarKind::Position => "p",
        }
    }
}

/// Symbolic name of a Boolean variable: kind, source variable and 1-based
/// index (`1..=ell` for coincidence, `1..=2*ell+1` for position).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoolVarId {
    pub kind: BoolVarKind,
    pub var: usize,
    pub index: usize,
}

/// Flat numbering of the Boolean variables of an encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarTable {
    pub n_vars: usize,
    pub ell: usize,
}

impl VarTable {
    pub fn stride(&self) -> usize {
        3 * self.ell + 1
    }

    pub fn total(&self) -> usize {
        self.n_vars * self.stride()
    }

    pub fn coincidence(&self, v: usize, i: usize) -> usize {
        debug_assert!(1 <= i && i <= self.ell);
        v * self.stride() + (i - 1)
    }

    pub fn position(&self, v: usize, j: usize) -> usize {
        debug_assert!(1 <= j && j <= 2 * self.ell + 1);
        v * self.stride() + self.ell + (j - 1)
    }

    pub fn describe(&self, flat: usize) -> BoolVarId {
        let var = flat / self.stride();
        let off = flat % self.stride();
        if off < self.ell {
            BoolVarId { kind: BoolVarKind::Coincidence, var, index: off + 1 }
        } else {
            BoolVarId { kind: BoolVarKind::Position, var, index: off - self.ell + 1 }
        }
    }
}

/// One Boolean constraint: a conjunction of 2-clauses over a scope of flat
/// variable indices. Soft constraints carry their source constraint id.
#[derive(Debug, Clone)]
pub struct BooleanConstraint {
    pub scope: Vec<usize>,
    pub clauses: Vec<Clause>,
    pub softness: Softness,
    pub weight: u64,
    pub source: Option<usize>,
}

impl BooleanConstraint {
    fn from_clauses(clauses: Vec<Clause>, softness: Softness, weight: u64, source: Option<usize>) -> Self {
        let mut scope = Vec::new();
        for c in &clauses {
            for v in c.vars() {
                if !scope.contains(&v) {
                    scope.push(v);
                }
            }
        }
        BooleanConstraint { scope, clauses, softness, weight, source }
    }

    pub fn is_soft(&self) -> bool {
        self.softness.is_soft()
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }
}

#[derive(Debug, Clone)]
pub struct BooleanInstance {
    pub table: VarTable,
    pub constraints: Vec<BooleanConstraint>,
    pub k: u32,
    pub w: Option<u64>,
}

impl BooleanInstance {
    pub fn soft_indices(&self) -> Vec<usize> {
        (0..self.constraints.len()).filter(|&i| self.constraints[i].is_soft()).collect()
    }
}

/// Per-variable shape clauses that the soft constraints repeat: at most one
/// coincidence, monotone position vector, coincidence-with-anchor-i implies
/// the exact threshold pattern of anchor i.
fn shape_clauses(t: &VarTable, v: usize, clauses: &mut Vec<Clause>) {
    for i in 1..=t.ell {
        for i2 in i + 1..=t.ell {
            clauses.push(Clause::Nand(t.coincidence(v, i), t.coincidence(v, i2)));
        }
    }
    for j in 1..=2 * t.ell + 1 {
        for j2 in j + 1..=2 * t.ell + 1 {
            clauses.push(Clause::Imp(t.position(v, j2), t.position(v, j)));
        }
    }
    for i in 1..=t.ell {
        for j in 1..=2 * t.ell + 1 {
            if j <= 2 * i {
                clauses.push(Clause::Imp(t.coincidence(v, i), t.position(v, j)));
            } else {
                clauses.push(Clause::Nand(t.coincidence(v, i), t.position(v, j)));
            }
        }
    }
}

/// Builds the Boolean instance for a compressed instance. Budgets carry
/// over unchanged; each source constraint yields exactly one soft (or
/// crisp, matching its source) multi-clause constraint.
pub fn booleanize(ci: &CompressedInstance) -> BooleanInstance {
    let table = VarTable { n_vars: ci.base.num_vars(), ell: ci.ell() };
    let ell = table.ell;
    let mut constraints = Vec::new();
    let crisp = |clause: Clause, constraints: &mut Vec<BooleanConstraint>| {
        constraints.push(BooleanConstraint::from_clauses(
            vec![clause],
            Softness::Crisp,
            1,
            None,
        ));
    };

    // At most one coincidence per variable.
    for v in 0..table.n_vars {
        for i in 1..=ell {
            for i2 in i + 1..=ell {
                crisp(Clause::Nand(table.coincidence(v, i), table.coincidence(v, i2)), &mut constraints);
            }
        }
    }
    // Anchor i coincides with itself.
    for (idx, &u) in ci.anchors.iter().enumerate() {
        crisp(Clause::ForceTrue(table.coincidence(u, idx + 1)), &mut constraints);
    }
    // Position vectors start true and are monotone.
    for v in 0..table.n_vars {
        crisp(Clause::ForceTrue(table.position(v, 1)), &mut constraints);
        for j in 1..=2 * ell + 1 {
            for j2 in j + 1..=2 * ell + 1 {
                crisp(Clause::Imp(table.position(v, j2), table.position(v, j)), &mut constraints);
            }
        }
    }
    // Anchor i sits exactly at its own threshold.
    for (idx, &u) in ci.anchors.iter().enumerate() {
        let i = idx + 1;
        crisp(Clause::ForceTrue(table.position(u, 2 * i)), &mut constraints);
        crisp(Clause::ForceFalse(table.position(u, 2 * i + 1)), &mut constraints);
    }
    // Coinciding with anchor i forces the matching threshold pattern.
    for v in 0..table.n_vars {
        for i in 1..=ell {
            for j in 1..=2 * ell + 1 {
                if j <= 2 * i {
                    crisp(Clause::Imp(table.coincidence(v, i), table.position(v, j)), &mut constraints);
                } else {
                    crisp(Clause::Nand(table.coincidence(v, i), table.position(v, j)), &mut constraints);
                }
            }
        }
    }

    // One multi-clause constraint per source constraint.
    for (id, c) in ci.base.constraints.iter().enumerate() {
        let (v, w) = (c.x, c.y);
        let mut clauses = Vec::new();
        match c.rel {
            Relation::Eq => {
                for i in 1..=ell {
                    clauses.push(Clause::Imp(table.coincidence(v, i), table.coincidence(w, i)));
                    clauses.push(Clause::Imp(table.coincidence(w, i), table.coincidence(v, i)));
                }
                for j in 1..=2 * ell + 1 {
                    clauses.push(Clause::Imp(table.position(v, j), table.position(w, j)));
                    clauses.push(Clause::Imp(table.position(w, j), table.position(v, j)));
                }
                shape_clauses(&table, v, &mut clauses);
            }
            Relation::Neq => {
                for i in 1..=ell {
                    clauses.push(Clause::Nand(table.coincidence(v, i), table.coincidence(w, i)));
                }
                for i in 1..=ell {
                    for i2 in i + 1..=ell {
                        clauses.push(Clause::Nand(table.coincidence(v, i), table.coincidence(v, i2)));
                    }
                }
            }
            Relation::Lt => {
                for i in 1..=ell {
                    clauses.push(Clause::Imp(table.position(v, 2 * i - 1), table.position(w, 2 * i - 1)));
                }
                for i in 1..=ell {
                    clauses.push(Clause::Imp(table.position(v, 2 * i), table.position(w, 2 * i + 1)));
                }
                for j in 1..=2 * ell + 1 {
                    for j2 in j + 1..=2 * ell + 1 {
                        clauses.push(Clause::Imp(table.position(v, j2), table.position(v, j)));
                    }
                }
            }
            Relation::Leq => unreachable!("checked at construction"),
        }
        constraints.push(BooleanConstraint::from_clauses(clauses, c.softness, c.weight, Some(id)));
    }

    BooleanInstance { table, constraints, k: ci.base.k, w: ci.base.w }
}

/// Gaifman-graph check: builds the co-occurrence graph of the constraint's
/// clauses and returns true iff no two vertex-disjoint edges lack a
/// connecting edge between them.
pub fn check_bijunctive_2k2_free(bc: &BooleanConstraint) -> bool {
    let mut verts: Vec<usize> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for c in &bc.clauses {
        let [a, b] = c.vars();
        if a == b {
            continue;
        }
        let idx = |v: usize, verts: &mut Vec<usize>| match verts.iter().position(|&u| u == v) {
            Some(i) => i,
            None => {
                verts.push(v);
                verts.len() - 1
            }
        };
        let (ia, ib) = (idx(a, &mut verts), idx(b, &mut verts));
        let e = (ia.min(ib), ia.max(ib));
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    let n = verts.len();
    let mut adj = vec![false; n * n];
    for &(a, b) in &edges {
        adj[a * n + b] = true;
        adj[b * n + a] = true;
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if !(adj[a * n + c] || adj[a * n + d] || adj[b * n + c] || adj[b * n + d]) {
                return false;
            }
        }
    }
    true
}

/// Dumps a Boolean instance in its line format: `bvar` declarations, then
/// one `bcons` line per constraint with clause tokens `T>x`, `x>F`, `x>y`,
/// `x|y`, `!x|!y` where variables print as `kind:name:index`.
pub fn serialize_boolean(bi: &BooleanInstance, names: &[String]) -> String {
    let t = &bi.table;
    let render = |flat: usize| {
        let id = t.describe(flat);
        format!("{}:{}:{}", id.kind.token(), names[id.var], id.index)
    };
    let mut out = String::new();
    out.push_str(&format!("k {}\n", bi.k));
    if let Some(w) = bi.w {
        out.push_str(&format!("w {w}\n"));
    }
    for name in names.iter().take(t.n_vars) {
        for i in 1..=t.ell {
            out.push_str(&format!("bvar c {name} {i}\n"));
        }
        for j in 1..=2 * t.ell + 1 {
            out.push_str(&format!("bvar p {name} {j}\n"));
        }
    }
    for bc in &bi.constraints {
        let source = match bc.source {
            Some(s) => s.to_string(),
            None => "-".to_string(),
        };
        let mut line = format!("bcons {} {} {} :", bc.softness.token(), bc.weight, source);
        for c in &bc.clauses {
            let token = match *c {
                Clause::ForceTrue(x) => format!("T>{}", render(x)),
                Clause::ForceFalse(x) => format!("{}>F", render(x)),
                Clause::Imp(x, y) => format!("{}>{}", render(x), render(y)),
                Clause::Or(x, y) => format!("{}|{}", render(x), render(y)),
                Clause::Nand(x, y) => format!("!{}|!{}", render(x), render(y)),
            };
            line.push(' ');
            line.push_str(&token);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
