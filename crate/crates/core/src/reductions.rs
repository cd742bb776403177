//! Cost-preserving rewrites between point-algebra fragments and encodings
//! to and from the four classical cut problems:
//!
//! * `{lt}` <-> directed feedback arc set,
//! * `{lt,leq}` <-> directed subset feedback arc set (strict constraints
//!   become special arcs),
//! * `{eq,neq}` <-> edge multicut (disequalities become cut requests),
//! * `{leq,neq}` <-> directed symmetric multicut.

use crate::format::{parse_weight, tokenize, ParseError};
use crate::model::{
    evaluate, Assignment, Constraint, Instance, Relation, Softness, Solution,
};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphProblemKind {
    Dfas,
    EdgeMulticut,
    SubsetDfas,
    Dsmc,
}

impl fmt::Display for GraphProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphProblemKind::Dfas => "dfas",
            GraphProblemKind::EdgeMulticut => "multicut",
            GraphProblemKind::SubsetDfas => "subset-dfas",
            GraphProblemKind::Dsmc => "dsmc",
        })
    }
}

/// An arc (directed kinds) or edge (multicut) with deletability and weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub softness: Softness,
    pub weight: u64,
    /// Only meaningful for subset feedback arc set.
    pub special: bool,
}

/// A cut request; soft requests may be ignored at their weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutRequest {
    pub s: usize,
    pub t: usize,
    pub softness: Softness,
    pub weight: u64,
}

/// A graph separation/transversal instance. Deletable objects are numbered
/// edges first (ids `0..edges.len()`), then requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphProblemInstance {
    pub kind: GraphProblemKind,
    pub vertices: Vec<String>,
    pub edges: Vec<GraphEdge>,
    pub requests: Vec<CutRequest>,
    pub k: u32,
    pub w: Option<u64>,
}

impl GraphProblemInstance {
    pub fn num_objects(&self) -> usize {
        self.edges.len() + self.requests.len()
    }

    pub fn object_is_soft(&self, id: usize) -> bool {
        if id < self.edges.len() {
            self.edges[id].softness.is_soft()
        } else {
            self.requests[id - self.edges.len()].softness.is_soft()
        }
    }

    pub fn object_weight(&self, id: usize) -> u64 {
        if id < self.edges.len() {
            self.edges[id].weight
        } else {
            self.requests[id - self.edges.len()].weight
        }
    }

    pub fn deletable_ids(&self) -> Vec<usize> {
        (0..self.num_objects()).filter(|&i| self.object_is_soft(i)).collect()
    }
}

/// Maps each output object id back to the input object it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackMap {
    pub map: Vec<usize>,
}

impl BackMap {
    pub fn identity(n: usize) -> Self {
        BackMap { map: (0..n).collect() }
    }

    /// Pulls a set of output ids back to input ids (sorted, deduplicated).
    pub fn pull(&self, output_ids: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = output_ids.iter().map(|&i| self.map[i]).collect();
        set.into_iter().collect()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ScopeError {
    #[error("constraint {id} uses `{rel}`, outside the supported fragment")]
    OutOfScope { id: usize, rel: Relation },
    #[error("constraint {id} is a self-loop, not supported by this encoding")]
    SelfLoop { id: usize },
}

fn check_scope(inst: &Instance, allowed: &[Relation]) -> Result<(), ScopeError> {
    for (id, c) in inst.constraints.iter().enumerate() {
        if !allowed.contains(&c.rel) {
            return Err(ScopeError::OutOfScope { id, rel: c.rel });
        }
    }
    Ok(())
}

/// Replaces every `x = y` with the pair `x <= y`, `y <= x` (same softness and
/// weight on both twins). Optimal cost and weight are preserved: a witness
/// breaking `x = y` breaks exactly one of the twins.
pub fn rewrite_eq_as_leq(inst: &Instance) -> (Instance, BackMap) {
    let mut constraints = Vec::new();
    let mut map = Vec::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        if c.rel == Relation::Eq {
            constraints.push(Constraint { rel: Relation::Leq, ..c.clone() });
            constraints.push(Constraint { x: c.y, y: c.x, rel: Relation::Leq, ..c.clone() });
            map.push(id);
            map.push(id);
        } else {
            constraints.push(c.clone());
            map.push(id);
        }
    }
    (Instance::new(inst.variables.clone(), constraints, inst.k, inst.w), BackMap { map })
}

/// Replaces every `x < y` with the pair `x <= y`, `x != y`.
pub fn rewrite_lt_as_leq_neq(inst: &Instance) -> (Instance, BackMap) {
    let mut constraints = Vec::new();
    let mut map = Vec::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        if c.rel == Relation::Lt {
            constraints.push(Constraint { rel: Relation::Leq, ..c.clone() });
            constraints.push(Constraint { rel: Relation::Neq, ..c.clone() });
            map.push(id);
            map.push(id);
        } else {
            constraints.push(c.clone());
            map.push(id);
        }
    }
    (Instance::new(inst.variables.clone(), constraints, inst.k, inst.w), BackMap { map })
}

/// `{lt}` instances become digraphs: one arc per constraint, and a deletion
/// set is feasible exactly when the remaining digraph is acyclic.
pub fn to_dfas(inst: &Instance) -> Result<(GraphProblemInstance, BackMap), ScopeError> {
    check_scope(inst, &[Relation::Lt])?;
    let mut edges = Vec::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        if c.is_self_loop() {
            return Err(ScopeError::SelfLoop { id });
        }
        edges.push(GraphEdge {
            from: c.x,
            to: c.y,
            softness: c.softness,
            weight: c.weight,
            special: false,
        });
    }
    let n = edges.len();
    Ok((
        GraphProblemInstance {
            kind: GraphProblemKind::Dfas,
            vertices: inst.variables.clone(),
            edges,
            requests: Vec::new(),
            k: inst.k,
            w: inst.w,
        },
        BackMap::identity(n),
    ))
}

/// `{eq,neq}` instances become edge multicut: equalities are edges,
/// disequalities are cut requests (soft requests may be ignored at their
/// weight, matching deletion of the disequality).
pub fn to_edge_multicut(inst: &Instance) -> Result<(GraphProblemInstance, BackMap), ScopeError> {
    check_scope(inst, &[Relation::Eq, Relation::Neq])?;
    let mut edges = Vec::new();
    let mut requests = Vec::new();
    let mut edge_src = Vec::new();
    let mut req_src = Vec::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        match c.rel {
            Relation::Eq => {
                edges.push(GraphEdge {
                    from: c.x,
                    to: c.y,
                    softness: c.softness,
                    weight: c.weight,
                    special: false,
                });
                edge_src.push(id);
            }
            Relation::Neq => {
                requests.push(CutRequest {
                    s: c.x,
                    t: c.y,
                    softness: c.softness,
                    weight: c.weight,
                });
                req_src.push(id);
            }
            _ => unreachable!(),
        }
    }
    let map = edge_src.into_iter().chain(req_src).collect();
    Ok((
        GraphProblemInstance {
            kind: GraphProblemKind::EdgeMulticut,
            vertices: inst.variables.clone(),
            edges,
            requests,
            k: inst.k,
            w: inst.w,
        },
        BackMap { map },
    ))
}

/// `{lt,leq}` instances become subset feedback arc set: strict constraints
/// are special arcs, non-strict ones ordinary arcs; feasible deletion sets
/// are exactly transversals of the cycles through a special arc.
pub fn to_subset_dfas(inst: &Instance) -> Result<(GraphProblemInstance, BackMap), ScopeError> {
    check_scope(inst, &[Relation::Lt, Relation::Leq])?;
    let mut edges = Vec::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        if c.rel == Relation::Lt && c.is_self_loop() {
            return Err(ScopeError::SelfLoop { id });
        }
        edges.push(GraphEdge {
            from: c.x,
            to: c.y,
            softness: c.softness,
            weight: c.weight,
            special: c.rel == Relation::Lt,
        });
    }
    let n = edges.len();
    Ok((
        GraphProblemInstance {
            kind: GraphProblemKind::SubsetDfas,
            vertices: inst.variables.clone(),
            edges,
            requests: Vec::new(),
            k: inst.k,
            w: inst.w,
        },
        BackMap::identity(n),
    ))
}

/// `{leq,neq}` instances become directed symmetric multicut: `x <= y` is an
/// arc, `x != y` a cut request that is broken exactly when its endpoints stay
/// strongly connected.
pub fn to_dsmc(inst: &Instance) -> Result<(GraphProblemInstance, BackMap), ScopeError> {
    check_scope(inst, &[Relation::Leq, Relation::Neq])?;
    let mut edges = Vec::new();
    let mut requests = Vec::new();
    let mut edge_src = Vec::new();
    let mut req_src = Vec::new();
    for (id, c) in inst.constraints.iter().enumerate() {
        match c.rel {
            Relation::Leq => {
                edges.push(GraphEdge {
                    from: c.x,
                    to: c.y,
                    softness: c.softness,
                    weight: c.weight,
                    special: false,
                });
                edge_src.push(id);
            }
            Relation::Neq => {
                requests.push(CutRequest {
                    s: c.x,
                    t: c.y,
                    softness: c.softness,
                    weight: c.weight,
                });
                req_src.push(id);
            }
            _ => unreachable!(),
        }
    }
    let map = edge_src.into_iter().chain(req_src).collect();
    Ok((
        GraphProblemInstance {
            kind: GraphProblemKind::Dsmc,
            vertices: inst.variables.clone(),
            edges,
            requests,
            k: inst.k,
            w: inst.w,
        },
        BackMap { map },
    ))
}

/// Inverse encoding: arcs become `<=` constraints, requests become `!=`.
/// The back map sends constraint ids to deletable object ids.
pub fn dsmc_to_mincsp(g: &GraphProblemInstance) -> (Instance, BackMap) {
    let mut constraints = Vec::new();
    let mut map = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        constraints.push(Constraint {
            x: e.from,
            y: e.to,
            rel: Relation::Leq,
            softness: e.softness,
            weight: e.weight,
        });
        map.push(i);
    }
    for (j, r) in g.requests.iter().enumerate() {
        constraints.push(Constraint {
            x: r.s,
            y: r.t,
            rel: Relation::Neq,
            softness: r.softness,
            weight: r.weight,
        });
        map.push(g.edges.len() + j);
    }
    (Instance::new(g.vertices.clone(), constraints, g.k, g.w), BackMap { map })
}

/// Canonicalizes a pulled-back solution: the returned deletion set is the
/// exact set of input constraints broken by the witness. The witness must
/// break no crisp constraint and nothing outside the pulled-back ids (a
/// rewrite twin pair can contribute at most its one broken twin).
pub fn pull_back(
    input: &Instance,
    back: &BackMap,
    deleted_out: &[usize],
    witness: &Assignment,
) -> Result<Solution, String> {
    let mapped = back.pull(deleted_out);
    let report = evaluate(input, witness).map_err(|e| e.to_string())?;
    if report.crisp_violation {
        return Err("witness breaks a crisp input constraint".into());
    }
    for &id in &report.violated {
        if mapped.binary_search(&id).is_err() {
            return Err(format!("witness breaks constraint {id} outside the pulled set"));
        }
    }
    Ok(Solution::new(report.violated, input))
}

/// Serializes any graph problem instance in its line format.
pub fn serialize_graph(g: &GraphProblemInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!("k {}\n", g.k));
    if let Some(w) = g.w {
        out.push_str(&format!("w {w}\n"));
    }
    let keyword = if g.kind == GraphProblemKind::EdgeMulticut { "edge" } else { "arc" };
    for e in &g.edges {
        let mut line = format!(
            "{keyword} {} {} {}",
            g.vertices[e.from],
            g.vertices[e.to],
            e.softness.token()
        );
        if e.softness.is_soft() {
            line.push_str(&format!(" {}", e.weight));
        }
        if e.special {
            line.push_str(" special");
        }
        out.push_str(&line);
        out.push('\n');
    }
    for r in &g.requests {
        let mut line =
            format!("pair {} {} {}", g.vertices[r.s], g.vertices[r.t], r.softness.token());
        if r.softness.is_soft() {
            line.push_str(&format!(" {}", r.weight));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parses the line format for a given problem kind.
pub fn parse_graph(kind: GraphProblemKind, text: &str) -> Result<GraphProblemInstance, ParseError> {
    let mut k: Option<u32> = None;
    let mut w: Option<Option<u64>> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut edges = Vec::new();
    let mut requests = Vec::new();

    let mut intern = |name: &str, vertices: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(name) {
            return i;
        }
        let i = vertices.len();
        vertices.push(name.to_string());
        index.insert(name.to_string(), i);
        i
    };

    let edge_keyword = if kind == GraphProblemKind::EdgeMulticut { "edge" } else { "arc" };

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "k" => {
                if k.is_some() {
                    return Err(ParseError::DuplicateBudget { line, token: "k" });
                }
                let v: u32 = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| ParseError::Malformed { line, detail: "expected `k <int>`".into() })?;
                k = Some(v);
            }
            "w" => {
                if w.is_some() {
                    return Err(ParseError::DuplicateBudget { line, token: "w" });
                }
                let tok = tokens.get(1).ok_or_else(|| ParseError::Malformed {
                    line,
                    detail: "expected `w <int|inf>`".into(),
                })?;
                w = Some(if *tok == "inf" { None } else { Some(parse_weight(tok, line)?) });
            }
            kw if kw == edge_keyword || kw == "pair" => {
                if tokens.len() < 4 {
                    return Err(ParseError::Malformed {
                        line,
                        detail: format!("expected `{kw} <u> <v> <soft|crisp> ...`"),
                    });
                }
                let softness = match tokens[3] {
                    "soft" => Softness::Soft,
                    "crisp" => Softness::Crisp,
                    other => {
                        return Err(ParseError::Malformed {
                            line,
                            detail: format!("expected soft|crisp, got `{other}`"),
                        })
                    }
                };
                let mut weight = 1u64;
                let mut special = false;
                for tok in &tokens[4..] {
                    if *tok == "special" {
                        special = true;
                    } else {
                        weight = parse_weight(tok, line)?;
                    }
                }
                if special && (kw == "pair" || kind != GraphProblemKind::SubsetDfas) {
                    return Err(ParseError::Malformed {
                        line,
                        detail: "`special` only applies to subset-dfas arcs".into(),
                    });
                }
                let u = intern(tokens[1], &mut vertices);
                let v = intern(tokens[2], &mut vertices);
                if softness == Softness::Crisp {
                    weight = 1;
                }
                if kw == "pair" {
                    requests.push(CutRequest { s: u, t: v, softness, weight });
                } else {
                    edges.push(GraphEdge { from: u, to: v, softness, weight, special });
                }
            }
            other => {
                return Err(ParseError::Malformed {
                    line,
                    detail: format!("unknown line keyword `{other}`"),
                })
            }
        }
    }

    let k = k.ok_or(ParseError::MissingBudget)?;
    Ok(GraphProblemInstance { kind, vertices, edges, requests, k, w: w.unwrap_or(None) })
}
