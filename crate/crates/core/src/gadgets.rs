//! Reduction compiler from multicolored clique to directed symmetric
//! multicut, plus both solution-direction maps and structural verifiers.
//!
//! Each part of the clique instance becomes a *necklace*: a cyclic chain of
//! `k` *strings*, each string being `3n` *diamonds* joined end to end. A
//! diamond is a four-vertex strongly connected block whose only deletable
//! arc is `n -> s`; deleting it ("picking" the diamond) breaks east-west
//! transit. Cut requests at distance `n` along the necklace force every
//! solution to pick `3k` evenly spaced diamonds per necklace, which encodes
//! choosing one vertex per part. For every non-adjacent cross-part vertex
//! pair a *coordination gadget* (two fresh vertices, four crisp crossing
//! arcs and one crisp request) forbids choosing both endpoints.

use crate::format::{tokenize, ParseError};
use crate::reductions::{CutRequest, GraphEdge, GraphProblemInstance, GraphProblemKind};
use crate::model::Softness;
use crate::scc::tarjan_scc;
use std::collections::{BTreeSet, HashMap};

/// A multicolored clique instance: `k` disjoint parts of equal size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub vertices: Vec<String>,
    /// Global vertex ids, one list per part.
    pub parts: Vec<Vec<usize>>,
    /// Undirected edges, stored as (min, max).
    pub edges: BTreeSet<(usize, usize)>,
}

impl CliqueInstance {
    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn part_size(&self) -> usize {
        self.parts.first().map_or(0, Vec::len)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Part index and in-part position of a vertex, both 1-based.
    pub fn part_position(&self, v: usize) -> Option<(usize, usize)> {
        for (i, part) in self.parts.iter().enumerate() {
            if let Some(pos) = part.iter().position(|&u| u == v) {
                return Some((i + 1, pos + 1));
            }
        }
        None
    }

    pub fn parse(text: &str) -> Result<CliqueInstance, ParseError> {
        let mut k: Option<usize> = None;
        let mut vertices: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut edges = BTreeSet::new();
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
                    k = Some(tokens.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| {
                        ParseError::Malformed { line, detail: "expected `k <int>`".into() }
                    })?);
                }
                "part" => {
                    let i: usize =
                        tokens.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| {
                            ParseError::Malformed { line, detail: "expected `part <i> ...`".into() }
                        })?;
                    if i != parts.len() + 1 {
                        return Err(ParseError::Malformed {
                            line,
                            detail: format!("part index {i} out of order"),
                        });
                    }
                    let mut part = Vec::new();
                    for name in &tokens[2..] {
                        if index.contains_key(*name) {
                            return Err(ParseError::Malformed {
                                line,
                                detail: format!("vertex `{name}` declared twice"),
                            });
                        }
                        let id = vertices.len();
                        vertices.push(name.to_string());
                        index.insert(name.to_string(), id);
                        part.push(id);
                    }
                    parts.push(part);
                }
                "edge" => {
                    if tokens.len() != 3 {
                        return Err(ParseError::Malformed {
                            line,
                            detail: "expected `edge <u> <v>`".into(),
                        });
                    }
                    let u = *index.get(tokens[1]).ok_or_else(|| ParseError::Malformed {
                        line,
                        detail: format!("unknown vertex `{}`", tokens[1]),
                    })?;
                    let v = *index.get(tokens[2]).ok_or_else(|| ParseError::Malformed {
                        line,
                        detail: format!("unknown vertex `{}`", tokens[2]),
                    })?;
                    edges.insert((u.min(v), u.max(v)));
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
        let inst = CliqueInstance { vertices, parts, edges };
        if inst.parts.len() != k {
            return Err(ParseError::Malformed {
                line: 0,
                detail: format!("declared k={k} but found {} parts", inst.parts.len()),
            });
        }
        let n = inst.part_size();
        if inst.parts.iter().any(|p| p.len() != n) {
            return Err(ParseError::Malformed { line: 0, detail: "parts differ in size".into() });
        }
        Ok(inst)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("k {}\n", self.parts.len());
        for (i, part) in self.parts.iter().enumerate() {
            let names: Vec<&str> = part.iter().map(|&v| self.vertices[v].as_str()).collect();
            out.push_str(&format!("part {} {}\n", i + 1, names.join(" ")));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("edge {} {}\n", self.vertices[u], self.vertices[v]));
        }
        out
    }
}

/// Where a deletable arc lives: necklace and string are 1-based, `pos` is
/// the 1-based diamond index within its string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiamondRef {
    pub necklace: usize,
    pub string: usize,
    pub pos: usize,
}

/// One diamond: four vertices whose crisp arcs are south->west,
/// west->north, south->east and east->north, plus the single deletable
/// north->south arc. West and east are junction vertices shared with the
/// neighbouring diamonds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diamond {
    pub west: usize,
    pub north: usize,
    pub east: usize,
    pub south: usize,
    pub ns_arc: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordGadget {
    /// Part pair (i < j) and in-part positions of the non-adjacent vertices.
    pub i: usize,
    pub j: usize,
    pub alpha: usize,
    pub beta: usize,
    pub s: usize,
    pub t: usize,
    /// Arc ids of the four crossing arcs: x->s, s->y, y->t, t->x.
    pub crossing_arcs: [usize; 4],
    /// Index into the request list.
    pub request: usize,
}

/// Bookkeeping that ties the built graph back to the clique instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMap {
    pub k: usize,
    pub n: usize,
    /// `junctions[i][g]`: vertex id of junction `g` (0-based around the
    /// cycle) of necklace `i+1`.
    pub junctions: Vec<Vec<usize>>,
    /// North and south vertices of the diamond at each global position.
    pub norths: Vec<Vec<usize>>,
    pub souths: Vec<Vec<usize>>,
    /// `ns_arcs[i][g]`: deletable arc id of the diamond at global position
    /// `g` of necklace `i+1`.
    pub ns_arcs: Vec<Vec<usize>>,
    pub ns_arc_info: HashMap<usize, DiamondRef>,
    /// `necklace_requests[i][a]`: request index of the distance-`n` request
    /// starting at junction `a`.
    pub necklace_requests: Vec<Vec<usize>>,
    pub coords: Vec<CoordGadget>,
    /// Clique vertex id -> (part, in-part position), 1-based.
    pub vertex_part_pos: HashMap<usize, (usize, usize)>,
}

impl GadgetMap {
    /// The diamond at 1-based (necklace, string, pos).
    pub fn diamond(&self, necklace: usize, string: usize, pos: usize) -> Diamond {
        let ring = 3 * self.k * self.n;
        let gpos = (string - 1) * 3 * self.n + (pos - 1);
        Diamond {
            west: self.junctions[necklace - 1][gpos],
            north: self.norths[necklace - 1][gpos],
            east: self.junctions[necklace - 1][(gpos + 1) % ring],
            south: self.souths[necklace - 1][gpos],
            ns_arc: self.ns_arcs[necklace - 1][gpos],
        }
    }

    /// Human-readable side map emitted next to the built instance.
    pub fn to_text(&self, g: &GraphProblemInstance) -> String {
        let mut out = String::new();
        out.push_str("# gadget map v1\n");
        out.push_str(&format!("budget {}\n", g.k));
        let mut ns: Vec<(usize, DiamondRef)> =
            self.ns_arc_info.iter().map(|(&a, &d)| (a, d)).collect();
        ns.sort_by_key(|&(a, _)| a);
        for (arc, d) in ns {
            out.push_str(&format!("ns {} {} {} {}\n", arc, d.necklace, d.string, d.pos));
        }
        for (i, junctions) in self.junctions.iter().enumerate() {
            for (gpos, &v) in junctions.iter().enumerate() {
                out.push_str(&format!("junction {} {} {}\n", i + 1, gpos, g.vertices[v]));
            }
        }
        for c in &self.coords {
            out.push_str(&format!(
                "coord {} {} {} {} {} {} {} {} {} {} {}\n",
                c.i,
                c.j,
                c.alpha,
                c.beta,
                g.vertices[c.s],
                g.vertices[c.t],
                c.crossing_arcs[0],
                c.crossing_arcs[1],
                c.crossing_arcs[2],
                c.crossing_arcs[3],
                c.request
            ));
        }
        out
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("malformed clique instance: {0}")]
    Malformed(String),
    #[error("{0}")]
    BadArgument(String),
}

/// Builds the directed-symmetric-multicut instance for a clique instance
/// with k parts of size n. The budget is 3k^2; the only deletable arcs are
/// the `n -> s` arcs of the diamonds.
pub fn build_dsmc_from_clique(
    g: &CliqueInstance,
) -> Result<(GraphProblemInstance, GadgetMap), GadgetError> {
    let k = g.num_parts();
    let n = g.part_size();
    if k < 2 {
        return Err(GadgetError::Malformed("need at least 2 parts".into()));
    }
    if n < 1 {
        return Err(GadgetError::Malformed("parts must be nonempty".into()));
    }
    if g.parts.iter().any(|p| p.len() != n) {
        return Err(GadgetError::Malformed("parts differ in size".into()));
    }

    let ring = 3 * k * n; // junctions / diamonds per necklace
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<GraphEdge> = Vec::new();
    let mut requests: Vec<CutRequest> = Vec::new();
    let add_vertex = |name: String, vertices: &mut Vec<String>| -> usize {
        let id = vertices.len();
        vertices.push(name);
        id
    };

    // Junction g (0-based around necklace i) is the western vertex of the
    // diamond at 1-based position (g % 3n) + 1 in string (g / 3n) + 1.
    let mut junctions: Vec<Vec<usize>> = Vec::new();
    let mut norths: Vec<Vec<usize>> = Vec::new();
    let mut souths: Vec<Vec<usize>> = Vec::new();
    for i in 1..=k {
        let mut js = Vec::with_capacity(ring);
        let mut ns = Vec::with_capacity(ring);
        let mut ss = Vec::with_capacity(ring);
        for gpos in 0..ring {
            let string = gpos / (3 * n) + 1;
            let pos = gpos % (3 * n) + 1;
            js.push(add_vertex(format!("nk{i}.s{string}.d{pos}.w"), &mut vertices));
            ns.push(add_vertex(format!("nk{i}.s{string}.d{pos}.n"), &mut vertices));
            ss.push(add_vertex(format!("nk{i}.s{string}.d{pos}.s"), &mut vertices));
        }
        junctions.push(js);
        norths.push(ns);
        souths.push(ss);
    }

    let mut ns_arcs: Vec<Vec<usize>> = vec![Vec::with_capacity(ring); k];
    let mut ns_arc_info = HashMap::new();
    for i in 1..=k {
        for gpos in 0..ring {
            let w = junctions[i - 1][gpos];
            let e = junctions[i - 1][(gpos + 1) % ring];
            let nv = norths[i - 1][gpos];
            let sv = souths[i - 1][gpos];
            let crisp = |from, to| GraphEdge {
                from,
                to,
                softness: Softness::Crisp,
                weight: 1,
                special: false,
            };
            edges.push(crisp(sv, w));
            edges.push(crisp(w, nv));
            edges.push(crisp(sv, e));
            edges.push(crisp(e, nv));
            let ns_id = edges.len();
            edges.push(GraphEdge {
                from: nv,
                to: sv,
                softness: Softness::Soft,
                weight: 1,
                special: false,
            });
            ns_arcs[i - 1].push(ns_id);
            ns_arc_info.insert(
                ns_id,
                DiamondRef { necklace: i, string: gpos / (3 * n) + 1, pos: gpos % (3 * n) + 1 },
            );
        }
    }

    // Distance-n cut requests around every necklace.
    let mut necklace_requests: Vec<Vec<usize>> = vec![Vec::with_capacity(ring); k];
    for i in 1..=k {
        for a in 0..ring {
            let idx = requests.len();
            requests.push(CutRequest {
                s: junctions[i - 1][a],
                t: junctions[i - 1][(a + n) % ring],
                softness: Softness::Crisp,
                weight: 1,
            });
            necklace_requests[i - 1].push(idx);
        }
    }

    // Coordination gadgets for each non-adjacent cross-part pair.
    let mut coords = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            for alpha in 1..=n {
                for beta in 1..=n {
                    let u = g.parts[i - 1][alpha - 1];
                    let v = g.parts[j - 1][beta - 1];
                    if g.adjacent(u, v) {
                        continue;
                    }
                    // x-side: string j of necklace i; y-side: string i of
                    // necklace j. Local junction m is global (string-1)*3n+m.
                    let x = |m: usize| junctions[i - 1][(j - 1) * 3 * n + m];
                    let y = |m: usize| junctions[j - 1][(i - 1) * 3 * n + m];
                    let s = add_vertex(format!("cg{i}.{j}.{alpha}.{beta}.s"), &mut vertices);
                    let t = add_vertex(format!("cg{i}.{j}.{alpha}.{beta}.t"), &mut vertices);
                    let crisp = |from, to| GraphEdge {
                        from,
                        to,
                        softness: Softness::Crisp,
                        weight: 1,
                        special: false,
                    };
                    let a0 = edges.len();
                    edges.push(crisp(x(n + alpha), s));
                    edges.push(crisp(s, y(2 * n + beta - 1)));
                    edges.push(crisp(y(n + beta), t));
                    edges.push(crisp(t, x(2 * n + alpha - 1)));
                    let request = requests.len();
                    requests.push(CutRequest { s, t, softness: Softness::Crisp, weight: 1 });
                    coords.push(CoordGadget {
                        i,
                        j,
                        alpha,
                        beta,
                        s,
                        t,
                        crossing_arcs: [a0, a0 + 1, a0 + 2, a0 + 3],
                        request,
                    });
                }
            }
        }
    }

    let mut vertex_part_pos = HashMap::new();
    for (pi, part) in g.parts.iter().enumerate() {
        for (pos, &v) in part.iter().enumerate() {
            vertex_part_pos.insert(v, (pi + 1, pos + 1));
        }
    }

    let instance = GraphProblemInstance {
        kind: GraphProblemKind::Dsmc,
        vertices,
        edges,
        requests,
        k: (3 * k * k) as u32,
        w: None,
    };
    let map = GadgetMap {
        k,
        n,
        junctions,
        norths,
        souths,
        ns_arcs,
        ns_arc_info,
        necklace_requests,
        coords,
        vertex_part_pos,
    };
    Ok((instance, map))
}

/// Maps a one-vertex-per-part selection to its canonical cut: for each
/// chosen vertex at in-part position `a`, pick the diamonds at positions
/// `a`, `a+n`, `a+2n` in every string of that part's necklace. The result
/// always has exactly 3k^2 arcs.
pub fn clique_to_cut(m: &GadgetMap, z: &[usize]) -> Result<Vec<usize>, GadgetError> {
    let mut by_part = vec![None; m.k];
    for &v in z {
        let &(part, pos) = m
            .vertex_part_pos
            .get(&v)
            .ok_or_else(|| GadgetError::BadArgument(format!("vertex {v} not in any part")))?;
        if by_part[part - 1].replace(pos).is_some() {
            return Err(GadgetError::BadArgument(format!("two vertices from part {part}")));
        }
    }
    let mut out = Vec::new();
    for (i, slot) in by_part.iter().enumerate() {
        let alpha =
            slot.ok_or_else(|| GadgetError::BadArgument(format!("part {} unchosen", i + 1)))?;
        for string in 1..=m.k {
            for c in 0..3 {
                let gpos = (string - 1) * 3 * m.n + (alpha - 1) + c * m.n;
                out.push(m.ns_arcs[i][gpos]);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Inverse map, defined exactly on structurally valid solutions: `X` must
/// pick 3k evenly spaced diamonds per necklace (same in-part offset in every
/// string). Returns the chosen clique vertices, reading the offset from each
/// necklace's first string.
pub fn cut_to_clique(m: &GadgetMap, x: &[usize], g: &CliqueInstance) -> Option<Vec<usize>> {
    let ring = 3 * m.k * m.n;
    let mut per_necklace: Vec<Vec<usize>> = vec![Vec::new(); m.k];
    for &arc in x {
        let d = m.ns_arc_info.get(&arc)?;
        let gpos = (d.string - 1) * 3 * m.n + (d.pos - 1);
        per_necklace[d.necklace - 1].push(gpos);
    }
    let mut chosen = Vec::new();
    for (i, picks) in per_necklace.iter_mut().enumerate() {
        picks.sort_unstable();
        if picks.len() != 3 * m.k {
            return None;
        }
        let alpha0 = picks[0]; // 0-based offset; in-part position alpha0+1
        if alpha0 >= m.n {
            return None;
        }
        for (c, &p) in picks.iter().enumerate() {
            if p != alpha0 + c * m.n {
                return None;
            }
        }
        debug_assert!(alpha0 + (3 * m.k - 1) * m.n < ring);
        chosen.push(g.parts[i][alpha0]);
    }
    Some(chosen)
}

/// True iff every surviving request pair lies in distinct strongly connected
/// components after deleting the listed objects. Ids of crisp objects make
/// the candidate invalid.
pub fn verify_dsmc_solution(g: &GraphProblemInstance, x: &[usize]) -> bool {
    let mut deleted = vec![false; g.num_objects()];
    for &id in x {
        if id >= g.num_objects() || !g.object_is_soft(id) {
            return false;
        }
        deleted[id] = true;
    }
    let n = g.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        if !deleted[i] {
            adj[e.from].push(e.to);
        }
    }
    let (_, comp) = tarjan_scc(n, &adj);
    g.requests.iter().enumerate().all(|(j, r)| {
        deleted[g.edges.len() + j] || (r.s != r.t && comp[r.s] != comp[r.t])
    })
}

/// Crossing-arc incidence of a junction or run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingIncidence {
    None,
    OutgoingOnly,
    IncomingOnly,
    Both,
}

#[derive(Debug, Clone)]
pub struct RunInfo {
    /// Global junction positions of this run, in necklace order.
    pub junction_positions: Vec<usize>,
    /// Observed crossing-arc incidence per junction.
    pub junction_incidence: Vec<CrossingIncidence>,
    pub admits_outgoing: bool,
    pub admits_incoming: bool,
}

#[derive(Debug, Clone)]
pub struct NecklaceRuns {
    pub necklace: usize,
    /// 1-based in-part offset shared by every string of this necklace.
    pub alpha: usize,
    pub runs: Vec<RunInfo>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub necklaces: Vec<NecklaceRuns>,
}

/// Decomposes each necklace into the 3k runs left by an evenly spaced pick
/// set, classifies junction crossing-arc incidence against the positional
/// typology, and checks that no two neighbouring runs stay strongly
/// connected.
pub fn analyze_runs(
    m: &GadgetMap,
    g: &GraphProblemInstance,
    x: &[usize],
) -> Result<RunReport, GadgetError> {
    let ring = 3 * m.k * m.n;
    // Observed crossing incidence per vertex.
    let mut has_out = vec![false; g.vertices.len()];
    let mut has_in = vec![false; g.vertices.len()];
    for c in &m.coords {
        let [xs, sy, yt, tx] = c.crossing_arcs;
        has_out[g.edges[xs].from] = true;
        has_in[g.edges[sy].to] = true;
        has_out[g.edges[yt].from] = true;
        has_in[g.edges[tx].to] = true;
    }

    // Strong connectivity of the cut graph.
    let mut deleted = vec![false; g.num_objects()];
    for &id in x {
        if id >= g.num_objects() || !g.object_is_soft(id) {
            return Err(GadgetError::BadArgument(format!("id {id} is not deletable")));
        }
        deleted[id] = true;
    }
    let mut adj = vec![Vec::new(); g.vertices.len()];
    for (i, e) in g.edges.iter().enumerate() {
        if !deleted[i] {
            adj[e.from].push(e.to);
        }
    }
    let (_, comp) = tarjan_scc(g.vertices.len(), &adj);

    let mut necklaces = Vec::new();
    for i in 1..=m.k {
        let picks: Vec<usize> = {
            let mut p: Vec<usize> = m.ns_arcs[i - 1]
                .iter()
                .enumerate()
                .filter(|(_, &arc)| deleted[arc])
                .map(|(gpos, _)| gpos)
                .collect();
            p.sort_unstable();
            p
        };
        if picks.len() != 3 * m.k {
            return Err(GadgetError::BadArgument(format!(
                "necklace {i} has {} picks, expected {}",
                picks.len(),
                3 * m.k
            )));
        }
        let alpha0 = picks[0];
        if alpha0 >= m.n || picks.iter().enumerate().any(|(c, &p)| p != alpha0 + c * m.n) {
            return Err(GadgetError::BadArgument(format!(
                "necklace {i} picks are not evenly spaced"
            )));
        }
        let mut runs = Vec::new();
        for r in 0..3 * m.k {
            let start = alpha0 + r * m.n;
            let mut junction_positions = Vec::with_capacity(m.n);
            let mut junction_incidence = Vec::with_capacity(m.n);
            let mut admits_outgoing = false;
            let mut admits_incoming = false;
            for step in 1..=m.n {
                let gpos = (start + step) % ring;
                junction_positions.push(gpos);
                let v = m.junctions[i - 1][gpos];
                let incidence = match (has_out[v], has_in[v]) {
                    (false, false) => CrossingIncidence::None,
                    (true, false) => CrossingIncidence::OutgoingOnly,
                    (false, true) => CrossingIncidence::IncomingOnly,
                    (true, true) => CrossingIncidence::Both,
                };
                // Positional typology within the string: local index m of a
                // junction admits outgoing arcs iff n+1 <= m <= 2n and
                // incoming ones iff 2n <= m <= 3n-1.
                let local = gpos % (3 * m.n);
                let may_out = (m.n + 1..=2 * m.n).contains(&local);
                let may_in = (2 * m.n..3 * m.n).contains(&local);
                if has_out[v] && !may_out {
                    return Err(GadgetError::BadArgument(format!(
                        "junction {gpos} of necklace {i} has an outgoing crossing arc \
                         outside the admitted band"
                    )));
                }
                if has_in[v] && !may_in {
                    return Err(GadgetError::BadArgument(format!(
                        "junction {gpos} of necklace {i} has an incoming crossing arc \
                         outside the admitted band"
                    )));
                }
                admits_outgoing |= may_out;
                admits_incoming |= may_in;
                junction_incidence.push(incidence);
            }
            runs.push(RunInfo {
                junction_positions,
                junction_incidence,
                admits_outgoing,
                admits_incoming,
            });
        }
        // Neighbouring runs must not be strongly connected.
        for r in 0..runs.len() {
            let next = (r + 1) % runs.len();
            for &a in &runs[r].junction_positions {
                for &b in &runs[next].junction_positions {
                    let (va, vb) = (m.junctions[i - 1][a], m.junctions[i - 1][b]);
                    if comp[va] == comp[vb] {
                        return Err(GadgetError::BadArgument(format!(
                            "runs {r} and {next} of necklace {i} are strongly connected"
                        )));
                    }
                }
            }
        }
        necklaces.push(NecklaceRuns { necklace: i, alpha: alpha0 + 1, runs });
    }
    Ok(RunReport { necklaces })
}
