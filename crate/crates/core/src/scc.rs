//! Tarjan strongly connected components with a deterministic condensation
//! order, shared by the satisfiability check, the 2-SAT solver and the
//! graph-problem oracles.

/// Iterative Tarjan. Returns `(component_count, component_id_per_vertex)`.
/// Component ids are assigned in completion order, so within the condensation
/// every arc goes from a higher id to a lower id (sinks get the lowest ids).
pub fn tarjan_scc(n: usize, adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0usize;
    let mut n_comps = 0usize;

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < adj[v].len() {
                let w = adj[v][*ei];
                *ei += 1;
                if index[w] == UNSET {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = n_comps;
                        if w == v {
                            break;
                        }
                    }
                    n_comps += 1;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    (n_comps, comp)
}

/// Topologically orders the condensation of `(n, adj, comp)` and returns one
/// rank per component (0 = first in the order). Ties among ready components
/// are broken by the smallest original vertex id they contain, so the order
/// is reproducible.
pub fn condensation_ranks(
    n: usize,
    adj: &[Vec<usize>],
    n_comps: usize,
    comp: &[usize],
) -> Vec<u64> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut min_vertex = vec![usize::MAX; n_comps];
    for v in 0..n {
        min_vertex[comp[v]] = min_vertex[comp[v]].min(v);
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n_comps];
    let mut indeg = vec![0usize; n_comps];
    for v in 0..n {
        for &w in &adj[v] {
            let (a, b) = (comp[v], comp[w]);
            if a != b {
                out[a].push(b);
            }
        }
    }
    for list in &mut out {
        list.sort_unstable();
        list.dedup();
        for &b in list.iter() {
            indeg[b] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n_comps)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((min_vertex[c], c)))
        .collect();
    let mut rank = vec![0u64; n_comps];
    let mut next = 0u64;
    while let Some(Reverse((_, c))) = heap.pop() {
        rank[c] = next;
        next += 1;
        for &b in &out[c] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                heap.push(Reverse((min_vertex[b], b)));
            }
        }
    }
    debug_assert_eq!(next as usize, n_comps);
    rank
}
