//! Enumeration of all graphs on a few nodes up to isomorphism.
//!
//! Graphs on `n` nodes are grown from graphs on `n - 1` nodes by adding a node
//! with every possible neighbourhood, then deduplicated by a canonical code:
//! nodes are split into colour-refinement classes and the code is the minimum
//! adjacency bit string over all orderings that respect the classes.

use std::collections::BTreeSet;

use super::Graph;
use crate::error::{invalid, Result};

/// Largest node count accepted by [`connected_graphs`].
pub const ATLAS_MAX_NODES: usize = 8;

type Adj = Vec<u16>;

fn refine_colors(adj: &Adj) -> Vec<usize> {
    let n = adj.len();
    let mut colors: Vec<usize> = adj.iter().map(|m| m.count_ones() as usize).collect();
    let mut classes = 0;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> =
                    (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let distinct: Vec<_> = sigs.iter().collect::<BTreeSet<_>>().into_iter().collect();
        colors = sigs.iter().map(|s| distinct.binary_search(&s).unwrap()).collect();
        if distinct.len() == classes {
            return colors;
        }
        classes = distinct.len();
    }
}

fn code_of(adj: &Adj, order: &[usize]) -> u64 {
    let mut code = 0u64;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            code = code << 1 | u64::from(adj[order[i]] >> order[j] & 1);
        }
    }
    code
}

/// Tries every ordering of the classes from `class` on and keeps the smallest code.
fn search(adj: &Adj, bounds: &[(usize, usize)], class: usize, order: &mut Vec<usize>, best: &mut u64) {
    let Some(&(start, end)) = bounds.get(class) else {
        *best = (*best).min(code_of(adj, order));
        return;
    };
    permute(adj, bounds, class, start, end, order, best);
}

fn permute(
    adj: &Adj,
    bounds: &[(usize, usize)],
    class: usize,
    pos: usize,
    end: usize,
    order: &mut Vec<usize>,
    best: &mut u64,
) {
    if pos + 1 >= end {
        search(adj, bounds, class + 1, order, best);
        return;
    }
    for i in pos..end {
        order.swap(pos, i);
        permute(adj, bounds, class, pos + 1, end, order, best);
        order.swap(pos, i);
    }
}

fn canonical_code(adj: &Adj) -> u64 {
    let colors = refine_colors(adj);
    let mut order: Vec<usize> = (0..adj.len()).collect();
    order.sort_by_key(|&v| colors[v]);
    let mut bounds = Vec::new();
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || colors[order[i]] != colors[order[start]] {
            bounds.push((start, i));
            start = i;
        }
    }
    let mut best = u64::MAX;
    search(adj, &bounds, 0, &mut order, &mut best);
    best
}

fn all_graphs(n: usize) -> Vec<Adj> {
    let mut level: Vec<Adj> = vec![vec![0]];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 0u16..1 << (size - 1) {
                let mut h = g.clone();
                h.push(mask);
                for (v, row) in h.iter_mut().enumerate().take(size - 1) {
                    *row |= (mask >> v & 1) << (size - 1);
                }
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

fn to_graph(adj: &Adj) -> Option<Graph> {
    let n = adj.len();
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).ok()
}

/// Number of graphs (connected or not) on `n` nodes up to isomorphism.
pub fn graph_count(n: usize) -> Result<usize> {
    check(n)?;
    Ok(all_graphs(n).len())
}

fn check(n: usize) -> Result<()> {
    if n == 0 || n > ATLAS_MAX_NODES {
        return Err(invalid(format!("graph atlas covers 1..={ATLAS_MAX_NODES} nodes, got {n}")));
    }
    Ok(())
}

/// Every connected graph on `n` nodes, one per isomorphism class, in a fixed order.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    check(n)?;
    Ok(all_graphs(n).iter().filter_map(to_graph).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequences() {
        let all = [1, 2, 4, 11, 34, 156, 1044];
        let connected = [1, 1, 2, 6, 21, 112, 853];
        for n in 1..=7 {
            assert_eq!(graph_count(n).unwrap(), all[n - 1], "all graphs on {n}");
            assert_eq!(connected_graphs(n).unwrap().len(), connected[n - 1], "connected on {n}");
        }
    }

    #[test]
    fn isomorphic_inputs_share_a_code() {
        // path 0-1-2-3 under two labellings
        let a: Adj = vec![0b0010, 0b0101, 0b1010, 0b0100];
        let b: Adj = vec![0b0100, 0b1000, 0b1001, 0b0110];
        assert_eq!(canonical_code(&a), canonical_code(&b));
        let star: Adj = vec![0b1110, 0b0001, 0b0001, 0b0001];
        assert_ne!(canonical_code(&a), canonical_code(&star));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(connected_graphs(0).is_err());
        assert!(connected_graphs(9).is_err());
    }
}
