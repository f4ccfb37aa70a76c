//! Undirected simple connected graphs and the generators used throughout the crate.

mod atlas;
mod generators;

pub(crate) use generators::seeded_rng;
pub use atlas::{connected_graphs, graph_count, ATLAS_MAX_NODES};
pub use generators::{
    make_clique, make_clique_cycle, make_clique_lines, make_cycle, make_cylinder, make_line,
    make_pos_gadget, make_random_connected, make_random_regular, make_random_tree,
    make_regular_ring_of_cliques, make_torus, GraphFamily, FamilyTag, MAX_REJECTIONS,
};

use std::collections::{BTreeMap, VecDeque};

use crate::error::{invalid, Error, Result};

pub type NodeId = usize;

/// Named groups of nodes produced by the special-purpose generators.
/// The groups of a role map partition the node set.
pub type RoleMap = BTreeMap<String, Vec<NodeId>>;

/// Undirected simple connected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate edges,
    /// out-of-range endpoints and disconnected results.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Graph> {
        let graph = Self::from_edges_unchecked_connectivity(node_count, edges)?;
        if !graph.is_connected() {
            return Err(invalid("graph is not connected"));
        }
        Ok(graph)
    }

    pub(crate) fn from_edges_unchecked_connectivity(
        node_count: usize,
        edges: &[(NodeId, NodeId)],
    ) -> Result<Graph> {
        if node_count == 0 {
            return Err(invalid("graph needs at least one node"));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(invalid(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(invalid(format!("self-loop at node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("duplicate edge at node {v}")));
            }
        }
        Ok(Graph { adjacency })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Degree shared by every node, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_order(0).len() == self.node_count()
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.node_count() && self.is_connected()
    }

    /// Nodes reachable from `root` in breadth-first order (neighbours ascending).
    pub fn bfs_order(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.node_count()];
        let mut order = Vec::with_capacity(self.node_count());
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Checks the simple / symmetric / connected invariants.
    pub fn audit(&self) -> Result<()> {
        for (v, list) in self.adjacency.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("adjacency of {v} is not strictly sorted")));
            }
            for &w in list {
                if w == v {
                    return Err(invalid(format!("self-loop at {v}")));
                }
                if w >= self.node_count() || !self.has_edge(w, v) {
                    return Err(invalid(format!("edge {v}-{w} is not symmetric")));
                }
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidParameter("graph is not connected".into()));
        }
        Ok(())
    }
}

/// Checks that the groups of a role map partition `0..node_count`.
pub fn roles_partition(roles: &RoleMap, node_count: usize) -> bool {
    let mut seen = vec![false; node_count];
    for nodes in roles.values() {
        for &v in nodes {
            if v >= node_count || seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0), (1, 2)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1)]).is_err());
        assert!(Graph::from_edges(0, &[]).is_err());
    }

    #[test]
    fn basic_queries() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.regular_degree(), Some(2));
        assert!(g.has_edge(3, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert!(!g.is_tree());
        g.audit().unwrap();
    }
}
