//! Trees: prune to a subtree with one spare node, label it so that every
//! non-red agent sees a foreign neighbor, then move zero-utility red agents
//! next to non-red agents.

use super::{finish, Construction};
use crate::error::{Error, Result};
use crate::game::{foreign, neighbor_masks, Instance, TypeId, EMPTY};
use crate::graph::NodeId;

/// Backtracking steps allowed for the inner labeling before giving up.
const SEARCH_STEPS: u64 = 2_000_000;

/// Builds an equilibrium on a tree. The red type is the largest type.
pub fn construct_tree_equilibrium(instance: &Instance) -> Result<Construction> {
    let g = instance.graph();
    if !g.is_tree() {
        return Err(Error::Inapplicable("graph is not a tree".into()));
    }
    let profile = instance.profile();
    let n = profile.n();
    let red = (0..profile.k() as TypeId).max_by_key(|&t| (profile.count(t), std::cmp::Reverse(t))).unwrap();

    let root = (0..g.node_count()).find(|&v| g.degree(v) == 1).unwrap();
    let order = g.bfs_order(root);
    let kept = &order[..n + 1];
    let mut parent = vec![usize::MAX; g.node_count()];
    let mut in_sub = vec![false; g.node_count()];
    for &u in kept {
        in_sub[u] = true;
    }
    for &u in kept {
        for &w in g.neighbors(u) {
            if in_sub[w] && w != root && parent[w] == usize::MAX && w != parent[u] {
                parent[w] = u;
            }
        }
    }

    let inner = &kept[1..];
    let mut labels = label_inner(instance, inner, &parent, red)?;

    let mut masks = vec![0; g.node_count()];
    neighbor_masks(g, &labels, &mut masks);
    let zero_red: Vec<NodeId> =
        (0..labels.len()).filter(|&v| labels[v] == red && foreign(masks[v], red) == 0).collect();
    let open: Vec<NodeId> = (0..labels.len())
        .filter(|&v| labels[v] == EMPTY && g.neighbors(v).iter().any(|&w| labels[w] != EMPTY && labels[w] != red))
        .collect();
    for (&x, &e) in zero_red.iter().zip(&open) {
        labels[e] = red;
        labels[x] = EMPTY;
    }
    let case = if zero_red.len() <= open.len() { "all-moved" } else { "partly-moved" };
    finish(instance, labels, Some(red), case)
}

/// Labels `inner` (BFS order, first node adjacent to `root`) so that the first
/// node is red and every non-red node has a neighbor of another type.
fn label_inner(instance: &Instance, inner: &[NodeId], parent: &[usize], red: TypeId) -> Result<Vec<u8>> {
    let g = instance.graph();
    let k = instance.profile().k();
    let mut remaining: Vec<usize> = instance.profile().counts().to_vec();
    let mut labels = vec![EMPTY; g.node_count()];
    // index in `inner` of the last child of each node, if any
    let mut last_child = vec![None; g.node_count()];
    for (i, &u) in inner.iter().enumerate().skip(1) {
        last_child[parent[u]] = Some(i);
    }

    let mut search = Search {
        inner,
        parent,
        last_child: &last_child,
        remaining: &mut remaining,
        labels: &mut labels,
        foreign_seen: vec![0; g.node_count()],
        red,
        k,
        steps: 0,
    };
    search.remaining[red as usize] -= 1;
    search.labels[inner[0]] = red;
    if search.assign(1) {
        Ok(labels)
    } else if search.steps >= SEARCH_STEPS {
        Err(Error::GaveUp { attempts: SEARCH_STEPS as usize })
    } else {
        Err(Error::Construction("no labeling of the pruned tree exists".into()))
    }
}

struct Search<'a> {
    inner: &'a [NodeId],
    parent: &'a [usize],
    last_child: &'a [Option<usize>],
    remaining: &'a mut Vec<usize>,
    labels: &'a mut Vec<u8>,
    /// Number of assigned neighbors of a different type.
    foreign_seen: Vec<u32>,
    red: TypeId,
    k: usize,
    steps: u64,
}

impl Search<'_> {
    fn assign(&mut self, i: usize) -> bool {
        if i == self.inner.len() {
            return true;
        }
        self.steps += 1;
        if self.steps >= SEARCH_STEPS {
            return false;
        }
        let u = self.inner[i];
        let p = self.parent[u];
        let pt = self.labels[p];
        // other types first, largest remaining first, the parent's type last
        let mut candidates: Vec<u8> = (0..self.k as u8).filter(|&t| t != pt && self.remaining[t as usize] > 0).collect();
        candidates.sort_by_key(|&t| (std::cmp::Reverse(self.remaining[t as usize]), t != self.red, t));
        if self.remaining[pt as usize] > 0 {
            candidates.push(pt);
        }
        for t in candidates {
            let differs = t != pt;
            let is_leaf = self.last_child[u].is_none();
            if !differs {
                // the parent needs a foreign neighbor and this was its last chance
                if pt != self.red && self.foreign_seen[p] == 0 && self.last_child[p] == Some(i) {
                    continue;
                }
                if t != self.red && is_leaf {
                    continue;
                }
            }
            self.labels[u] = t;
            self.remaining[t as usize] -= 1;
            if differs {
                self.foreign_seen[p] += 1;
                self.foreign_seen[u] += 1;
            }
            if self.assign(i + 1) {
                return true;
            }
            if differs {
                self.foreign_seen[p] -= 1;
                self.foreign_seen[u] -= 1;
            }
            self.remaining[t as usize] += 1;
            self.labels[u] = EMPTY;
            if self.steps >= SEARCH_STEPS {
                return false;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{verify_certificate, StabilityCertificate};
    use crate::game::TypeProfile;
    use crate::graph::{make_line, make_random_tree, Graph};

    fn build(g: Graph, counts: &[usize]) -> Construction {
        let i = Instance::new(g, TypeProfile::new(counts.to_vec()).unwrap()).unwrap();
        let c = construct_tree_equilibrium(&i).unwrap();
        assert!(verify_certificate(&i, &c.assignment, c.certificate));
        c
    }

    #[test]
    fn star_with_many_reds() {
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap();
        let c = build(g, &[4, 1]);
        assert_ne!(c.certificate, StabilityCertificate::Direct);
    }

    #[test]
    fn lines_and_random_trees() {
        build(make_line(5).unwrap(), &[2, 2]);
        build(make_line(9).unwrap(), &[3, 2, 2]);
        for seed in 0..30 {
            let g = make_random_tree(16, seed).unwrap();
            build(g.clone(), &[5, 4, 3]);
            build(g, &[9, 2, 1]);
        }
    }

    #[test]
    fn rejects_non_trees() {
        let g = crate::graph::make_cycle(5).unwrap();
        let i = Instance::new(g, TypeProfile::new(vec![2, 2]).unwrap()).unwrap();
        assert!(matches!(construct_tree_equilibrium(&i), Err(Error::Inapplicable(_))));
    }
}
