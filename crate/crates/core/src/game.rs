//! Instances, assignments, utilities and objectives.

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId, RoleMap};

/// Type id of an agent, `0..k`.
pub type TypeId = u8;

/// Cell value marking an empty node. Sorts after every type id.
pub(crate) const EMPTY: u8 = u8::MAX;

/// Largest supported number of types (type sets are stored as 64-bit masks).
pub const MAX_TYPES: usize = 64;

/// Number of agents of each type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeProfile {
    counts: Vec<usize>,
}

impl TypeProfile {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(invalid(format!("a profile needs at least 2 types, got {}", counts.len())));
        }
        if counts.len() > MAX_TYPES {
            return Err(invalid(format!("at most {MAX_TYPES} types are supported")));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(invalid("every type needs at least one agent"));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of types `k`.
    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Total number of agents `n`.
    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, t: TypeId) -> usize {
        self.counts[t as usize]
    }

    pub fn max_count(&self) -> usize {
        *self.counts.iter().max().unwrap()
    }

    /// All types have the same number of agents.
    pub fn symmetric(&self) -> bool {
        self.counts.iter().all(|&c| c == self.counts[0])
    }
}

impl fmt::Display for TypeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A graph together with a type profile that leaves at least one node empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    profile: TypeProfile,
    roles: RoleMap,
}

impl Instance {
    pub fn new(graph: Graph, profile: TypeProfile) -> Result<Self> {
        Self::with_roles(graph, profile, RoleMap::new())
    }

    pub fn with_roles(graph: Graph, profile: TypeProfile, roles: RoleMap) -> Result<Self> {
        if profile.n() >= graph.node_count() {
            return Err(invalid(format!(
                "{} agents need more than {} nodes",
                profile.n(),
                graph.node_count()
            )));
        }
        if !roles.is_empty() && !crate::graph::roles_partition(&roles, graph.node_count()) {
            return Err(invalid("roles do not partition the node set"));
        }
        Ok(Self { graph, profile, roles })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn profile(&self) -> &TypeProfile {
        &self.profile
    }

    pub fn roles(&self) -> &RoleMap {
        &self.roles
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn empty_count(&self) -> usize {
        self.graph.node_count() - self.profile.n()
    }
}

/// Which type (if any) occupies each node.
///
/// Agents of one type are interchangeable, so an assignment is a type labelling
/// of the nodes. Internally empty nodes hold [`EMPTY`], which keeps the natural
/// byte order equal to the order "types ascending, then empty".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    cells: Vec<u8>,
}

impl Assignment {
    /// Builds an assignment and checks it against the instance.
    pub fn new(instance: &Instance, occupancy: &[Option<TypeId>]) -> Result<Self> {
        let a = Self::from_occupancy(occupancy);
        a.validate(instance)?;
        Ok(a)
    }

    /// Builds an assignment without validation.
    pub fn from_occupancy(occupancy: &[Option<TypeId>]) -> Self {
        Self { cells: occupancy.iter().map(|c| c.unwrap_or(EMPTY)).collect() }
    }

    pub(crate) fn from_cells(cells: Vec<u8>) -> Self {
        Self { cells }
    }

    pub(crate) fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, v: NodeId) -> Option<TypeId> {
        let c = self.cells[v];
        (c != EMPTY).then_some(c)
    }

    pub fn occupancy(&self) -> Vec<Option<TypeId>> {
        (0..self.cells.len()).map(|v| self.get(v)).collect()
    }

    pub fn empty_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.cells.iter().enumerate().filter(|(_, &c)| c == EMPTY).map(|(v, _)| v)
    }

    /// Checks node count, type range and per-type counts against the instance.
    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if self.cells.len() != instance.node_count() {
            return Err(invalid(format!(
                "assignment covers {} nodes, graph has {}",
                self.cells.len(),
                instance.node_count()
            )));
        }
        let k = instance.profile().k();
        let mut counts = vec![0usize; k];
        for (v, &c) in self.cells.iter().enumerate() {
            if c != EMPTY {
                if c as usize >= k {
                    return Err(invalid(format!("node {v} holds type {c}, but k = {k}")));
                }
                counts[c as usize] += 1;
            }
        }
        if counts != instance.profile().counts() {
            return Err(invalid(format!(
                "type counts {:?} do not match the profile {}",
                counts,
                instance.profile()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if c == EMPTY {
                f.write_str("E")?;
            } else {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

/// One agent of type `ty` moving from `from` to the empty node `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Jump {
    pub from: NodeId,
    pub to: NodeId,
    pub ty: TypeId,
}

/// A jump together with the mover's utility before and after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Improvement {
    pub jump: Jump,
    pub old_utility: usize,
    pub new_utility: usize,
}

impl fmt::Display for Improvement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}->{} {}->{}",
            self.jump.ty, self.jump.from, self.jump.to, self.old_utility, self.new_utility
        )
    }
}

/// Counters computed in a single pass over an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metrics {
    /// Social welfare: the sum of all utilities.
    pub sw: usize,
    /// Colourful edges: both endpoints occupied by different types.
    pub ce: usize,
    /// Monochromatic edges.
    pub mono: usize,
    /// Sum of the type-counts of the empty nodes; only with exactly two empty nodes.
    pub te: Option<usize>,
    /// 1 if the two empty nodes are adjacent; only with exactly two empty nodes.
    pub b: Option<usize>,
    /// Empty nodes adjacent to at most one type.
    pub c_count: usize,
    /// Edges with at least one empty endpoint.
    pub empty_edges: usize,
}

#[inline]
pub(crate) fn bit(t: u8) -> u64 {
    1u64 << t
}

/// Fills `masks[v]` with the set of types adjacent to `v`.
pub(crate) fn neighbor_masks(graph: &Graph, cells: &[u8], masks: &mut [u64]) {
    for (v, m) in masks.iter_mut().enumerate() {
        *m = graph
            .neighbors(v)
            .iter()
            .filter(|&&w| cells[w] != EMPTY)
            .fold(0, |acc, &w| acc | bit(cells[w]));
    }
}

#[inline]
pub(crate) fn foreign(mask: u64, t: u8) -> usize {
    (mask & !bit(t)).count_ones() as usize
}

/// Improving jumps of the state `cells`, ascending by (from, to).
pub(crate) fn improvements_raw(
    cells: &[u8],
    masks: &[u64],
    k: usize,
    out: &mut Vec<Improvement>,
) {
    out.clear();
    let empties: Vec<NodeId> = (0..cells.len()).filter(|&v| cells[v] == EMPTY).collect();
    for (v, &t) in cells.iter().enumerate() {
        if t == EMPTY {
            continue;
        }
        let old = foreign(masks[v], t);
        if old + 1 >= k {
            continue;
        }
        for &d in &empties {
            // the mover's own type is masked out, so its vacated node never counts
            let new = foreign(masks[d], t);
            if new > old {
                out.push(Improvement { jump: Jump { from: v, to: d, ty: t }, old_utility: old, new_utility: new });
            }
        }
    }
}

/// Whether any agent can improve; cheaper than listing the jumps.
pub(crate) fn has_improvement_raw(cells: &[u8], masks: &[u64], k: usize) -> bool {
    let mut best_empty = [0usize; MAX_TYPES];
    let mut any_empty = false;
    for (d, &c) in cells.iter().enumerate() {
        if c == EMPTY {
            any_empty = true;
            for (t, slot) in best_empty.iter_mut().enumerate().take(k) {
                *slot = (*slot).max(foreign(masks[d], t as u8));
            }
        }
    }
    if !any_empty {
        return false;
    }
    cells.iter().enumerate().any(|(v, &t)| t != EMPTY && best_empty[t as usize] > foreign(masks[v], t))
}

pub(crate) fn metrics_raw(graph: &Graph, cells: &[u8], masks: &[u64]) -> Metrics {
    let mut m = Metrics::default();
    let mut empties = Vec::new();
    for (v, &c) in cells.iter().enumerate() {
        if c == EMPTY {
            empties.push(v);
            if masks[v].count_ones() <= 1 {
                m.c_count += 1;
            }
        } else {
            m.sw += foreign(masks[v], c);
        }
    }
    for (u, v) in graph.edges() {
        match (cells[u], cells[v]) {
            (EMPTY, _) | (_, EMPTY) => m.empty_edges += 1,
            (a, b) if a == b => m.mono += 1,
            _ => m.ce += 1,
        }
    }
    if let [e1, e2] = empties[..] {
        m.te = Some((masks[e1].count_ones() + masks[e2].count_ones()) as usize);
        m.b = Some(usize::from(graph.has_edge(e1, e2)));
    }
    m
}

fn masks_of(instance: &Instance, a: &Assignment) -> Vec<u64> {
    let mut masks = vec![0; a.len()];
    neighbor_masks(instance.graph(), a.cells(), &mut masks);
    masks
}

/// Number of types other than its own among the neighbours of the agent at `node`.
pub fn utility(instance: &Instance, a: &Assignment, node: NodeId) -> Result<usize> {
    let t = a.get(node).ok_or_else(|| {
        Error::PreconditionViolation(format!("node {node} is empty and has no utility"))
    })?;
    Ok(type_count_excluding(instance, a, node, Some(t)))
}

fn type_count_excluding(instance: &Instance, a: &Assignment, node: NodeId, skip: Option<TypeId>) -> usize {
    let mask = instance
        .graph()
        .neighbors(node)
        .iter()
        .filter_map(|&w| a.get(w))
        .fold(0u64, |acc, t| acc | bit(t));
    match skip {
        Some(t) => foreign(mask, t),
        None => mask.count_ones() as usize,
    }
}

/// Number of distinct types among the occupied neighbours of `node`.
pub fn type_count(instance: &Instance, a: &Assignment, node: NodeId) -> usize {
    type_count_excluding(instance, a, node, None)
}

pub fn social_welfare(instance: &Instance, a: &Assignment) -> usize {
    metrics(instance, a).sw
}

pub fn colorful_edges(instance: &Instance, a: &Assignment) -> usize {
    instance
        .graph()
        .edges()
        .filter(|&(u, v)| matches!((a.get(u), a.get(v)), (Some(x), Some(y)) if x != y))
        .count()
}

pub fn metrics(instance: &Instance, a: &Assignment) -> Metrics {
    metrics_raw(instance.graph(), a.cells(), &masks_of(instance, a))
}

/// Every strictly improving jump, ascending by (from, to).
pub fn improving_jumps(instance: &Instance, a: &Assignment) -> Vec<Improvement> {
    let mut out = Vec::new();
    improvements_raw(a.cells(), &masks_of(instance, a), instance.profile().k(), &mut out);
    out
}

/// The first improving jump, or `None` when `a` is an equilibrium.
pub fn equilibrium_witness(instance: &Instance, a: &Assignment) -> Option<Improvement> {
    improving_jumps(instance, a).into_iter().next()
}

pub fn is_equilibrium(instance: &Instance, a: &Assignment) -> bool {
    equilibrium_witness(instance, a).is_none()
}

/// Returns the assignment after `jump`; `a` is left untouched.
pub fn apply_jump(a: &Assignment, jump: Jump) -> Result<Assignment> {
    let n = a.len();
    if jump.from >= n || jump.to >= n || jump.from == jump.to {
        return Err(Error::PreconditionViolation(format!(
            "jump {}->{} is out of range or stationary",
            jump.from, jump.to
        )));
    }
    if a.get(jump.from) != Some(jump.ty) || a.get(jump.to).is_some() {
        return Err(Error::PreconditionViolation(format!(
            "jump of type {} from {} to {} does not match the assignment",
            jump.ty, jump.from, jump.to
        )));
    }
    let mut cells = a.cells().to_vec();
    cells.swap(jump.from, jump.to);
    Ok(Assignment::from_cells(cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_cylinder, make_line};

    const R: Option<TypeId> = Some(0);
    const B: Option<TypeId> = Some(1);
    const G: Option<TypeId> = Some(2);
    const E: Option<TypeId> = None;

    fn inst(g: Graph, counts: &[usize]) -> Instance {
        Instance::new(g, TypeProfile::new(counts.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn profile_validation() {
        assert!(TypeProfile::new(vec![3]).is_err());
        assert!(TypeProfile::new(vec![2, 0]).is_err());
        let p = TypeProfile::new(vec![2, 2, 2]).unwrap();
        assert!(p.symmetric());
        assert_eq!((p.n(), p.k()), (6, 3));
        assert!(Instance::new(make_line(3).unwrap(), TypeProfile::new(vec![2, 1]).unwrap()).is_err());
    }

    #[test]
    fn utilities_and_type_counts() {
        // star centre 0 with leaves 1..4
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let i = inst(g, &[1, 2, 1]);
        let a = Assignment::new(&i, &[R, B, B, G, E]).unwrap();
        assert_eq!(utility(&i, &a, 0).unwrap(), 2);
        assert_eq!(utility(&i, &a, 1).unwrap(), 1);
        assert!(utility(&i, &a, 4).is_err());
        assert_eq!(type_count(&i, &a, 4), 1);
        assert_eq!(type_count(&i, &a, 0), 2);

        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let a = Assignment::new(&i, &[E, R, E]).unwrap_err();
        assert!(matches!(a, Error::InvalidParameter(_)));
    }

    #[test]
    fn clique_with_one_agent_per_type_is_stable() {
        let i = inst(make_clique(3).unwrap(), &[1, 1]);
        let a = Assignment::new(&i, &[R, B, E]).unwrap();
        assert_eq!(social_welfare(&i, &a), 2);
        assert!(is_equilibrium(&i, &a));
        assert!(!has_improvement_raw(a.cells(), &masks_of(&i, &a), 2));
    }

    #[test]
    fn metrics_single_edge_and_line() {
        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let a = Assignment::new(&i, &[R, B, E]).unwrap();
        let m = metrics(&i, &a);
        assert_eq!((m.sw, m.ce, m.mono, m.c_count, m.empty_edges), (2, 1, 0, 1, 1));
        assert_eq!(m.te, None);
        assert_eq!(colorful_edges(&i, &a), 1);
    }

    #[test]
    fn metrics_two_empties_on_cylinder() {
        // top row 0 1 2, bottom 3 4 5; empties 2 and 5 share a rung
        let i = inst(make_cylinder(3).unwrap(), &[2, 1, 1]);
        let a = Assignment::new(&i, &[R, R, E, B, G, E]).unwrap();
        let m = metrics(&i, &a);
        assert_eq!(m.b, Some(1));
        // node 2 sees R,R (and empty 5) -> 1 type; node 5 sees B,G -> 2 types
        assert_eq!(m.te, Some(3));
        assert_eq!(m.mono, 1);
        assert_eq!(m.ce, 3);
        assert_eq!(m.ce + m.mono + m.empty_edges, 9);
    }

    #[test]
    fn improving_jumps_on_p3() {
        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let a = Assignment::new(&i, &[R, E, B]).unwrap();
        let jumps = improving_jumps(&i, &a);
        assert_eq!(jumps.len(), 2);
        assert_eq!(jumps[0].jump, Jump { from: 0, to: 1, ty: 0 });
        assert_eq!((jumps[0].old_utility, jumps[0].new_utility), (0, 1));
        assert_eq!(jumps[1].jump, Jump { from: 2, to: 1, ty: 1 });
        assert!(!is_equilibrium(&i, &a));
        assert_eq!(equilibrium_witness(&i, &a).unwrap().jump.from, 0);
    }

    #[test]
    fn vacated_node_does_not_count() {
        // R at 0 next to empty 1; moving to 1 only sees itself leaving
        let i = inst(make_line(4).unwrap(), &[2, 1]);
        let a = Assignment::new(&i, &[R, E, R, B]).unwrap();
        assert!(improving_jumps(&i, &a).is_empty());
    }

    #[test]
    fn apply_jump_round_trip() {
        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let a = Assignment::new(&i, &[R, E, B]).unwrap();
        let j = Jump { from: 0, to: 1, ty: 0 };
        let b = apply_jump(&a, j).unwrap();
        assert_eq!(b.occupancy(), vec![E, R, B]);
        let back = apply_jump(&b, Jump { from: 1, to: 0, ty: 0 }).unwrap();
        assert_eq!(back, a);
        assert!(apply_jump(&a, Jump { from: 2, to: 0, ty: 1 }).is_err());
        b.validate(&i).unwrap();
    }
}
