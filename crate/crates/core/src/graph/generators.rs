use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, NodeId, RoleMap};
use crate::error::{invalid, Error, Result};

/// Consecutive rejected samples after which the random samplers give up.
pub const MAX_REJECTIONS: usize = 1000;

/// Seeded generator shared by every randomized routine in the crate
/// (ChaCha with 8 rounds, seeded through `seed_from_u64`).
pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
    Graph::from_edges(n, edges).expect("generator produced an invalid graph")
}

/// Path on `n` nodes.
pub fn make_line(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(invalid(format!("line needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(build(n, &edges))
}

/// Cycle on `n` nodes.
pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(build(n, &edges))
}

/// 2×m cylinder. Node `(r, c)` has id `r * m + c`; row 0 is the top row.
pub fn make_cylinder(m: usize) -> Result<Graph> {
    if m < 3 {
        return Err(invalid(format!("cylinder needs m >= 3, got {m}")));
    }
    let mut edges = Vec::with_capacity(3 * m);
    for c in 0..m {
        edges.push((c, m + c));
        for r in 0..2 {
            edges.push((r * m + c, r * m + (c + 1) % m));
        }
    }
    Ok(build(2 * m, &edges))
}

/// m1×m2 torus: `m1` rows of length `m2`, node `(r, c)` has id `r * m2 + c`.
pub fn make_torus(m1: usize, m2: usize) -> Result<Graph> {
    if m2 < 3 || m1 < m2 {
        return Err(invalid(format!("torus needs m1 >= m2 >= 3, got {m1}x{m2}")));
    }
    let mut edges = Vec::with_capacity(2 * m1 * m2);
    for r in 0..m1 {
        for c in 0..m2 {
            let v = r * m2 + c;
            edges.push((v, r * m2 + (c + 1) % m2));
            edges.push((v, ((r + 1) % m1) * m2 + c));
        }
    }
    Ok(build(m1 * m2, &edges))
}

/// Complete graph on `n` nodes.
pub fn make_clique(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(invalid("clique needs n >= 1"));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Ok(build(n, &edges))
}

fn clique_edges(nodes: &[NodeId], edges: &mut Vec<(NodeId, NodeId)>) {
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            edges.push((u, v));
        }
    }
}

fn path_edges(nodes: &[NodeId], edges: &mut Vec<(NodeId, NodeId)>) {
    edges.extend(nodes.windows(2).map(|w| (w[0], w[1])));
}

/// Clique `K_n` plus one line per type, wired as a chain of lines hanging off
/// the clique. The profile is ordered descending first, so `line0` hosts the
/// largest type.
///
/// Roles: `clique` (the clique node attached to `line0` comes first) and
/// `line0`, `line1`, ... in line order.
pub fn make_clique_lines(profile: &[usize]) -> Result<(Graph, RoleMap)> {
    if profile.len() < 2 || profile.iter().any(|&c| c == 0) {
        return Err(invalid("clique-lines needs at least two positive type sizes"));
    }
    let mut sizes = profile.to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let n: usize = sizes.iter().sum();
    let k = sizes.len();

    let clique: Vec<NodeId> = (0..n).collect();
    let mut lines = Vec::with_capacity(k);
    let mut next = n;
    for &s in &sizes {
        lines.push((next..next + s).collect::<Vec<_>>());
        next += s;
    }

    let mut edges = Vec::new();
    clique_edges(&clique, &mut edges);
    for line in &lines {
        path_edges(line, &mut edges);
    }
    edges.push((clique[0], lines[0][0]));
    for t in 1..k {
        let anchor = *lines[t - 1].last().unwrap();
        let line = &lines[t];
        // the last line attaches with all of its nodes, the middle ones with all but the last
        let attached = if t == k - 1 { line.len() } else { line.len().saturating_sub(1).max(1) };
        for &v in &line[..attached] {
            edges.push((anchor, v));
        }
    }

    let mut roles = RoleMap::new();
    roles.insert("clique".into(), clique);
    for (t, line) in lines.into_iter().enumerate() {
        roles.insert(format!("line{t}"), line);
    }
    Ok((build(next, &edges), roles))
}

/// Clique `K_n` and cycle `c_n` joined by the edge between their first nodes.
/// Roles: `clique`, `cycle` (cycle nodes in cyclic order).
pub fn make_clique_cycle(n: usize, k: usize) -> Result<(Graph, RoleMap)> {
    if k < 2 || n % k != 0 || (n / k) % 2 != 0 || n < 3 {
        return Err(invalid(format!(
            "clique-cycle needs k >= 2 dividing n with n/k even, got n={n}, k={k}"
        )));
    }
    let clique: Vec<NodeId> = (0..n).collect();
    let cycle: Vec<NodeId> = (n..2 * n).collect();
    let mut edges = Vec::new();
    clique_edges(&clique, &mut edges);
    path_edges(&cycle, &mut edges);
    edges.push((cycle[n - 1], cycle[0]));
    edges.push((clique[0], cycle[0]));
    let mut roles = RoleMap::new();
    roles.insert("clique".into(), clique);
    roles.insert("cycle".into(), cycle);
    Ok((build(2 * n, &edges), roles))
}

/// δ-regular ring of cliques with δ = n/k + 1.
///
/// Ring nodes `v_0..v_{k-1}` form a cycle; clique `K_l` has δ nodes. Ring node
/// `v_l` is joined to the first δ-2 nodes of clique `K_{(l+1) mod k}`; the last
/// two nodes of every clique are chained into a second cycle across cliques.
/// Roles: `ring`, and `clique0`.. (attached nodes first, then the two free ones).
pub fn make_regular_ring_of_cliques(n: usize, k: usize) -> Result<(Graph, RoleMap)> {
    if k < 3 {
        return Err(invalid(format!(
            "ring of cliques needs k >= 3 (a 2-node ring cannot be a cycle), got k={k}"
        )));
    }
    if n % k != 0 || n / k + 1 < 3 {
        return Err(invalid(format!("ring of cliques needs k | n and n/k >= 2, got n={n}, k={k}")));
    }
    let size = n / k + 1;
    let ring: Vec<NodeId> = (0..k).collect();
    let cliques: Vec<Vec<NodeId>> =
        (0..k).map(|l| (k + l * size..k + (l + 1) * size).collect()).collect();

    let mut edges = Vec::new();
    for l in 0..k {
        edges.push((ring[l], ring[(l + 1) % k]));
        clique_edges(&cliques[l], &mut edges);
        let target = &cliques[(l + 1) % k];
        for &v in &target[..size - 2] {
            edges.push((ring[l], v));
        }
        edges.push((cliques[l][size - 1], cliques[(l + 1) % k][size - 2]));
    }
    let graph = Graph::from_edges(k + k * size, &edges)?;
    if graph.regular_degree() != Some(size) {
        return Err(Error::Construction(format!(
            "ring of cliques is not {size}-regular for n={n}, k={k}"
        )));
    }
    let mut roles = RoleMap::new();
    roles.insert("ring".into(), ring);
    for (l, c) in cliques.into_iter().enumerate() {
        roles.insert(format!("clique{l}"), c);
    }
    Ok((graph, roles))
}

/// Price-of-stability gadget: nodes `p_1..p_x` each joined to `q`, `s`, `t`;
/// triangle `r-s-t`; edge `q-r`. Ids: `p_i = i-1`, then `q, r, s, t`.
pub fn make_pos_gadget(x: usize) -> Result<(Graph, RoleMap)> {
    if x < 1 {
        return Err(invalid("gadget needs x >= 1"));
    }
    let (q, r, s, t) = (x, x + 1, x + 2, x + 3);
    let mut edges = Vec::new();
    for p in 0..x {
        edges.extend([(p, q), (p, s), (p, t)]);
    }
    edges.extend([(r, s), (s, t), (r, t), (q, r)]);
    let mut roles = RoleMap::new();
    roles.insert("p".into(), (0..x).collect());
    for (name, v) in [("q", q), ("r", r), ("s", s), ("t", t)] {
        roles.insert(name.into(), vec![v]);
    }
    Ok((build(x + 4, &edges), roles))
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity by rejection.
pub fn make_random_connected(num_nodes: usize, edge_prob: f64, seed: u64) -> Result<Graph> {
    if num_nodes < 2 {
        return Err(invalid("random graph needs at least 2 nodes"));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(invalid(format!("edge probability must lie in (0, 1], got {edge_prob}")));
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..MAX_REJECTIONS {
        let mut edges = Vec::new();
        for u in 0..num_nodes {
            for v in u + 1..num_nodes {
                if rng.gen_bool(edge_prob) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges_unchecked_connectivity(num_nodes, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GaveUp { attempts: MAX_REJECTIONS })
}

/// Uniform labelled tree on `n` nodes via a random Prüfer sequence.
pub fn make_random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(invalid("tree needs at least 2 nodes"));
    }
    if n == 2 {
        return Ok(build(2, &[(0, 1)]));
    }
    let mut rng = seeded_rng(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<_> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Ok(build(n, &edges))
}

/// Random connected d-regular simple graph from the pairing model with rejection.
pub fn make_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d < 1 || d >= n || (n * d) % 2 != 0 {
        return Err(invalid(format!("no simple {d}-regular graph on {n} nodes")));
    }
    let mut rng = seeded_rng(seed);
    let mut stubs: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for _ in 0..MAX_REJECTIONS {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || edges.contains(&(u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        let g = Graph::from_edges_unchecked_connectivity(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GaveUp { attempts: MAX_REJECTIONS })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    Line,
    Cycle,
    Tree,
    Cylinder,
    Torus,
    Clique,
    CliqueLines,
    CliqueCycle,
    RegularRingOfCliques,
    PosGadget,
    RandomRegular,
    Custom,
}

impl FamilyTag {
    const NAMES: [(&'static str, FamilyTag); 12] = [
        ("line", FamilyTag::Line),
        ("cycle", FamilyTag::Cycle),
        ("tree", FamilyTag::Tree),
        ("cylinder", FamilyTag::Cylinder),
        ("torus", FamilyTag::Torus),
        ("clique", FamilyTag::Clique),
        ("clique-lines", FamilyTag::CliqueLines),
        ("clique-cycle", FamilyTag::CliqueCycle),
        ("ring-of-cliques", FamilyTag::RegularRingOfCliques),
        ("pos-gadget", FamilyTag::PosGadget),
        ("random-regular", FamilyTag::RandomRegular),
        ("custom", FamilyTag::Custom),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, t)| *t == self).unwrap().0
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, t)| *t)
            .ok_or_else(|| invalid(format!("unknown graph family '{s}'")))
    }
}

/// A generator family together with its integer parameters.
///
/// | family | parameters |
/// |---|---|
/// | line, cycle, clique | n |
/// | tree | n, seed |
/// | cylinder | m |
/// | torus | m1, m2 |
/// | clique-lines | type sizes |
/// | clique-cycle, ring-of-cliques | n, k |
/// | pos-gadget | x |
/// | random-regular | n, d, seed |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFamily {
    pub tag: FamilyTag,
    pub params: Vec<u64>,
}

impl GraphFamily {
    pub fn new(tag: FamilyTag, params: Vec<u64>) -> Self {
        Self { tag, params }
    }

    fn expect(&self, count: usize) -> Result<Vec<usize>> {
        if self.params.len() != count {
            return Err(invalid(format!(
                "{} takes {count} parameter(s), got {}",
                self.tag,
                self.params.len()
            )));
        }
        Ok(self.params.iter().map(|&p| p as usize).collect())
    }

    pub fn build(&self) -> Result<(Graph, RoleMap)> {
        let plain = |g: Graph| (g, RoleMap::new());
        match self.tag {
            FamilyTag::Line => Ok(plain(make_line(self.expect(1)?[0])?)),
            FamilyTag::Cycle => Ok(plain(make_cycle(self.expect(1)?[0])?)),
            FamilyTag::Clique => Ok(plain(make_clique(self.expect(1)?[0])?)),
            FamilyTag::Tree => {
                self.expect(2)?;
                Ok(plain(make_random_tree(self.params[0] as usize, self.params[1])?))
            }
            FamilyTag::Cylinder => Ok(plain(make_cylinder(self.expect(1)?[0])?)),
            FamilyTag::Torus => {
                let p = self.expect(2)?;
                Ok(plain(make_torus(p[0], p[1])?))
            }
            FamilyTag::CliqueLines => {
                let sizes: Vec<usize> = self.params.iter().map(|&p| p as usize).collect();
                make_clique_lines(&sizes)
            }
            FamilyTag::CliqueCycle => {
                let p = self.expect(2)?;
                make_clique_cycle(p[0], p[1])
            }
            FamilyTag::RegularRingOfCliques => {
                let p = self.expect(2)?;
                make_regular_ring_of_cliques(p[0], p[1])
            }
            FamilyTag::PosGadget => make_pos_gadget(self.expect(1)?[0]),
            FamilyTag::RandomRegular => {
                self.expect(3)?;
                let g = make_random_regular(
                    self.params[0] as usize,
                    self.params[1] as usize,
                    self.params[2],
                )?;
                Ok(plain(g))
            }
            FamilyTag::Custom => Err(invalid("custom graphs are loaded from files")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::roles_partition;
    use super::*;

    fn degrees(g: &Graph) -> Vec<usize> {
        (0..g.node_count()).map(|v| g.degree(v)).collect()
    }

    #[test]
    fn lines() {
        let g = make_line(2).unwrap();
        assert_eq!(degrees(&g), vec![1, 1]);
        assert_eq!(degrees(&make_line(5).unwrap()), vec![1, 2, 2, 2, 1]);
        let g = make_line(9).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.edge_count(), 8);
        assert!(make_line(1).is_err());
    }

    #[test]
    fn cycles() {
        assert_eq!(make_cycle(3).unwrap().edge_count(), 3);
        let g = make_cycle(8).unwrap();
        assert_eq!(g.regular_degree(), Some(2));
        assert_eq!(g.edge_count(), 8);
        assert_eq!(make_cycle(9).unwrap().node_count(), 9);
        assert!(make_cycle(2).is_err());
    }

    #[test]
    fn cylinders() {
        let g = make_cylinder(3).unwrap();
        assert_eq!((g.node_count(), g.edge_count(), g.regular_degree()), (6, 9, Some(3)));
        let g = make_cylinder(5).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (10, 15));
        assert!(g.has_edge(0, 5) && g.has_edge(4, 0) && g.has_edge(9, 5));
        assert!(make_cylinder(2).is_err());
        for m in 3..20 {
            assert_eq!(make_cylinder(m).unwrap().regular_degree(), Some(3));
        }
    }

    #[test]
    fn tori() {
        let g = make_torus(3, 3).unwrap();
        assert_eq!((g.node_count(), g.regular_degree()), (9, Some(4)));
        let g = make_torus(4, 3).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (12, 24));
        assert_eq!(make_torus(9, 9).unwrap().regular_degree(), Some(4));
        assert!(make_torus(3, 2).is_err());
        assert!(make_torus(3, 4).is_err());
    }

    #[test]
    fn cliques() {
        assert_eq!(make_clique(1).unwrap().edge_count(), 0);
        assert_eq!(make_clique(4).unwrap().edge_count(), 6);
        assert_eq!(make_clique(6).unwrap().regular_degree(), Some(5));
    }

    #[test]
    fn clique_lines() {
        let (g, roles) = make_clique_lines(&[2, 2, 2]).unwrap();
        assert_eq!(g.node_count(), 12);
        assert!(roles_partition(&roles, 12));
        // line0 = 6,7; line1 = 8,9 (8 attached to 7); line2 = 10,11 (both attached to 9)
        assert!(g.has_edge(0, 6) && g.has_edge(7, 8) && !g.has_edge(7, 9));
        assert!(g.has_edge(9, 10) && g.has_edge(9, 11));
        let (g, roles) = make_clique_lines(&[1, 1]).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(roles["line1"], vec![3]);
        assert!(make_clique_lines(&[3]).is_err());
        // descending order is enforced
        let (_, roles) = make_clique_lines(&[1, 2, 3]).unwrap();
        assert_eq!(roles["line0"].len(), 3);
    }

    #[test]
    fn clique_cycle() {
        let (g, roles) = make_clique_cycle(6, 3).unwrap();
        assert_eq!(g.node_count(), 12);
        assert!(roles_partition(&roles, 12));
        assert_eq!(make_clique_cycle(4, 2).unwrap().0.node_count(), 8);
        assert!(make_clique_cycle(9, 3).is_err());
    }

    #[test]
    fn ring_of_cliques_is_regular() {
        let (g, roles) = make_regular_ring_of_cliques(6, 3).unwrap();
        assert_eq!((g.node_count(), g.regular_degree()), (12, Some(3)));
        assert!(roles_partition(&roles, 12));
        assert_eq!(make_regular_ring_of_cliques(12, 3).unwrap().0.regular_degree(), Some(5));
        assert_eq!(make_regular_ring_of_cliques(8, 4).unwrap().0.regular_degree(), Some(3));
        assert!(make_regular_ring_of_cliques(4, 2).is_err());
    }

    #[test]
    fn pos_gadget() {
        let (g, roles) = make_pos_gadget(1).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 7));
        let (g, roles3) = make_pos_gadget(3).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (7, 13));
        assert!(roles_partition(&roles, 5) && roles_partition(&roles3, 7));
    }

    #[test]
    fn random_connected_is_deterministic() {
        assert_eq!(make_random_connected(2, 1.0, 99).unwrap().edge_count(), 1);
        assert_eq!(
            make_random_connected(6, 0.5, 42).unwrap(),
            make_random_connected(6, 0.5, 42).unwrap()
        );
        assert!(make_random_connected(8, 0.4, 7).unwrap().is_connected());
        assert!(make_random_connected(5, 0.0, 7).is_err());
        assert_eq!(
            make_random_connected(40, 0.001, 1),
            Err(Error::GaveUp { attempts: MAX_REJECTIONS })
        );
    }

    #[test]
    fn random_trees_and_regular() {
        for seed in 0..20 {
            let t = make_random_tree(5 + seed as usize, seed).unwrap();
            assert!(t.is_tree());
            let g = make_random_regular(10, 3, seed).unwrap();
            assert_eq!(g.regular_degree(), Some(3));
            g.audit().unwrap();
        }
        assert!(make_random_regular(7, 3, 0).is_err());
    }

    #[test]
    fn families_parse_and_build() {
        let fam = GraphFamily::new("cylinder".parse().unwrap(), vec![6]);
        assert_eq!(fam.build().unwrap().0.node_count(), 12);
        assert!(GraphFamily::new(FamilyTag::Torus, vec![9]).build().is_err());
        assert!("hexagon".parse::<FamilyTag>().is_err());
    }
}
