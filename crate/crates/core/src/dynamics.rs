//! Improving-response dynamics, cycle search over the state graph and potential audits.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::game::{
    improvements_raw, metrics_raw, neighbor_masks, Assignment, Improvement, Instance, Jump, Metrics, EMPTY,
};
use crate::graph::seeded_rng;
use crate::state::StateSpace;

/// How the next improving jump is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponsePolicy {
    /// The first improving jump in (from, to) order.
    FirstImproving,
    /// A jump with the largest new utility; ties go to the smallest (from, to).
    BestResponse,
    /// A uniformly random improving jump drawn from a seeded generator.
    RandomImproving(u64),
}

impl FromStr for ResponsePolicy {
    type Err = Error;

    /// Accepts `first`, `best` and `random` (seeded with 0) or `random:SEED`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Self::FirstImproving),
            "best" => Ok(Self::BestResponse),
            "random" => Ok(Self::RandomImproving(0)),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(Self::RandomImproving)
                .ok_or_else(|| invalid(format!("unknown policy '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsStatus {
    Equilibrium,
    /// The state before `trace[i]` was reached again after the last jump.
    StateRevisited(usize),
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsOutcome {
    pub trace: Vec<Improvement>,
    pub status: DynamicsStatus,
    pub final_state: Assignment,
}

impl DynamicsOutcome {
    /// The jumps of the closed cycle, when the run revisited a state.
    pub fn cycle(&self) -> Option<&[Improvement]> {
        match self.status {
            DynamicsStatus::StateRevisited(i) => Some(&self.trace[i..]),
            _ => None,
        }
    }
}

/// Runs improving-response dynamics from `initial` until an equilibrium, a
/// repeated state or `step_limit` jumps.
pub fn run_dynamics(
    instance: &Instance,
    initial: &Assignment,
    policy: ResponsePolicy,
    step_limit: usize,
) -> Result<DynamicsOutcome> {
    if step_limit == 0 {
        return Err(invalid("step limit must be positive"));
    }
    initial.validate(instance)?;
    let graph = instance.graph();
    let k = instance.profile().k();
    let mut rng = match policy {
        ResponsePolicy::RandomImproving(seed) => Some(seeded_rng(seed)),
        _ => None,
    };
    let mut cells = initial.cells().to_vec();
    let mut masks = vec![0; cells.len()];
    let mut jumps = Vec::new();
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut trace = Vec::new();

    let status = loop {
        if let Some(&first) = seen.get(&cells) {
            break DynamicsStatus::StateRevisited(first);
        }
        seen.insert(cells.clone(), trace.len());
        neighbor_masks(graph, &cells, &mut masks);
        improvements_raw(&cells, &masks, k, &mut jumps);
        if jumps.is_empty() {
            break DynamicsStatus::Equilibrium;
        }
        if trace.len() == step_limit {
            break DynamicsStatus::StepLimit;
        }
        let chosen = match policy {
            ResponsePolicy::FirstImproving => jumps[0],
            ResponsePolicy::BestResponse => {
                let best = jumps.iter().map(|j| j.new_utility).max().unwrap();
                *jumps.iter().find(|j| j.new_utility == best).unwrap()
            }
            ResponsePolicy::RandomImproving(_) => {
                let rng = rng.as_mut().unwrap();
                jumps[rng.gen_range(0..jumps.len())]
            }
        };
        cells.swap(chosen.jump.from, chosen.jump.to);
        trace.push(chosen);
    };
    Ok(DynamicsOutcome { trace, status, final_state: Assignment::from_cells(cells) })
}

/// Replays `trace` from `start`, checking that every step is an improving jump.
/// Returns the final assignment.
pub fn replay(instance: &Instance, start: &Assignment, trace: &[Improvement]) -> Result<Assignment> {
    let mut a = start.clone();
    for step in trace {
        let options = crate::game::improving_jumps(instance, &a);
        if !options.contains(step) {
            return Err(Error::PreconditionViolation(format!("{step} is not an improving jump")));
        }
        a = crate::game::apply_jump(&a, step.jump)?;
    }
    Ok(a)
}

/// An improving-response cycle: a start state and the jumps leading back to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irc {
    pub start: Assignment,
    pub jumps: Vec<Improvement>,
}

impl Irc {
    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }

    /// Number of distinct movers' types and the jump count of each type.
    pub fn jumps_per_type(&self) -> std::collections::BTreeMap<u8, usize> {
        let mut out = std::collections::BTreeMap::new();
        for j in &self.jumps {
            *out.entry(j.jump.ty).or_insert(0) += 1;
        }
        out
    }
}

/// Successor ranks of one state together with the jumps that reach them.
struct Expander<'a> {
    instance: &'a Instance,
    space: &'a StateSpace,
    masks: Vec<u64>,
    jumps: Vec<Improvement>,
}

impl<'a> Expander<'a> {
    fn new(instance: &'a Instance, space: &'a StateSpace) -> Self {
        Self { instance, space, masks: vec![0; space.cell_count()], jumps: Vec::new() }
    }

    fn successors(&mut self, cells: &mut [u8], out: &mut Vec<(u64, Improvement)>) {
        out.clear();
        let graph = self.instance.graph();
        neighbor_masks(graph, cells, &mut self.masks);
        improvements_raw(cells, &self.masks, self.instance.profile().k(), &mut self.jumps);
        for j in &self.jumps {
            cells.swap(j.jump.from, j.jump.to);
            out.push((self.space.rank(cells), *j));
            cells.swap(j.jump.from, j.jump.to);
        }
    }

    fn successors_of(&mut self, rank: u64) -> Vec<(u64, Improvement)> {
        let mut cells = vec![0; self.space.cell_count()];
        self.space.unrank(rank, &mut cells);
        let mut out = Vec::new();
        self.successors(&mut cells, &mut out);
        out
    }
}

const WHITE: u8 = 0;
const GRAY: u8 = 1;
const BLACK: u8 = 2;

/// Searches the whole improving-response state graph for a directed cycle.
///
/// Returns `None` exactly when the state graph is acyclic. States are visited in
/// rank order with an iterative depth-first search, so the result is deterministic.
pub fn find_irc(instance: &Instance, budget: u64) -> Result<Option<Irc>> {
    let space = StateSpace::new(instance, budget)?;
    let mut expander = Expander::new(instance, &space);
    let mut color = vec![WHITE; space.size() as usize];
    struct Frame {
        rank: u64,
        succ: Vec<(u64, Improvement)>,
        next: usize,
    }
    for root in 0..space.size() {
        if color[root as usize] != WHITE {
            continue;
        }
        color[root as usize] = GRAY;
        let mut stack = vec![Frame { rank: root, succ: expander.successors_of(root), next: 0 }];
        while let Some(top) = stack.last_mut() {
            if top.next == top.succ.len() {
                color[top.rank as usize] = BLACK;
                stack.pop();
                continue;
            }
            let (target, _) = top.succ[top.next];
            top.next += 1;
            match color[target as usize] {
                WHITE => {
                    color[target as usize] = GRAY;
                    let succ = expander.successors_of(target);
                    stack.push(Frame { rank: target, succ, next: 0 });
                }
                GRAY => {
                    let from = stack.iter().position(|f| f.rank == target).unwrap();
                    let jumps = stack[from..].iter().map(|f| f.succ[f.next - 1].1).collect();
                    let mut cells = vec![0; space.cell_count()];
                    space.unrank(target, &mut cells);
                    return Ok(Some(Irc { start: Assignment::from_cells(cells), jumps }));
                }
                _ => {}
            }
        }
    }
    Ok(None)
}

/// Marks the states that lie on some improving-response cycle, i.e. the states
/// in strongly connected components with more than one state.
pub fn cyclic_states(instance: &Instance, budget: u64) -> Result<Vec<bool>> {
    let space = StateSpace::new(instance, budget)?;
    let mut expander = Expander::new(instance, &space);
    let size = space.size() as usize;
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; size];
    let mut low = vec![0u32; size];
    let mut on_stack = vec![false; size];
    let mut cyclic = vec![false; size];
    let mut scc_stack: Vec<u64> = Vec::new();
    let mut counter = 0u32;

    for root in 0..space.size() {
        if index[root as usize] != UNSEEN {
            continue;
        }
        let mut call: Vec<(u64, Vec<(u64, Improvement)>, usize)> = Vec::new();
        let visit = |v: u64, counter: &mut u32, index: &mut [u32], low: &mut [u32], on_stack: &mut [bool], scc: &mut Vec<u64>| {
            index[v as usize] = *counter;
            low[v as usize] = *counter;
            *counter += 1;
            on_stack[v as usize] = true;
            scc.push(v);
        };
        visit(root, &mut counter, &mut index, &mut low, &mut on_stack, &mut scc_stack);
        call.push((root, expander.successors_of(root), 0));
        while let Some((v, succ, next)) = call.last_mut() {
            let v = *v;
            if *next < succ.len() {
                let w = succ[*next].0;
                *next += 1;
                if index[w as usize] == UNSEEN {
                    visit(w, &mut counter, &mut index, &mut low, &mut on_stack, &mut scc_stack);
                    let s = expander.successors_of(w);
                    call.push((w, s, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
                continue;
            }
            call.pop();
            if let Some((parent, _, _)) = call.last() {
                low[*parent as usize] = low[*parent as usize].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                let mut members = Vec::new();
                loop {
                    let w = scc_stack.pop().unwrap();
                    on_stack[w as usize] = false;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                if members.len() > 1 {
                    for w in members {
                        cyclic[w as usize] = true;
                    }
                }
            }
        }
    }
    Ok(cyclic)
}

/// All simple improving-response cycles with at most `max_len` jumps, each
/// reported once (starting from its smallest-rank state), shortest first.
/// Stops after `limit` cycles.
pub fn short_ircs(instance: &Instance, max_len: usize, limit: usize, budget: u64) -> Result<Vec<Irc>> {
    let space = StateSpace::new(instance, budget)?;
    let cyclic = cyclic_states(instance, budget)?;
    let mut expander = Expander::new(instance, &space);
    let mut found: Vec<(usize, u64, Irc)> = Vec::new();
    let mut cells = vec![0; space.cell_count()];

    for start in 0..space.size() {
        if !cyclic[start as usize] {
            continue;
        }
        let mut path_states = vec![start];
        let mut path_jumps: Vec<Improvement> = Vec::new();
        let mut stack = vec![(expander.successors_of(start), 0usize)];
        while let Some((succ, next)) = stack.last_mut() {
            if *next == succ.len() {
                stack.pop();
                path_states.pop();
                path_jumps.pop();
                continue;
            }
            let (w, j) = succ[*next];
            *next += 1;
            if w == start {
                let mut jumps = path_jumps.clone();
                jumps.push(j);
                space.unrank(start, &mut cells);
                found.push((jumps.len(), start, Irc { start: Assignment::from_cells(cells.clone()), jumps }));
                continue;
            }
            if w < start || !cyclic[w as usize] || path_jumps.len() + 1 >= max_len || path_states.contains(&w) {
                continue;
            }
            path_states.push(w);
            path_jumps.push(j);
            let s = expander.successors_of(w);
            stack.push((s, 0));
        }
        if found.len() >= limit {
            break;
        }
    }
    found.sort_by_key(|(len, start, _)| (*len, *start));
    found.truncate(limit);
    Ok(found.into_iter().map(|(_, _, irc)| irc).collect())
}

/// Direction a potential must move along every improving jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialKind {
    /// Social welfare; a potential when there are two types.
    SwPotential,
    /// `2·CE + c`; a potential when every node has degree at most 2.
    Deg2Potential,
    /// `2·(TE + M) + B`, decreasing; a potential on 3-regular graphs with two empty nodes.
    ThreeRegTwoEmptyPotential,
}

impl PotentialKind {
    pub const ALL: [PotentialKind; 3] =
        [Self::SwPotential, Self::Deg2Potential, Self::ThreeRegTwoEmptyPotential];

    pub fn direction(self) -> Direction {
        match self {
            Self::ThreeRegTwoEmptyPotential => Direction::Decreasing,
            _ => Direction::Increasing,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SwPotential => "sw",
            Self::Deg2Potential => "deg2",
            Self::ThreeRegTwoEmptyPotential => "3reg-2empty",
        }
    }

    /// Checks that the potential is defined for the instance.
    pub fn check_applicable(self, instance: &Instance) -> Result<()> {
        let fail = |reason: String| Err(Error::InapplicablePotential { kind: self.name().into(), reason });
        match self {
            Self::SwPotential if instance.profile().k() != 2 => {
                fail(format!("needs exactly 2 types, got {}", instance.profile().k()))
            }
            Self::Deg2Potential if instance.graph().max_degree() > 2 => {
                fail(format!("needs max degree <= 2, got {}", instance.graph().max_degree()))
            }
            Self::ThreeRegTwoEmptyPotential if instance.graph().regular_degree() != Some(3) => {
                fail("needs a 3-regular graph".into())
            }
            Self::ThreeRegTwoEmptyPotential if instance.empty_count() != 2 => {
                fail(format!("needs exactly 2 empty nodes, got {}", instance.empty_count()))
            }
            _ => Ok(()),
        }
    }

    fn from_metrics(self, m: &Metrics) -> i64 {
        let v = match self {
            Self::SwPotential => m.sw,
            Self::Deg2Potential => 2 * m.ce + m.c_count,
            Self::ThreeRegTwoEmptyPotential => 2 * (m.te.unwrap_or(0) + m.mono) + m.b.unwrap_or(0),
        };
        v as i64
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown potential '{s}'")))
    }
}

pub fn potential_value(instance: &Instance, a: &Assignment, kind: PotentialKind) -> Result<i64> {
    kind.check_applicable(instance)?;
    Ok(kind.from_metrics(&crate::game::metrics(instance, a)))
}

/// A state and an improving jump from it that break an audited property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Assignment,
    pub jump: Improvement,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub states: u64,
    pub jumps_checked: u64,
    /// The counterexample at the smallest-rank state, if any.
    pub counterexample: Option<Counterexample>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Default)]
struct AuditAcc {
    states: u64,
    jumps: u64,
    first: Option<Counterexample>,
}

fn merge(a: AuditAcc, b: AuditAcc) -> AuditAcc {
    AuditAcc { states: a.states + b.states, jumps: a.jumps + b.jumps, first: a.first.or(b.first) }
}

/// Runs `check(before_cells, before_masks, jump, after_cells, after_masks)` on every
/// improving jump of every state.
fn audit_jumps<F>(instance: &Instance, budget: u64, jobs: usize, check: F) -> Result<AuditReport>
where
    F: Fn(&[u8], &[u64], &Improvement, &[u8], &[u64]) -> Option<String> + Sync,
{
    let space = StateSpace::new(instance, budget)?;
    let graph = instance.graph();
    let k = instance.profile().k();
    let nodes = instance.node_count();
    let acc = space.par_fold(
        jobs,
        AuditAcc::default,
        |acc, _rank, cells| {
            acc.states += 1;
            let mut masks = vec![0; nodes];
            let mut jumps = Vec::new();
            neighbor_masks(graph, cells, &mut masks);
            improvements_raw(cells, &masks, k, &mut jumps);
            let mut after = cells.to_vec();
            let mut after_masks = vec![0; nodes];
            for j in &jumps {
                acc.jumps += 1;
                after.swap(j.jump.from, j.jump.to);
                neighbor_masks(graph, &after, &mut after_masks);
                if acc.first.is_none() {
                    if let Some(detail) = check(cells, &masks, j, &after, &after_masks) {
                        acc.first = Some(Counterexample {
                            assignment: Assignment::from_cells(cells.to_vec()),
                            jump: *j,
                            detail,
                        });
                    }
                }
                after.swap(j.jump.from, j.jump.to);
            }
        },
        merge,
    );
    Ok(AuditReport { states: acc.states, jumps_checked: acc.jumps, counterexample: acc.first })
}

/// Checks over every assignment and every improving jump that the potential
/// moves strictly in its direction by at least 1.
pub fn audit_potential(instance: &Instance, kind: PotentialKind, budget: u64, jobs: usize) -> Result<AuditReport> {
    kind.check_applicable(instance)?;
    let graph = instance.graph();
    audit_jumps(instance, budget, jobs, |cells, masks, _j, after, after_masks| {
        let before = kind.from_metrics(&metrics_raw(graph, cells, masks));
        let now = kind.from_metrics(&metrics_raw(graph, after, after_masks));
        let ok = match kind.direction() {
            Direction::Increasing => now - before >= 1,
            Direction::Decreasing => before - now >= 1,
        };
        (!ok).then(|| format!("{kind} went from {before} to {now}"))
    })
}

fn mono_at(graph: &crate::graph::Graph, cells: &[u8], v: usize) -> usize {
    graph.neighbors(v).iter().filter(|&&w| cells[w] == cells[v] && cells[v] != EMPTY).count()
}

fn mono_edges(graph: &crate::graph::Graph, cells: &[u8]) -> usize {
    graph.edges().filter(|&(u, v)| cells[u] != EMPTY && cells[u] == cells[v]).count()
}

/// Checks, for every improving jump s→d, that `τ_d(before) ≥ τ_s(after)` and that
/// equality forces a utility gain of exactly 1, fewer monochromatic edges and no
/// monochromatic edge at `d`.
pub fn audit_lemma_jump(instance: &Instance, budget: u64, jobs: usize) -> Result<AuditReport> {
    let graph = instance.graph();
    audit_jumps(instance, budget, jobs, |cells, masks, j, after, after_masks| {
        let Jump { from: s, to: d, .. } = j.jump;
        let tau_d = masks[d].count_ones();
        let tau_s = after_masks[s].count_ones();
        if tau_d < tau_s {
            return Some(format!("tau_d = {tau_d} < tau_s' = {tau_s}"));
        }
        if tau_d == tau_s {
            let gain = j.new_utility - j.old_utility;
            let (m0, m1) = (mono_edges(graph, cells), mono_edges(graph, after));
            if gain != 1 {
                return Some(format!("equal type-counts but utility gain {gain}"));
            }
            if m1 >= m0 {
                return Some(format!("equal type-counts but M went {m0} -> {m1}"));
            }
            if mono_at(graph, after, d) != 0 {
                return Some("equal type-counts but a monochromatic edge appeared at d".into());
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_equilibrium, TypeId, TypeProfile};
    use crate::graph::{make_cylinder, make_line, make_random_regular};

    const R: Option<TypeId> = Some(0);
    const B: Option<TypeId> = Some(1);
    const E: Option<TypeId> = None;

    fn inst(g: crate::graph::Graph, counts: &[usize]) -> Instance {
        Instance::new(g, TypeProfile::new(counts.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn equilibrium_start_gives_empty_trace() {
        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let a = Assignment::new(&i, &[R, B, E]).unwrap();
        let out = run_dynamics(&i, &a, ResponsePolicy::FirstImproving, 10).unwrap();
        assert_eq!(out.status, DynamicsStatus::Equilibrium);
        assert!(out.trace.is_empty());
        assert!(run_dynamics(&i, &a, ResponsePolicy::BestResponse, 0).is_err());
    }

    #[test]
    fn two_types_converge_under_every_policy() {
        let i = inst(make_cylinder(4).unwrap(), &[3, 2]);
        let a = Assignment::new(&i, &[R, R, R, B, B, E, E, E]).unwrap();
        for policy in [
            ResponsePolicy::FirstImproving,
            ResponsePolicy::BestResponse,
            ResponsePolicy::RandomImproving(5),
        ] {
            let out = run_dynamics(&i, &a, policy, 1000).unwrap();
            assert_eq!(out.status, DynamicsStatus::Equilibrium);
            assert!(is_equilibrium(&i, &out.final_state));
            assert_eq!(replay(&i, &a, &out.trace).unwrap(), out.final_state);
        }
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("best".parse::<ResponsePolicy>().unwrap(), ResponsePolicy::BestResponse);
        assert_eq!("random:9".parse::<ResponsePolicy>().unwrap(), ResponsePolicy::RandomImproving(9));
        assert!("worst".parse::<ResponsePolicy>().is_err());
    }

    #[test]
    fn one_empty_node_is_acyclic() {
        let i = inst(make_cylinder(3).unwrap(), &[2, 2, 1]);
        assert_eq!(find_irc(&i, 1 << 20).unwrap(), None);
        assert!(cyclic_states(&i, 1 << 20).unwrap().iter().all(|c| !c));
    }

    #[test]
    fn potential_values_by_hand() {
        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let a = Assignment::new(&i, &[R, B, E]).unwrap();
        assert_eq!(potential_value(&i, &a, PotentialKind::Deg2Potential).unwrap(), 3);
        assert_eq!(potential_value(&i, &a, PotentialKind::SwPotential).unwrap(), 2);
        assert!(matches!(
            potential_value(&i, &a, PotentialKind::ThreeRegTwoEmptyPotential),
            Err(Error::InapplicablePotential { .. })
        ));
        // top row R R E, bottom row B G E: TE = 1 + 2, M = 1, B = 1
        let c = inst(make_cylinder(3).unwrap(), &[2, 1, 1]);
        let a = Assignment::new(&c, &[R, R, E, B, Some(2), E]).unwrap();
        assert_eq!(potential_value(&c, &a, PotentialKind::ThreeRegTwoEmptyPotential).unwrap(), 9);
    }

    #[test]
    fn audits_pass_on_small_instances() {
        let i = inst(make_cylinder(3).unwrap(), &[2, 1, 1]);
        let report = audit_potential(&i, PotentialKind::ThreeRegTwoEmptyPotential, 1 << 20, 2).unwrap();
        assert!(report.passed(), "{:?}", report.counterexample);
        assert_eq!(report.states, 180);
        assert!(report.jumps_checked > 0);
        let g = make_random_regular(8, 3, 3).unwrap();
        let i = inst(g, &[2, 2, 1]);
        assert!(audit_lemma_jump(&i, 1 << 20, 1).unwrap().passed());
        let line = inst(make_line(6).unwrap(), &[2, 2, 1]);
        assert!(audit_potential(&line, PotentialKind::Deg2Potential, 1 << 20, 1).unwrap().passed());
    }

    #[test]
    fn sw_potential_needs_two_types() {
        let i = inst(make_cylinder(4).unwrap(), &[2, 2, 1]);
        assert!(matches!(
            audit_potential(&i, PotentialKind::SwPotential, 1 << 20, 1),
            Err(Error::InapplicablePotential { .. })
        ));
    }
}
