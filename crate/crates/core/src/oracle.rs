//! Exhaustive ground truth: optima, equilibria, exact price-of-anarchy and
//! price-of-stability ratios, closed-form bound checks, the lower-bound witness
//! assignments and the random-graph cycle experiment.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::dynamics::find_irc;
use crate::error::{invalid, Error, Result};
use crate::game::{
    has_improvement_raw, is_equilibrium, metrics_raw, neighbor_masks, Assignment, Instance, TypeId,
    TypeProfile,
};
use crate::graph::{
    make_clique_cycle, make_clique_lines, make_cycle, make_line, make_pos_gadget, make_random_connected,
    make_random_regular, make_regular_ring_of_cliques, NodeId,
};
use crate::state::{next_permutation, StateSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Social welfare.
    Sw,
    /// Colourful edges.
    Ce,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Sw => "sw",
            Objective::Ce => "ce",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sw" => Ok(Objective::Sw),
            "ce" => Ok(Objective::Ce),
            _ => Err(invalid(format!("unknown objective '{s}' (expected sw or ce)"))),
        }
    }
}

/// Optimum over equilibrium value; infinite when the worst equilibrium scores 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceRatio {
    Finite(Ratio<u64>),
    Infinite,
}

impl PriceRatio {
    pub fn new(optimum: u64, eq_value: u64) -> Self {
        if eq_value == 0 {
            PriceRatio::Infinite
        } else {
            PriceRatio::Finite(Ratio::new(optimum, eq_value))
        }
    }

    /// `self <= bound`; infinity exceeds every finite bound.
    pub fn at_most(self, bound: Ratio<u64>) -> bool {
        matches!(self, PriceRatio::Finite(r) if r <= bound)
    }
}

impl fmt::Display for PriceRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriceRatio::Finite(r) => write!(f, "{r}"),
            PriceRatio::Infinite => f.write_str("inf"),
        }
    }
}

/// Exhaustive analysis of one instance for one objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceAnalysis {
    pub objective: Objective,
    pub states: u64,
    pub optimum_value: u64,
    /// First optimal assignment in enumeration order.
    pub optimum_witness: Assignment,
    pub equilibria_count: u64,
    pub min_eq_value: Option<u64>,
    pub max_eq_value: Option<u64>,
    pub min_eq_witness: Option<Assignment>,
    pub max_eq_witness: Option<Assignment>,
    pub poa: Option<PriceRatio>,
    pub pos: Option<PriceRatio>,
}

impl InstanceAnalysis {
    pub fn equilibrium_exists(&self) -> bool {
        self.equilibria_count > 0
    }
}

/// All assignments of an instance in lexicographic order of the occupancy vector.
pub struct Assignments {
    cells: Vec<u8>,
    done: bool,
}

impl Iterator for Assignments {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let out = Assignment::from_cells(self.cells.clone());
        self.done = !next_permutation(&mut self.cells);
        Some(out)
    }
}

/// Streams every type labelling exactly once; fails when there are more than `budget`.
pub fn enumerate_assignments(instance: &Instance, budget: u64) -> Result<Assignments> {
    let space = StateSpace::new(instance, budget)?;
    Ok(Assignments { cells: space.first(), done: false })
}

#[derive(Clone)]
struct Best {
    value: u64,
    rank: u64,
    cells: Vec<u8>,
}

fn keep_max(slot: &mut Option<Best>, value: u64, rank: u64, cells: &[u8]) {
    if slot.as_ref().is_none_or(|b| value > b.value) {
        *slot = Some(Best { value, rank, cells: cells.to_vec() });
    }
}

fn keep_min(slot: &mut Option<Best>, value: u64, rank: u64, cells: &[u8]) {
    if slot.as_ref().is_none_or(|b| value < b.value) {
        *slot = Some(Best { value, rank, cells: cells.to_vec() });
    }
}

/// Ties go to the smaller rank, which keeps results independent of chunking.
fn pick(a: Option<Best>, b: Option<Best>, better: impl Fn(u64, u64) -> bool) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if better(y.value, x.value) || (y.value == x.value && y.rank < x.rank) {
                Some(y)
            } else {
                Some(x)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Default, Clone)]
struct Tally {
    states: u64,
    equilibria: u64,
    opt: [Option<Best>; 2],
    eq_min: [Option<Best>; 2],
    eq_max: [Option<Best>; 2],
    eq_list: Option<Vec<Vec<u8>>>,
}

fn tally(instance: &Instance, budget: u64, jobs: usize, collect: bool) -> Result<Tally> {
    let space = StateSpace::new(instance, budget)?;
    let graph = instance.graph();
    let k = instance.profile().k();
    let nodes = instance.node_count();
    let init = || Tally { eq_list: collect.then(Vec::new), ..Tally::default() };
    Ok(space.par_fold(
        jobs,
        init,
        |t, rank, cells| {
            let mut masks = vec![0; nodes];
            neighbor_masks(graph, cells, &mut masks);
            let m = metrics_raw(graph, cells, &masks);
            let values = [m.sw as u64, m.ce as u64];
            t.states += 1;
            for (slot, &v) in t.opt.iter_mut().zip(&values) {
                keep_max(slot, v, rank, cells);
            }
            if !has_improvement_raw(cells, &masks, k) {
                t.equilibria += 1;
                for i in 0..2 {
                    keep_min(&mut t.eq_min[i], values[i], rank, cells);
                    keep_max(&mut t.eq_max[i], values[i], rank, cells);
                }
                if let Some(list) = t.eq_list.as_mut() {
                    list.push(cells.to_vec());
                }
            }
        },
        |a, b| {
            let mut out = Tally { states: a.states + b.states, equilibria: a.equilibria + b.equilibria, ..Tally::default() };
            for i in 0..2 {
                out.opt[i] = pick(a.opt[i].clone(), b.opt[i].clone(), |x, y| x > y);
                out.eq_min[i] = pick(a.eq_min[i].clone(), b.eq_min[i].clone(), |x, y| x < y);
                out.eq_max[i] = pick(a.eq_max[i].clone(), b.eq_max[i].clone(), |x, y| x > y);
            }
            out.eq_list = match (a.eq_list, b.eq_list) {
                (Some(mut x), Some(y)) => {
                    x.extend(y);
                    Some(x)
                }
                _ => None,
            };
            out
        },
    ))
}

fn analysis_from(t: &Tally, objective: Objective) -> InstanceAnalysis {
    let i = objective as usize;
    let opt = t.opt[i].as_ref().expect("state space is never empty");
    let min = t.eq_min[i].as_ref();
    let max = t.eq_max[i].as_ref();
    InstanceAnalysis {
        objective,
        states: t.states,
        optimum_value: opt.value,
        optimum_witness: Assignment::from_cells(opt.cells.clone()),
        equilibria_count: t.equilibria,
        min_eq_value: min.map(|b| b.value),
        max_eq_value: max.map(|b| b.value),
        min_eq_witness: min.map(|b| Assignment::from_cells(b.cells.clone())),
        max_eq_witness: max.map(|b| Assignment::from_cells(b.cells.clone())),
        poa: min.map(|b| PriceRatio::new(opt.value, b.value)),
        pos: max.map(|b| PriceRatio::new(opt.value, b.value)),
    }
}

/// Maximum objective value over all assignments and the first assignment attaining it.
pub fn brute_force_optimum(
    instance: &Instance,
    objective: Objective,
    budget: u64,
    jobs: usize,
) -> Result<(u64, Assignment)> {
    let a = analyze(instance, objective, budget, jobs)?;
    Ok((a.optimum_value, a.optimum_witness))
}

/// Every equilibrium assignment, in enumeration order.
pub fn enumerate_equilibria(instance: &Instance, budget: u64, jobs: usize) -> Result<Vec<Assignment>> {
    let t = tally(instance, budget, jobs, true)?;
    Ok(t.eq_list.unwrap_or_default().into_iter().map(Assignment::from_cells).collect())
}

pub fn analyze(instance: &Instance, objective: Objective, budget: u64, jobs: usize) -> Result<InstanceAnalysis> {
    Ok(analysis_from(&tally(instance, budget, jobs, false)?, objective))
}

/// Social-welfare and colourful-edge analyses from a single enumeration.
pub fn analyze_both(instance: &Instance, budget: u64, jobs: usize) -> Result<(InstanceAnalysis, InstanceAnalysis)> {
    let t = tally(instance, budget, jobs, false)?;
    Ok((analysis_from(&t, Objective::Sw), analysis_from(&t, Objective::Ce)))
}

/// One closed-form bound checked against an analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(BoundCheck { name, passed, detail });
    }
}

/// Checks the closed-form equilibrium and price-of-anarchy bounds that apply to
/// the instance. `sw` and `ce` must be analyses of `instance`.
pub fn check_paper_bounds(instance: &Instance, sw: &InstanceAnalysis, ce: &InstanceAnalysis) -> BoundReport {
    let mut report = BoundReport::default();
    let profile = instance.profile();
    let (n, k, max) = (profile.n() as u64, profile.k() as u64, profile.max_count() as u64);
    let (Some(min_sw), Some(min_ce), Some(poa_sw), Some(poa_ce)) = (sw.min_eq_value, ce.min_eq_value, sw.poa, ce.poa)
    else {
        report.push("equilibrium-exists", false, "no equilibrium; bounds are vacuous".into());
        return report;
    };

    let sw_floor = n - max + 1;
    report.push("eq-sw-lower", min_sw >= sw_floor, format!("min equilibrium SW {min_sw} >= n - max + 1 = {sw_floor}"));
    let ce_floor = (n - max).div_ceil(2);
    report.push("eq-ce-lower", min_ce >= ce_floor, format!("min equilibrium CE {min_ce} >= ceil((n - max)/2) = {ce_floor}"));
    let general = Ratio::new(n * (k - 1), n - max + 1);
    report.push("poa-sw-general", poa_sw.at_most(general), format!("PoA_SW {poa_sw} <= n(k-1)/(n-max+1) = {general}"));

    let symmetric = profile.symmetric();
    if symmetric && instance.graph().max_degree() <= 2 {
        let (sw_cap, ce_cap) = if k == 2 {
            (Ratio::new(4, 3), Ratio::from_integer(2))
        } else {
            (Ratio::new(2 * k, k - 1), Ratio::new(2 * k, k - 1))
        };
        report.push("poa-sw-degree2", poa_sw.at_most(sw_cap), format!("PoA_SW {poa_sw} <= {sw_cap}"));
        report.push("poa-ce-degree2", poa_ce.at_most(ce_cap), format!("PoA_CE {poa_ce} <= {ce_cap}"));
    }
    if let (true, Some(delta)) = (symmetric, instance.graph().regular_degree()) {
        let cap = Ratio::from_integer(2 * delta as u64);
        report.push("poa-ce-regular", poa_ce.at_most(cap), format!("PoA_CE {poa_ce} <= 2*delta = {cap}"));
    }
    report
}

/// Named lower-bound equilibria that the witness builder knows how to place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Each type on its own line; clique left empty.
    CliqueLines,
    /// Same-type pairs around the cycle; clique left empty.
    CliqueCycle,
    /// Ring node `v_l` and its clique neighbours hold consecutive types.
    RegularRingOfCliques,
    /// Path or cycle on `n + 1` nodes with the low-welfare pattern.
    DegreeTwo,
    /// Gadget with the majority type on the `p` nodes and the rest on the triangle.
    PosGadgetCase1,
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clique-lines" => Ok(Scenario::CliqueLines),
            "clique-cycle" => Ok(Scenario::CliqueCycle),
            "ring-of-cliques" => Ok(Scenario::RegularRingOfCliques),
            "degree-two" => Ok(Scenario::DegreeTwo),
            "pos-gadget" => Ok(Scenario::PosGadgetCase1),
            _ => Err(invalid(format!("unknown scenario '{s}'"))),
        }
    }
}

fn role<'a>(instance: &'a Instance, name: &str) -> Result<&'a [NodeId]> {
    instance
        .roles()
        .get(name)
        .map(Vec::as_slice)
        .ok_or_else(|| Error::Inapplicable(format!("instance has no '{name}' role")))
}

/// Type ids ordered by decreasing count, ties by id.
fn by_size_desc(profile: &TypeProfile) -> Vec<TypeId> {
    let mut ids: Vec<TypeId> = (0..profile.k() as TypeId).collect();
    ids.sort_by_key(|&t| std::cmp::Reverse(profile.count(t)));
    ids
}

/// Builds the explicit low-value equilibrium of a lower-bound construction and
/// verifies it.
pub fn build_witness_assignment(instance: &Instance, scenario: Scenario) -> Result<Assignment> {
    let profile = instance.profile();
    let k = profile.k();
    let mut occ: Vec<Option<TypeId>> = vec![None; instance.node_count()];
    match scenario {
        Scenario::CliqueLines => {
            for (j, t) in by_size_desc(profile).into_iter().enumerate() {
                let line = role(instance, &format!("line{j}"))?;
                if line.len() != profile.count(t) {
                    return Err(Error::Inapplicable("line sizes do not match the profile".into()));
                }
                for &v in line {
                    occ[v] = Some(t);
                }
            }
        }
        Scenario::CliqueCycle => {
            let cycle = role(instance, "cycle")?;
            if !profile.symmetric() || profile.n() != cycle.len() || profile.count(0) % 2 != 0 {
                return Err(Error::Inapplicable("needs symmetric even type sizes filling the cycle".into()));
            }
            for (i, &v) in cycle.iter().enumerate() {
                occ[v] = Some(((i / 2) % k) as TypeId);
            }
        }
        Scenario::RegularRingOfCliques => {
            let ring = role(instance, "ring")?;
            if ring.len() != k || !profile.symmetric() {
                return Err(Error::Inapplicable("needs k ring nodes and symmetric types".into()));
            }
            for l in 0..k {
                occ[ring[l]] = Some(l as TypeId);
                let clique = role(instance, &format!("clique{l}"))?;
                for &v in &clique[..clique.len() - 2] {
                    occ[v] = Some(l as TypeId);
                }
            }
        }
        Scenario::DegreeTwo => {
            let g = instance.graph();
            let n = profile.n();
            let ordered = g.max_degree() <= 2 && g.node_count() == n + 1 && (1..=n).all(|v| g.has_edge(v - 1, v));
            if !ordered || !profile.symmetric() {
                return Err(Error::Inapplicable("needs a path or cycle on n + 1 nodes and symmetric types".into()));
            }
            let seq = degree_two_pattern(profile)?;
            for (v, t) in seq.into_iter().enumerate() {
                occ[v] = Some(t);
            }
        }
        Scenario::PosGadgetCase1 => {
            let p = role(instance, "p")?;
            if k != 4 || profile.count(0) != p.len() || (1..4).any(|t| profile.count(t) != 1) {
                return Err(Error::Inapplicable("needs profile (x, 1, 1, 1)".into()));
            }
            for &v in p {
                occ[v] = Some(0);
            }
            for (name, t) in [("r", 1), ("s", 2), ("t", 3)] {
                occ[role(instance, name)?[0]] = Some(t);
            }
        }
    }
    let a = Assignment::new(instance, &occ)?;
    if !is_equilibrium(instance, &a) {
        return Err(Error::Construction(format!("witness {a} is not an equilibrium")));
    }
    Ok(a)
}

/// Type sequence of the low-welfare degree-two equilibrium (type 0 plays red).
fn degree_two_pattern(profile: &TypeProfile) -> Result<Vec<TypeId>> {
    let n = profile.n();
    let k = profile.k();
    let mut left: Vec<usize> = profile.counts().to_vec();
    let mut seq = Vec::with_capacity(n);
    if k == 2 {
        if n % 4 != 0 {
            return Err(Error::Inapplicable("two-type pattern needs 4 | n".into()));
        }
        for _ in 0..n / 4 {
            seq.extend([0, 1, 1]);
        }
        left[0] -= n / 4;
    } else {
        seq.push(0);
        left[0] -= 1;
        let mut t = 1;
        while left[1..].iter().any(|&c| c > 0) {
            let take = left[t].min(2);
            seq.extend(std::iter::repeat_n(t as TypeId, take));
            left[t] -= take;
            t = if t + 1 == k { 1 } else { t + 1 };
        }
    }
    seq.extend(std::iter::repeat_n(0, left[0]));
    Ok(seq)
}

/// Every named instance of the `paper-small` bound sweep.
pub fn paper_small_sweep() -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    let profile = |c: &[usize]| TypeProfile::new(c.to_vec());
    for p in [&[2, 1][..], &[2, 2], &[3, 2, 1], &[2, 2, 2]] {
        let (g, roles) = make_clique_lines(p)?;
        out.push((format!("clique-lines {p:?}"), Instance::with_roles(g, profile(p)?, roles)?));
    }
    for (n, k) in [(4, 2), (8, 2), (6, 3), (9, 3)] {
        let p = vec![n / k; k];
        out.push((format!("cycle {} {p:?}", n + 1), Instance::new(make_cycle(n + 1)?, profile(&p)?)?));
        out.push((format!("line {} {p:?}", n + 1), Instance::new(make_line(n + 1)?, profile(&p)?)?));
    }
    for (n, k) in [(4, 2), (6, 3)] {
        let (g, roles) = make_clique_cycle(n, k)?;
        out.push((format!("clique-cycle {n} {k}"), Instance::with_roles(g, profile(&vec![n / k; k])?, roles)?));
    }
    let (g, roles) = make_regular_ring_of_cliques(6, 3)?;
    out.push(("ring-of-cliques 6 3".into(), Instance::with_roles(g, profile(&[2, 2, 2])?, roles)?));
    for x in 2..=4 {
        let (g, roles) = make_pos_gadget(x)?;
        out.push((format!("pos-gadget {x}"), Instance::with_roles(g, profile(&[x, 1, 1, 1])?, roles)?));
    }
    Ok(out)
}

/// How graphs are sampled for the random-graph experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "graph", rename_all = "kebab-case")]
pub enum SampleKind {
    /// Erdős–Rényi conditioned on connectivity.
    Er { edge_prob: f64 },
    /// Connected random regular graph.
    Regular { degree: usize },
}

/// One block of the experiment: every combination of empty count and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGroup {
    #[serde(flatten)]
    pub kind: SampleKind,
    pub nodes: usize,
    pub types: usize,
    pub empties: Vec<usize>,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_budget")]
    pub budget: u64,
    pub group: Vec<ExperimentGroup>,
}

fn default_budget() -> u64 {
    crate::DEFAULT_BUDGET
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStatus {
    Searched,
    BudgetExceeded,
    GaveUp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub graph: String,
    pub num_nodes: usize,
    pub n: usize,
    pub k: usize,
    pub empty_count: usize,
    pub seed: u64,
    pub regular_degree: Option<usize>,
    pub irc_found: bool,
    pub states_explored: u64,
    pub status: SampleStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
}

/// Per empty-count totals of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmptyCountSummary {
    pub empty_count: usize,
    pub samples: usize,
    pub searched: usize,
    pub with_irc: usize,
    pub regular_with_irc: usize,
}

impl ExperimentReport {
    pub fn summary(&self) -> Vec<EmptyCountSummary> {
        let mut out: Vec<EmptyCountSummary> = Vec::new();
        for row in &self.rows {
            let pos = match out.iter().position(|s| s.empty_count == row.empty_count) {
                Some(p) => p,
                None => {
                    out.push(EmptyCountSummary { empty_count: row.empty_count, ..Default::default() });
                    out.len() - 1
                }
            };
            let s = &mut out[pos];
            s.samples += 1;
            s.searched += usize::from(row.status == SampleStatus::Searched);
            s.with_irc += usize::from(row.irc_found);
            s.regular_with_irc += usize::from(row.irc_found && row.regular_degree.is_some());
        }
        out.sort_by_key(|s| s.empty_count);
        out
    }

    /// One row per sample followed by the per-empty-count summary.
    pub fn to_table(&self) -> String {
        let mut s = String::from("graph      nodes  n  k  empty  seed  irc    states    status\n");
        for r in &self.rows {
            s += &format!(
                "{:<10} {:>5} {:>2} {:>2} {:>6} {:>5}  {:<5} {:>9}  {}\n",
                r.graph,
                r.num_nodes,
                r.n,
                r.k,
                r.empty_count,
                r.seed,
                if r.irc_found { "yes" } else { "no" },
                r.states_explored,
                match r.status {
                    SampleStatus::Searched => "searched",
                    SampleStatus::BudgetExceeded => "budget-exceeded",
                    SampleStatus::GaveUp => "gave-up",
                }
            );
        }
        s += "\nempty  samples  searched  with-irc  regular-with-irc\n";
        for e in self.summary() {
            s += &format!(
                "{:>5} {:>8} {:>9} {:>9} {:>17}\n",
                e.empty_count, e.samples, e.searched, e.with_irc, e.regular_with_irc
            );
        }
        s
    }
}

/// `n` agents split into `k` types as evenly as possible, larger types first.
pub fn balanced_profile(n: usize, k: usize) -> Result<TypeProfile> {
    if k == 0 || n < k {
        return Err(invalid(format!("cannot split {n} agents into {k} non-empty types")));
    }
    TypeProfile::new((0..k).map(|t| n / k + usize::from(t < n % k)).collect())
}

/// Samples one connected graph per (group, empty count, seed), searches its
/// full state graph for an improving-response cycle and records the outcome.
pub fn random_irc_experiment(config: &ExperimentConfig, jobs: usize) -> Result<ExperimentReport> {
    let mut tasks = Vec::new();
    for group in &config.group {
        for &e in &group.empties {
            if e == 0 || e >= group.nodes {
                return Err(invalid(format!("empty count {e} does not fit {} nodes", group.nodes)));
            }
            balanced_profile(group.nodes - e, group.types)?;
            for &seed in &group.seeds {
                tasks.push((group, e, seed));
            }
        }
    }
    let run = |&(group, e, seed): &(&ExperimentGroup, usize, u64)| -> ExperimentRow {
        let n = group.nodes - e;
        let (name, sampled) = match group.kind {
            SampleKind::Er { edge_prob } => ("er", make_random_connected(group.nodes, edge_prob, seed)),
            SampleKind::Regular { degree } => ("regular", make_random_regular(group.nodes, degree, seed)),
        };
        let mut row = ExperimentRow {
            graph: name.into(),
            num_nodes: group.nodes,
            n,
            k: group.types,
            empty_count: e,
            seed,
            regular_degree: None,
            irc_found: false,
            states_explored: 0,
            status: SampleStatus::GaveUp,
        };
        let Ok(graph) = sampled else { return row };
        row.regular_degree = graph.regular_degree();
        let instance = Instance::new(graph, balanced_profile(n, group.types).expect("checked above"))
            .expect("profile leaves empty nodes");
        match StateSpace::new(&instance, config.budget) {
            Ok(space) => {
                row.states_explored = space.size();
                row.irc_found = find_irc(&instance, config.budget).expect("within budget").is_some();
                row.status = SampleStatus::Searched;
            }
            Err(_) => row.status = SampleStatus::BudgetExceeded,
        }
        row
    };
    let rows = crate::state::run_with_jobs(jobs, || {
        use rayon::prelude::*;
        tasks.par_iter().map(run).collect::<Vec<_>>()
    });
    Ok(ExperimentReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{colorful_edges, social_welfare, utility};
    use crate::graph::{make_cycle, make_line};

    fn inst(g: crate::graph::Graph, counts: &[usize]) -> Instance {
        Instance::new(g, TypeProfile::new(counts.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn enumeration_count_and_order() {
        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let all: Vec<_> = enumerate_assignments(&i, 100).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate_assignments(&i, 5).is_err());
    }

    #[test]
    fn p3_optimum_and_equilibria() {
        let i = inst(make_line(3).unwrap(), &[1, 1]);
        let (ce, _) = brute_force_optimum(&i, Objective::Ce, 100, 1).unwrap();
        assert_eq!(ce, 1);
        // equilibria: the two agents adjacent
        let eq = enumerate_equilibria(&i, 100, 1).unwrap();
        assert_eq!(eq.len(), 4);
        let a = analyze(&i, Objective::Sw, 100, 1).unwrap();
        assert_eq!(a.poa, Some(PriceRatio::Finite(Ratio::from_integer(1))));
    }

    #[test]
    fn ratio_display() {
        assert_eq!(PriceRatio::new(12, 4).to_string(), "3");
        assert_eq!(PriceRatio::new(8, 6).to_string(), "4/3");
        assert_eq!(PriceRatio::new(5, 0).to_string(), "inf");
        assert!(!PriceRatio::Infinite.at_most(Ratio::from_integer(100)));
    }

    #[test]
    fn degree_two_patterns() {
        let p = TypeProfile::new(vec![4, 4]).unwrap();
        assert_eq!(degree_two_pattern(&p).unwrap(), vec![0, 1, 1, 0, 1, 1, 0, 0]);
        let p = TypeProfile::new(vec![2, 2, 2]).unwrap();
        assert_eq!(degree_two_pattern(&p).unwrap(), vec![0, 1, 1, 2, 2, 0]);

        let i = inst(make_cycle(9).unwrap(), &[4, 4]);
        let a = build_witness_assignment(&i, Scenario::DegreeTwo).unwrap();
        let ones = (0..9).filter(|&v| a.get(v).is_some() && utility(&i, &a, v).unwrap() == 1).count();
        assert_eq!(ones, 7);
        assert_eq!(colorful_edges(&i, &a), 4);
    }

    #[test]
    fn witnesses_have_the_claimed_values() {
        let (g, roles) = make_clique_lines(&[3, 2, 1]).unwrap();
        let i = Instance::with_roles(g, TypeProfile::new(vec![3, 2, 1]).unwrap(), roles).unwrap();
        assert_eq!(social_welfare(&i, &build_witness_assignment(&i, Scenario::CliqueLines).unwrap()), 4);

        let (g, roles) = make_clique_cycle(8, 2).unwrap();
        let i = Instance::with_roles(g, TypeProfile::new(vec![4, 4]).unwrap(), roles).unwrap();
        assert_eq!(colorful_edges(&i, &build_witness_assignment(&i, Scenario::CliqueCycle).unwrap()), 4);

        let (g, roles) = make_regular_ring_of_cliques(6, 3).unwrap();
        let i = Instance::with_roles(g, TypeProfile::new(vec![2, 2, 2]).unwrap(), roles).unwrap();
        assert_eq!(colorful_edges(&i, &build_witness_assignment(&i, Scenario::RegularRingOfCliques).unwrap()), 6);

        let (g, roles) = make_pos_gadget(3).unwrap();
        let i = Instance::with_roles(g, TypeProfile::new(vec![3, 1, 1, 1]).unwrap(), roles).unwrap();
        let a = build_witness_assignment(&i, Scenario::PosGadgetCase1).unwrap();
        assert_eq!((social_welfare(&i, &a), colorful_edges(&i, &a)), (14, 9));

        let i = inst(make_line(5).unwrap(), &[2, 2]);
        assert!(matches!(build_witness_assignment(&i, Scenario::CliqueLines), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn analyses_are_independent_of_jobs() {
        let (g, roles) = make_clique_lines(&[2, 2]).unwrap();
        let i = Instance::with_roles(g, TypeProfile::new(vec![2, 2]).unwrap(), roles).unwrap();
        let one = analyze_both(&i, 1 << 20, 1).unwrap();
        assert_eq!(analyze_both(&i, 1 << 20, 4).unwrap(), one);
        assert_eq!(one.0.poa, Some(PriceRatio::new(4, 3)));
    }

    #[test]
    fn balanced_profiles() {
        assert_eq!(balanced_profile(7, 3).unwrap().counts(), &[3, 2, 2]);
        assert!(balanced_profile(2, 3).is_err());
    }
}
