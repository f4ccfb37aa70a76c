//! m1×m2 tori with m1 >= m2 >= 9. Node `(r, c)` is `r * m2 + c`.
//!
//! Few agents (case 1) are laid out as rows of an interleaved sequence with
//! empty rows around them. Otherwise the empty nodes form a compact area `A`
//! that is either enclosed by the largest type (2a, and 3 when possible) or
//! guarded at its corners (2b, 3), and the remaining agents follow a snake
//! path through the rest of the torus.

use super::{cells_from, finish, Construction, SortedTypes};
use crate::error::{Error, Result};
use crate::game::{bit, neighbor_masks, Instance, EMPTY};
use crate::graph::{make_torus, Graph, NodeId};

/// Smallest side length handled.
pub const MIN_SIDE: usize = 9;
/// Smallest count of the largest type handled.
pub const MIN_LARGEST: usize = 8;

/// Builds an equilibrium on the `m1 × m2` torus the instance lives on.
pub fn construct_torus_equilibrium(instance: &Instance, m1: usize, m2: usize) -> Result<Construction> {
    if m2 < MIN_SIDE || m1 < m2 {
        return Err(Error::Inapplicable(format!("torus needs m1 >= m2 >= {MIN_SIDE}, got {m1}x{m2}")));
    }
    if *instance.graph() != make_torus(m1, m2)? {
        return Err(Error::Inapplicable(format!("graph is not the {m1}x{m2} torus")));
    }
    let sorted = SortedTypes::new(instance.profile());
    let k = sorted.k();
    if k < 3 {
        return Err(Error::Inapplicable("torus construction needs at least 3 types".into()));
    }
    if sorted.counts[k - 1] < MIN_LARGEST {
        return Err(Error::Inapplicable(format!(
            "torus construction needs at least {MIN_LARGEST} agents of the largest type"
        )));
    }
    let torus = Torus { m1, m2, graph: instance.graph() };
    let n = sorted.n();
    let (case, mut cells) = if n <= 5 * (m2 - 2) {
        ("1", torus.case_one(&sorted)?)
    } else if n <= m1 * m2 - 2 * m2 {
        torus.area_case(&sorted, torus.area_rows(m1 * m2 - n), false)?
    } else {
        torus.area_case(&sorted, torus.area_columns(m1 * m2 - n), true)?
    };
    sorted.relabel(&mut cells);
    finish(instance, cells, Some(sorted.ids[k - 1]), case)
}

/// Alternates `T_j` and `T_{j+1}`, replacing an exhausted type by the next
/// unused one, never using `T_k`. Returns the sequence and the leftover agents
/// (type and count), which are of type `T_{k-1}`.
fn alternating_sequence(counts: &[usize]) -> (Vec<u8>, (u8, usize)) {
    let k = counts.len();
    let mut rem = counts[..k - 1].to_vec();
    let mut slots = [0usize, 1];
    let mut next = 2;
    let mut turn = 0;
    let mut seq = Vec::new();
    loop {
        let t = slots[turn];
        if rem[t] == 0 {
            if next < k - 1 {
                slots[turn] = next;
                next += 1;
                continue;
            }
            break;
        }
        seq.push(t as u8);
        rem[t] -= 1;
        turn ^= 1;
    }
    let other = slots[1 - turn];
    (seq, (other as u8, rem[other]))
}

struct Torus<'a> {
    m1: usize,
    m2: usize,
    graph: &'a Graph,
}

impl Torus<'_> {
    fn node(&self, r: usize, c: usize) -> NodeId {
        (r % self.m1) * self.m2 + c % self.m2
    }

    fn case_one(&self, sorted: &SortedTypes) -> Result<Vec<u8>> {
        let k = sorted.k();
        let tk = (k - 1) as u8;
        let (mut seq, (x_type, x)) = alternating_sequence(&sorted.counts);
        seq.extend(std::iter::repeat_n(x_type, x));
        // T_k between consecutive agents, starting from the end
        let used = sorted.counts[k - 1].min(seq.len());
        let cut = seq.len() - used;
        let mut full: Vec<u8> = seq[..cut].to_vec();
        for &t in &seq[cut..] {
            full.push(t);
            full.push(tk);
        }
        let mut surplus = sorted.counts[k - 1] - used;

        let width = self.m2 - 2;
        let rows = full.len() / width;
        let mut placements = Vec::with_capacity(sorted.n());
        for (i, &t) in full[..rows * width].iter().enumerate() {
            placements.push((self.node(i / width, 1 + i % width), t));
        }
        let tail = &full[rows * width..];
        if tail.len() == 1 {
            surplus += 1;
        } else {
            for (i, &t) in tail.iter().enumerate() {
                placements.push((self.node(rows + 2, 1 + i), t));
            }
        }
        let mut cells = cells_from(self.m1 * self.m2, &placements);
        self.place_surplus(&mut cells, tk, surplus)?;
        Ok(cells)
    }

    /// Places `count` agents of type `tk` next to other types while every
    /// empty node keeps seeing at most one type. Once the agents suffice to
    /// cover every empty node next to another type, they do so and the rest go
    /// anywhere.
    fn place_surplus(&self, cells: &mut [u8], tk: u8, mut count: usize) -> Result<()> {
        let g = self.graph;
        let mut masks = vec![0u64; cells.len()];
        while count > 0 {
            neighbor_masks(g, cells, &mut masks);
            let frontier: Vec<NodeId> =
                (0..cells.len()).filter(|&v| cells[v] == EMPTY && masks[v] & !bit(tk) != 0).collect();
            if count >= frontier.len() {
                for &v in &frontier {
                    cells[v] = tk;
                }
                count -= frontier.len();
                for v in 0..cells.len() {
                    if count == 0 {
                        break;
                    }
                    if cells[v] == EMPTY {
                        cells[v] = tk;
                        count -= 1;
                    }
                }
                return Ok(());
            }
            // a node plus every empty neighbor that would then see two types,
            // repeated until stable; e.g. the two ends of a row face each other
            let closure = |v: NodeId| {
                let mut placed = vec![v];
                let mut i = 0;
                while i < placed.len() {
                    for &f in g.neighbors(placed[i]) {
                        if cells[f] == EMPTY && !placed.contains(&f) && masks[f] & !bit(tk) != 0 {
                            placed.push(f);
                        }
                    }
                    i += 1;
                }
                (placed.len() <= count).then_some(placed)
            };
            // largest groups first, while they still fit
            let chosen = frontier.iter().filter_map(|&v| closure(v)).max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])));
            let Some(chosen) = chosen else {
                return Err(Error::Construction(format!("no safe node for {count} surplus agents")));
            };
            for v in chosen {
                cells[v] = tk;
                count -= 1;
            }
        }
        Ok(())
    }

    /// `e` empty nodes as full rows from row 0 plus a partial row.
    fn area_rows(&self, e: usize) -> Vec<bool> {
        let mut area = vec![false; self.m1 * self.m2];
        area[..e].fill(true);
        area
    }

    /// `e` empty nodes in the last two columns from row 0, heights differing by at most one.
    fn area_columns(&self, e: usize) -> Vec<bool> {
        let mut area = vec![false; self.m1 * self.m2];
        for r in 0..e.div_ceil(2) {
            area[self.node(r, self.m2 - 1)] = true;
        }
        for r in 0..e / 2 {
            area[self.node(r, self.m2 - 2)] = true;
        }
        area
    }

    fn area_case(&self, sorted: &SortedTypes, area: Vec<bool>, columns: bool) -> Result<(&'static str, Vec<u8>)> {
        let g = self.graph;
        let k = sorted.k();
        let tk = (k - 1) as u8;
        let nodes = area.len();
        let ring: Vec<NodeId> =
            (0..nodes).filter(|&v| !area[v] && g.neighbors(v).iter().any(|&w| area[w])).collect();
        let corners: Vec<NodeId> = (0..nodes)
            .filter(|&v| area[v] && g.neighbors(v).iter().filter(|&&w| !area[w]).count() >= 2)
            .collect();
        let mut guards: Vec<NodeId> =
            corners.iter().flat_map(|&v| g.neighbors(v).iter().copied().filter(|&w| !area[w])).collect();
        guards.sort_unstable();
        guards.dedup();

        let (seq, (x_type, x)) = alternating_sequence(&sorted.counts);
        let mut rem = vec![0usize; k];
        for &t in &seq {
            rem[t as usize] += 1;
        }
        rem[x_type as usize] += x;
        rem[k - 1] = sorted.counts[k - 1];

        let path = self.snake(&area)?;
        let mut fixed = vec![None; nodes];
        let enclosed = sorted.counts[k - 1] >= ring.len();
        let relaxed;
        if enclosed {
            for &v in &ring {
                fixed[v] = Some(tk);
            }
            rem[k - 1] -= ring.len();
            relaxed = Some(tk);
            // leftover T_{k-1} that cannot alternate with T_k sits next to the ring
            let spare = x.saturating_sub(rem[k - 1]);
            if spare > 0 {
                let mut second: Vec<NodeId> = path
                    .iter()
                    .rev()
                    .copied()
                    .filter(|&v| fixed[v].is_none() && g.neighbors(v).iter().any(|&w| fixed[w] == Some(tk)))
                    .collect();
                if second.len() < spare {
                    return Err(Error::Construction("not enough nodes next to the enclosure".into()));
                }
                second.truncate(spare);
                for v in second {
                    fixed[v] = Some(x_type);
                }
                rem[x_type as usize] -= spare;
            }
        } else {
            if guards.len() > rem[k - 1] {
                return Err(Error::Construction("not enough agents to guard the corners".into()));
            }
            for &v in &guards {
                fixed[v] = Some(tk);
            }
            rem[k - 1] -= guards.len();
            relaxed = None;
        }
        let cells = fill_path(g, &path, &fixed, rem, relaxed)?;
        let case = match (columns, enclosed) {
            (false, true) => "2a",
            (false, false) => "2b",
            (true, _) => "3",
        };
        Ok((case, cells.into_iter().map(|c| c.unwrap_or(EMPTY)).collect()))
    }

    /// Hamiltonian path through the non-area nodes, row by row: every row's
    /// free nodes must form one cyclic interval. Starts at the row with the
    /// fewest free nodes and proceeds downwards.
    fn snake(&self, area: &[bool]) -> Result<Vec<NodeId>> {
        let (m1, m2) = (self.m1, self.m2);
        let free = |r: usize| (0..m2).filter(|&c| !area[self.node(r, c)]).count();
        let start = (0..m1).filter(|&r| free(r) > 0).min_by_key(|&r| (free(r), r)).unwrap();
        let rows: Vec<usize> = (0..m1).map(|i| (start + i) % m1).filter(|&r| free(r) > 0).collect();
        let mut spans = Vec::with_capacity(rows.len());
        for &r in &rows {
            let f: Vec<bool> = (0..m2).map(|c| !area[self.node(r, c)]).collect();
            spans.push(Span::of(&f).ok_or_else(|| Error::Construction(format!("row {r} is not an interval")))?);
        }
        let mut walk = Vec::new();
        if !snake_rows(&spans, 0, None, m2, &mut walk) {
            return Err(Error::Construction("no snake path through the free rows".into()));
        }
        Ok(walk
            .iter()
            .enumerate()
            .flat_map(|(i, &(s, dir, len))| {
                let r = rows[i];
                (0..len).map(move |j| self.node(r, (s as isize + dir * j as isize).rem_euclid(m2 as isize) as usize))
            })
            .collect())
    }
}

/// Free nodes of one row.
#[derive(Clone, Copy)]
enum Span {
    Full,
    /// Cyclic interval from `start` of `len` columns.
    Interval { start: usize, len: usize },
}

impl Span {
    fn of(free: &[bool]) -> Option<Span> {
        let m = free.len();
        let count = free.iter().filter(|&&f| f).count();
        if count == m {
            return Some(Span::Full);
        }
        let start = (0..m).find(|&c| free[c] && !free[(c + m - 1) % m])?;
        ((0..count).all(|j| free[(start + j) % m])).then_some(Span::Interval { start, len: count })
    }
}

/// Picks a start column and direction for every row so that each row starts
/// below the end of the previous one. Pushes `(start, direction, len)`.
fn snake_rows(spans: &[Span], i: usize, prev_end: Option<usize>, m: usize, walk: &mut Vec<(usize, isize, usize)>) -> bool {
    if i == spans.len() {
        return true;
    }
    let mut options: Vec<(usize, isize, usize)> = Vec::new();
    match spans[i] {
        Span::Full => {
            let starts: Vec<usize> = prev_end.map_or((0..m).collect(), |e| vec![e]);
            for s in starts {
                options.push((s, 1, m));
                options.push((s, -1, m));
            }
        }
        Span::Interval { start, len } => {
            let end = (start + len - 1) % m;
            options.push((start, 1, len));
            if len > 1 {
                options.push((end, -1, len));
            }
        }
    }
    for (s, dir, len) in options {
        if prev_end.is_some_and(|e| e != s) {
            continue;
        }
        let end = (s as isize + dir * (len as isize - 1)).rem_euclid(m as isize) as usize;
        walk.push((s, dir, len));
        if snake_rows(spans, i + 1, Some(end), m, walk) {
            return true;
        }
        walk.pop();
    }
    false
}

/// Backtracking steps allowed when filling the snake path.
const FILL_STEPS: usize = 200_000;

/// Fills the free path positions from `rem`, most agents left first and
/// preferring a type other than the previous path node's. A type is ruled out
/// when it would leave this node or an assigned neighbor without any foreign
/// neighbor for good; the `relaxed` type is exempt. Dead ends backtrack.
fn fill_path(
    g: &Graph,
    path: &[NodeId],
    fixed: &[Option<u8>],
    rem: Vec<usize>,
    relaxed: Option<u8>,
) -> Result<Vec<Option<u8>>> {
    let mut on_path = vec![false; fixed.len()];
    for &v in path {
        on_path[v] = true;
    }
    let open = (0..fixed.len())
        .map(|v| g.neighbors(v).iter().filter(|&&w| on_path[w] && fixed[w].is_none()).count())
        .collect();
    let mut fill = Fill { g, path, out: fixed.to_vec(), open, rem, relaxed, steps: 0 };
    if fill.step(0) {
        Ok(fill.out)
    } else if fill.steps >= FILL_STEPS {
        Err(Error::GaveUp { attempts: FILL_STEPS })
    } else {
        Err(Error::Construction("no filling of the snake path".into()))
    }
}

struct Fill<'a> {
    g: &'a Graph,
    path: &'a [NodeId],
    out: Vec<Option<u8>>,
    /// Unfilled path neighbors of each node.
    open: Vec<usize>,
    rem: Vec<usize>,
    relaxed: Option<u8>,
    steps: usize,
}

impl Fill<'_> {
    fn satisfied(&self, v: NodeId, t: u8) -> bool {
        self.g.neighbors(v).iter().any(|&w| self.out[w].is_some_and(|u| u != t))
    }

    fn allowed(&self, v: NodeId, t: u8) -> bool {
        if Some(t) == self.relaxed {
            return true;
        }
        let strands_neighbor = self.g.neighbors(v).iter().any(|&w| {
            self.out[w] == Some(t) && self.open[w] == 0 && !self.satisfied(w, t)
        });
        !strands_neighbor && !(self.open[v] == 0 && !self.satisfied(v, t))
    }

    fn step(&mut self, i: usize) -> bool {
        let Some(&v) = self.path.get(i) else {
            return self.rem.iter().all(|&r| r == 0);
        };
        if self.out[v].is_some() {
            return self.step(i + 1);
        }
        self.steps += 1;
        if self.steps >= FILL_STEPS {
            return false;
        }
        let prev = i.checked_sub(1).and_then(|j| self.out[self.path[j]]);
        for &w in self.g.neighbors(v) {
            self.open[w] -= 1;
        }
        let mut candidates: Vec<u8> =
            (0..self.rem.len() as u8).filter(|&t| self.rem[t as usize] > 0 && self.allowed(v, t)).collect();
        let relaxed = self.relaxed;
        candidates.sort_by_key(|&t| {
            std::cmp::Reverse((Some(t) != prev || Some(t) == relaxed, self.rem[t as usize], Some(t) != relaxed, std::cmp::Reverse(t)))
        });
        for t in candidates {
            self.out[v] = Some(t);
            self.rem[t as usize] -= 1;
            if self.step(i + 1) {
                return true;
            }
            self.rem[t as usize] += 1;
            self.out[v] = None;
            if self.steps >= FILL_STEPS {
                break;
            }
        }
        for &w in self.g.neighbors(v) {
            self.open[w] += 1;
        }
        false
    }
}
