//! 2×m cylinders. Node `c` is the top row, node `m + c` the bottom row.

use super::{cells_from, finish, Construction, SortedTypes};
use crate::dynamics::{run_dynamics, DynamicsStatus, ResponsePolicy};
use crate::error::{Error, Result};
use crate::game::{Assignment, Instance};
use crate::graph::{make_cylinder, NodeId};

const DYNAMICS_STEPS: usize = 1_000_000;

/// Builds an equilibrium on the 2×m cylinder the instance lives on.
///
/// With at most two empty nodes or two types the improving-response dynamics
/// converge, so they are run from a packed start; otherwise the placement
/// follows the largest type count: all ones, at most two, or three or more.
pub fn construct_cylinder_equilibrium(instance: &Instance) -> Result<Construction> {
    let nodes = instance.node_count();
    let m = nodes / 2;
    if nodes % 2 != 0 || m < 3 || *instance.graph() != make_cylinder(m)? {
        return Err(Error::Inapplicable("graph is not a 2×m cylinder".into()));
    }
    let sorted = SortedTypes::new(instance.profile());
    let k = sorted.k();
    let n = sorted.n();
    let top_type = sorted.ids[k - 1];

    if instance.empty_count() <= 2 || k == 2 {
        return via_dynamics(instance);
    }

    let attempts: Vec<(&str, Vec<(NodeId, u8)>)> = match sorted.counts[k - 1] {
        1 => vec![("1", place_row_major(&(0..k as u8).rev().collect::<Vec<_>>()))],
        2 => case_two(m, &sorted),
        _ if n <= 3 => vec![("1", place_row_major(&spread(&sorted)))],
        _ => vec![case_three(m, &sorted)],
    };
    let mut last = None;
    for (case, placements) in attempts {
        let mut cells = cells_from(nodes, &placements);
        sorted.relabel(&mut cells);
        match finish(instance, cells, Some(top_type), case) {
            Ok(c) => return Ok(c),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

fn via_dynamics(instance: &Instance) -> Result<Construction> {
    let mut start = vec![None; instance.node_count()];
    let mut v = 0;
    for (t, &c) in instance.profile().counts().iter().enumerate() {
        for _ in 0..c {
            start[v] = Some(t as u8);
            v += 1;
        }
    }
    let start = Assignment::new(instance, &start)?;
    let run = run_dynamics(instance, &start, ResponsePolicy::BestResponse, DYNAMICS_STEPS)?;
    if run.status != DynamicsStatus::Equilibrium {
        return Err(Error::Construction(format!("dynamics stopped with {:?}", run.status)));
    }
    let cells = run.final_state.cells().to_vec();
    finish(instance, cells, None, "dynamics")
}

/// Every agent of the sorted profile, one type after another.
fn spread(sorted: &SortedTypes) -> Vec<u8> {
    (0..sorted.k()).flat_map(|t| std::iter::repeat_n(t as u8, sorted.counts[t])).collect()
}

/// Top row left to right, then the bottom row left to right.
fn place_row_major(seq: &[u8]) -> Vec<(NodeId, u8)> {
    seq.iter().enumerate().map(|(i, &t)| (i, t)).collect()
}

/// Largest count two: `T_k .. T_1` followed by `T_k .. T_z`, where `T_z` is the
/// first type with two agents.
fn case_two(m: usize, sorted: &SortedTypes) -> Vec<(&'static str, Vec<(NodeId, u8)>)> {
    let k = sorted.k();
    let z = sorted.counts.iter().position(|&c| c == 2).unwrap();
    let seq: Vec<u8> = (0..k).rev().chain((z..k).rev()).map(|t| t as u8).collect();
    let n = seq.len();
    if n <= m {
        return vec![("2a", place_row_major(&seq))];
    }
    // the bottom row starts below the last top node and keeps the direction;
    // other offsets and the mirrored direction are fallbacks, tried in order
    let bottom = |shift: isize, dir: isize| -> Vec<(NodeId, u8)> {
        let mut p: Vec<(NodeId, u8)> = seq[..m].iter().enumerate().map(|(c, &t)| (c, t)).collect();
        for (i, &t) in seq[m..].iter().enumerate() {
            let col = (m as isize - 1 + dir * i as isize + shift).rem_euclid(m as isize) as usize;
            p.push((m + col, t));
        }
        p
    };
    let mut shifts: Vec<isize> = if k == m || k == m + 1 { vec![-1, 1, 0] } else { vec![0, -1, 1] };
    shifts.extend(2..m as isize);
    let mut out: Vec<_> = shifts.iter().map(|&s| ("2b", bottom(s, 1))).collect();
    out.extend(shifts.iter().map(|&s| ("2b", bottom(s, -1))));
    out
}

/// Largest count at least three: chained pairs in columns, empties as a block
/// of whole columns (plus one top node when `n` is odd).
fn case_three(m: usize, sorted: &SortedTypes) -> (&'static str, Vec<(NodeId, u8)>) {
    let k = sorted.k();
    let n = sorted.n();
    let tk = (k - 1) as u8;
    let mut rem = sorted.counts.clone();
    let mut pairs: Vec<(u8, u8)> = Vec::new();
    for j in 0..k - 1 {
        let p = rem[j];
        pairs.extend(std::iter::repeat_n((j as u8, j as u8 + 1), p));
        rem[j + 1] -= p;
        rem[j] = 0;
    }
    let unpaired = rem[k - 1];
    let w = (2 * m - n) / 2;
    let top = |c: usize| c;
    let bot = |c: usize| m + c;
    let mut out = Vec::with_capacity(n);
    let column = |out: &mut Vec<(NodeId, u8)>, c: usize, (a, b): (u8, u8)| {
        out.push((top(c), a));
        out.push((bot(c), b));
    };

    if n % 2 == 0 {
        pairs.extend(std::iter::repeat_n((tk, tk), unpaired / 2));
        let last = pairs.len() - 1;
        for (i, &p) in pairs[..last].iter().enumerate() {
            column(&mut out, i + 1, p);
        }
        column(&mut out, 0, pairs[last]);
        return ("3-even", out);
    }

    // columns m-w.. are empty and so is the top node of column m-w-1 (e1)
    let beside_e1 = m - w - 2;
    out.push((bot(m - w - 1), tk));
    match unpaired {
        1 => {
            let p = pairs.len();
            let (a, b) = pairs[p - 2];
            out.push((top(beside_e1), b));
            out.push((bot(beside_e1), a));
            column(&mut out, 0, pairs[p - 1]);
            for (i, &pr) in pairs[..p - 2].iter().enumerate() {
                column(&mut out, i + 1, pr);
            }
            ("3a", out)
        }
        3 => {
            out.push((top(beside_e1), tk));
            out.push((bot(0), tk));
            let (a, b) = pairs[0];
            out.push((bot(beside_e1), a));
            out.push((top(0), b));
            for (i, &pr) in pairs[1..].iter().enumerate() {
                column(&mut out, i + 1, pr);
            }
            ("3b", out)
        }
        _ => {
            for v in [top(beside_e1), bot(beside_e1), top(0), bot(0)] {
                out.push((v, tk));
            }
            for (i, &pr) in pairs.iter().enumerate() {
                column(&mut out, i + 1, pr);
            }
            let mut rest = unpaired - 5;
            for c in pairs.len() + 1..beside_e1 {
                for v in [top(c), bot(c)] {
                    if rest > 0 {
                        out.push((v, tk));
                        rest -= 1;
                    }
                }
            }
            ("3c", out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::verify_certificate;
    use crate::game::TypeProfile;

    fn build(m: usize, counts: &[usize]) -> Construction {
        let i = Instance::new(make_cylinder(m).unwrap(), TypeProfile::new(counts.to_vec()).unwrap()).unwrap();
        let c = construct_cylinder_equilibrium(&i).unwrap_or_else(|e| panic!("m={m} {counts:?}: {e}"));
        assert!(verify_certificate(&i, &c.assignment, c.certificate));
        c
    }

    #[test]
    fn labels_follow_the_largest_count() {
        assert_eq!(build(8, &[1, 1, 1, 1, 1]).case, "1");
        assert_eq!(build(8, &[1, 2, 2]).case, "2a");
        assert_eq!(build(8, &[2, 2, 2, 2, 1]).case, "2b");
        assert_eq!(build(8, &[3, 3, 4]).case, "3-even");
        assert_eq!(build(8, &[1, 3, 3]).case, "3a");
        assert_eq!(build(8, &[3, 3, 3]).case, "3b");
        assert_eq!(build(8, &[1, 1, 5]).case, "3c");
        assert_eq!(build(10, &[1, 1, 7]).case, "3c");
        assert_eq!(build(6, &[4, 5]).case, "dynamics");
    }

    /// Every sorted profile with at least one empty node, m = 3..=10.
    #[test]
    fn all_small_profiles() {
        fn partitions(n: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if n == 0 {
                if acc.len() >= 2 {
                    out.push(acc.clone());
                }
                return;
            }
            for p in (1..=max.min(n)).rev() {
                acc.push(p);
                partitions(n - p, p, acc, out);
                acc.pop();
            }
        }
        for m in 3..=10 {
            for n in 2..2 * m {
                let mut out = Vec::new();
                partitions(n, n, &mut Vec::new(), &mut out);
                for counts in out {
                    build(m, &counts);
                }
            }
        }
    }
}
